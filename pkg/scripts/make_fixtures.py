"""Regenerate the bundled synthetic corpus under fixtures/corpus/."""

import argparse
import json
from pathlib import Path

from idrnet.synth import CorpusPlan, write_corpus_fixture

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=ROOT / "fixtures" / "corpus", type=Path)
    ap.add_argument("--seed", type=int, default=CorpusPlan.seed)
    args = ap.parse_args()
    ledger = write_corpus_fixture(args.out, CorpusPlan(seed=args.seed))
    print(json.dumps({"total": ledger["total"], "per_year": ledger["per_year"]}, indent=2))
