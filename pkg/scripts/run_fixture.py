"""Run the full pipeline on the bundled corpus and print a short summary.

    python3 scripts/run_fixture.py [OUT_DIR]
"""

import json
import sys
import time
from pathlib import Path

from idrnet.pipeline import run_pipeline

ROOT = Path(__file__).resolve().parents[1]


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else ROOT / "runs" / "fixture"
    t0 = time.perf_counter()
    manifest = run_pipeline(ROOT / "fixtures" / "pipeline.cfg", out)
    elapsed = time.perf_counter() - t0
    metrics = json.loads((out / "metrics.json").read_text())
    print(f"{manifest['status']}: {len(manifest['outputs'])} files in {elapsed:.1f}s -> {out}")
    for name, m in sorted(metrics.items()):
        if "mean_strength" in m:
            print(f"  {name:14s} s={m['mean_strength']:.3f} Q={m['modularity']:.3f} "
                  f"gcc={m['gcc']:.3f} aspl={m['aspl']:.2f}")
    return 1 if manifest["failed"] else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
