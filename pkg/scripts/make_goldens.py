"""Run the fixture pipeline once and store its output digests as goldens.

    python3 scripts/make_goldens.py

Only rerun after an intentional change to outputs; the diff of
fixtures/goldens.json then shows which artifacts moved.
"""

import json
import tempfile
from pathlib import Path

from idrnet.pipeline import run_pipeline

ROOT = Path(__file__).resolve().parents[1]


def main():
    with tempfile.TemporaryDirectory() as tmp:
        manifest = run_pipeline(ROOT / "fixtures" / "pipeline.cfg", Path(tmp) / "out")
    if manifest["failed"]:
        raise SystemExit(f"pipeline failed: {manifest['failed']}")
    golden = {"config_sha256": manifest["config_sha256"], "inputs": manifest["inputs"],
              "outputs": manifest["outputs"]}
    path = ROOT / "fixtures" / "goldens.json"
    path.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    print(f"{len(golden['outputs'])} output digests -> {path}")


if __name__ == "__main__":
    main()
