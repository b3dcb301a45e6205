"""Run every built-in preset and print a one-line summary per config.

Artifacts land in <out>/<preset>/ so reruns of a single preset can be
diffed against the full sweep.  The twelve-cell classification table is
also assembled, same as the `table1` CLI verb.

    python3 scripts/run_all_presets.py [--out runs] [--workers N]
"""

import argparse
import json
from pathlib import Path

from rabisplit import PRESET_IDS, load_config, run_experiment
from rabisplit.cli import _table_artifact


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs", type=Path)
    ap.add_argument("--workers", default=None, type=int)
    args = ap.parse_args()

    for preset in PRESET_IDS:
        configs = load_config(preset)
        out_dir = args.out / preset
        results = run_experiment(configs, out_dir=out_dir,
                                 workers=args.workers)
        print(f"{preset} -> {out_dir} ({len(results)} configs)")
        for manifest in results:
            for mode, block in manifest["summary"].items():
                parts = [f"  {manifest['label']:28s} {mode:4s}",
                         f"{block['classification']:6s}"]
                if block["splitting_ghz"] is not None:
                    parts.append(f"split={block['splitting_ghz']:.4f}")
                    parts.append(f"hr={block['height_ratio']:.4f}")
                if block["shift_ghz"] is not None:
                    parts.append(f"shift={block['shift_ghz']:+.5f}")
                print(" ".join(parts))
        if preset == "table1":
            table_path = args.out / "table1.json"
            table_path.write_text(_table_artifact(results))
            cells = json.loads(table_path.read_text())["cells"]
            print(f"  table -> {table_path} ({len(cells)} cells)")


if __name__ == "__main__":
    main()
