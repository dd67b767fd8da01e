"""End-to-end demo: write a small object catalog, forge scenes for it,
assemble per-stage conditioning lines, and print where everything landed.

    python scripts/forge_dataset.py --out /tmp/posetraj_demo --seed 7
"""

import argparse
import json
import sys
from pathlib import Path

from posetraj.cli import main as cli_main

DEMO_OBJECTS = [
    {"object_id": "mug", "raw_extents": [0.09, 0.12, 0.10], "mesh_uri": "demo://mug"},
    {"object_id": "chair", "raw_extents": [0.45, 0.50, 0.90], "mesh_uri": "demo://chair"},
    {"object_id": "lamp", "raw_extents": [0.25, 0.25, 1.40], "mesh_uri": "demo://lamp"},
    {"object_id": "carton", "raw_extents": [0.30, 0.20, 0.25], "mesh_uri": "demo://carton"},
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("demo_dataset"))
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--samples", type=int, default=5, help="scenes per object")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    catalog = args.out / "catalog.jsonl"
    catalog.write_text("".join(json.dumps(o) + "\n" for o in DEMO_OBJECTS))

    dataset = args.out / "dataset"
    rc = cli_main([
        "forge",
        "--set", f"object_catalog_path={catalog}",
        "--set", f"output_dir={dataset}",
        "--set", f"root_seed={args.seed}",
        "--set", f"samples_per_object={args.samples}",
        "--set", f"workers={args.workers}",
    ])
    if rc != 0:
        sys.exit(rc)

    for stage in ("stage_one_bbox", "stage_two_appearance", "finetune_camera"):
        rc = cli_main([
            "assemble",
            "--set", f"output_dir={dataset}",
            "--set", f"root_seed={args.seed}",
            "--set", f"stage={stage}",
        ])
        if rc != 0:
            sys.exit(rc)

    n_png = sum(1 for _ in dataset.rglob("*.png"))
    print(f"\ndataset at {dataset}")
    print(f"  manifests: {len(list((dataset / 'manifests').glob('*.json')))}")
    print(f"  images:    {n_png} png")
    for f in sorted(dataset.glob("conditions_*.jsonl")):
        print(f"  {f.name}: {sum(1 for _ in f.open())} lines")


if __name__ == "__main__":
    main()
