#!/usr/bin/env python3
"""Generate the canonical benchmark suite (four sizes x ten instances)."""

import argparse
from pathlib import Path

from tacnet.instance import benchmark_suite, save_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="benchmark", help="output directory")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--area-km", type=float, default=10.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for inst in benchmark_suite(base_seed=args.seed, area_km=args.area_km):
        save_instance(inst, out / f"{inst.id}.json")
    print(f"wrote 40 instances to {out}")


if __name__ == "__main__":
    main()
