#!/usr/bin/env python3
"""Run the six sensitivity sweeps over a benchmark directory and write one
results/report bundle per sweep.

This is the desk-scale reproduction driver: hub strategies, PMP successor
limits, beam widths, antenna technology, scenario weights, and the
worst-case/average trade-off, each analyzed with the Friedman/Wilcoxon
pipeline over all five run metrics.
"""

import argparse
import time
from pathlib import Path

from tacnet import experiments
from tacnet.instance import load_instance
from tacnet.search import SearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", required=True, help="directory of instance JSON files")
    ap.add_argument("--out", default="sensitivity", help="output directory")
    ap.add_argument("--kinds", default="hub_strategy,pmp_limit,beam_width,"
                                       "antenna_tech,weights,lambda")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--max-iterations", type=int, default=2000)
    ap.add_argument("--stagnation-limit", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    suite = [load_instance(p) for p in sorted(Path(args.instances).glob("*.json"))]
    base = SearchConfig(seed=args.seed, max_iterations=args.max_iterations,
                        stagnation_limit=args.stagnation_limit)
    for kind in args.kinds.split(","):
        t0 = time.perf_counter()
        spec = experiments.default_sweep(kind)
        rt = experiments.run_sweep(spec, suite, base, jobs=args.jobs)
        out = Path(args.out) / kind
        reports = [experiments.analyze(rt, metric) for metric in experiments.METRICS]
        written = experiments.emit_report(reports, rt, out)
        print(f"{kind}: {len(rt.rows)} runs in {time.perf_counter() - t0:.0f}s -> "
              f"{', '.join(str(w) for w in written)}")


if __name__ == "__main__":
    main()
