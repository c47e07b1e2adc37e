"""Command line: instance generation, single solves, sweeps, analysis, reports.

Exit codes: 0 success, 2 usage error, 3 infeasible instance, 4 I/O error.
The output directory may also be set via the ``TACNET_OUT`` environment
variable; all other parameters are flags.  Every verb accepts
``--print-config`` to echo the fully resolved configuration as JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import experiments, instance as inst_mod, objective
from .design import save_design
from .errors import InfeasibleInstanceError, InstanceParseError, TacnetError
from .hubselect import STRATEGY_NAMES
from .objective import WEIGHT_CONFIG_NAMES, weight_config
from .phy import PhyParams
from .radio import AntennaModel, BEAM_COUNTS
from .search import SearchConfig, tabu_search
from .topology import StructureLimits

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("TACNET_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _search_config(args) -> SearchConfig:
    antenna = AntennaModel(
        beam_count=args.beams,
        mode="single_beam" if args.single_beam else "multi_beam",
        omni_fallback=not args.no_omni_fallback,
    )
    phy = PhyParams(tx_power_dbm=args.tx_power_dbm, noise_floor_dbm=args.noise_floor_dbm,
                    rate_cap_mbps=args.rate_cap_mbps)
    return SearchConfig(
        seed=args.seed,
        max_iterations=args.max_iterations,
        stagnation_limit=args.stagnation_limit,
        tabu_tenure=args.tabu_tenure,
        hub_strategy=args.hub_strategy,
        limits=StructureLimits(pmp_limit=args.pmp_limit),
        antenna=antenna,
        phy=phy,
        weights=weight_config(args.weights, p=args.p),
        lam=args.lam,
    )


def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iterations", type=int, default=2000)
    sp.add_argument("--stagnation-limit", type=int, default=500)
    sp.add_argument("--tabu-tenure", type=int, default=None)
    sp.add_argument("--hub-strategy", choices=STRATEGY_NAMES, default="baseline")
    sp.add_argument("--pmp-limit", type=int, default=10)
    sp.add_argument("--beams", type=int, choices=BEAM_COUNTS, default=24)
    sp.add_argument("--single-beam", action="store_true")
    sp.add_argument("--no-omni-fallback", action="store_true")
    sp.add_argument("--weights", choices=WEIGHT_CONFIG_NAMES, default="baseline")
    sp.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--p", type=float, default=objective.DEFAULT_P)
    sp.add_argument("--tx-power-dbm", type=float, default=30.0)
    sp.add_argument("--noise-floor-dbm", type=float, default=-94.0)
    sp.add_argument("--rate-cap-mbps", type=float, default=160.0)
    sp.add_argument("--print-config", action="store_true")
    sp.add_argument("--out", default=None)


def _maybe_print_config(args, cfg: SearchConfig) -> None:
    if args.print_config:
        print(json.dumps(cfg.to_dict(), indent=1, sort_keys=True))


def _cmd_gen(args) -> int:
    out = _out_dir(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    files = []
    for size in sizes:
        for i in range(args.per_size):
            inst = inst_mod.generate_instance(
                size, inst_mod.benchmark_seed(args.seed, size, i), args.area_km,
                instance_id=f"n{size:02d}_i{i:02d}")
            path = out / f"{inst.id}.json"
            inst_mod.save_instance(inst, path)
            files.append(path)
    print(f"wrote {len(files)} instance files to {out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    cfg = _search_config(args)
    _maybe_print_config(args, cfg)
    inst = inst_mod.load_instance(args.instance)
    out = _out_dir(args)
    best, trace = tabu_search(inst, cfg)
    design_path = out / f"{inst.id}_design.json"
    save_design(best, design_path)
    trace_path = out / f"{inst.id}_trace.csv"
    with open(trace_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["instance_id", "config_hash", "seed", "best_objective",
                    "iteration_found", "time_found_ms", "total_iterations",
                    "time_per_iteration_ms"])
        w.writerow([inst.id, trace.config_hash, trace.seed, repr(trace.best_objective),
                    trace.iteration_found, repr(trace.time_found_ms),
                    trace.total_iterations, repr(trace.time_per_iteration_ms)])
    print(f"best objective {trace.best_objective:.6f} "
          f"(iteration {trace.iteration_found} of {trace.total_iterations}); "
          f"design -> {design_path}, trace -> {trace_path}")
    return EXIT_OK


def _load_suite(path: str) -> list:
    p = Path(path)
    files = sorted(p.glob("*.json")) if p.is_dir() else [p]
    suite = [inst_mod.load_instance(f) for f in files]
    if not suite:
        raise InstanceParseError(f"no instance files found under {path}")
    return suite


_KIND_ALIASES = {
    "hub": "hub_strategy", "hub_strategy": "hub_strategy",
    "pmp": "pmp_limit", "pmp_limit": "pmp_limit",
    "beams": "beam_width", "beam_width": "beam_width",
    "antenna": "antenna_tech", "antenna_tech": "antenna_tech",
    "weights": "weights", "lambda": "lambda",
}


def _cmd_sweep(args) -> int:
    cfg = _search_config(args)
    _maybe_print_config(args, cfg)
    kind = _KIND_ALIASES[args.kind]
    spec = experiments.default_sweep(kind, seeds_per_cell=args.seeds_per_cell)
    suite = _load_suite(args.instances)
    rt = experiments.run_sweep(spec, suite, cfg, jobs=args.jobs)
    out = _out_dir(args)
    path = out / "results.csv"
    experiments.results_to_csv(rt, path)
    n_err = sum(1 for r in rt.rows if r.status != "ok")
    print(f"{len(rt.rows)} runs ({n_err} failed) -> {path}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    rt = experiments.results_from_csv(Path(args.results))
    metrics = args.metrics.split(",") if args.metrics else list(experiments.METRICS)
    reports = [experiments.analyze(rt, m, args.baseline, alpha=args.alpha,
                                   friedman_draws=args.friedman_draws)
               for m in metrics]
    out = _out_dir(args)
    written = experiments.emit_report(reports, rt, out)
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _cmd_report(args) -> int:
    rt = experiments.results_from_csv(Path(args.results))
    reports = [experiments.analyze(rt, m, args.baseline, alpha=args.alpha,
                                   friedman_draws=args.friedman_draws)
               for m in (args.metrics.split(",") if args.metrics
                         else list(experiments.METRICS))]
    out = _out_dir(args)
    formats = tuple(args.formats.split(","))
    written = experiments.emit_report(reports, rt, out, formats=formats)
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _cmd_fit_p(args) -> int:
    rows = []
    with open(args.csv, "r", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            rows.append((float(rec["f"]), float(rec["f_min"]), float(rec["f_mean"])))
    fit = objective.fit_tradeoff_coefficient(rows)
    print(f"p = {fit.p:.6f} (residual std {fit.residual_std:.6f} over {fit.n_rows} rows)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tacnet",
                                 description="Tactical wireless tree-network design workbench")
    sub = ap.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="generate benchmark instance files")
    g.add_argument("--sizes", default="10,15,20,30")
    g.add_argument("--per-size", type=int, default=10)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--area-km", type=float, default=10.0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="run the tabu search on one instance")
    s.add_argument("--instance", required=True)
    _add_config_flags(s)
    s.set_defaults(func=_cmd_solve)

    w = sub.add_parser("sweep", help="run a sensitivity sweep over an instance directory")
    w.add_argument("--kind", choices=sorted(_KIND_ALIASES), required=True)
    w.add_argument("--instances", required=True,
                   help="instance file or directory of instance JSON files")
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--seeds-per-cell", type=int, default=1)
    _add_config_flags(w)
    w.set_defaults(func=_cmd_sweep)

    a = sub.add_parser("analyze", help="statistical analysis of stored sweep results")
    a.add_argument("--results", required=True)
    a.add_argument("--metrics", default=None,
                   help="comma-separated metric names (default: all five)")
    a.add_argument("--baseline", default=None)
    a.add_argument("--alpha", type=float, default=0.05)
    a.add_argument("--friedman-draws", type=int, default=200_000)
    a.add_argument("--out", default=None)
    a.set_defaults(func=_cmd_analyze)

    r = sub.add_parser("report", help="re-render report files from stored results")
    r.add_argument("--results", required=True)
    r.add_argument("--metrics", default=None)
    r.add_argument("--baseline", default=None)
    r.add_argument("--alpha", type=float, default=0.05)
    r.add_argument("--friedman-draws", type=int, default=200_000)
    r.add_argument("--formats", default="markdown,csv")
    r.add_argument("--out", default=None)
    r.set_defaults(func=_cmd_report)

    f = sub.add_parser("fit-p", help="least-squares trade-off coefficient from a CSV "
                                     "of f,f_min,f_mean rows")
    f.add_argument("--csv", required=True)
    f.set_defaults(func=_cmd_fit_p)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, InstanceParseError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TacnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
