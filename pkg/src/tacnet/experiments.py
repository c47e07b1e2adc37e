"""Sensitivity sweeps over the benchmark suite and their statistical analysis.

A sweep varies exactly one parameter of the base search configuration across
a list of labeled configurations, runs every (instance, configuration, seed)
cell, and records one row per cell.  Analysis groups rows per network size
plus a GLOBAL pool, gates each group with a Friedman test, and compares each
configuration against the baseline with Wilcoxon tests at a
Bonferroni-corrected level, reporting medians and relative changes.

Both aggregations of the relative change are always reported side by side:
the median of per-instance ratios and the ratio of medians; they differ in
general and neither is canonical.

Metric directions: the objective is higher-is-better; iteration/time costs
are lower-is-better; total iterations counts productive exploration before
the stagnation stop and is treated as higher-is-better (a search that keeps
improving runs longer).
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import stats as st
from .errors import ConfigurationError, DimensionError
from .hubselect import STRATEGY_NAMES
from .instance import Instance
from .objective import WEIGHT_CONFIG_NAMES, weight_config
from .search import SearchConfig, tabu_search
from .stats import PairedMatrix, TestResult
from .topology import StructureLimits

SWEEP_KINDS = ("hub_strategy", "pmp_limit", "beam_width", "antenna_tech", "weights", "lambda")

#: metric name -> higher_is_better
METRICS: dict[str, bool] = {
    "best_objective": True,
    "iteration_found": False,
    "time_found_ms": False,
    "total_iterations": True,
    "time_per_iteration_ms": False,
}

PMP_VALUES = (5, 8, 10, 12, 15, 20, 25)
LAMBDA_VALUES = (0.0, 0.5, 1.0, 1.5, 2.0)
BEAM_LABELS = ("beams-4", "beams-6", "beams-12", "beams-24-standard", "beams-24-omni")


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    configs: tuple[str, ...]
    baseline: str
    seeds_per_cell: int = 1

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ConfigurationError(f"unknown sweep kind {self.kind!r}")
        if len(self.configs) < 2:
            raise ConfigurationError("a sweep needs at least two configurations")
        if self.baseline not in self.configs:
            raise ConfigurationError(f"baseline {self.baseline!r} not in configuration list")
        if self.seeds_per_cell < 1:
            raise ConfigurationError("seeds_per_cell must be >= 1")


def default_sweep(kind: str, seeds_per_cell: int = 1) -> SweepSpec:
    if kind == "hub_strategy":
        return SweepSpec(kind, STRATEGY_NAMES, "baseline", seeds_per_cell)
    if kind == "pmp_limit":
        return SweepSpec(kind, tuple(f"pmp-{v}" for v in PMP_VALUES), "pmp-10", seeds_per_cell)
    if kind == "beam_width":
        return SweepSpec(kind, BEAM_LABELS, "beams-24-omni", seeds_per_cell)
    if kind == "antenna_tech":
        return SweepSpec(kind, ("single-beam", "multi-beam"), "multi-beam", seeds_per_cell)
    if kind == "weights":
        return SweepSpec(kind, WEIGHT_CONFIG_NAMES, "baseline", seeds_per_cell)
    if kind == "lambda":
        return SweepSpec(kind, tuple(f"lambda-{v:g}" for v in LAMBDA_VALUES),
                         "lambda-1", seeds_per_cell)
    raise ConfigurationError(f"unknown sweep kind {kind!r}")


def apply_config_label(base: SearchConfig, kind: str, label: str) -> SearchConfig:
    """The base configuration with only the swept parameter changed."""
    if kind == "hub_strategy":
        return replace(base, hub_strategy=label)
    if kind == "pmp_limit":
        value = int(label.removeprefix("pmp-"))
        return replace(base, limits=StructureLimits(pmp_limit=value,
                                                    hub_channel_groups=base.limits.hub_channel_groups))
    if kind == "beam_width":
        if label == "beams-24-omni":
            ant = replace(base.antenna, beam_count=24, omni_fallback=True, mode="multi_beam")
        elif label == "beams-24-standard":
            ant = replace(base.antenna, beam_count=24, omni_fallback=False, mode="multi_beam")
        else:
            count = int(label.removeprefix("beams-"))
            ant = replace(base.antenna, beam_count=count, omni_fallback=False, mode="multi_beam")
        return replace(base, antenna=ant)
    if kind == "antenna_tech":
        if label == "multi-beam":
            return replace(base, antenna=replace(base.antenna, mode="multi_beam"))
        # a single-beam radio has no multi-beam omni fallback rule
        return replace(base, antenna=replace(base.antenna, mode="single_beam",
                                             omni_fallback=False))
    if kind == "weights":
        return replace(base, weights=weight_config(label, p=base.weights.p))
    if kind == "lambda":
        return replace(base, lam=float(label.removeprefix("lambda-")))
    raise ConfigurationError(f"unknown sweep kind {kind!r}")


def feasible_configs(spec: SweepSpec, instance_size: int) -> tuple[str, ...]:
    """PMP sweeps drop successor limits larger than the instance size."""
    if spec.kind != "pmp_limit":
        return spec.configs
    kept = tuple(c for c in spec.configs
                 if int(c.removeprefix("pmp-")) <= instance_size)
    return kept


_FLOAT_FIELDS = (
    "best_objective", "iteration_found", "time_found_ms", "total_iterations",
    "time_per_iteration_ms",
    "fa_min", "fa_mean", "fa", "fb_min", "fb_mean", "fb",
    "fc_min", "fc_mean", "fc", "total", "best_fa", "best_fb", "best_fc",
)


@dataclass(frozen=True)
class ResultRow:
    sweep_kind: str
    baseline_label: str
    instance_id: str
    size: int
    config_label: str
    config_hash: str
    seed: int
    status: str = "ok"
    error: str = ""
    best_objective: float = float("nan")
    iteration_found: float = float("nan")
    time_found_ms: float = float("nan")
    total_iterations: float = float("nan")
    time_per_iteration_ms: float = float("nan")
    fa_min: float = float("nan")
    fa_mean: float = float("nan")
    fa: float = float("nan")
    fb_min: float = float("nan")
    fb_mean: float = float("nan")
    fb: float = float("nan")
    fc_min: float = float("nan")
    fc_mean: float = float("nan")
    fc: float = float("nan")
    total: float = float("nan")
    best_fa: float = float("nan")
    best_fb: float = float("nan")
    best_fc: float = float("nan")


@dataclass(frozen=True)
class ResultsTable:
    kind: str
    baseline_label: str
    rows: tuple[ResultRow, ...]

    def ok_rows(self) -> list[ResultRow]:
        return [r for r in self.rows if r.status == "ok"]

    def sizes(self) -> list[int]:
        return sorted({r.size for r in self.rows})


def _run_cell(args) -> ResultRow:
    inst, spec_kind, baseline_label, label, cfg = args
    try:
        best, trace = tabu_search(inst, cfg)
        bd = best.breakdown
        comp = bd.components
        return ResultRow(
            sweep_kind=spec_kind, baseline_label=baseline_label,
            instance_id=inst.id, size=inst.size, config_label=label,
            config_hash=cfg.config_hash(), seed=cfg.seed,
            best_objective=trace.best_objective,
            iteration_found=float(trace.iteration_found),
            time_found_ms=trace.time_found_ms,
            total_iterations=float(trace.total_iterations),
            time_per_iteration_ms=trace.time_per_iteration_ms,
            fa_min=comp["A"].f_min, fa_mean=comp["A"].f_mean, fa=comp["A"].f,
            fb_min=comp["B"].f_min, fb_mean=comp["B"].f_mean, fb=comp["B"].f,
            fc_min=comp["C"].f_min, fc_mean=comp["C"].f_mean, fc=comp["C"].f,
            total=bd.total,
            best_fa=trace.scenario_best["A"].f,
            best_fb=trace.scenario_best["B"].f,
            best_fc=trace.scenario_best["C"].f,
        )
    except Exception as exc:  # a failed cell is recorded and skipped by analysis
        return ResultRow(sweep_kind=spec_kind, baseline_label=baseline_label,
                         instance_id=inst.id, size=inst.size, config_label=label,
                         config_hash=cfg.config_hash(), seed=cfg.seed,
                         status="error", error=f"{type(exc).__name__}: {exc}")


def run_sweep(spec: SweepSpec, suite: list[Instance], base_cfg: SearchConfig,
              jobs: int = 1) -> ResultsTable:
    """One tabu run per (instance, feasible configuration, seed) cell."""
    if not suite:
        raise ConfigurationError("empty instance suite")
    cells = []
    for inst in suite:
        for label in feasible_configs(spec, inst.size):
            cfg = apply_config_label(base_cfg, spec.kind, label)
            for s in range(spec.seeds_per_cell):
                cells.append((inst, spec.kind, spec.baseline, label,
                              replace(cfg, seed=base_cfg.seed + s)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, cells, chunksize=1))
    else:
        rows = [_run_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.size, r.instance_id, r.config_label, r.seed))
    return ResultsTable(kind=spec.kind, baseline_label=spec.baseline, rows=tuple(rows))


# ---------------------------------------------------------------------------
# persistence


def results_to_csv(rt: ResultsTable, path: str | os.PathLike | None = None) -> str:
    cols = [f.name for f in fields(ResultRow)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rt.rows:
        writer.writerow([repr(getattr(r, c)) if c in _FLOAT_FIELDS else getattr(r, c)
                         for c in cols])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def results_from_csv(source: str | os.PathLike) -> ResultsTable:
    """Parse a results table from a file path or raw CSV text."""
    if isinstance(source, os.PathLike) or "\n" not in str(source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    expected = [f.name for f in fields(ResultRow)]
    if header != expected:
        raise DimensionError(f"unexpected results header {header}")
    rows = []
    for rec in reader:
        kw = dict(zip(header, rec))
        for c in _FLOAT_FIELDS:
            kw[c] = float(kw[c])
        kw["size"] = int(kw["size"])
        kw["seed"] = int(kw["seed"])
        rows.append(ResultRow(**kw))
    if not rows:
        raise DimensionError("results file has no rows")
    return ResultsTable(kind=rows[0].sweep_kind, baseline_label=rows[0].baseline_label,
                        rows=tuple(rows))


# ---------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class GroupComparison:
    config: str
    n_pairs: int
    wilcoxon: TestResult | None
    median_s: float
    delta_median_of_ratios: float | None
    delta_ratio_of_medians: float | None
    best: str = ""


@dataclass(frozen=True)
class GroupAnalysis:
    group: str
    n_instances: int
    configs: tuple[str, ...]
    friedman: TestResult | None
    alpha_corrected: float
    median_b: float
    comparisons: tuple[GroupComparison, ...]
    gaps: tuple[str, ...] = ()


@dataclass(frozen=True)
class StatReport:
    metric: str
    higher_is_better: bool
    baseline: str
    alpha: float
    groups: tuple[GroupAnalysis, ...]


def _config_order(rt: ResultsTable) -> list[str]:
    seen: list[str] = []
    for r in rt.rows:
        if r.config_label not in seen:
            seen.append(r.config_label)
    # keep the canonical sweep order when known
    try:
        spec = default_sweep(rt.kind)
        ordered = [c for c in spec.configs if c in seen]
        ordered.extend(c for c in seen if c not in ordered)
        return ordered
    except ConfigurationError:
        return seen


def analyze(rt: ResultsTable, metric: str, baseline_label: str | None = None,
            alpha: float = 0.05, friedman_draws: int = st.FRIEDMAN_DRAWS) -> StatReport:
    """Friedman gate plus Wilcoxon-vs-baseline post-hoc, per size group and globally.

    With multiple seeds per cell, the per-cell median over seeds enters the
    paired tests.  Friedman runs on the largest fully paired sub-grid of each
    group; pairwise comparisons use the instances where both configurations
    have values.  True gaps (missing feasible cells) are reported.
    """
    if metric not in METRICS:
        raise ConfigurationError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}")
    higher = METRICS[metric]
    baseline = baseline_label or rt.baseline_label
    ok = rt.ok_rows()
    if not ok:
        raise DimensionError("no successful rows to analyze")

    # collapse seeds: per (instance, config) median
    cell: dict[tuple[str, str], list[float]] = {}
    size_of: dict[str, int] = {}
    for r in ok:
        cell.setdefault((r.instance_id, r.config_label), []).append(getattr(r, metric))
        size_of[r.instance_id] = r.size
    value = {key: st.median(vals) for key, vals in cell.items()}

    failed = {(r.instance_id, r.config_label) for r in rt.rows if r.status != "ok"}
    config_order = _config_order(rt)
    groups: list[GroupAnalysis] = []
    sizes = sorted({r.size for r in ok})
    for group_key in [str(s) for s in sizes] + ["GLOBAL"]:
        if group_key == "GLOBAL":
            insts = sorted(size_of)
        else:
            insts = sorted(i for i, s in size_of.items() if s == int(group_key))
        configs = [c for c in config_order if any((i, c) in value for i in insts)]
        if baseline not in configs or len(configs) < 2 or len(insts) < 2:
            continue
        gaps = tuple(sorted(f"{i}/{c}" for i in insts for c in configs
                            if (i, c) in failed))
        complete = [c for c in configs if all((i, c) in value for i in insts)]
        friedman_res = None
        if len(complete) >= 2:
            matrix = np.array([[value[(i, c)] for c in complete] for i in insts])
            friedman_res = st.friedman(PairedMatrix(matrix, tuple(complete),
                                                    complete.index(baseline)
                                                    if baseline in complete else 0),
                                       alpha=alpha, higher_is_better=higher,
                                       draws=friedman_draws)
        alpha_corr = st.bonferroni_alpha(len(configs), alpha)
        base_vals = [value[(i, baseline)] for i in insts if (i, baseline) in value]
        median_b = st.median(base_vals)
        comparisons: list[GroupComparison] = []
        gate_open = friedman_res is not None and friedman_res.significant
        for c in configs:
            if c == baseline:
                continue
            paired = [i for i in insts if (i, c) in value and (i, baseline) in value]
            s_vals = [value[(i, c)] for i in insts if (i, c) in value]
            median_s = st.median(s_vals)
            wres = None
            best = ""
            d_med_ratio = None
            d_ratio_med = None
            if paired:
                xs = [value[(i, c)] for i in paired]
                ys = [value[(i, baseline)] for i in paired]
                ratios = [st.delta_percent(a, b) for a, b in zip(xs, ys) if b != 0]
                d_med_ratio = st.median(ratios) if ratios else None
                mb_p = st.median(ys)
                if mb_p != 0:
                    d_ratio_med = st.delta_percent(st.median(xs), mb_p)
                if gate_open and len(paired) >= 2:
                    wres = st.wilcoxon_signed_rank(xs, ys, alpha=alpha_corr)
                    if wres.significant:
                        ms, mb = st.median(xs), st.median(ys)
                        if ms == mb:
                            best = ""
                        elif (ms > mb) == higher:
                            best = c
                        else:
                            best = baseline
            comparisons.append(GroupComparison(
                config=c, n_pairs=len(paired), wilcoxon=wres, median_s=median_s,
                delta_median_of_ratios=d_med_ratio,
                delta_ratio_of_medians=d_ratio_med, best=best))
        groups.append(GroupAnalysis(
            group=group_key, n_instances=len(insts), configs=tuple(configs),
            friedman=friedman_res, alpha_corrected=alpha_corr, median_b=median_b,
            comparisons=tuple(comparisons), gaps=gaps))
    return StatReport(metric=metric, higher_is_better=higher, baseline=baseline,
                      alpha=alpha, groups=tuple(groups))


# ---------------------------------------------------------------------------
# reporting


def _fmt(x: float | None, nd: int = 4) -> str:
    if x is None:
        return ""
    return f"{x:.{nd}f}"


def report_markdown(reports: list[StatReport], rt: ResultsTable) -> str:
    out: list[str] = []
    out.append(f"# Sensitivity report: {rt.kind}")
    out.append("")
    out.append(f"Baseline configuration: `{rt.baseline_label}`; "
               f"{len(rt.ok_rows())} successful runs of {len(rt.rows)}.")
    out.append("")
    for rep in reports:
        direction = "higher is better" if rep.higher_is_better else "lower is better"
        out.append(f"## Metric: {rep.metric} ({direction})")
        out.append("")
        out.append("| Group | Ftest | Config | Wtest | MedianB | MedianS "
                   "| d% (median of ratios) | d% (ratio of medians) | Best |")
        out.append("|---|---|---|---|---|---|---|---|---|")
        for g in rep.groups:
            ftest = "Y" if (g.friedman and g.friedman.significant) else "N"
            out.append(f"| {g.group} | {ftest} |  |  | {_fmt(g.median_b)} |  |  |  |  |")
            if not (g.friedman and g.friedman.significant):
                continue
            for cmp_ in g.comparisons:
                wtest = ""
                if cmp_.wilcoxon is not None:
                    wtest = "Y" if cmp_.wilcoxon.significant else "N"
                out.append(
                    f"|  |  | {cmp_.config} | {wtest} |  | {_fmt(cmp_.median_s)} "
                    f"| {_fmt(cmp_.delta_median_of_ratios, 2)} "
                    f"| {_fmt(cmp_.delta_ratio_of_medians, 2)} | {cmp_.best} |")
        out.append("")
        gaps = [g for rep_g in rep.groups for g in rep_g.gaps]
        if gaps:
            out.append(f"Missing/failed cells: {', '.join(sorted(set(gaps)))}")
            out.append("")
    out.append("Both relative-change aggregations are reported because the median of "
               "per-instance ratios and the ratio of group medians do not coincide in "
               "general; neither is canonical.")
    out.append("")
    out.append("## Per-instance objective values")
    out.append("")
    configs = _config_order(rt)
    header = "| Size | Instance | " + " | ".join(configs) + " |"
    out.append(header)
    out.append("|" + "---|" * (2 + len(configs)))
    by_cell: dict[tuple[str, str], float] = {}
    size_of: dict[str, int] = {}
    for r in rt.ok_rows():
        by_cell[(r.instance_id, r.config_label)] = r.best_objective
        size_of[r.instance_id] = r.size
    for inst_id in sorted(size_of, key=lambda i: (size_of[i], i)):
        cells = [(_fmt(by_cell.get((inst_id, c)))) for c in configs]
        out.append(f"| {size_of[inst_id]} | {inst_id} | " + " | ".join(cells) + " |")
    out.append("")
    return "\n".join(out)


def boxplot_csv(rt: ResultsTable, metric: str) -> str:
    """Five-number summaries plus 1.5*IQR outliers, per group and configuration."""
    if metric not in METRICS:
        raise ConfigurationError(f"unknown metric {metric!r}")
    rows = rt.ok_rows()
    configs = _config_order(rt)
    out = ["group,config,n,min,q1,median,q3,max,outliers"]
    sizes = sorted({r.size for r in rows})
    for group_key in [str(s) for s in sizes] + ["GLOBAL"]:
        sub = rows if group_key == "GLOBAL" else [r for r in rows if str(r.size) == group_key]
        for c in configs:
            vals = sorted(getattr(r, metric) for r in sub if r.config_label == c)
            if not vals:
                continue
            arr = np.array(vals)
            q1, med, q3 = np.percentile(arr, [25, 50, 75])
            iqr = q3 - q1
            lo_f, hi_f = q1 - 1.5 * iqr, q3 + 1.5 * iqr
            outliers = [v for v in vals if v < lo_f or v > hi_f]
            out.append(f"{group_key},{c},{len(vals)},{vals[0]!r},{q1!r},{med!r},{q3!r},"
                       f"{vals[-1]!r},{'|'.join(repr(v) for v in outliers)}")
    return "\n".join(out) + "\n"


def emit_report(reports: list[StatReport] | StatReport, rt: ResultsTable,
                out_dir: str | os.PathLike,
                formats: tuple[str, ...] = ("markdown", "csv")) -> list[Path]:
    """Write report.md, per-metric boxplot CSVs, and the per-instance CSV."""
    if isinstance(reports, StatReport):
        reports = [reports]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "markdown" in formats:
        path = out / "report.md"
        path.write_text(report_markdown(reports, rt), encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        for rep in reports:
            path = out / f"boxplot_{rep.metric}.csv"
            path.write_text(boxplot_csv(rt, rep.metric), encoding="utf-8")
            written.append(path)
        path = out / "results.csv"
        results_to_csv(rt, path)
        written.append(path)
    return written
