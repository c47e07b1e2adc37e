"""Tabu search over (tree, hub) with derived radio configuration.

The decision space is the labeled spanning tree plus the master hub; channel,
frequency and beam configuration are derived deterministically from those two
choices, so the search never has to branch on them.

Neighborhood:

* edge exchange - remove one tree edge and reconnect the separated component
  through a replacement edge; per removed edge the ``reconnect_width``
  geometrically shortest feasible reconnections are offered (all of them for
  small instances, so micro-scale neighborhoods are exhaustive);
* hub move - re-root the current tree at another node from the hub
  strategy's candidate set, recomputed for the current topology.

Admissibility is classical: the best non-tabu neighbor is accepted each
iteration, a tabu neighbor is admissible only when it strictly improves the
global best (aspiration).  Reversing attributes (re-adding a removed edge,
re-removing an added edge, returning to a previous hub) stay tabu for
``tabu_tenure`` iterations.  Equal-valued moves break ties toward the
lexicographically smallest (move kind, node ids).

A run is strictly deterministic given (instance, config).  The seed enters
only through the initial hub, which rotates across the strategy's candidate
list (seed 0 picks the first candidate), so independent restarts explore
different trajectories.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import _engine, objective, topology
from .design import NetworkDesign, build_design, evaluate_design
from .errors import InfeasibleInstanceError
from .geometry import geometry_of
from .hubselect import HubStrategy, candidate_hubs
from .instance import Instance
from .objective import WeightConfig, weight_config
from .phy import PhyParams
from .radio import AntennaModel, ChannelPlan
from .topology import Edge, StructureLimits, Tree

_EPS = 1e-12


def _default_weights() -> WeightConfig:
    return weight_config("baseline")


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_iterations: int = 2000
    stagnation_limit: int = 500
    tabu_tenure: int | None = None          # None -> 7 + |V| // 10
    hub_strategy: str = "baseline"
    limits: StructureLimits = field(default_factory=StructureLimits)
    antenna: AntennaModel = field(default_factory=AntennaModel)
    phy: PhyParams = field(default_factory=PhyParams)
    plan: ChannelPlan = field(default_factory=ChannelPlan)
    weights: WeightConfig = field(default_factory=_default_weights)
    lam: float = 1.0
    strict_uniform_tradeoff: bool = False
    reconnect_width: int | None = 3         # None -> all reconnections per cut
    exhaustive_node_threshold: int = 8      # n <= threshold evaluates every reconnection
    audit_interval: int = 100               # accepted designs between full re-evaluations
    restart_on_stagnation: bool = True      # diversify instead of stopping early

    def __post_init__(self):
        if self.max_iterations < 1 or self.stagnation_limit < 1:
            raise ValueError("iteration budgets must be positive")
        if self.tabu_tenure is not None and self.tabu_tenure < 1:
            raise ValueError("tabu_tenure must be positive")
        HubStrategy.from_name(self.hub_strategy)  # validates the name

    def tenure_for(self, n_nodes: int) -> int:
        return self.tabu_tenure if self.tabu_tenure is not None else 7 + n_nodes // 10

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "max_iterations": self.max_iterations,
            "stagnation_limit": self.stagnation_limit,
            "tabu_tenure": self.tabu_tenure,
            "restart_on_stagnation": self.restart_on_stagnation,
            "hub_strategy": self.hub_strategy,
            "pmp_limit": self.limits.pmp_limit,
            "hub_channel_groups": self.limits.hub_channel_groups,
            "antenna": {
                "beam_count": self.antenna.beam_count,
                "mode": self.antenna.mode,
                "omni_fallback": self.antenna.omni_fallback,
                "fallback_threshold": self.antenna.fallback_threshold,
                "omni_gain_dbi": self.antenna.omni_gain_dbi,
                "sidelobe_rejection_db": self.antenna.sidelobe_rejection_db,
            },
            "phy": {
                "tx_power_dbm": self.phy.tx_power_dbm,
                "noise_floor_dbm": self.phy.noise_floor_dbm,
                "bandwidth_mhz": self.phy.bandwidth_mhz,
                "rate_cap_mbps": self.phy.rate_cap_mbps,
                "pathloss_const_db": self.phy.pathloss_const_db,
                "pathloss_dist_coeff": self.phy.pathloss_dist_coeff,
                "pathloss_freq_coeff": self.phy.pathloss_freq_coeff,
                "min_sinr_db": self.phy.min_sinr_db,
            },
            "plan": {"ch0": list(self.plan.ch0_freqs), "ch1": list(self.plan.ch1_freqs)},
            "weights": {
                "name": self.weights.name,
                "wa": str(self.weights.wa),
                "wb": str(self.weights.wb),
                "wc_norm": str(self.weights.wc_norm),
                "p": self.weights.p,
            },
            "lambda": self.lam,
            "strict_uniform_tradeoff": self.strict_uniform_tradeoff,
            "reconnect_width": self.reconnect_width,
            "exhaustive_node_threshold": self.exhaustive_node_threshold,
        }

    def config_hash(self, include_seed: bool = False) -> str:
        doc = self.to_dict()
        if not include_seed:
            doc.pop("seed")
        blob = json.dumps(doc, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass(frozen=True)
class Move:
    kind: str                 # "edge" | "hub"
    removed: Edge | None
    added: Edge | None
    hub: int | None
    parent: np.ndarray
    root: int

    @property
    def key(self) -> tuple:
        if self.kind == "edge":
            return (0, *self.removed, *self.added)
        return (1, self.hub)


@dataclass
class ScenarioBest:
    f: float
    parent: tuple[int, ...]
    root: int
    iteration: int


@dataclass
class SearchTrace:
    best_objective: float
    iteration_found: int
    time_found_ms: float
    total_iterations: int
    time_per_iteration_ms: float
    best_series: list[float]
    scenario_best: dict[str, ScenarioBest]
    seed: int
    config_hash: str

    def deterministic_view(self) -> dict:
        """Everything reproducible bit-for-bit across runs (no wall-clock fields)."""
        return {
            "best_objective": self.best_objective,
            "iteration_found": self.iteration_found,
            "total_iterations": self.total_iterations,
            "best_series": list(self.best_series),
            "scenario_best": {
                x: (sb.f, sb.parent, sb.root, sb.iteration)
                for x, sb in sorted(self.scenario_best.items())
            },
            "seed": self.seed,
            "config_hash": self.config_hash,
        }


@dataclass
class _EvalOut:
    total: float
    stats: dict[str, tuple[float, float]]   # scenario -> (f_min, f_mean)
    f_std: dict[str, float]                 # scenario -> f at lambda = 1


class _Evaluator:
    """Per-(instance, config) context; evaluates (parent, root) decision vectors."""

    def __init__(self, inst: Instance, cfg: SearchConfig):
        self.inst = inst
        self.cfg = cfg
        self.n = inst.size
        self.geom = geometry_of(inst)
        self.dist = self.geom.dist_km
        with np.errstate(divide="ignore"):
            self.logdist = np.log10(self.dist, where=self.dist > 0,
                                    out=np.zeros_like(self.dist))
        self.sec = self.geom.sector_indices(cfg.antenna.beam_count)
        self.sec_rows = self.sec.tolist()
        self.az = self.geom.az_deg
        w = cfg.weights
        self.wf = (float(w.wa), float(w.wb), float(w.wc_norm))
        self.p_eff = {
            x: objective.effective_tradeoff(w.p, x, self.n, cfg.strict_uniform_tradeoff)
            for x in topology.SCENARIOS
        }
        self._memo: dict[bytes, _EvalOut] = {}
        self._partition_memo: dict[tuple, tuple] = {}

    def _partition(self, children_of_root: list[int], root: int) -> tuple:
        key = (root, tuple(children_of_root))
        hit = self._partition_memo.get(key)
        if hit is None:
            hit = _engine.partition_root_children(children_of_root, self.az[root],
                                                  self.cfg.limits.pmp_limit)
            self._partition_memo[key] = hit
        return hit

    def evaluate(self, parent: np.ndarray, root: int) -> _EvalOut:
        key = parent.tobytes() + bytes([root])
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        struct = _engine.struct_from_parent(parent, root)
        groups = self._partition(struct.children[root], root)
        derived = _engine.derive_config(struct, self.az, self.sec,
                                        self.cfg.antenna, self.cfg.plan,
                                        self.cfg.limits.pmp_limit,
                                        groups=groups, sec_rows=self.sec_rows)
        tp, _, _ = _engine.link_metrics_core(self.cfg.phy, self.cfg.antenna,
                                             self.logdist, self.sec, derived.edges,
                                             want_interference_dbm=False)
        d = _engine.subtree_sizes_array(struct)
        stats = _engine.scenario_stats(tp, d[derived.edges.vs], self.n,
                                       self.cfg.strict_uniform_tradeoff)
        f_std = {}
        total = 0.0
        for wx, x in zip(self.wf, topology.SCENARIOS):
            f_min, f_mean = stats[x]
            f_std[x] = f_min + self.p_eff[x] * f_mean
            total += wx * objective.lambda_component(f_min, f_mean, self.p_eff[x],
                                                     self.cfg.lam)
        out = _EvalOut(total=total, stats=stats, f_std=f_std)
        if len(self._memo) > 400_000:
            self._memo.clear()
        self._memo[key] = out
        return out


def _counts_ok(parent: np.ndarray, root: int, limits: StructureLimits,
               leaf_hub: bool) -> bool:
    n = len(parent)
    counts = np.bincount(np.delete(parent, root), minlength=n)
    if counts[root] > limits.hub_channel_groups * limits.pmp_limit:
        return False
    if leaf_hub and counts[root] != 1:
        return False
    counts[root] = 0
    return bool((counts <= limits.pmp_limit).all())


def _tree_of(inst_id: str, parent: np.ndarray, root: int, n: int) -> Tree:
    edges = frozenset((min(v, int(parent[v])), max(v, int(parent[v])))
                      for v in range(n) if v != root)
    return Tree(instance_id=inst_id, n_nodes=n, edges=edges)


def _reorient(parent: np.ndarray, old_root: int, new_root: int) -> np.ndarray:
    """Parent array of the same undirected tree rooted at ``new_root``."""
    out = parent.copy()
    path = [new_root]
    while path[-1] != old_root:
        path.append(int(parent[path[-1]]))
    for a, b in zip(path, path[1:]):
        out[b] = a
    out[new_root] = -1
    return out


def _edge_moves(dist: np.ndarray, parent: np.ndarray, root: int,
                limits: StructureLimits, width: int | None,
                leaf_hub: bool) -> list[Move]:
    """Edge-exchange moves: per removed edge, the ``width`` shortest feasible
    reconnections of the separated component (all of them when width is None).

    Reattaching (a, b) only ever raises the successor counts of ``a`` and of
    ``b`` (the latter only when the component is re-rooted, b != c); all other
    counts stay or drop, so feasibility reduces to those two capacity checks
    plus the leaf-hub degree rule.
    """
    n = len(parent)
    moves: list[Move] = []
    counts = np.bincount(np.delete(parent, root), minlength=n)
    cap = np.full(n, limits.pmp_limit, dtype=np.int64)
    cap[root] = limits.hub_channel_groups * limits.pmp_limit
    order = [root]
    kids: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if v != root:
            kids[int(parent[v])].append(v)
    for u in order:
        order.extend(kids[u])
    for c in sorted(v for v in range(n) if v != root):
        p = int(parent[c])
        inside = np.zeros(n, dtype=bool)
        inside[c] = True
        for u in order:  # parents precede children in BFS order
            pu = int(parent[u])
            if u != root and pu >= 0 and inside[pu]:
                inside[u] = True
        out_ids = np.flatnonzero(~inside)
        in_ids = np.flatnonzero(inside)
        ok_a = counts[out_ids] < cap[out_ids]
        ok_b = (in_ids == c) | (counts[in_ids] < limits.pmp_limit)
        if leaf_hub:
            # the hub keeps degree exactly 1: +1 at a == root, -1 at p == root
            root_delta_a = (out_ids == root).astype(np.int64) - (1 if p == root else 0)
            ok_a &= (counts[root] + root_delta_a) == 1
        sub = dist[np.ix_(out_ids, in_ids)].copy()
        sub[~ok_a, :] = np.inf
        sub[:, ~ok_b] = np.inf
        pi = np.searchsorted(out_ids, p)
        ci = np.searchsorted(in_ids, c)
        if pi < len(out_ids) and out_ids[pi] == p:
            sub[pi, ci] = np.inf  # the removed edge itself is not a reconnection
        flat = sub.ravel()
        finite = np.flatnonzero(np.isfinite(flat))
        if len(finite) == 0:
            continue
        a_all = out_ids[finite // len(in_ids)]
        b_all = in_ids[finite % len(in_ids)]
        sel = np.lexsort((b_all, a_all, flat[finite]))
        if width is not None:
            chosen = list(sel[:width])
            # the hub is rarely among the geometrically nearest endpoints, but
            # reattaching a component directly to it is how high-degree hubs
            # are reached; always offer the best feasible hub reconnection
            hub_rows = sel[a_all[sel] == root]
            if len(hub_rows) and hub_rows[0] not in chosen:
                chosen.append(hub_rows[0])
            sel = chosen
        pairs = []
        for t in sel:
            pairs.append((int(a_all[t]), int(b_all[t])))
        for a, b in pairs:
            newp = parent.copy()
            node, prev = b, a
            while True:
                nxt = int(parent[node])
                newp[node] = prev
                if node == c:
                    break
                prev, node = node, nxt
            moves.append(Move(kind="edge",
                              removed=(min(p, c), max(p, c)),
                              added=(min(a, b), max(a, b)),
                              hub=None, parent=newp, root=root))
    return moves


def _hub_moves(inst_id: str, parent: np.ndarray, root: int, n: int,
               strategy: HubStrategy, limits: StructureLimits) -> list[Move]:
    tree = _tree_of(inst_id, parent, root, n)
    cands = sorted(candidate_hubs(tree, strategy))
    moves = []
    for h in cands:
        if h == root:
            continue
        newp = _reorient(parent, root, h)
        if _counts_ok(newp, h, limits, leaf_hub=False):
            moves.append(Move(kind="hub", removed=None, added=None, hub=h,
                              parent=newp, root=h))
    return moves


def _generate_moves(inst: Instance, parent: np.ndarray, root: int,
                    cfg: SearchConfig, dist: np.ndarray) -> list[Move]:
    n = inst.size
    width = cfg.reconnect_width
    if n <= cfg.exhaustive_node_threshold:
        width = None
    strategy = HubStrategy.from_name(cfg.hub_strategy)
    leaf_hub = strategy.kind == "leafonly"
    moves = _edge_moves(dist, parent, root, cfg.limits, width, leaf_hub)
    moves.extend(_hub_moves(inst.id, parent, root, n, strategy, cfg.limits))
    return moves


def neighbors(inst: Instance, design: NetworkDesign, cfg: SearchConfig) -> list[Move]:
    """Feasibility-filtered candidate moves for ``design`` under ``cfg``."""
    n = inst.size
    parent = np.full(n, -1, dtype=np.int64)
    for c, p in design.dt.parent.items():
        parent[c] = p
    dist = geometry_of(inst).dist_km
    return _generate_moves(inst, parent, design.dt.root, cfg, dist)


def _star_seed_parent(dist: np.ndarray, root: int, limits: StructureLimits,
                      root_cap: int | None = None) -> np.ndarray:
    """Greedy wide-hub tree: nodes attach (nearest first) to the closest
    already-attached node with spare successor capacity."""
    n = dist.shape[0]
    parent = np.full(n, -1, dtype=np.int64)
    cap = np.full(n, limits.pmp_limit, dtype=np.int64)
    cap[root] = (limits.hub_channel_groups * limits.pmp_limit
                 if root_cap is None else root_cap)
    counts = np.zeros(n, dtype=np.int64)
    attached = [root]
    for v in sorted((x for x in range(n) if x != root),
                    key=lambda x: (dist[root, x], x)):
        host = min((a for a in attached if counts[a] < cap[a]),
                   key=lambda a: (dist[v, a], a))
        parent[v] = host
        counts[host] += 1
        attached.append(v)
    return parent


def _twolevel_seed_parent(dist: np.ndarray, root: int,
                          limits: StructureLimits) -> np.ndarray | None:
    """Depth-two seed: the hub takes enough nearest children that every other
    node can hang one level below them (subtree sizes stay at most 2, which
    is what the hub-centric traffic scenarios reward).  None when the degree
    caps cannot host such a tree."""
    n = dist.shape[0]
    hub_cap = limits.hub_channel_groups * limits.pmp_limit
    t = min(hub_cap, n - 1, max((n - 1 + 1) // 2, (n - 1 + limits.pmp_limit)
                                // (limits.pmp_limit + 1)))
    if (n - 1 - t) > t * limits.pmp_limit:
        return None
    order = sorted((x for x in range(n) if x != root),
                   key=lambda x: (dist[root, x], x))
    children = order[:t]
    parent = np.full(n, -1, dtype=np.int64)
    for c in children:
        parent[c] = root
    load = {c: 0 for c in children}
    for v in order[t:]:
        host = min(children, key=lambda c: (load[c], dist[v, c], c))
        if load[host] >= limits.pmp_limit:
            return None
        parent[v] = host
        load[host] += 1
    return parent


def _euclidean_mst_parent(dist: np.ndarray, root: int) -> np.ndarray:
    """Prim's MST as a parent array rooted at ``root``; ties to lowest index."""
    n = dist.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    link = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    in_tree[root] = True
    best[root] = -1.0
    np.minimum(best, dist[root], out=best, where=~in_tree)
    link[~in_tree] = root
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        v = int(np.argmin(masked))
        in_tree[v] = True
        parent[v] = link[v]
        closer = (~in_tree) & (dist[v] < best)
        best[closer] = dist[v][closer]
        link[closer] = v
    return parent


def _repair_limits(dist: np.ndarray, parent: np.ndarray, root: int,
                   limits: StructureLimits) -> np.ndarray:
    """Reattach overflow children to the nearest feasible ancestor."""
    n = len(parent)
    parent = parent.copy()
    cap_of = lambda v: (limits.hub_channel_groups * limits.pmp_limit
                        if v == root else limits.pmp_limit)
    for _ in range(n * n):
        counts = np.bincount(np.delete(parent, root), minlength=n)
        over = [v for v in range(n) if counts[v] > cap_of(v)]
        if not over:
            return parent
        v = over[0]
        kids = sorted((w for w in range(n) if w != root and parent[w] == v),
                      key=lambda w: (-dist[v, w], w))
        moved = False
        for w in kids[: counts[v] - cap_of(v)]:
            anc = []
            node = v
            while node != root:
                node = int(parent[node])
                anc.append(node)
            anc = [a for a in anc if counts[a] < cap_of(a)]
            if not anc:
                continue
            a = min(anc, key=lambda x: (dist[w, x], x))
            parent[w] = a
            moved = True
            break
        if not moved:
            raise InfeasibleInstanceError(
                f"cannot satisfy pmp_limit={limits.pmp_limit} by reattaching children")
    raise InfeasibleInstanceError("structure repair did not converge")


def initial_design(inst: Instance, cfg: SearchConfig) -> NetworkDesign:
    """Euclidean MST repaired to the degree limits; hub from the strategy's
    candidate list, rotated by the seed."""
    geom = geometry_of(inst)
    strategy = HubStrategy.from_name(cfg.hub_strategy)
    mst_parent = _euclidean_mst_parent(geom.dist_km, root=0)
    tree = _tree_of(inst.id, mst_parent, 0, inst.size)
    cands = sorted(candidate_hubs(tree, strategy))
    hub = cands[cfg.seed % len(cands)]
    parent = _reorient(mst_parent, 0, hub)
    parent = _repair_limits(geom.dist_km, parent, hub, cfg.limits)
    if strategy.kind == "leafonly" and not _counts_ok(parent, hub, cfg.limits, True):
        # a leaf hub must keep degree 1; the MST guarantees it (hub was a leaf)
        raise InfeasibleInstanceError("leaf hub lost its leaf status during repair")
    dt = topology.directed_from_parent(inst.id, parent.tolist(), hub)
    violations = topology.validate(dt, cfg.limits)
    if violations:
        raise InfeasibleInstanceError(f"initial design violates limits: {violations}")
    design = build_design(inst, dt, cfg.limits, cfg.antenna, cfg.plan, geom)
    return evaluate_design(inst, design, cfg.phy, cfg.weights, cfg.lam,
                           cfg.strict_uniform_tradeoff, geom)


def _build_final(inst: Instance, parent: tuple[int, ...] | np.ndarray, root: int,
                 cfg: SearchConfig, geom) -> NetworkDesign:
    dt = topology.directed_from_parent(inst.id, list(parent), root)
    design = build_design(inst, dt, cfg.limits, cfg.antenna, cfg.plan, geom)
    return evaluate_design(inst, design, cfg.phy, cfg.weights, cfg.lam,
                           cfg.strict_uniform_tradeoff, geom)


def _leg_start(inst: Instance, cfg: SearchConfig, ev: _Evaluator, leg: int,
               hub_candidates: list[int]) -> tuple[np.ndarray, int]:
    """Deterministic diversification seed for restart leg ``leg``.

    Legs cycle hub candidates and alternate the three constructive seeds
    (re-rooted MST, greedy wide-hub, depth-two), so the chain-like and the
    hub-heavy basins both keep getting explored.
    """
    hub = hub_candidates[(cfg.seed + leg) % len(hub_candidates)]
    leaf_hub = cfg.hub_strategy == "leafonly"
    kind = leg % 3
    parent = None
    if kind == 1:
        parent = _star_seed_parent(ev.dist, hub, cfg.limits,
                                   root_cap=1 if leaf_hub else None)
    elif kind == 2 and not leaf_hub:
        parent = _twolevel_seed_parent(ev.dist, hub, cfg.limits)
    if parent is None or not _counts_ok(parent, hub, cfg.limits, leaf_hub):
        # the repaired MST seed always satisfies the caps
        mst = _euclidean_mst_parent(ev.dist, root=0)
        parent = _repair_limits(ev.dist, _reorient(mst, 0, hub), hub, cfg.limits)
        if leaf_hub and not _counts_ok(parent, hub, cfg.limits, True):
            raise InfeasibleInstanceError("leaf hub lost degree 1 during restart")
    return parent, hub


def tabu_search(inst: Instance, cfg: SearchConfig) -> tuple[NetworkDesign, SearchTrace]:
    """Run the search; returns the best design and the run trace.

    With ``restart_on_stagnation`` the run diversifies after
    ``stagnation_limit`` non-improving iterations instead of stopping,
    alternating fresh MST-seeded and wide-hub-seeded legs over the hub
    candidate list until ``max_iterations`` is exhausted; otherwise the first
    stagnation ends the run.
    """
    t0 = time.perf_counter()
    ev = _Evaluator(inst, cfg)
    n = inst.size
    tenure = cfg.tenure_for(n)

    init = initial_design(inst, cfg)
    parent = np.full(n, -1, dtype=np.int64)
    for c, p in init.dt.parent.items():
        parent[c] = p
    root = init.dt.root
    mst_tree = _tree_of(inst.id, _euclidean_mst_parent(ev.dist, 0), 0, n)
    hub_candidates = sorted(candidate_hubs(mst_tree,
                                           HubStrategy.from_name(cfg.hub_strategy)))

    cur = ev.evaluate(parent, root)

    # construction scan: both seeding heuristics at every candidate hub; the
    # best construct starts the search, so paired runs under different
    # structural limits explore from comparable footing
    mst0 = _euclidean_mst_parent(ev.dist, root=0)
    leaf_hub = cfg.hub_strategy == "leafonly"
    for h in hub_candidates:
        for kind in ("mst", "star", "twolevel"):
            if kind == "star":
                cand = _star_seed_parent(ev.dist, h, cfg.limits,
                                         root_cap=1 if leaf_hub else None)
            elif kind == "twolevel":
                if leaf_hub:
                    continue
                cand = _twolevel_seed_parent(ev.dist, h, cfg.limits)
                if cand is None:
                    continue
            else:
                cand = _repair_limits(ev.dist, _reorient(mst0, 0, h), h, cfg.limits)
            if not _counts_ok(cand, h, cfg.limits, leaf_hub):
                continue
            out = ev.evaluate(cand, h)
            if out.total > cur.total + _EPS:
                parent, root, cur = cand, h, out

    best_total = cur.total
    best_parent, best_root = parent.copy(), root
    iteration_found = 0
    time_found_ms = (time.perf_counter() - t0) * 1000.0
    series = [best_total]
    scen_best = {
        x: ScenarioBest(f=cur.f_std[x], parent=tuple(parent.tolist()), root=root, iteration=0)
        for x in topology.SCENARIOS
    }

    tabu: dict[tuple, int] = {}
    stagnation = 0
    leg = 0
    it = 0
    while it < cfg.max_iterations:
        if stagnation >= cfg.stagnation_limit:
            if not cfg.restart_on_stagnation:
                break
            leg += 1
            parent, root = _leg_start(inst, cfg, ev, leg, hub_candidates)
            cur = ev.evaluate(parent, root)
            tabu.clear()
            stagnation = 0
            if cur.total > best_total + _EPS:
                best_total = cur.total
                best_parent, best_root = parent.copy(), root
                iteration_found = it
                time_found_ms = (time.perf_counter() - t0) * 1000.0
            for x in topology.SCENARIOS:
                if cur.f_std[x] > scen_best[x].f + _EPS:
                    scen_best[x] = ScenarioBest(f=cur.f_std[x],
                                                parent=tuple(parent.tolist()),
                                                root=root, iteration=it)
        it += 1
        moves = _generate_moves(inst, parent, root, cfg, ev.dist)
        chosen: tuple[Move, _EvalOut] | None = None
        chosen_key = None
        fallback: tuple[int, tuple, Move, _EvalOut] | None = None
        for mv in moves:
            if mv.kind == "edge":
                is_tabu = (tabu.get(("add", mv.added), 0) >= it
                           or tabu.get(("rem", mv.removed), 0) >= it)
            else:
                is_tabu = tabu.get(("hub", mv.hub), 0) >= it
            out = ev.evaluate(mv.parent, mv.root)
            if is_tabu and out.total <= best_total + _EPS:
                if mv.kind == "edge":
                    exp = max(tabu.get(("add", mv.added), 0),
                              tabu.get(("rem", mv.removed), 0))
                else:
                    exp = tabu.get(("hub", mv.hub), 0)
                if fallback is None or (exp, mv.key) < (fallback[0], fallback[1]):
                    fallback = (exp, mv.key, mv, out)
                continue
            if (chosen is None or out.total > chosen[1].total
                    or (out.total == chosen[1].total and mv.key < chosen_key)):
                chosen = (mv, out)
                chosen_key = mv.key
        if chosen is None:
            if fallback is None:
                break  # no feasible move at all
            chosen = (fallback[2], fallback[3])
        mv, out = chosen

        old_root = root
        parent, root = mv.parent, mv.root
        cur = out
        if mv.kind == "edge":
            tabu[("add", mv.removed)] = it + tenure
            tabu[("rem", mv.added)] = it + tenure
        else:
            tabu[("hub", old_root)] = it + tenure

        if cur.total > best_total + _EPS:
            best_total = cur.total
            best_parent, best_root = parent.copy(), root
            iteration_found = it
            time_found_ms = (time.perf_counter() - t0) * 1000.0
            stagnation = 0
        else:
            stagnation += 1
        for x in topology.SCENARIOS:
            if cur.f_std[x] > scen_best[x].f + _EPS:
                scen_best[x] = ScenarioBest(f=cur.f_std[x], parent=tuple(parent.tolist()),
                                            root=root, iteration=it)
        series.append(best_total)

        if cfg.audit_interval and it % cfg.audit_interval == 0:
            audit = _build_final(inst, parent, root, cfg, ev.geom)
            ref = audit.breakdown.total
            if abs(ref - cur.total) > 1e-9 * max(1.0, abs(ref)):
                raise RuntimeError(
                    f"objective audit mismatch at iteration {it}: {cur.total} vs {ref}")

    total_ms = (time.perf_counter() - t0) * 1000.0
    total_iterations = it
    trace = SearchTrace(
        best_objective=best_total,
        iteration_found=iteration_found,
        time_found_ms=time_found_ms,
        total_iterations=total_iterations,
        time_per_iteration_ms=total_ms / max(1, total_iterations),
        best_series=series,
        scenario_best=scen_best,
        seed=cfg.seed,
        config_hash=cfg.config_hash(),
    )
    best_design = _build_final(inst, best_parent, best_root, cfg, ev.geom)
    return best_design, trace


def scenario_best_design(inst: Instance, cfg: SearchConfig, trace: SearchTrace,
                         scenario: str) -> NetworkDesign:
    """Materialize the recorded best design for one traffic scenario."""
    sb = trace.scenario_best[scenario]
    return _build_final(inst, sb.parent, sb.root, cfg, geometry_of(inst))
