"""Master-hub candidate selection strategies.

Eight strategies produce the candidate set the search may root the tree at.
Degree and eccentricity are always computed on the tree under consideration,
so candidate sets are re-derived whenever the topology changes.

Ranking conventions: degree is ranked descending (more connected is better),
eccentricity ascending (more central is better); ties receive average ranks.
The composite preprocessing keeps nodes whose summed rank is at or below the
median composite, which filters out both peripheral and poorly connected
candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .topology import Tree, degrees, eccentricities

logger = logging.getLogger(__name__)

STRATEGY_NAMES = (
    "baseline",
    "leafonly",
    "leafnonleaf",
    "allnodes",
    "maxd",
    "mine",
    "70e30d",
    "30e70d",
)


@dataclass(frozen=True)
class HubStrategy:
    kind: str

    def __post_init__(self):
        if self.kind not in STRATEGY_NAMES:
            raise ValueError(f"unknown hub strategy {self.kind!r}; expected one of {STRATEGY_NAMES}")

    @classmethod
    def from_name(cls, name: str) -> "HubStrategy":
        return cls(kind=name.lower())


@dataclass(frozen=True)
class NodeScore:
    node: int
    degree: int
    eccentricity: int
    deg_rank: float
    ecc_rank: float
    composite: float


def _average_ranks(keys: list[float]) -> list[float]:
    """1-based ranks of ``keys`` ascending, average rank on ties."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    ranks = [0.0] * len(keys)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and keys[order[j + 1]] == keys[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def score_nodes(tree: Tree, nodes: list[int]) -> list[NodeScore]:
    """Degree/eccentricity ranks and composite score over ``nodes``."""
    deg = degrees(tree)
    ecc = eccentricities(tree)
    deg_ranks = _average_ranks([-deg[v] for v in nodes])   # high degree -> rank 1
    ecc_ranks = _average_ranks([ecc[v] for v in nodes])    # low eccentricity -> rank 1
    return [
        NodeScore(node=v, degree=deg[v], eccentricity=ecc[v],
                  deg_rank=deg_ranks[i], ecc_rank=ecc_ranks[i],
                  composite=deg_ranks[i] + ecc_ranks[i])
        for i, v in enumerate(nodes)
    ]


def _median(values: list[float]) -> float:
    s = sorted(values)
    m = len(s)
    mid = m // 2
    return s[mid] if m % 2 else (s[mid - 1] + s[mid]) / 2.0


def _baseline_candidates(tree: Tree) -> set[int]:
    deg = degrees(tree)
    non_leaves = [v for v in range(tree.n_nodes) if deg[v] > 1]
    if not non_leaves:
        return set(range(tree.n_nodes))
    scores = score_nodes(tree, non_leaves)
    med = _median([s.composite for s in scores])
    return {s.node for s in scores if s.composite <= med}


def _weighted_candidates(tree: Tree, ecc_weight: float) -> set[int]:
    nodes = list(range(tree.n_nodes))
    scores = score_nodes(tree, nodes)

    def norm(ranks: list[float]) -> list[float]:
        lo, hi = min(ranks), max(ranks)
        if hi == lo:
            return [0.0] * len(ranks)
        return [(r - lo) / (hi - lo) for r in ranks]

    en = norm([s.ecc_rank for s in scores])
    dn = norm([s.deg_rank for s in scores])
    combined = [ecc_weight * e + (1.0 - ecc_weight) * d for e, d in zip(en, dn)]
    best = min(combined)
    return {s.node for s, c in zip(scores, combined) if c == best}


def candidate_hubs(tree: Tree, strategy: HubStrategy) -> frozenset[int]:
    """Nonempty candidate hub set for ``tree`` under ``strategy``."""
    n = tree.n_nodes
    deg = degrees(tree)
    leaves = {v for v in range(n) if deg[v] <= 1}
    if len(leaves) == n:
        # degenerate 2-node tree: every node is a leaf, no structure to rank
        logger.warning("all nodes are leaves; falling back to the all-nodes candidate set")
        return frozenset(range(n))

    kind = strategy.kind
    if kind == "allnodes":
        out: set[int] = set(range(n))
    elif kind == "leafonly":
        out = set(leaves)
    elif kind == "baseline":
        out = _baseline_candidates(tree)
    elif kind == "leafnonleaf":
        out = _baseline_candidates(tree) | leaves
    elif kind == "maxd":
        top = max(deg.values())
        out = {v for v, d in deg.items() if d == top}
    elif kind == "mine":
        ecc = eccentricities(tree)
        low = min(ecc.values())
        out = {v for v, e in ecc.items() if e == low}
    elif kind == "70e30d":
        out = _weighted_candidates(tree, ecc_weight=0.7)
    else:  # 30e70d
        out = _weighted_candidates(tree, ecc_weight=0.3)
    assert out, "candidate set must be nonempty"
    return frozenset(out)
