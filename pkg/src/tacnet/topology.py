"""Spanning trees over an instance: orientation, validation, and traffic loads.

The network is a rooted directed tree: one node (the master hub) is the root
and every edge points away from it.  ``d_v`` counts the nodes reachable from
``v`` including ``v`` itself, so the subtree sizes of the root's children sum
to ``|V| - 1``.

Traffic scenarios put integer stream counts on each directed edge ``u -> v``:

* ``A`` - one stream everywhere,
* ``B`` - the hub streams to every node: ``n_uv = d_v``,
* ``C`` - full pairwise exchange: ``n_uv = 2 * d_v * (|V| - d_v)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidRootError

SCENARIOS = ("A", "B", "C")

Edge = tuple[int, int]


@dataclass(frozen=True)
class Tree:
    """Undirected spanning tree; edges stored as (min, max) pairs."""

    instance_id: str
    n_nodes: int
    edges: frozenset[Edge]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj


def tree_from_edges(instance_id: str, n_nodes: int, edges: Iterable[Edge]) -> Tree:
    """Build a Tree, normalizing edge orientation; structure is not checked here
    (use :func:`tree_violations`)."""
    norm = frozenset((min(u, v), max(u, v)) for u, v in edges)
    return Tree(instance_id=instance_id, n_nodes=n_nodes, edges=norm)


@dataclass(frozen=True)
class DirectedTree:
    """Tree oriented away from the master hub (root)."""

    tree: Tree
    root: int
    parent: dict[int, int]              # child -> parent, root absent
    children: dict[int, tuple[int, ...]]  # node -> successors, NodeId order

    @property
    def n_nodes(self) -> int:
        return self.tree.n_nodes

    def edges_out(self) -> list[Edge]:
        """Directed edges (parent, child) keyed by child id, ascending."""
        return [(p, c) for c, p in sorted(self.parent.items())]

    def depths(self) -> dict[int, int]:
        depth = {self.root: 0}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for w in self.children[u]:
                depth[w] = depth[u] + 1
                stack.append(w)
        return depth


@dataclass(frozen=True)
class StructureLimits:
    """Per-channel successor cap; the hub serves two channel groups."""

    pmp_limit: int = 10
    hub_channel_groups: int = 2

    def __post_init__(self):
        if self.pmp_limit < 1:
            raise ValueError(f"pmp_limit must be >= 1, got {self.pmp_limit}")


@dataclass(frozen=True)
class SubtreeSizes:
    d: dict[int, int]


@dataclass(frozen=True)
class EdgeLoads:
    scenario: str
    n: dict[Edge, int]


@dataclass(frozen=True)
class Violation:
    """Structured constraint violation; data, not an exception."""

    rule: str
    node: int | None
    observed: object
    limit: object


def orient(tree: Tree, root: int) -> DirectedTree:
    """Orient all edges outward from ``root`` (BFS order, NodeId-sorted children)."""
    n = tree.n_nodes
    if not (0 <= root < n):
        raise InvalidRootError(f"root {root} not in [0, {n})")
    adj = tree.adjacency()
    parent: dict[int, int] = {}
    children: dict[int, tuple[int, ...]] = {}
    seen = [False] * n
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        kids = []
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                kids.append(w)
                queue.append(w)
        children[u] = tuple(kids)
    for v in range(n):
        children.setdefault(v, ())
    return DirectedTree(tree=tree, root=root, parent=parent, children=children)


def directed_from_parent(instance_id: str, parent: Sequence[int], root: int) -> DirectedTree:
    """Directed tree from a parent array (parent[root] ignored / may be -1)."""
    parent = [int(p) for p in parent]  # tolerate numpy integers
    root = int(root)
    n = len(parent)
    edges = frozenset((min(v, parent[v]), max(v, parent[v])) for v in range(n) if v != root)
    kids: dict[int, list[int]] = {v: [] for v in range(n)}
    pmap: dict[int, int] = {}
    for v in range(n):
        if v == root:
            continue
        pmap[v] = parent[v]
        kids[parent[v]].append(v)
    children = {v: tuple(sorted(ws)) for v, ws in kids.items()}
    tree = Tree(instance_id=instance_id, n_nodes=n, edges=edges)
    return DirectedTree(tree=tree, root=root, parent=pmap, children=children)


def tree_violations(tree: Tree) -> list[Violation]:
    """Check the undirected tree invariants: edge count, connectivity, acyclicity."""
    out: list[Violation] = []
    n = tree.n_nodes
    if len(tree.edges) != n - 1:
        out.append(Violation("tree-edge-count", None, len(tree.edges), n - 1))
    # union-find for connectivity / cycles
    rep = list(range(n))

    def find(x: int) -> int:
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    cycle = False
    for u, v in sorted(tree.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            cycle = True
        else:
            rep[ru] = rv
    if cycle:
        out.append(Violation("tree-cycle", None, "cycle", "acyclic"))
    roots = {find(v) for v in range(n)}
    if len(roots) != 1:
        out.append(Violation("tree-connectivity", None, len(roots), 1))
    return out


def validate(dt: DirectedTree, limits: StructureLimits) -> list[Violation]:
    """Empty list iff the directed tree satisfies all structural constraints.

    Non-root nodes may serve at most ``pmp_limit`` successors; the root may
    serve up to two channel groups of ``pmp_limit`` each.  A contiguous split
    of the root's children into two groups of at most ``pmp_limit`` exists
    exactly when the root degree is at most ``2 * pmp_limit``.
    """
    out = tree_violations(dt.tree)
    cap = limits.pmp_limit
    for v in range(dt.n_nodes):
        k = len(dt.children[v])
        if v == dt.root:
            if k > limits.hub_channel_groups * cap:
                out.append(Violation("hub-degree", v, k, limits.hub_channel_groups * cap))
        elif k > cap:
            out.append(Violation("pmp-successors", v, k, cap))
    return out


def subtree_sizes(dt: DirectedTree) -> SubtreeSizes:
    """d_v = number of nodes reachable from v, including v itself."""
    order = [dt.root]
    for u in order:
        order.extend(dt.children[u])
    d = {v: 1 for v in range(dt.n_nodes)}
    for u in reversed(order):
        for w in dt.children[u]:
            d[u] += d[w]
    return SubtreeSizes(d=d)


def scenario_loads(dt: DirectedTree, scenario: str) -> EdgeLoads:
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    n = dt.n_nodes
    if scenario == "A":
        loads = {e: 1 for e in dt.edges_out()}
    else:
        d = subtree_sizes(dt).d
        if scenario == "B":
            loads = {(u, v): d[v] for u, v in dt.edges_out()}
        else:
            loads = {(u, v): 2 * d[v] * (n - d[v]) for u, v in dt.edges_out()}
    return EdgeLoads(scenario=scenario, n=loads)


def degrees(tree: Tree) -> dict[int, int]:
    deg = {v: 0 for v in range(tree.n_nodes)}
    for u, v in tree.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def eccentricities(tree: Tree) -> dict[int, int]:
    """Max hop distance from each node to any other node (BFS per node)."""
    adj = tree.adjacency()
    n = tree.n_nodes
    ecc: dict[int, int] = {}
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        far = 0
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    far = max(far, dist[w])
                    queue.append(w)
        ecc[s] = far
    return ecc
