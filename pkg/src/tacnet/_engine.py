"""Shared derivation and link-budget engine.

Array-level core behind the public radio/phy operations and the search hot
loop.  Both views call into this module, so a design always evaluates to the
same numbers regardless of the entry point.

Conventions fixed here:

* channel index == antenna index at every node;
* the root's child group ``g`` is served on channel ``g``; below the root,
  the successor channel of a node is the complement of its predecessor
  channel (alternation by depth within each root branch);
* every PMP group shares one frequency; sibling subtrees transmitting on the
  same channel alternate between the channel's two frequencies in NodeId
  order; the root's groups take the first frequency of their channel;
* a transmitting antenna splits its power across its active sectors
  (``10*log10(b)`` loss); receivers point a single sector at their parent;
* co-frequency interference is summed over all other edges except those
  leaving the same transmitter (a radio coordinates its own PMP group and
  does not interfere with itself).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InfeasiblePartitionError

if TYPE_CHECKING:  # pragma: no cover
    from .phy import PhyParams
    from .radio import AntennaModel, ChannelPlan


# ---------------------------------------------------------------------------
# tree structure in array form


@dataclass
class TreeStruct:
    root: int
    parent: np.ndarray        # int64; parent[root] == -1
    parent_list: list[int]    # same as parent, plain ints for scalar loops
    children: list[list[int]]  # NodeId-sorted successor lists
    order: list[int]          # BFS order from root

    @property
    def n(self) -> int:
        return len(self.parent_list)


def struct_from_parent(parent: np.ndarray, root: int) -> TreeStruct:
    p = np.asarray(parent, dtype=np.int64).copy()
    p[root] = -1
    plist = p.tolist()
    n = len(plist)
    children: list[list[int]] = [[] for _ in range(n)]
    for v, pv in enumerate(plist):
        if v != root:
            children[pv].append(v)
    # children are already NodeId-sorted because v runs ascending
    order = [root]
    for u in order:
        order.extend(children[u])
    return TreeStruct(root=root, parent=p, parent_list=plist, children=children, order=order)


def struct_from_directed(dt) -> TreeStruct:
    n = dt.n_nodes
    parent = np.full(n, -1, dtype=np.int64)
    for c, p in dt.parent.items():
        parent[c] = p
    return struct_from_parent(parent, dt.root)


def subtree_sizes_array(struct: TreeStruct) -> np.ndarray:
    """d[v] = v plus all descendants; d[root] == n."""
    d = [1] * struct.n
    plist = struct.parent_list
    for u in reversed(struct.order):
        p = plist[u]
        if p >= 0:
            d[p] += d[u]
    return np.array(d, dtype=np.int64)


# ---------------------------------------------------------------------------
# radio configuration derivation


def partition_root_children(children: list[int], az_from_root: np.ndarray,
                            pmp_limit: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the root's children into two contiguous azimuth arcs.

    Children are sorted by azimuth; every pair of cut positions defines two
    circular arcs.  Among cuts whose arc sizes both respect ``pmp_limit``,
    the one maximizing the summed angular gap at the two boundaries wins;
    ties go to the cut whose arcs start at the lowest node ids.  Group 0 is
    the arc containing the smallest child id.
    """
    k = len(children)
    if k == 0:
        return ((), ())
    if k == 1:
        return ((children[0],), ())
    if k > 2 * pmp_limit:
        raise InfeasiblePartitionError(
            f"root has {k} children, more than 2 x pmp_limit = {2 * pmp_limit}")
    ordered = sorted(children, key=lambda c: (az_from_root[c], c))
    az = [float(az_from_root[c]) for c in ordered]
    gaps = [(az[(i + 1) % k] - az[i]) % 360.0 for i in range(k)]
    best_key = None
    best_cut = None
    for i in range(k):
        for j in range(i + 1, k):
            size1 = j - i
            size2 = k - size1
            if size1 > pmp_limit or size2 > pmp_limit:
                continue
            score = gaps[i] + gaps[j]
            start1 = ordered[(i + 1) % k]
            start2 = ordered[(j + 1) % k]
            key = (-score, min(start1, start2), max(start1, start2))
            if best_key is None or key < best_key:
                best_key = key
                best_cut = (i, j)
    if best_cut is None:  # k <= 2*pmp_limit guarantees a feasible cut exists
        raise InfeasiblePartitionError(f"no feasible circular cut for {k} children")
    i, j = best_cut
    arc1 = tuple(sorted(ordered[i + 1:j + 1]))
    arc2 = tuple(sorted(ordered[j + 1:] + ordered[:i + 1]))
    if min(arc2) < min(arc1):
        arc1, arc2 = arc2, arc1
    return (arc1, arc2)


@dataclass
class BeamState:
    """Active sectors of one antenna; ``omni`` marks the fallback pattern."""

    sectors: frozenset[int]
    omni: bool

    @property
    def count(self) -> int:
        return len(self.sectors)


@dataclass
class EdgeArrays:
    """Per-edge quantities, one entry per directed tree edge (keyed by child)."""

    us: np.ndarray        # transmitter node (parent)
    vs: np.ndarray        # receiver node (child), ascending
    channel: np.ndarray   # 0/1
    freq_mhz: np.ndarray  # float
    tx_mask: np.ndarray   # uint32 bitmask of the serving antenna's sectors
    tx_beams: np.ndarray  # active sector count of the serving antenna (>= 1)
    tx_omni: np.ndarray   # bool
    share: np.ndarray     # links sharing the serving antenna
    sector_share: np.ndarray  # links sharing the serving sector of that antenna

    @property
    def m(self) -> int:
        return len(self.vs)


@dataclass
class DerivedConfig:
    groups: tuple[tuple[int, ...], tuple[int, ...]]
    ch_into: np.ndarray          # channel of the predecessor edge, -1 at root
    freq_into: np.ndarray        # frequency (MHz) of the predecessor edge, 0 at root
    beams: dict[tuple[int, int], BeamState] | None  # built on request
    edges: EdgeArrays


def _mask_of(sectors: frozenset[int]) -> int:
    mask = 0
    for s in sectors:
        mask |= 1 << s
    return mask


def derive_config(struct: TreeStruct, az: np.ndarray, sec: np.ndarray,
                  antenna: "AntennaModel", plan: "ChannelPlan", pmp_limit: int,
                  groups: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
                  with_beam_map: bool = False,
                  sec_rows: list[list[int]] | None = None) -> DerivedConfig:
    """Hub partition, channel/frequency assignment, and beam activation.

    ``groups`` may be passed in when the caller already computed (or cached)
    the hub partition; ``sec_rows`` is an optional plain-list view of ``sec``
    for hot-path callers.  The (node, antenna) -> BeamState map is only built
    on request; the per-edge arrays always carry the beam geometry.
    """
    n = struct.n
    root = struct.root
    plist = struct.parent_list
    children = struct.children
    if groups is None:
        groups = partition_root_children(children[root], az[root], pmp_limit)

    ch_into = [-1] * n
    for g, members in enumerate(groups):
        for c in members:
            ch_into[c] = g
    for v in struct.order[1:]:
        p = plist[v]
        if p != root:
            ch_into[v] = 1 - ch_into[p]

    freq_table = (plan.ch0_freqs[0], plan.ch0_freqs[1], plan.ch1_freqs[0], plan.ch1_freqs[1])

    # one frequency per PMP group; siblings with successors alternate in id
    # order, phase-shifted by depth so adjacent tiers start on opposite slots
    # (the root's groups take the first frequency of their channel)
    depth = [0] * n
    for v in struct.order[1:]:
        depth[v] = depth[plist[v]] + 1
    slot_out = [-1] * n
    for u in struct.order:
        kids = children[u]
        if not kids or u == root:
            continue
        c_serve = 1 - ch_into[u]
        idx = 0
        for w in children[plist[u]]:
            if w == u:
                break
            if children[w]:
                idx += 1
        slot_out[u] = 2 * c_serve + ((idx + depth[u]) % 2)

    freq_into = [0.0] * n
    for v in struct.order[1:]:
        p = plist[v]
        slot = 2 * ch_into[v] if p == root else slot_out[p]
        freq_into[v] = freq_table[slot]

    # beam activation: each served neighbor occupies one sector of the serving
    # antenna (channel index == antenna index at every node)
    sec_list = sec_rows if sec_rows is not None else sec.tolist()
    masks = [0] * (2 * n)
    occupancy: dict[tuple[int, int], int] = {}
    for v in struct.order[1:]:
        p = plist[v]
        c = ch_into[v]
        s = sec_list[p][v]
        masks[2 * p + c] |= 1 << s
        masks[2 * v + c] |= 1 << sec_list[v][p]
        key = (2 * p + c, s)
        occupancy[key] = occupancy.get(key, 0) + 1

    fallback = antenna.omni_fallback
    threshold = antenna.fallback_threshold

    # per-edge arrays, edges keyed by child id ascending
    vs_l = [v for v in range(n) if v != root]
    us_l = [plist[v] for v in vs_l]
    ch_l = [ch_into[v] for v in vs_l]
    group_sizes = (len(groups[0]), len(groups[1]))
    tx_mask_l = []
    tx_beams_l = []
    tx_omni_l = []
    share_l = []
    sector_share_l = []
    for u, c, v in zip(us_l, ch_l, vs_l):
        mask = masks[2 * u + c]
        count = mask.bit_count()
        tx_mask_l.append(mask)
        tx_beams_l.append(count if count else 1)
        tx_omni_l.append(fallback and count > threshold)
        share_l.append(group_sizes[c] if u == root else len(children[u]))
        sector_share_l.append(occupancy[(2 * u + c, sec_list[u][v])])
    edges = EdgeArrays(
        us=np.array(us_l, dtype=np.int64),
        vs=np.array(vs_l, dtype=np.int64),
        channel=np.array(ch_l, dtype=np.int64),
        freq_mhz=np.array([freq_into[v] for v in vs_l]),
        tx_mask=np.array(tx_mask_l, dtype=np.uint32),
        tx_beams=np.array(tx_beams_l, dtype=np.int64),
        tx_omni=np.array(tx_omni_l, dtype=bool),
        share=np.array(share_l, dtype=np.int64),
        sector_share=np.array(sector_share_l, dtype=np.int64),
    )

    beams: dict[tuple[int, int], BeamState] | None = None
    if with_beam_map:
        beams = {}
        for u in range(n):
            for ant in (0, 1):
                mask = masks[2 * u + ant]
                sectors = frozenset(s for s in range(antenna.beam_count) if mask >> s & 1)
                beams[(u, ant)] = BeamState(
                    sectors=sectors,
                    omni=bool(fallback and len(sectors) > threshold))
    return DerivedConfig(groups=groups, ch_into=np.array(ch_into, dtype=np.int64),
                         freq_into=np.array(freq_into), beams=beams, edges=edges)


# ---------------------------------------------------------------------------
# link budget


def link_metrics_core(phy: "PhyParams", antenna: "AntennaModel",
                      logdist: np.ndarray, sec: np.ndarray, ea: EdgeArrays,
                      want_interference_dbm: bool = True
                      ) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Per-edge throughput, SINR and aggregate interference.

    ``logdist`` is log10 of the pairwise distance matrix in km (diagonal 0).
    Returns (tp_mbps, sinr_db, interference_dbm); interference is -inf where
    no co-frequency edge is heard (None when not requested).
    """
    single = antenna.mode == "single_beam"
    peak = antenna.peak_gain_dbi
    omni_g = antenna.omni_gain_dbi
    rej = antenna.sidelobe_rejection_db
    us, vs = ea.us, ea.vs
    m = ea.m

    beams_eff = np.ones(m) if single else ea.tx_beams.astype(float)
    per_beam = peak - 10.0 * np.log10(beams_eff)
    g_tx = np.where(ea.tx_omni, omni_g, per_beam)
    g_rx = peak  # the predecessor antenna points one sector at its parent

    flog = phy.pathloss_freq_coeff * np.log10(ea.freq_mhz)
    pl = phy.pathloss_const_db + phy.pathloss_dist_coeff * logdist[us, vs] + flog
    signal = phy.tx_power_dbm + g_tx + g_rx - pl

    # interference matrix: rows j = source edge, cols i = victim edge
    us_col = us[:, None]
    vs_row = vs[None, :]
    same_freq = ea.freq_mhz[:, None] == ea.freq_mhz[None, :]
    valid = same_freq & (us_col != us[None, :])
    np.fill_diagonal(valid, False)

    sec_xv = sec[us_col, vs_row]                   # [j, i] sector of v_i seen from u_j
    in_tx = (ea.tx_mask[:, None] >> sec_xv.astype(np.uint32)) & 1
    g1 = np.where(ea.tx_omni[:, None], omni_g, per_beam[:, None] - rej * (1 - in_tx))

    sec_vx = sec[vs_row, us_col]                   # [j, i] sector of u_j seen from v_i
    sec_pred = sec[vs, us]                         # receiver's single active sector
    g2 = g_rx - rej * (sec_vx != sec_pred[None, :])

    pl_pair = (phy.pathloss_const_db
               + phy.pathloss_dist_coeff * logdist[us_col, vs_row]
               + flog[None, :])
    i_dbm = phy.tx_power_dbm + g1 + g2 - pl_pair
    i_dbm = np.where(valid, i_dbm, -np.inf)
    i_mw = np.exp(i_dbm * (np.log(10.0) / 10.0))
    i_sum = i_mw.sum(axis=0)

    noise_mw = 10.0 ** (phy.noise_floor_dbm / 10.0)
    sinr = signal - 10.0 * np.log10(noise_mw + i_sum)
    rate = phy.bandwidth_mhz * np.log2(1.0 + 10.0 ** (sinr / 10.0))
    rate = np.minimum(phy.rate_cap_mbps, rate)
    tp = np.where(sinr < phy.min_sinr_db, 0.0, rate)
    # concurrency: one sector carries one stream at a time, so co-sector links
    # of an antenna time-share their beam; an omni-fallback antenna radiates a
    # single pattern and its links share the whole antenna, and a single-beam
    # antenna serves one direction at a time regardless
    if single:
        tp = tp / ea.share
    else:
        tp = tp / np.where(ea.tx_omni, ea.share, ea.sector_share)
    i_dbm_total = None
    if want_interference_dbm:
        with np.errstate(divide="ignore"):
            i_dbm_total = np.where(i_sum > 0.0, 10.0 * np.log10(i_sum), -np.inf)
    return tp, sinr, i_dbm_total


# ---------------------------------------------------------------------------
# objective composition over the three traffic scenarios


def scenario_stats(tp: np.ndarray, d_child: np.ndarray, n: int,
                   strict_uniform: bool = False) -> dict[str, tuple[float, float]]:
    """(f_min, f_mean) of the per-edge ratios TP/n_X for each scenario.

    Scenario C reports its min in (n-1)-normalized units, matching the
    weight normalization convention (see :mod:`tacnet.objective`).
    """
    tpl = tp.tolist()
    dl = d_child.tolist()
    m = len(tpl)
    rb = [t / d for t, d in zip(tpl, dl)]
    rc = [t / (2.0 * d * (n - d)) for t, d in zip(tpl, dl)]
    c_scale = 1.0 if strict_uniform else float(n - 1)
    return {
        "A": (min(tpl), math.fsum(tpl) / m),
        "B": (min(rb), math.fsum(rb) / m),
        "C": (c_scale * min(rc), math.fsum(rc) / m),
    }
