"""Channel, frequency and beam configuration for a directed tree.

Each node carries one radio with two channels, one multi-beam antenna per
channel.  A non-root node reserves its predecessor-edge channel for the link
to its parent and serves all successors on the other channel; the root's
children are split into two groups, one per channel.  Antennas activate the
minimal sector set covering the neighbors they serve; since every direction
falls in exactly one sector, that set is simply the occupied sectors.

The 24-beam hardware can fall back to an omnidirectional pattern when more
than ``fallback_threshold`` sectors are active (``omni_fallback``); the
directional peak gain model is ``10*log10(beam_count)`` dBi (ideal azimuthal
sector directivity) with a flat 0 dBi omni pattern and a 20 dB sidelobe
floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _engine
from ._engine import BeamState
from .geometry import Geometry, geometry_of
from .instance import Instance
from .topology import DirectedTree, Edge, StructureLimits

BEAM_COUNTS = (4, 6, 12, 24)
MODES = ("multi_beam", "single_beam")

__all__ = [
    "AntennaModel", "ChannelPlan", "RadioConfig", "BeamState",
    "partition_hub_children", "assign_channels", "assign_frequencies",
    "configure_beams", "derive_radio_config", "BEAM_COUNTS", "MODES",
]


@dataclass(frozen=True)
class AntennaModel:
    """Multi-beam sector antenna: M contiguous 360/M-degree arcs from azimuth 0."""

    beam_count: int = 24
    mode: str = "multi_beam"
    omni_fallback: bool = True
    fallback_threshold: int = 7
    omni_gain_dbi: float = 0.0
    sidelobe_rejection_db: float = 20.0

    def __post_init__(self):
        if self.beam_count not in BEAM_COUNTS:
            raise ValueError(f"beam_count must be one of {BEAM_COUNTS}, got {self.beam_count}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def peak_gain_dbi(self) -> float:
        return 10.0 * math.log10(self.beam_count)

    @property
    def sector_width_deg(self) -> float:
        return 360.0 / self.beam_count

    def sector_of(self, az_deg: float) -> int:
        """Sector of a direction; boundaries belong to the higher-index sector."""
        return int(math.floor((az_deg % 360.0) / self.sector_width_deg)) % self.beam_count


@dataclass(frozen=True)
class ChannelPlan:
    """Two frequencies per channel; all four distinct."""

    ch0_freqs: tuple[float, float] = (4500.0, 5000.0)
    ch1_freqs: tuple[float, float] = (2000.0, 2400.0)

    def __post_init__(self):
        freqs = (*self.ch0_freqs, *self.ch1_freqs)
        if len(set(freqs)) != 4:
            raise ValueError(f"channel plan needs four distinct frequencies, got {freqs}")

    def freqs(self, channel: int) -> tuple[float, float]:
        return self.ch0_freqs if channel == 0 else self.ch1_freqs


@dataclass(frozen=True)
class RadioConfig:
    """Full radio decision: hub partition, channels, frequencies, beams."""

    hub_partition: tuple[tuple[int, ...], tuple[int, ...]]
    edge_channel: dict[Edge, int]
    edge_freq: dict[Edge, float]
    active_beams: dict[tuple[int, int], BeamState]


def partition_hub_children(inst: Instance, dt: DirectedTree, limits: StructureLimits,
                           geom: Geometry | None = None
                           ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the root's children into two azimuth-contiguous channel groups."""
    geom = geom or geometry_of(inst)
    struct = _engine.struct_from_directed(dt)
    return _engine.partition_root_children(struct.children[dt.root],
                                           geom.az_deg[dt.root], limits.pmp_limit)


def assign_channels(dt: DirectedTree,
                    hub_partition: tuple[tuple[int, ...], tuple[int, ...]]
                    ) -> dict[Edge, int]:
    """Root group g on channel g; deeper edges alternate with depth."""
    group_of = {}
    for g, members in enumerate(hub_partition):
        for c in members:
            group_of[c] = g
    out: dict[Edge, int] = {}
    stack = [(c, group_of[c]) for c in dt.children[dt.root]]
    while stack:
        v, ch = stack.pop()
        out[(dt.parent[v], v)] = ch
        for w in dt.children[v]:
            stack.append((w, 1 - ch))
    return out


def assign_frequencies(dt: DirectedTree, edge_channel: dict[Edge, int],
                       plan: ChannelPlan) -> dict[Edge, float]:
    """One frequency per PMP group; sibling groups alternate in NodeId order.

    The alternation is phase-shifted by tree depth so adjacent tiers start on
    opposite slots of the channel's pair, which keeps a relay off the
    frequency its own parent group transmits on.  The root's groups take the
    first frequency of their channel.
    """
    out: dict[Edge, float] = {}
    depth = dt.depths()
    # root groups: first frequency of their channel
    for c in dt.children[dt.root]:
        ch = edge_channel[(dt.root, c)]
        out[(dt.root, c)] = plan.freqs(ch)[0]
    # deeper: per parent, siblings with successors alternate
    for u in sorted(dt.children):
        if u == dt.root:
            continue
        kids = dt.children[u]
        if not kids:
            continue
        parent_u = dt.parent[u]
        siblings = [w for w in dt.children[parent_u] if dt.children[w]]
        idx = siblings.index(u)
        ch = edge_channel[(u, kids[0])]
        freq = plan.freqs(ch)[(idx + depth[u]) % 2]
        for w in kids:
            out[(u, w)] = freq
    return out


def configure_beams(inst: Instance, dt: DirectedTree, edge_channel: dict[Edge, int],
                    antenna: AntennaModel, geom: Geometry | None = None
                    ) -> dict[tuple[int, int], BeamState]:
    """Active sector set per (node, antenna); omni flag above the fallback threshold."""
    geom = geom or geometry_of(inst)
    sec = geom.sector_indices(antenna.beam_count)
    beams: dict[tuple[int, int], BeamState] = {}
    for u in range(dt.n_nodes):
        served: dict[int, list[int]] = {0: [], 1: []}
        for w in dt.children[u]:
            served[edge_channel[(u, w)]].append(w)
        if u != dt.root:
            served[edge_channel[(dt.parent[u], u)]].append(dt.parent[u])
        for ant in (0, 1):
            sectors = frozenset(int(sec[u, w]) for w in served[ant])
            omni = bool(antenna.omni_fallback and len(sectors) > antenna.fallback_threshold)
            beams[(u, ant)] = BeamState(sectors=sectors, omni=omni)
    return beams


def derive_radio_config(inst: Instance, dt: DirectedTree, limits: StructureLimits,
                        antenna: AntennaModel, plan: ChannelPlan,
                        geom: Geometry | None = None) -> RadioConfig:
    """The full deterministic configuration pipeline for a directed tree."""
    geom = geom or geometry_of(inst)
    partition = partition_hub_children(inst, dt, limits, geom)
    channels = assign_channels(dt, partition)
    freqs = assign_frequencies(dt, channels, plan)
    beams = configure_beams(inst, dt, channels, antenna, geom)
    return RadioConfig(hub_partition=partition, edge_channel=channels,
                       edge_freq=freqs, active_beams=beams)
