"""Link throughput under a parametric signal/interference model.

The model is an explicit, documented stand-in for the proprietary radio
stack of the target hardware: free-space path loss, ideal sector directivity
with power splitting across active beams, a flat sidelobe floor, and a
Shannon rate with a hard cap.  All constants live in :class:`PhyParams` so
every results file is self-describing.

Signal chain for a tree edge ``u -> v`` at frequency ``f``::

    signal_dbm = tx_power + gain_tx(u) + gain_rx(v) - path_loss(d_uv, f)

Interference at ``v`` power-sums the emissions of every other edge on the
same frequency (excluding edges leaving ``u`` itself: one radio coordinates
its own PMP group), applying the transmitter's beam geometry toward ``v``
and the receiver's beam geometry toward the interferer.  Rate is
``bandwidth * log2(1 + SINR)`` capped at ``rate_cap_mbps``; links below
``min_sinr_db`` carry nothing.

Concurrency: one sector carries one stream at a time, so links served
through the same sector of an antenna time-share that beam's rate.  An
antenna in omni fallback radiates a single pattern and all of its links
share the medium; a single-beam antenna serves one neighbor at a time with
full (unsplit) gain, dividing throughput across the links it serves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _engine
from .errors import DomainError
from .geometry import Geometry, geometry_of
from .instance import Instance
from .topology import Edge

if TYPE_CHECKING:  # pragma: no cover
    from .design import NetworkDesign
    from .radio import AntennaModel


@dataclass(frozen=True)
class PhyParams:
    tx_power_dbm: float = 30.0
    noise_floor_dbm: float = -94.0
    bandwidth_mhz: float = 20.0
    rate_cap_mbps: float = 160.0
    pathloss_const_db: float = 32.45
    pathloss_dist_coeff: float = 20.0
    pathloss_freq_coeff: float = 20.0
    min_sinr_db: float = 0.0

    def __post_init__(self):
        if self.rate_cap_mbps <= 0:
            raise ValueError("rate_cap_mbps must be positive")
        if self.bandwidth_mhz <= 0:
            raise ValueError("bandwidth_mhz must be positive")


@dataclass(frozen=True)
class LinkMetrics:
    """Per-edge link budget results; ``tp`` is the direct throughput in Mbps."""

    tp: dict[Edge, float]
    sinr_db: dict[Edge, float]
    interference_dbm: dict[Edge, float]


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    if mw <= 0:
        raise DomainError(f"power must be positive, got {mw}")
    return 10.0 * math.log10(mw)


def path_loss_db(d_km: float, f_mhz: float, params: PhyParams | None = None) -> float:
    """Free-space loss: const + coeff*log10(d_km) + coeff*log10(f_mhz)."""
    if d_km <= 0:
        raise DomainError(f"distance must be positive, got {d_km} km")
    if f_mhz <= 0:
        raise DomainError(f"frequency must be positive, got {f_mhz} MHz")
    p = params or PhyParams()
    return (p.pathloss_const_db
            + p.pathloss_dist_coeff * math.log10(d_km)
            + p.pathloss_freq_coeff * math.log10(f_mhz))


def effective_gain_dbi(antenna: "AntennaModel", active_beam_count: int,
                       toward_active_sector: bool = True,
                       omni_flagged: bool = False) -> float:
    """Gain of an antenna splitting power across its active sectors.

    Omni fallback radiates ``omni_gain_dbi`` in every direction.  Otherwise a
    direction inside an active sector sees the peak gain minus the power
    split; directions outside (interferer geometry) sit a further
    ``sidelobe_rejection_db`` down.
    """
    if active_beam_count < 1:
        raise DomainError(f"active_beam_count must be >= 1, got {active_beam_count}")
    if omni_flagged:
        return antenna.omni_gain_dbi
    g = antenna.peak_gain_dbi - 10.0 * math.log10(active_beam_count)
    if not toward_active_sector:
        g -= antenna.sidelobe_rejection_db
    return g


def _edge_arrays_from_design(design: "NetworkDesign", sec: np.ndarray) -> _engine.EdgeArrays:
    """Per-edge arrays honoring the design's stored radio configuration."""
    dt = design.dt
    edges = dt.edges_out()
    m = len(edges)
    us = np.array([u for u, _ in edges], dtype=np.int64)
    vs = np.array([v for _, v in edges], dtype=np.int64)
    channel = np.array([design.radio.edge_channel[e] for e in edges], dtype=np.int64)
    freq = np.array([design.radio.edge_freq[e] for e in edges])
    tx_mask = np.zeros(m, dtype=np.uint32)
    tx_beams = np.zeros(m, dtype=np.int64)
    tx_omni = np.zeros(m, dtype=bool)
    share = np.zeros(m, dtype=np.int64)
    sector_share = np.zeros(m, dtype=np.int64)
    by_antenna: dict[tuple[int, int], int] = {}
    by_sector: dict[tuple[int, int, int], int] = {}
    for e_idx, (u, v) in enumerate(edges):
        akey = (u, int(channel[e_idx]))
        by_antenna[akey] = by_antenna.get(akey, 0) + 1
        skey = (*akey, int(sec[u, v]))
        by_sector[skey] = by_sector.get(skey, 0) + 1
    for e_idx, (u, v) in enumerate(edges):
        state = design.radio.active_beams[(u, int(channel[e_idx]))]
        tx_mask[e_idx] = _engine._mask_of(state.sectors)
        tx_beams[e_idx] = max(1, state.count)
        tx_omni[e_idx] = state.omni
        share[e_idx] = by_antenna[(u, int(channel[e_idx]))]
        sector_share[e_idx] = by_sector[(u, int(channel[e_idx]), int(sec[u, v]))]
    return _engine.EdgeArrays(us=us, vs=vs, channel=channel, freq_mhz=freq,
                              tx_mask=tx_mask, tx_beams=tx_beams,
                              tx_omni=tx_omni, share=share, sector_share=sector_share)


def compute_link_metrics(inst: Instance, design: "NetworkDesign", phy: PhyParams,
                         geom: Geometry | None = None) -> LinkMetrics:
    """Direct throughput of every tree edge under the stored configuration."""
    geom = geom or geometry_of(inst)
    sec = geom.sector_indices(design.antenna.beam_count)
    ea = _edge_arrays_from_design(design, sec)
    with np.errstate(divide="ignore"):
        logdist = np.log10(geom.dist_km, where=geom.dist_km > 0,
                           out=np.zeros_like(geom.dist_km))
    tp, sinr, i_dbm = _engine.link_metrics_core(phy, design.antenna, logdist, sec, ea)
    edges = list(zip(ea.us.tolist(), ea.vs.tolist()))
    return LinkMetrics(
        tp={e: float(t) for e, t in zip(edges, tp)},
        sinr_db={e: float(s) for e, s in zip(edges, sinr)},
        interference_dbm={e: float(i) for e, i in zip(edges, i_dbm)},
    )


def link_metrics_csv(lm: LinkMetrics, design: "NetworkDesign") -> str:
    """CSV dump: edge, freq_mhz, channel, sinr_db, tp_mbps."""
    lines = ["edge,freq_mhz,channel,sinr_db,tp_mbps"]
    for e in sorted(lm.tp):
        u, v = e
        lines.append(f"{u}->{v},{design.radio.edge_freq[e]!r},"
                     f"{design.radio.edge_channel[e]},{lm.sinr_db[e]!r},{lm.tp[e]!r}")
    return "\n".join(lines) + "\n"
