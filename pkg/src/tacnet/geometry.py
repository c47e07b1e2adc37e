"""Precomputed pairwise geometry of an instance.

Azimuths are measured from east (x axis) counterclockwise in degrees, in
[0, 360).  Distances are in km to match the path-loss convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance


@dataclass(frozen=True)
class Geometry:
    dist_km: np.ndarray  # (n, n), zero diagonal
    az_deg: np.ndarray   # (n, n), az_deg[i, j] = azimuth of j as seen from i

    @property
    def n(self) -> int:
        return self.dist_km.shape[0]

    def sector_indices(self, beam_count: int) -> np.ndarray:
        """(n, n) int matrix of the sector each direction falls in.

        Sectors are ``beam_count`` contiguous arcs of width 360/beam_count,
        anchored at azimuth 0 and indexed counterclockwise; a direction
        exactly on a boundary belongs to the higher-index sector.
        """
        width = 360.0 / beam_count
        return (np.floor(self.az_deg / width).astype(np.int64)) % beam_count


def geometry_of(inst: Instance) -> Geometry:
    pts = np.asarray(inst.coords, dtype=float)
    dx = pts[:, 0][None, :] - pts[:, 0][:, None]
    dy = pts[:, 1][None, :] - pts[:, 1][:, None]
    dist_km = np.hypot(dx, dy) / 1000.0
    az = np.degrees(np.arctan2(dy, dx)) % 360.0
    np.fill_diagonal(az, 0.0)
    return Geometry(dist_km=dist_km, az_deg=az)
