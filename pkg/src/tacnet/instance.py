"""Benchmark instances: node sets with planar coordinates.

An instance is the immutable problem input.  Nodes are drawn uniformly on a
square deployment area (default 10 km x 10 km) with a minimum pairwise
separation of 50 m enforced by rejection, so link distances never degenerate.
Coordinates are stored in meters.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Sequence

from .errors import InstanceParseError, InvalidSizeError
from .rng import SplitMix64

MIN_NODES = 3
MIN_SEPARATION_M = 50.0
DEFAULT_AREA_KM = 10.0

#: canonical benchmark design: four sizes, ten instances each
BENCHMARK_SIZES = (10, 15, 20, 30)
BENCHMARK_PER_SIZE = 10


@dataclass(frozen=True)
class Instance:
    """A node set with fixed planar coordinates (meters)."""

    id: str
    size: int
    coords: tuple[tuple[float, float], ...]
    seed: int
    area_km: float = DEFAULT_AREA_KM

    def __post_init__(self):
        if self.size != len(self.coords):
            raise InstanceParseError(
                f"instance {self.id!r}: size={self.size} but {len(self.coords)} coordinates"
            )
        if self.size < MIN_NODES:
            raise InvalidSizeError(f"instance needs >= {MIN_NODES} nodes, got {self.size}")
        for k, (x, y) in enumerate(self.coords):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InstanceParseError(f"instance {self.id!r}: node {k} has non-finite coordinates")
        for a in range(self.size):
            for b in range(a + 1, self.size):
                if self.coords[a] == self.coords[b]:
                    raise InstanceParseError(f"instance {self.id!r}: nodes {a} and {b} coincide")


def generate_instance(size: int, seed: int, area_km: float = DEFAULT_AREA_KM,
                      instance_id: str | None = None) -> Instance:
    """Draw ``size`` nodes uniformly on [0, area_km]^2 (stored in meters).

    Deterministic for a given (size, seed, area_km).  A candidate closer than
    50 m to an already placed node is rejected and redrawn, consuming further
    RNG output; the draw order is one (x, y) pair per attempt.
    """
    if size < MIN_NODES:
        raise InvalidSizeError(f"size must be >= {MIN_NODES}, got {size}")
    if area_km <= 0:
        raise InvalidSizeError(f"area_km must be positive, got {area_km}")
    rng = SplitMix64(seed)
    coords: list[tuple[float, float]] = []
    side_m = area_km * 1000.0
    attempts = 0
    while len(coords) < size:
        x = rng.uniform() * side_m
        y = rng.uniform() * side_m
        if all(math.hypot(x - px, y - py) >= MIN_SEPARATION_M for px, py in coords):
            coords.append((x, y))
        attempts += 1
        if attempts > 10000 * size:
            raise InvalidSizeError(
                f"cannot place {size} nodes with {MIN_SEPARATION_M} m separation in {area_km} km square"
            )
    name = instance_id if instance_id is not None else f"n{size}_s{seed}"
    return Instance(id=name, size=size, coords=tuple(coords), seed=seed, area_km=area_km)


def benchmark_seed(base_seed: int, size: int, index: int) -> int:
    """Per-instance seed of the canonical suite: base + 100*size + index."""
    return base_seed + 100 * size + index


def benchmark_suite(base_seed: int = 1, sizes: Sequence[int] = BENCHMARK_SIZES,
                    per_size: int = BENCHMARK_PER_SIZE,
                    area_km: float = DEFAULT_AREA_KM) -> list[Instance]:
    """The paired benchmark suite: ``per_size`` instances for each size."""
    suite = []
    for size in sizes:
        for i in range(per_size):
            suite.append(
                generate_instance(size, benchmark_seed(base_seed, size, i), area_km,
                                  instance_id=f"n{size:02d}_i{i:02d}")
            )
    return suite


def save_instance(inst: Instance, path: str | os.PathLike) -> None:
    doc = {
        "id": inst.id,
        "size": inst.size,
        "seed": inst.seed,
        "area_km": inst.area_km,
        "nodes": [{"id": k, "x_m": x, "y_m": y} for k, (x, y) in enumerate(inst.coords)],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_instance(path: str | os.PathLike) -> Instance:
    """Parse an instance file; raises InstanceParseError with field context."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    for field in ("id", "size", "seed", "area_km", "nodes"):
        if field not in doc:
            raise InstanceParseError(f"{path}: missing field {field!r}")
    nodes = doc["nodes"]
    if not isinstance(nodes, list):
        raise InstanceParseError(f"{path}: field 'nodes' must be a list")
    seen: set[int] = set()
    coords: list[tuple[float, float]] = [(math.nan, math.nan)] * len(nodes)
    for pos, node in enumerate(nodes):
        for field in ("id", "x_m", "y_m"):
            if field not in node:
                raise InstanceParseError(f"{path}: nodes[{pos}] missing field {field!r}")
        nid = node["id"]
        if not isinstance(nid, int) or nid < 0 or nid >= len(nodes):
            raise InstanceParseError(f"{path}: nodes[{pos}] id {nid!r} not a dense index")
        if nid in seen:
            raise InstanceParseError(f"{path}: duplicate node id {nid}")
        seen.add(nid)
        coords[nid] = (float(node["x_m"]), float(node["y_m"]))
    try:
        return Instance(id=str(doc["id"]), size=int(doc["size"]), coords=tuple(coords),
                        seed=int(doc["seed"]), area_km=float(doc["area_km"]))
    except (InvalidSizeError, InstanceParseError) as exc:
        raise InstanceParseError(f"{path}: {exc}") from exc
