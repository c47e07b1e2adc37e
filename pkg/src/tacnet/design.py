"""The full network decision vector and its evaluation.

A design bundles the directed tree, the radio configuration derived for it,
and the antenna model it was configured for, plus cached evaluation results.
Designs serialize to a single JSON document so solved topologies can be
stored and re-evaluated.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from . import objective, phy as phy_mod, topology
from ._engine import BeamState
from .geometry import Geometry
from .instance import Instance
from .objective import ObjectiveBreakdown, WeightConfig
from .phy import LinkMetrics, PhyParams
from .radio import AntennaModel, ChannelPlan, RadioConfig, derive_radio_config
from .topology import DirectedTree, StructureLimits


@dataclass
class NetworkDesign:
    instance_id: str
    dt: DirectedTree
    radio: RadioConfig
    antenna: AntennaModel
    metrics: LinkMetrics | None = None
    breakdown: ObjectiveBreakdown | None = None

    @property
    def hub(self) -> int:
        return self.dt.root


def build_design(inst: Instance, dt: DirectedTree, limits: StructureLimits,
                 antenna: AntennaModel, plan: ChannelPlan,
                 geom: Geometry | None = None) -> NetworkDesign:
    """Derive the radio configuration for ``dt`` (structure is not re-checked;
    use :func:`tacnet.topology.validate` first)."""
    radio = derive_radio_config(inst, dt, limits, antenna, plan, geom)
    return NetworkDesign(instance_id=inst.id, dt=dt, radio=radio, antenna=antenna)


def evaluate_design(inst: Instance, design: NetworkDesign, phy: PhyParams,
                    weights: WeightConfig, lam: float = 1.0,
                    strict_uniform: bool = False,
                    geom: Geometry | None = None) -> NetworkDesign:
    """Fill the metrics/breakdown caches; returns the same design object."""
    lm = phy_mod.compute_link_metrics(inst, design, phy, geom)
    comps = {}
    for scenario in topology.SCENARIOS:
        loads = topology.scenario_loads(design.dt, scenario)
        comps[scenario] = objective.scenario_component(lm, loads, weights.p, scenario,
                                                       strict_uniform)
    design.metrics = lm
    design.breakdown = objective.aggregate(comps, weights, lam)
    return design


def design_to_dict(design: NetworkDesign) -> dict:
    edges = design.dt.edges_out()
    beams_doc: dict[str, dict[str, object]] = {}
    for (node, ant), state in sorted(design.radio.active_beams.items()):
        entry = beams_doc.setdefault(str(node), {})
        entry[f"ant{ant}"] = "omni" if state.omni else sorted(state.sectors)
    return {
        "instance_id": design.instance_id,
        "root": design.dt.root,
        "edges": [[u, v] for u, v in edges],
        "hub_groups": [list(g) for g in design.radio.hub_partition],
        "edge_channel": [design.radio.edge_channel[e] for e in edges],
        "edge_freq_mhz": [design.radio.edge_freq[e] for e in edges],
        "beams": beams_doc,
        "antenna": {
            "beam_count": design.antenna.beam_count,
            "mode": design.antenna.mode,
            "omni_fallback": design.antenna.omni_fallback,
            "fallback_threshold": design.antenna.fallback_threshold,
            "omni_gain_dbi": design.antenna.omni_gain_dbi,
            "sidelobe_rejection_db": design.antenna.sidelobe_rejection_db,
        },
    }


def design_from_dict(doc: dict) -> NetworkDesign:
    n = len(doc["edges"]) + 1
    root = doc["root"]
    parent = [0] * n
    parent[root] = -1
    for u, v in doc["edges"]:
        parent[v] = u
    dt = topology.directed_from_parent(doc["instance_id"], parent, root)
    edges = dt.edges_out()
    stored = [tuple(e) for e in doc["edges"]]
    channel = {tuple(e): c for e, c in zip(stored, doc["edge_channel"])}
    freq = {tuple(e): f for e, f in zip(stored, doc["edge_freq_mhz"])}
    beams: dict[tuple[int, int], BeamState] = {}
    for node_str, ants in doc["beams"].items():
        for ant_key, val in ants.items():
            key = (int(node_str), int(ant_key.removeprefix("ant")))
            if val == "omni":
                # sector set is not stored for omni antennas; mark the flag
                beams[key] = BeamState(sectors=frozenset(), omni=True)
            else:
                beams[key] = BeamState(sectors=frozenset(int(s) for s in val), omni=False)
    radio = RadioConfig(
        hub_partition=tuple(tuple(g) for g in doc["hub_groups"]),
        edge_channel={e: channel[e] for e in edges},
        edge_freq={e: freq[e] for e in edges},
        active_beams=beams,
    )
    ant = doc["antenna"]
    antenna = AntennaModel(beam_count=ant["beam_count"], mode=ant["mode"],
                           omni_fallback=ant["omni_fallback"],
                           fallback_threshold=ant["fallback_threshold"],
                           omni_gain_dbi=ant["omni_gain_dbi"],
                           sidelobe_rejection_db=ant["sidelobe_rejection_db"])
    return NetworkDesign(instance_id=doc["instance_id"], dt=dt, radio=radio, antenna=antenna)


def save_design(design: NetworkDesign, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(design_to_dict(design), fh, indent=1)
        fh.write("\n")


def load_design(path: str | os.PathLike) -> NetworkDesign:
    with open(path, "r", encoding="utf-8") as fh:
        return design_from_dict(json.load(fh))
