import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hyp

from tacnet.design import build_design, evaluate_design
from tacnet.errors import DomainError
from tacnet.instance import Instance
from tacnet.objective import weight_config
from tacnet.phy import (PhyParams, compute_link_metrics, dbm_to_mw,
                        effective_gain_dbi, link_metrics_csv, mw_to_dbm,
                        path_loss_db)
from tacnet.radio import AntennaModel, ChannelPlan, RadioConfig
from tacnet.topology import StructureLimits, orient, tree_from_edges
from tacnet._engine import BeamState


def instance_at(coords, instance_id="geo"):
    return Instance(id=instance_id, size=len(coords), coords=tuple(coords), seed=0)


def test_path_loss_examples():
    assert path_loss_db(1.0, 2000.0) == pytest.approx(98.47, abs=0.005)
    delta = path_loss_db(2.0, 2400.0) - path_loss_db(1.0, 2400.0)
    assert delta == pytest.approx(6.02, abs=0.005)
    # independently computed: 32.45 + 20*log10(0.5) + 20*log10(4500)
    assert path_loss_db(0.5, 4500.0) == pytest.approx(99.4936503622, abs=1e-9)


def test_path_loss_domain():
    with pytest.raises(DomainError):
        path_loss_db(0.0, 2000.0)
    with pytest.raises(DomainError):
        path_loss_db(1.0, -5.0)


def test_effective_gain_examples():
    ant = AntennaModel(beam_count=24)
    assert effective_gain_dbi(ant, 1) == pytest.approx(13.80, abs=0.005)
    assert effective_gain_dbi(ant, 2) == pytest.approx(10.79, abs=0.005)
    assert effective_gain_dbi(ant, 8, omni_flagged=True) == 0.0
    assert effective_gain_dbi(ant, 1, toward_active_sector=False) == pytest.approx(
        13.80 - 20.0, abs=0.005)
    with pytest.raises(DomainError):
        effective_gain_dbi(ant, 0)


@settings(max_examples=100, deadline=None)
@given(hyp.floats(min_value=-120.0, max_value=60.0))
def test_db_mw_roundtrip(dbm):
    assert mw_to_dbm(dbm_to_mw(dbm)) == pytest.approx(dbm, rel=1e-9, abs=1e-9)


def chain_design(coords, antenna=None, plan=None):
    inst = instance_at(coords)
    n = len(coords)
    dt = orient(tree_from_edges(inst.id, n, [(i, i + 1) for i in range(n - 1)]), 0)
    antenna = antenna or AntennaModel()
    plan = plan or ChannelPlan()
    return inst, build_design(inst, dt, StructureLimits(), antenna, plan)


def test_no_cofrequency_edges_means_no_interference():
    inst, design = chain_design([(0.0, 0.0), (2000.0, 0.0), (4000.0, 0.0)])
    lm = compute_link_metrics(inst, design, PhyParams())
    freqs = set(design.radio.edge_freq.values())
    assert len(freqs) == 2  # channels alternate along the chain
    for e in lm.tp:
        assert lm.interference_dbm[e] == -math.inf
        # SINR equals plain SNR: signal - noise
        d_km = 2.0
        f = design.radio.edge_freq[e]
        signal = 30.0 + 13.80211241711606 * 2 - path_loss_db(d_km, f)
        assert lm.sinr_db[e] == pytest.approx(signal - (-94.0), rel=1e-12)


def test_single_beam_equals_multibeam_for_single_successor():
    coords = [(0.0, 0.0), (2000.0, 0.0), (4000.0, 0.0)]
    _, multi = chain_design(coords, AntennaModel(mode="multi_beam"))
    inst, single = chain_design(coords, AntennaModel(mode="single_beam",
                                                     omni_fallback=False))
    lm_m = compute_link_metrics(inst, multi, PhyParams())
    lm_s = compute_link_metrics(inst, single, PhyParams())
    assert lm_m.tp == lm_s.tp


def test_short_ptp_chain_saturates_rate_cap():
    # a zigzag chain of short hops: sectors differ hop to hop, so the chain
    # saturates the hard rate ceiling on every edge
    coords = [(float(i * 700), 500.0 * (i % 2)) for i in range(6)]
    inst, design = chain_design(coords, AntennaModel(mode="single_beam",
                                                     omni_fallback=False))
    lm = compute_link_metrics(inst, design, PhyParams())
    assert all(tp == 160.0 for tp in lm.tp.values())


def _hand_budget(d_km, f_mhz, gain_tx, gain_rx, interferers, phy):
    """Spreadsheet-style dB chain, written out independently step by step."""
    pl = 32.45 + 20 * math.log10(d_km) + 20 * math.log10(f_mhz)
    signal_dbm = phy.tx_power_dbm + gain_tx + gain_rx - pl
    total_mw = 10 ** (phy.noise_floor_dbm / 10)
    for (di_km, gi_tx, gi_rx) in interferers:
        pli = 32.45 + 20 * math.log10(di_km) + 20 * math.log10(f_mhz)
        total_mw += 10 ** ((phy.tx_power_dbm + gi_tx + gi_rx - pli) / 10)
    sinr_db = signal_dbm - 10 * math.log10(total_mw)
    rate = phy.bandwidth_mhz * math.log2(1 + 10 ** (sinr_db / 10))
    return sinr_db, min(phy.rate_cap_mbps, rate)


def test_cofrequency_interference_matches_hand_budget():
    # two parallel west->east links on the same frequency, 3 km apart:
    # 0 -> 1 at y=0 and 2 -> 3 at y=3000, both 2 km long
    coords = [(0.0, 0.0), (2000.0, 0.0), (0.0, 3000.0), (2000.0, 3000.0)]
    inst = instance_at(coords)
    dt = orient(tree_from_edges(inst.id, 4, [(0, 1), (0, 2), (2, 3)]), 0)
    antenna = AntennaModel(beam_count=24)
    # handcrafted radio config: edges (0,1) and (2,3) share 4500 MHz
    sec = lambda u, v: antenna.sector_of(math.degrees(math.atan2(
        coords[v][1] - coords[u][1], coords[v][0] - coords[u][0])) % 360.0)
    radio = RadioConfig(
        hub_partition=((1,), (2,)),
        edge_channel={(0, 1): 0, (0, 2): 1, (2, 3): 0},
        edge_freq={(0, 1): 4500.0, (0, 2): 2000.0, (2, 3): 4500.0},
        active_beams={
            (0, 0): BeamState(frozenset({sec(0, 1)}), False),
            (0, 1): BeamState(frozenset({sec(0, 2)}), False),
            (1, 0): BeamState(frozenset({sec(1, 0)}), False),
            (1, 1): BeamState(frozenset(), False),
            (2, 0): BeamState(frozenset({sec(2, 3)}), False),
            (2, 1): BeamState(frozenset({sec(2, 0)}), False),
            (3, 0): BeamState(frozenset({sec(3, 2)}), False),
            (3, 1): BeamState(frozenset(), False),
        },
    )
    from tacnet.design import NetworkDesign
    design = NetworkDesign(instance_id=inst.id, dt=dt, radio=radio, antenna=antenna)
    phy = PhyParams()
    lm = compute_link_metrics(inst, design, phy)
    peak = 10 * math.log10(24)

    # edge (0,1): interferer is node 2 transmitting to 3; node 2 aims east,
    # node 1 sits south-east of it outside the serving sector (sidelobe), and
    # node 1's receive antenna points west at node 0, away from node 2
    d_i = math.dist(coords[2], coords[1]) / 1000.0
    sec_2_to_1 = sec(2, 1)
    tx_side = peak - (0.0 if sec_2_to_1 == sec(2, 3) else antenna.sidelobe_rejection_db)
    rx_side = peak - (0.0 if sec(1, 2) == sec(1, 0) else antenna.sidelobe_rejection_db)
    sinr, rate = _hand_budget(2.0, 4500.0, peak, peak,
                              [(d_i, tx_side, rx_side)], phy)
    assert lm.sinr_db[(0, 1)] == pytest.approx(sinr, rel=1e-9)
    assert lm.tp[(0, 1)] == pytest.approx(rate, rel=1e-9)

    # edge (2,3): interferer is node 0 transmitting to 1
    d_i = math.dist(coords[0], coords[3]) / 1000.0
    tx_side = peak - (0.0 if sec(0, 3) == sec(0, 1) else antenna.sidelobe_rejection_db)
    rx_side = peak - (0.0 if sec(3, 0) == sec(3, 2) else antenna.sidelobe_rejection_db)
    sinr, rate = _hand_budget(2.0, 4500.0, peak, peak,
                              [(d_i, tx_side, rx_side)], phy)
    assert lm.sinr_db[(2, 3)] == pytest.approx(sinr, rel=1e-9)
    assert lm.tp[(2, 3)] == pytest.approx(rate, rel=1e-9)

    # edge (0,2) has no co-frequency partner
    assert lm.interference_dbm[(0, 2)] == -math.inf


def test_interferer_never_raises_sinr():
    coords = [(0.0, 0.0), (2000.0, 0.0), (0.0, 3000.0), (2000.0, 3000.0)]
    inst = instance_at(coords)
    dt = orient(tree_from_edges(inst.id, 4, [(0, 1), (0, 2), (2, 3)]), 0)
    design = build_design(inst, dt, StructureLimits(), AntennaModel(), ChannelPlan())
    base = compute_link_metrics(inst, design, PhyParams())
    forced = RadioConfig(hub_partition=design.radio.hub_partition,
                         edge_channel=design.radio.edge_channel,
                         edge_freq={e: 4500.0 if design.radio.edge_channel[e] == 0
                                    else design.radio.edge_freq[e]
                                    for e in design.radio.edge_freq},
                         active_beams=design.radio.active_beams)
    from tacnet.design import NetworkDesign
    design2 = NetworkDesign(instance_id=inst.id, dt=dt, radio=forced,
                            antenna=design.antenna)
    jammed = compute_link_metrics(inst, design2, PhyParams())
    for e in base.tp:
        if design.radio.edge_freq[e] == forced.edge_freq[e]:
            continue
        assert jammed.sinr_db[e] <= base.sinr_db[e] + 1e-9
        assert jammed.tp[e] <= base.tp[e] + 1e-9


def test_tp_nonincreasing_with_distance():
    prev = math.inf
    for d_m in (500.0, 1500.0, 4000.0, 9000.0, 14000.0):
        inst, design = chain_design([(0.0, 0.0), (d_m, 0.0), (d_m, 4000.0)])
        lm = compute_link_metrics(inst, design, PhyParams())
        tp = lm.tp[(0, 1)]
        assert tp <= prev + 1e-9
        assert 0.0 <= tp <= 160.0
        prev = tp


def test_low_sinr_cuts_link():
    phy = PhyParams(min_sinr_db=0.0)
    inst, design = chain_design([(0.0, 0.0), (300000.0, 0.0), (300000.0, 4000.0)])
    lm = compute_link_metrics(inst, design, phy)
    assert lm.tp[(0, 1)] == 0.0


def test_metrics_csv_dump():
    inst, design = chain_design([(0.0, 0.0), (2000.0, 0.0), (4000.0, 0.0)])
    design = evaluate_design(inst, design, PhyParams(), weight_config("baseline"))
    text = link_metrics_csv(design.metrics, design)
    lines = text.strip().splitlines()
    assert lines[0] == "edge,freq_mhz,channel,sinr_db,tp_mbps"
    assert len(lines) == 3
