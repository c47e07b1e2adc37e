import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hyp

from tacnet.errors import InstanceParseError, InvalidSizeError
from tacnet.instance import (MIN_SEPARATION_M, Instance, benchmark_suite,
                             generate_instance, load_instance, save_instance)


def _splitmix64_reference(seed):
    """Independent reimplementation of the documented generator pipeline."""
    mask = (1 << 64) - 1
    state = seed & mask

    def next_u64():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    while True:
        yield (next_u64() >> 11) * 2.0 ** -53


def _reference_coords(size, seed, area_km):
    """Second implementation of the generation procedure, used as an oracle."""
    uniforms = _splitmix64_reference(seed)
    side = area_km * 1000.0
    pts = []
    while len(pts) < size:
        x = next(uniforms) * side
        y = next(uniforms) * side
        if all(math.hypot(x - px, y - py) >= MIN_SEPARATION_M for px, py in pts):
            pts.append((x, y))
    return pts


def test_generator_matches_independent_reimplementation():
    inst = generate_instance(30, seed=7, area_km=10)
    assert list(inst.coords) == _reference_coords(30, 7, 10)


def test_generation_counts_and_distinctness():
    inst = generate_instance(10, seed=1, area_km=10)
    assert inst.size == 10 and len(set(inst.coords)) == 10
    for i in range(10):
        for j in range(i + 1, 10):
            d = math.dist(inst.coords[i], inst.coords[j])
            assert d >= MIN_SEPARATION_M


def test_generation_is_deterministic():
    a = generate_instance(10, seed=1, area_km=10)
    b = generate_instance(10, seed=1, area_km=10)
    assert a == b


def test_repeated_generation_identical_serializations(tmp_path):
    blobs = set()
    for _ in range(100):
        inst = generate_instance(5, seed=99)
        path = tmp_path / "x.json"
        save_instance(inst, path)
        blobs.add(path.read_bytes())
    assert len(blobs) == 1


def test_size_below_minimum_rejected():
    with pytest.raises(InvalidSizeError):
        generate_instance(2, seed=1)


def test_roundtrip_identity(tmp_path):
    inst = generate_instance(12, seed=5)
    path = tmp_path / "i.json"
    save_instance(inst, path)
    assert load_instance(path) == inst


def test_duplicate_node_id_rejected(tmp_path):
    inst = generate_instance(4, seed=2)
    path = tmp_path / "i.json"
    save_instance(inst, path)
    doc = json.loads(path.read_text())
    doc["nodes"][1]["id"] = 0
    path.write_text(json.dumps(doc))
    with pytest.raises(InstanceParseError):
        load_instance(path)


def test_handwritten_three_node_file(tmp_path):
    doc = {
        "id": "tiny", "size": 3, "seed": 0, "area_km": 1.0,
        "nodes": [
            {"id": 0, "x_m": 0.0, "y_m": 0.0},
            {"id": 1, "x_m": 400.0, "y_m": 0.0},
            {"id": 2, "x_m": 0.0, "y_m": 300.0},
        ],
    }
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc))
    inst = load_instance(path)
    assert inst.size == 3 and inst.id == "tiny"


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"id": "x",\n "size": }')
    with pytest.raises(InstanceParseError, match="line"):
        load_instance(path)


def test_benchmark_suite_shape():
    suite = benchmark_suite()
    assert len(suite) == 40
    by_size = {}
    for inst in suite:
        by_size.setdefault(inst.size, []).append(inst)
    assert {s: len(v) for s, v in by_size.items()} == {10: 10, 15: 10, 20: 10, 30: 10}
    assert len({inst.id for inst in suite}) == 40


@settings(max_examples=25, deadline=None)
@given(size=hyp.integers(3, 12), seed=hyp.integers(0, 2 ** 32))
def test_generation_properties(size, seed):
    inst = generate_instance(size, seed)
    side = inst.area_km * 1000.0
    for x, y in inst.coords:
        assert 0.0 <= x < side and 0.0 <= y < side
    assert generate_instance(size, seed) == inst


def test_instance_invariant_checks():
    with pytest.raises(InstanceParseError):
        Instance(id="x", size=3, coords=((0, 0), (1, 1)), seed=0)
    with pytest.raises(InstanceParseError):
        Instance(id="x", size=3, coords=((0, 0), (0, 0), (1, 1)), seed=0)
    with pytest.raises(InstanceParseError):
        Instance(id="x", size=3, coords=((0, 0), (math.inf, 0), (1, 1)), seed=0)
