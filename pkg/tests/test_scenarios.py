from __future__ import annotations

import random

import pytest

from arpshield.packet import is_cross_layer_consistent
from arpshield.scenarios import (
    PAPER_MIX,
    EmptyMix,
    Scenario,
    ScenarioError,
    class_predicate,
    designated_observer,
    dumps_scenario,
    generate_class,
    generate_mix,
    load_scenario,
    loads_scenario,
    paper_mix_scenario,
    save_scenario,
)
from arpshield.taxonomy import ABNORMAL, CLASS_INFO, AttackClass
from arpshield.topology import ROUTER_ID, paper_topology

TOPO = paper_topology()


def test_paper_mix_composition():
    assert PAPER_MIX[AttackClass.Normal] == 100
    assert sum(n for c, n in PAPER_MIX.items() if c.abnormal) == 1155
    assert {PAPER_MIX[c] for c in ABNORMAL} == {105}
    assert paper_mix_scenario().total == 1255


@pytest.mark.parametrize("cls", list(AttackClass))
def test_every_class_satisfies_its_predicate(cls):
    rng = random.Random(7)
    for i in range(200):
        f = generate_class(cls, TOPO, rng, frame_id=i)
        assert class_predicate(cls, f, TOPO), (cls, str(f))
        designated_observer(cls, f, TOPO)


def test_normal_frames_are_consistent():
    rng = random.Random(1)
    for _ in range(100):
        assert is_cross_layer_consistent(generate_class(AttackClass.Normal, TOPO, rng))


def test_designated_observers():
    rng = random.Random(3)
    for cls in (AttackClass.PKT9, AttackClass.PKT10, AttackClass.PKT11):
        assert designated_observer(cls, generate_class(cls, TOPO, rng), TOPO) == ROUTER_ID
    for cls in (AttackClass.PKT1, AttackClass.PKT2, AttackClass.PKT4, AttackClass.PKT6):
        obs = designated_observer(cls, generate_class(cls, TOPO, rng), TOPO)
        assert obs in ("A", "B")


def test_taxonomy_rows_complete():
    assert set(CLASS_INFO) == set(AttackClass)
    assert AttackClass.parse("pkt#2") is AttackClass.PKT2
    with pytest.raises(ValueError):
        AttackClass.parse("PKT12")


def test_generation_is_seed_deterministic():
    a = generate_mix(paper_mix_scenario(seed=11))
    b = generate_mix(paper_mix_scenario(seed=11))
    c = generate_mix(paper_mix_scenario(seed=12))
    assert a == b
    assert a != c
    assert [e.at for e in a[:3]] == [0, 500_000_000, 1_000_000_000]


def test_schedule_crosses_one_clear_boundary():
    events = generate_mix(paper_mix_scenario())
    assert events[-1].at / 1e9 > 600.0


def test_empty_mix_rejected():
    s = Scenario(seed=1, topology=TOPO, mix={})
    with pytest.raises(EmptyMix):
        generate_mix(s)


def test_scenario_file_round_trip(tmp_path):
    s = paper_mix_scenario(seed=99, detector="baseline")
    assert loads_scenario(dumps_scenario(s)) == s
    p = tmp_path / "mix.ini"
    save_scenario(s, p)
    assert load_scenario(p) == s
    text = p.read_text()
    for section in ("[topology]", "[mix]", "[detector]", "[schedule]", "[seed]"):
        assert section in text


def test_malformed_scenario_file():
    with pytest.raises(ScenarioError):
        loads_scenario("[seed]\nvalue = x\n")
    with pytest.raises(ScenarioError):
        loads_scenario("not ini at all")
