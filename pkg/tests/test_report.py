from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arpshield.report import (
    CountExceedsTotal,
    UnknownFormat,
    build_report,
    emit,
    feature_matrix,
    load_report,
    pdr,
)
from arpshield.scenarios import Scenario, paper_mix_scenario
from arpshield.simnet import run
from arpshield.taxonomy import ABNORMAL, AttackClass
from arpshield.topology import paper_topology


def test_pdr_examples():
    assert str(pdr(892, 1155)) == "77.2"
    assert str(pdr(115, 1155)) == "10.0"
    assert str(pdr(0, 1000)) == "0.0"
    for n in (1, 7, 1155):
        assert str(pdr(n, n)) == "100.0"
    assert pdr(892, 1155).value == Fraction(89200, 1155)


def test_pdr_rounds_half_up():
    assert str(pdr(1, 16)) == "6.3"  # 6.25
    assert str(pdr(1, 80)) == "1.3"  # 1.25


def test_pdr_zero_total_flagged():
    r = pdr(0, 0)
    assert r.undefined and str(r) == "0.0"
    with pytest.raises(CountExceedsTotal):
        pdr(5, 4)
    with pytest.raises(ValueError):
        pdr(-1, 4)


@given(st.integers(0, 5000), st.integers(1, 5000), st.integers(1, 50))
def test_pdr_scale_invariant_and_monotone(a, t, k):
    a = min(a, t)
    assert pdr(k * a, k * t) == pdr(a, t)
    if a < t:
        assert pdr(a + 1, t).value > pdr(a, t).value
    assert 0 <= pdr(a, t).value <= 100


def _mix_run(detector, seed=826):
    s = paper_mix_scenario(seed=seed, detector=detector)
    return s, run(s)


def test_report_counts_match_records():
    s, recs = _mix_run("clcc")
    rep = build_report(recs, s)
    for cls, c in rep.per_class.items():
        assert c.sent == c.detected + c.accepted + c.ignored
        designated = [r for r in recs if r.designated and r.injected_class is cls]
        assert c.sent == len(designated) == s.mix[cls]
        assert c.detected == sum(r.verdict_kind.value == "Detected" for r in designated)
    assert rep.tmp == 1155
    assert rep.apd == sum(rep.per_class[c].detected for c in ABNORMAL)
    assert rep.false_positives == 0
    assert 70 <= float(rep.pdr_percent) <= 85


def test_baseline_report_shape():
    s, recs = _mix_run("baseline")
    rep = build_report(recs, s)
    assert rep.per_class[AttackClass.PKT3].detected == 105
    for cls in (AttackClass.PKT2, AttackClass.PKT4, AttackClass.PKT9):
        assert rep.per_class[cls].detected == 0
    assert 5 <= float(rep.pdr_percent) <= 15


def test_clean_run_undefined_pdr():
    s = Scenario(seed=1, topology=paper_topology(), mix={AttackClass.Normal: 50})
    rep = build_report(run(s), s)
    assert rep.tmp == 0 and rep.pdr_percent.undefined
    assert rep.false_positives == 0


def test_emit_formats_deterministic_and_parseable():
    s, recs = _mix_run("clcc", seed=4)
    rep = build_report(recs, s)
    for fmt in ("jsonl", "csv", "text"):
        assert emit(rep, fmt) == emit(build_report(recs, s), fmt)
    rows = list(csv.reader(io.StringIO(emit(rep, "csv").decode())))
    assert rows[0] == ["class", "sent", "detected", "accepted", "ignored"]
    assert rows[-1][0] == "PDR" and rows[-1][1] == str(rep.pdr_percent)
    lines = [json.loads(x) for x in emit(rep, "jsonl").decode().splitlines()]
    assert lines[0]["seed"] == 4 and lines[0]["generator"].startswith("MT19937")
    assert lines[0]["config"]["detector"]["kind"] == "clcc"
    assert emit(load_report(emit(rep, "jsonl")), "jsonl") == emit(rep, "jsonl")
    assert emit(rep, "json-lines") == emit(rep, "jsonl")


def test_empty_report_csv_is_header_only():
    s = Scenario(seed=1, topology=paper_topology(), mix={AttackClass.Normal: 1})
    rep = build_report([], s)
    assert emit(rep, "csv") == b"class,sent,detected,accepted,ignored\n"


def test_unknown_format():
    s = Scenario(seed=1, topology=paper_topology(), mix={AttackClass.Normal: 1})
    with pytest.raises(UnknownFormat):
        emit(build_report([], s), "xml")


def test_feature_matrix():
    fm = feature_matrix()
    assert fm.techniques == ("RFC826", "SARP", "TARP", "EARP", "GARP", "Central Server", "Proposed")
    assert fm.cell("Proposed", "Cross Layer Inspection") == "Yes"
    assert fm.cell("RFC826", "ARP Stateful") == "No"
    assert fm.cell("TARP", "ARP storm Prevention") == "Partial *"
    assert "leads to ticket flooding attack" in fm.footnote
    assert "ticket flooding" in fm.render()
