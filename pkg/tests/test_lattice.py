from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from arpshield.lattice import (
    ELEMENTS,
    CycleDetected,
    Element as E,
    Lattice,
    NotAPoset,
    Relationship,
    brute_glb,
    brute_lub,
    closure,
    coverage_query,
    format_table,
    glb,
    is_lattice,
    is_poset,
    lattice_document,
    lub,
    paper_hasse_edges,
    paper_lattice,
    table_mismatches,
    verify,
)

L = paper_lattice()
els = st.sampled_from(ELEMENTS)


def test_eight_elements_with_bounds():
    assert len(ELEMENTS) == 8
    assert (L.bottom, L.top) == (E.S, E.DDoS)


def test_closure_is_a_partial_order():
    r = closure(paper_hasse_edges())
    assert is_poset(r)
    assert (E.S, E.DDoS) in r
    assert (E.PA, E.DoS) in r
    assert (E.AS, E.PA) not in r and (E.PA, E.AS) not in r


def test_cycle_rejected():
    with pytest.raises(CycleDetected):
        closure({(E.S, E.CS), (E.CS, E.S)})


def test_is_lattice_rejects_non_poset():
    with pytest.raises(NotAPoset):
        is_lattice(frozenset({(E.S, E.CS)}))


def test_missing_top_edge_breaks_lattice():
    edges = paper_hasse_edges() - {(E.BA, E.DDoS)}
    assert not is_lattice(closure(edges))


def test_alternative_edge_still_a_lattice():
    # Adding BA -> DoS keeps a bounded lattice; recorded as an accepted alternative.
    alt = Lattice.from_edges(paper_hasse_edges() | {(E.BA, E.DoS)})
    assert (alt.bottom, alt.top) == (E.S, E.DDoS)
    assert table_mismatches(alt) == []


def test_tables_match_brute_force():
    assert table_mismatches(L) == []
    for x, y in product(ELEMENTS, repeat=2):
        assert lub(L, x, y) == brute_lub(L.relation, x, y)
        assert glb(L, x, y) == brute_glb(L.relation, x, y)


@pytest.mark.parametrize(
    "op,x,y,want",
    [
        (lub, E.CS, E.AS, E.BA),
        (glb, E.CS, E.AS, E.S),
        (lub, E.PA, E.CP, E.DoS),
        (glb, E.PA, E.CP, E.CS),
        (lub, E.CP, E.DoS, E.DoS),
        (lub, E.DoS, E.DDoS, E.DDoS),
    ],
)
def test_consistent_worked_results(op, x, y, want):
    assert op(L, x, y) == want


def test_comparable_pairs_have_trivial_meet():
    # CP <= DoS <= DDoS, so their meets are the smaller element in any partial order.
    assert glb(L, E.CP, E.DoS) == E.CP
    assert glb(L, E.DoS, E.DDoS) == E.DoS
    failing = [c.name for c in verify(L) if not c.passed]
    assert failing == ["GLB(CP,DoS)=CS", "GLB(DoS,DDoS)=S"]


@given(els, els, els)
def test_algebraic_laws(x, y, z):
    assert lub(L, x, y) == lub(L, y, x)
    assert glb(L, x, y) == glb(L, y, x)
    assert lub(L, x, lub(L, y, z)) == lub(L, lub(L, x, y), z)
    assert glb(L, x, glb(L, y, z)) == glb(L, glb(L, x, y), z)
    assert lub(L, x, glb(L, x, y)) == x
    assert glb(L, x, lub(L, x, y)) == x
    assert lub(L, x, L.bottom) == x
    assert glb(L, x, L.top) == x


def test_coverage_queries():
    assert coverage_query(L, {E.PA}, E.DoS).relationship is Relationship.CONSEQUENCE
    for t in ELEMENTS:
        assert coverage_query(L, {E.S}, t).relationship is Relationship.CONSEQUENCE
    ans = coverage_query(L, {E.AS}, E.PA)
    assert ans.relationship is Relationship.INCOMPARABLE
    assert ans.root_causes == {E.S, E.AS}
    assert ans.consequences == {E.AS, E.BA, E.DDoS}
    assert coverage_query(L, {E.DoS}, E.CS).relationship is Relationship.CAUSE
    with pytest.raises(ValueError):
        coverage_query(L, set(), E.S)


def test_renderings():
    text = format_table(L, "join")
    assert len(text.splitlines()) == 9
    doc = lattice_document(L)
    assert doc["join"]["CS"]["AS"] == "BA"
    assert len(doc["hasse_edges"]) == 10
