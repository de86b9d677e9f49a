"""Attack-causality lattice over eight attack classes.

``X <= Y`` reads "X causes Y, directly or indirectly". The relation is built
from covering edges by reflexive-transitive closure, validated as a partial
order and as a lattice by exhaustive enumeration, and then used to answer
coverage questions such as "if a technique detects phishing, does it also
relate to DoS?".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping


class Element(enum.Enum):
    S = "S"
    CS = "CS"
    AS = "AS"
    BA = "BA"
    PA = "PA"
    CP = "CP"
    DoS = "DoS"
    DDoS = "DDoS"

    def __str__(self) -> str:
        return self.value


ELEMENTS: tuple[Element, ...] = tuple(Element)

ELEMENT_NAMES = {
    Element.S: "Sniffing",
    Element.CS: "Content Sniffing",
    Element.AS: "ARP Sniffing",
    Element.BA: "Broadcast Attacks",
    Element.PA: "Phishing Attacks",
    Element.CP: "ARP Cache Poisoning",
    Element.DoS: "Denial of Service",
    Element.DDoS: "Distributed Denial of Service",
}

Pair = tuple[Element, Element]
Relation = frozenset[Pair]


class CycleDetected(ValueError):
    """The closure of an edge set relates two distinct elements both ways."""


class NotAPoset(ValueError):
    pass


def paper_hasse_edges() -> frozenset[Pair]:
    E = Element
    return frozenset(
        {
            (E.S, E.CS),
            (E.S, E.AS),
            (E.CS, E.BA),
            (E.AS, E.BA),
            (E.CS, E.PA),
            (E.CS, E.CP),
            (E.PA, E.DoS),
            (E.CP, E.DoS),
            (E.DoS, E.DDoS),
            # Not stated in any worked derivation; without it BA has no upper
            # bound in common with DoS and the top would not exist.
            (E.BA, E.DDoS),
        }
    )


def closure(edges: Iterable[Pair], elements: Iterable[Element] = ELEMENTS) -> Relation:
    """Reflexive-transitive closure of ``edges`` over ``elements``.

    Raises :class:`CycleDetected` if two distinct elements end up mutually related.
    """
    elements = tuple(elements)
    succ: dict[Element, set[Element]] = {e: set() for e in elements}
    for a, b in edges:
        if a not in succ or b not in succ:
            raise ValueError(f"edge {a}->{b} leaves the element set")
        succ[a].add(b)

    rel: set[Pair] = set()
    for start in elements:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in succ[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        rel.update((start, reached) for reached in seen)

    for a, b in rel:
        if a != b and (b, a) in rel:
            raise CycleDetected(f"{a} and {b} are mutually related")
    return frozenset(rel)


def is_reflexive(r: Relation, elements: Iterable[Element] = ELEMENTS) -> bool:
    return all((x, x) in r for x in elements)


def is_antisymmetric(r: Relation, elements: Iterable[Element] = ELEMENTS) -> bool:
    elements = tuple(elements)
    return all(not ((x, y) in r and (y, x) in r) for x, y in product(elements, repeat=2) if x != y)


def is_transitive(r: Relation, elements: Iterable[Element] = ELEMENTS) -> bool:
    elements = tuple(elements)
    return all(
        (x, z) in r
        for x, y, z in product(elements, repeat=3)
        if (x, y) in r and (y, z) in r
    )


def is_poset(r: Relation, elements: Iterable[Element] = ELEMENTS) -> bool:
    elements = tuple(elements)
    if any(a not in elements or b not in elements for a, b in r):
        return False
    return is_reflexive(r, elements) and is_antisymmetric(r, elements) and is_transitive(r, elements)


# Brute-force bound enumeration. Kept separate from the table construction in
# Lattice so that the tables can be checked against it.

def upper_bounds(r: Relation, x: Element, y: Element, elements: Iterable[Element] = ELEMENTS) -> list[Element]:
    return [z for z in elements if (x, z) in r and (y, z) in r]


def lower_bounds(r: Relation, x: Element, y: Element, elements: Iterable[Element] = ELEMENTS) -> list[Element]:
    return [z for z in elements if (z, x) in r and (z, y) in r]


def brute_lub(r: Relation, x: Element, y: Element, elements: Iterable[Element] = ELEMENTS) -> Element | None:
    ubs = upper_bounds(r, x, y, elements)
    least = [z for z in ubs if all((z, w) in r for w in ubs)]
    return least[0] if len(least) == 1 else None


def brute_glb(r: Relation, x: Element, y: Element, elements: Iterable[Element] = ELEMENTS) -> Element | None:
    lbs = lower_bounds(r, x, y, elements)
    greatest = [z for z in lbs if all((w, z) in r for w in lbs)]
    return greatest[0] if len(greatest) == 1 else None


def is_lattice(r: Relation, elements: Iterable[Element] = ELEMENTS) -> bool:
    """Every pair has a unique least upper bound and greatest lower bound."""
    elements = tuple(elements)
    if not is_poset(r, elements):
        raise NotAPoset("relation is not a partial order")
    return all(
        brute_lub(r, x, y, elements) is not None and brute_glb(r, x, y, elements) is not None
        for x, y in product(elements, repeat=2)
    )


@dataclass(frozen=True)
class Lattice:
    relation: Relation
    elements: tuple[Element, ...]
    join_table: Mapping[Pair, Element]
    meet_table: Mapping[Pair, Element]
    bottom: Element
    top: Element

    @classmethod
    def from_edges(cls, edges: Iterable[Pair], elements: Iterable[Element] = ELEMENTS) -> Lattice:
        elements = tuple(elements)
        rel = closure(edges, elements)
        if not is_lattice(rel, elements):
            raise ValueError("relation is a poset but not a lattice")
        up = {x: frozenset(z for z in elements if (x, z) in rel) for x in elements}
        down = {x: frozenset(z for z in elements if (z, x) in rel) for x in elements}
        by_up = {v: k for k, v in up.items()}
        by_down = {v: k for k, v in down.items()}
        # In a lattice up(x) & up(y) is exactly the up-set of the join (dually for meet).
        join = {(x, y): by_up[up[x] & up[y]] for x, y in product(elements, repeat=2)}
        meet = {(x, y): by_down[down[x] & down[y]] for x, y in product(elements, repeat=2)}
        bottom = next(x for x in elements if up[x] == frozenset(elements))
        top = next(x for x in elements if down[x] == frozenset(elements))
        return cls(rel, elements, join, meet, bottom, top)

    def leq(self, x: Element, y: Element) -> bool:
        return (x, y) in self.relation

    def covering_edges(self) -> list[Pair]:
        """Hasse diagram of the stored relation."""
        strict = [(a, b) for a, b in self.relation if a != b]
        return sorted(
            (
                (a, b)
                for a, b in strict
                if not any((a, c) in self.relation and (c, b) in self.relation for c in self.elements if c not in (a, b))
            ),
            key=lambda p: (self.elements.index(p[0]), self.elements.index(p[1])),
        )


def paper_lattice() -> Lattice:
    return Lattice.from_edges(paper_hasse_edges())


def lub(l: Lattice, x: Element, y: Element) -> Element:
    return l.join_table[x, y]


def glb(l: Lattice, x: Element, y: Element) -> Element:
    return l.meet_table[x, y]


def table_mismatches(l: Lattice) -> list[str]:
    """Entries of the stored join/meet tables that disagree with enumeration."""
    bad = []
    for x, y in product(l.elements, repeat=2):
        bj = brute_lub(l.relation, x, y, l.elements)
        bm = brute_glb(l.relation, x, y, l.elements)
        if l.join_table[x, y] != bj:
            bad.append(f"join({x},{y}): table={l.join_table[x, y]} brute={bj}")
        if l.meet_table[x, y] != bm:
            bad.append(f"meet({x},{y}): table={l.meet_table[x, y]} brute={bm}")
    return bad


# Worked results stated alongside the structure, as (operation, x, y, claimed).
WORKED_RESULTS: tuple[tuple[str, Element, Element, Element], ...] = (
    ("LUB", Element.CS, Element.AS, Element.BA),
    ("GLB", Element.CS, Element.AS, Element.S),
    ("LUB", Element.PA, Element.CP, Element.DoS),
    ("GLB", Element.PA, Element.CP, Element.CS),
    ("LUB", Element.CP, Element.DoS, Element.DoS),
    ("GLB", Element.CP, Element.DoS, Element.CS),
    ("LUB", Element.DoS, Element.DDoS, Element.DDoS),
    ("GLB", Element.DoS, Element.DDoS, Element.S),
)


@dataclass(frozen=True)
class WorkedCheck:
    op: str
    x: Element
    y: Element
    claimed: Element
    computed: Element

    @property
    def ok(self) -> bool:
        return self.claimed == self.computed

    @property
    def note(self) -> str:
        if self.ok:
            return ""
        # x <= y forces meet(x, y) = x and join(x, y) = y in any partial order.
        return "claim contradicts the order: comparable pair, bound must be one of the pair"


def check_worked_results(l: Lattice) -> list[WorkedCheck]:
    out = []
    for op, x, y, claimed in WORKED_RESULTS:
        computed = lub(l, x, y) if op == "LUB" else glb(l, x, y)
        out.append(WorkedCheck(op, x, y, claimed, computed))
    return out


class Relationship(enum.Enum):
    CONSEQUENCE = "consequence"
    CAUSE = "cause"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class CoverageAnswer:
    target: Element
    relationship: Relationship
    witnesses: frozenset[Element]
    root_causes: frozenset[Element]
    consequences: frozenset[Element]


def coverage_query(l: Lattice, detected: Iterable[Element], target: Element) -> CoverageAnswer:
    """Relate ``target`` to a set of attacks a mitigation technique detects.

    ``consequence`` when some detected attack causes the target, ``cause``
    when the target causes some detected attack, otherwise ``incomparable``.
    The down-set and up-set of the detected set are returned alongside.
    """
    detected = frozenset(detected)
    if not detected:
        raise ValueError("detected set must be non-empty")
    down = frozenset(z for z in l.elements for d in detected if l.leq(z, d))
    up = frozenset(z for z in l.elements for d in detected if l.leq(d, z))
    after = frozenset(d for d in detected if l.leq(d, target))
    before = frozenset(d for d in detected if l.leq(target, d))
    if after:
        return CoverageAnswer(target, Relationship.CONSEQUENCE, after, down, up)
    if before:
        return CoverageAnswer(target, Relationship.CAUSE, before, down, up)
    return CoverageAnswer(target, Relationship.INCOMPARABLE, frozenset(), down, up)


def format_table(l: Lattice, op: str) -> str:
    table = l.join_table if op == "join" else l.meet_table
    width = max(len(str(e)) for e in l.elements) + 1
    head = (op.ljust(width)) + "".join(str(e).rjust(width) for e in l.elements)
    rows = [head]
    for x in l.elements:
        rows.append(str(x).ljust(width) + "".join(str(table[x, y]).rjust(width) for y in l.elements))
    return "\n".join(rows)


def lattice_document(l: Lattice) -> dict:
    """Machine-readable summary used by ``verify-lattice --json``."""
    names = [str(e) for e in l.elements]
    return {
        "elements": names,
        "hasse_edges": [[str(a), str(b)] for a, b in l.covering_edges()],
        "bottom": str(l.bottom),
        "top": str(l.top),
        "join": {str(x): {str(y): str(l.join_table[x, y]) for y in l.elements} for x in l.elements},
        "meet": {str(x): {str(y): str(l.meet_table[x, y]) for y in l.elements} for x in l.elements},
    }


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def verify(l: Lattice, bounds: tuple[Element, Element] = (Element.S, Element.DDoS)) -> list[Check]:
    """Every structural check plus the stated worked results, one entry each."""
    r, els = l.relation, l.elements
    checks = [
        Check("reflexive", is_reflexive(r, els)),
        Check("antisymmetric", is_antisymmetric(r, els)),
        Check("transitive", is_transitive(r, els)),
        Check("lattice", is_lattice(r, els)),
        Check("bounds", (l.bottom, l.top) == bounds, f"bottom={l.bottom} top={l.top}"),
    ]
    bad = table_mismatches(l)
    checks.append(Check("tables_match_enumeration", not bad, f"{2 * len(els) ** 2 - len(bad)}/{2 * len(els) ** 2} entries"))
    for w in check_worked_results(l):
        detail = f"claimed {w.claimed}, computed {w.computed}"
        if not w.ok:
            detail += f" ({w.note})"
        checks.append(Check(f"{w.op}({w.x},{w.y})={w.claimed}", w.ok, detail))
    return checks
