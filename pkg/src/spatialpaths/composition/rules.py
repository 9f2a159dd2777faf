"""Symbolic rule closure for extended objects with incomplete relations (PS1).

Rules, over facts ``R(X, Y)``:

* inverse       R(Y,X) => inverse(R)(X,Y)              for directions and proper parts
* symmetry      R(Y,X) => R(X,Y)                       for distance, DC, EC, PO, EQ
* transitivity  R(X,Z), R(Z,Y) => R(X,Y)               for directions and proper parts
* combination   *PP(X,Z), R(Z,H), *PPi(H,Y) => R(X,Y)  for directions R
* not           R(X,Y) forbids inverse(R)(X,Y)         for directions and proper parts

Combination also fires with either containment missing (X = Z or H = Y):
something inside a region left of H is itself left of H.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from ..relations import (
    DISTANCE, RCC8, RELATIVE, ContradictionError, Relation, RelationSet,
    inverse, labels_of,
)

DIRECTIONS = frozenset(RELATIVE)
PROPER_PARTS = frozenset({Relation.TPP, Relation.NTPP, Relation.TPPI, Relation.NTPPI})
INSIDE = frozenset({Relation.TPP, Relation.NTPP})
CONTAINS = frozenset({Relation.TPPI, Relation.NTPPI})
SYMMETRIC = frozenset(DISTANCE) | frozenset({Relation.DC, Relation.EC, Relation.PO, Relation.EQ})
ORIENTED = DIRECTIONS | PROPER_PARTS
RULE_RELATIONS = frozenset(RCC8) | DIRECTIONS | frozenset(DISTANCE)


@dataclass(frozen=True)
class RuleFact:
    head: str
    relation: Relation
    tail: str

    def __post_init__(self):
        if self.relation not in RULE_RELATIONS:
            raise ValueError(f"{self.relation!r} must be canonicalized before rule application")

    def __repr__(self) -> str:
        return f"{self.relation.name}({self.head}, {self.tail})"


def facts_from_relations(head: str, rs: RelationSet, tail: str) -> set[RuleFact]:
    return {RuleFact(head, r, tail) for r in rs.relations()}


def check_not_rule(facts: Iterable[RuleFact]) -> None:
    """Raise if some ordered pair carries a relation together with its reverse."""
    seen = set(facts)
    for f in seen:
        if f.relation in ORIENTED:
            opp = RuleFact(f.head, inverse(f.relation), f.tail)
            if opp in seen:
                raise ContradictionError(f"{f!r} contradicts {opp!r}")


def spartun_step(facts: Iterable[RuleFact]) -> set[RuleFact]:
    """Facts derivable by one application of any rule, minus those already known."""
    facts = set(facts)
    check_not_rule(facts)
    out_by = defaultdict(list)   # head -> [(relation, tail)]
    for f in facts:
        out_by[f.head].append((f.relation, f.tail))

    new: set[RuleFact] = set()

    def add(h, r, t):
        if h != t:
            new.add(RuleFact(h, r, t))

    for f in facts:
        r = f.relation
        if r in ORIENTED:
            add(f.tail, inverse(r), f.head)
        elif r in SYMMETRIC:
            add(f.tail, r, f.head)
        if r in ORIENTED:
            for r2, t2 in out_by[f.tail]:
                if r2 == r:
                    add(f.head, r, t2)

    # combination, including the forms without the leading or trailing containment
    for x in list(out_by):
        starts = [(x, None)] + [(z, r) for r, z in out_by[x] if r in INSIDE]
        for z, _ in starts:
            for r, h in out_by.get(z, ()):
                if r not in DIRECTIONS:
                    continue
                add(x, r, h)
                for r3, y in out_by.get(h, ()):
                    if r3 in CONTAINS:
                        add(x, r, y)
    new -= facts
    check_not_rule(new | facts)
    return new


def spartun_closure(facts: Iterable[RuleFact]) -> set[RuleFact]:
    """Least fixed point of :func:`spartun_step`."""
    closed = set(facts)
    while True:
        new = spartun_step(closed)
        if not new:
            return closed
        closed |= new


def relations_between(facts: Iterable[RuleFact], head: str, tail: str) -> RelationSet:
    return labels_of(f.relation for f in facts if f.head == head and f.tail == tail)
