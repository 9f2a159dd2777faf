"""Boundary-inequality reasoning for extended objects with complete relations (PS4).

Every entity owns four boundary variables ``xs < xe`` and ``ys < ye``.  All
constraints are plain orderings between two variables, so the store is a
directed graph with ``<=`` and ``<`` edges: an ordering is entailed iff it is
a path, and the store is consistent iff no cycle passes through a strict edge.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from ..relations import AXIS_OF, RelationSet
from .offsets import ChainBreakError

Var = tuple[str, str]   # (entity, "xs" | "xe" | "ys" | "ye")

DIRECTIONS_2D = ("above", "below", "left", "right")


class InconsistencyError(ValueError):
    """The asserted constraints admit no placement."""


class InequalityStore:
    """Monotone store of ``u <= v`` and ``u < v`` constraints."""

    def __init__(self):
        self._succ: dict[Var, dict[Var, bool]] = {}
        self.consistent = True

    @property
    def variables(self) -> set[Var]:
        return set(self._succ)

    @property
    def edges(self) -> list[tuple[Var, Var, bool]]:
        return [(u, v, s) for u, vs in self._succ.items() for v, s in vs.items()]

    def copy(self) -> "InequalityStore":
        other = InequalityStore()
        other._succ = {u: dict(vs) for u, vs in self._succ.items()}
        other.consistent = self.consistent
        return other

    def add_entity(self, name: str) -> None:
        """Register an entity's boundaries with strict positive extent."""
        for axis in "xy":
            self.add((name, axis + "s"), (name, axis + "e"), strict=True)

    def add(self, u: Var, v: Var, strict: bool = False) -> None:
        """Assert ``u < v`` (strict) or ``u <= v``."""
        self._succ.setdefault(u, {})
        self._succ.setdefault(v, {})
        if self._succ[u].get(v, False) or (v in self._succ[u] and not strict):
            return
        if self.consistent:
            back = self._reach(v).get(u)
            if back is not None and (back or strict):
                self.consistent = False
        self._succ[u][v] = strict or self._succ[u].get(v, False)

    def _reach(self, src: Var) -> dict[Var, bool]:
        """Nodes reachable from ``src``, flagged True when some path is strict."""
        best: dict[Var, bool] = {src: False}
        queue = deque([(src, False)])
        while queue:
            node, strict = queue.popleft()
            if best.get(node) is True and not strict:
                continue
            for nxt, s in self._succ.get(node, {}).items():
                flag = strict or s
                if nxt not in best or (flag and not best[nxt]):
                    best[nxt] = flag
                    queue.append((nxt, flag))
        return best

    def entails(self, u: Var, v: Var, strict: bool = False) -> bool:
        if u == v:
            return not strict
        got = self._reach(u).get(v)
        return got is not None and (got or not strict)

    def consistent_with(self, constraints: Iterable[tuple[Var, Var, bool]]) -> bool:
        trial = self.copy()
        for u, v, s in constraints:
            trial.add(u, v, s)
        return trial.consistent


def primary_inequality(label: str, head: str, tail: str) -> tuple[Var, Var, bool]:
    """The boundary ordering that makes ``label(head, tail)`` hold, as ``u <= v``."""
    if label == "right":
        return (tail, "xe"), (head, "xs"), False
    if label == "left":
        return (head, "xe"), (tail, "xs"), False
    if label == "above":
        return (tail, "ye"), (head, "ys"), False
    if label == "below":
        return (head, "ye"), (tail, "ys"), False
    raise ValueError(f"{label!r} has no boundary-inequality form")


def overlap_inequalities(axis: str, a: str, b: str) -> list[tuple[Var, Var, bool]]:
    """``a`` and ``b`` overlap (possibly only at a boundary) on ``axis``."""
    return [((b, axis + "s"), (a, axis + "e"), False),
            ((a, axis + "s"), (b, axis + "e"), False)]


def context_inequalities(head: str, rs: RelationSet, tail: str, completeness: str = "RC"):
    directions = [lab for lab in rs if lab in DIRECTIONS_2D]
    other = set(rs.labels) - set(directions)
    if other - {"overlapping"}:
        raise ValueError(f"only 2D directions can be asserted as inequalities, got {sorted(other)}")
    out = []
    if "overlapping" in rs.labels:
        for axis in "xy":
            for end in "se":
                out.append(((head, axis + end), (tail, axis + end), False))
                out.append(((tail, axis + end), (head, axis + end), False))
    out += [primary_inequality(lab, head, tail) for lab in directions]
    if completeness == "RC" and len(directions) == 1:
        other_axis = "y" if AXIS_OF[directions[0]] == "x" else "x"
        out += overlap_inequalities(other_axis, head, tail)
    return out


def assert_context_inequalities(triple, store: InequalityStore, completeness: str = "RC") -> InequalityStore:
    """Add a stated triple ``(head, relations, tail)`` to ``store``.

    Under RC a lone direction also pins overlap on the other axis; composite
    statements and RI statements contribute only their primary orderings.
    """
    head, rs, tail = triple
    for name in (head, tail):
        if (name, "xs") not in store.variables:
            store.add_entity(name)
    for u, v, s in context_inequalities(head, rs, tail, completeness):
        store.add(u, v, s)
    if not store.consistent:
        raise InconsistencyError(f"asserting {head} {rs!r} {tail} made the constraints unsatisfiable")
    return store


def _endpoints(pair) -> tuple[str, str]:
    return (pair[0], pair[-1])


def compose_inequalities(pair1, pair2, store: InequalityStore, mode: str = "entailment"):
    """Relations from ``pair1``'s head to ``pair2``'s tail given the store.

    ``mode="entailment"`` keeps a direction only if every placement satisfying
    the store has it; ``mode="literal"`` keeps it whenever it is merely
    consistent with the store.  Kept directions are inserted into the store.
    """
    h1, t1 = _endpoints(pair1)
    h2, t2 = _endpoints(pair2)
    if t1 != h2:
        raise ChainBreakError(f"cannot chain {h1}->{t1} with {h2}->{t2}")
    labels = []
    for lab in DIRECTIONS_2D:
        u, v, s = primary_inequality(lab, h1, t2)
        if mode == "entailment":
            ok = store.entails(u, v, s)
        elif mode == "literal":
            ok = store.consistent_with([(u, v, s)])
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if ok:
            labels.append(lab)
            store.add(u, v, s)
    return RelationSet.of(*labels), store


def entailed_relations(store: InequalityStore, head: str, tail: str) -> RelationSet:
    return RelationSet.of(*[lab for lab in DIRECTIONS_2D
                            if store.entails(*primary_inequality(lab, head, tail))])
