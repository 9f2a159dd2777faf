"""Seeded faults: inject one known reasoning error into a clean step chain.

Used to measure whether the verifier catches each error kind.  Every mutator
returns ``(mutated_steps, step_index)`` or ``None`` when the chain offers no
place where that fault can be injected unambiguously.
"""

from __future__ import annotations

import random
from dataclasses import replace
from typing import Callable, Optional, Sequence

from .context import RelationGraph, SymbolicContext, build_graph
from .relations import AXIS_OF, RelationSet, get_property_set
from .verbalize import ANSWER, FROM_CONTEXT, INFERRED, INVERTED, StepStatement


class _Chain:
    def __init__(self, steps, ctx, ps, graph, gold):
        self.steps = list(steps)
        self.by_index = {s.index: s for s in self.steps}
        self.ctx = ctx
        self.ps = get_property_set(ps)
        self.graph = graph or build_graph(ctx)
        self.gold = gold

    def of_kind(self, kind):
        return [s for s in self.steps if s.kind == kind]

    def clock_sourced(self, step) -> bool:
        edge = self.graph.edge(step.head, step.tail)
        return edge is not None and any(t.clock is not None for t in edge.triples)

    def differs(self, a: RelationSet, b: RelationSet) -> bool:
        return a != b if self.ps.quantitative else a.labels != b.labels

    def swap(self, old: StepStatement, new: StepStatement):
        return [new if s is old else s for s in self.steps], new.index


def _without(rs: RelationSet, label: str) -> RelationSet:
    axis = AXIS_OF.get(label)
    mags = {a: m for a, m in rs.magnitudes if a != axis}
    return RelationSet(rs.labels - {label}, tuple(sorted(mags.items())))


def _with(rs: RelationSet, label: str) -> RelationSet:
    return RelationSet(rs.labels | {label}, rs.magnitudes)


def _incorrect_extraction(c: _Chain):
    for s in c.of_kind(FROM_CONTEXT):
        flipped = s.relations.inverse()
        if not c.clock_sourced(s) and c.differs(flipped, s.relations):
            yield c.swap(s, replace(s, relations=flipped))


def _incomplete_extraction(c: _Chain):
    for s in c.of_kind(FROM_CONTEXT):
        if c.clock_sourced(s) or len(s.relations.labels) < 2:
            continue
        for lab in sorted(s.relations.labels):
            yield c.swap(s, replace(s, relations=_without(s.relations, lab)))


def _incorrect_clock(c: _Chain):
    for s in c.of_kind(FROM_CONTEXT):
        flipped = s.relations.inverse()
        if c.clock_sourced(s) and c.differs(flipped, s.relations):
            yield c.swap(s, replace(s, relations=flipped))


def _incorrect_reversal(c: _Chain):
    for s in c.of_kind(INVERTED):
        src = c.by_index[s.refs[0]]
        if c.differs(src.relations, s.relations):
            yield c.swap(s, replace(s, relations=src.relations))


def _reverse_step_merge(c: _Chain):
    for s in c.of_kind(INFERRED):
        i, j = s.refs
        yield c.swap(s, replace(s, refs=(j, i)))


def _copied(c: _Chain):
    for s in c.of_kind(INFERRED):
        a, b = (c.by_index[r] for r in s.refs)
        for src in (a, b):
            if not c.differs(src.relations, s.relations):
                continue
            if not c.ps.quantitative and _conflict_axes(a, b) & _axes(src.relations) - _axes(s.relations):
                continue    # would read as a non-composable merge instead
            yield c.swap(s, replace(s, relations=src.relations))


def _axes(rs: RelationSet) -> set:
    return {AXIS_OF[lab] for lab in rs.labels if lab in AXIS_OF}


def _conflict_axes(a: StepStatement, b: StepStatement) -> set:
    out = set()
    for axis in ("x", "y", "z"):
        la, lb = a.relations.label_on(axis), b.relations.label_on(axis)
        if la and lb and la != lb:
            out.add(axis)
    return out


def _composed_without_connection(c: _Chain):
    inferred = c.of_kind(INFERRED)
    if not inferred:
        return
    # the step that states the first link: the first inferred merge cites it first
    first = c.by_index[inferred[0].refs[0]]
    for s in inferred:
        b = c.by_index[s.refs[1]]
        if {first.head, first.tail} & {b.head, b.tail} or first.index == s.refs[0]:
            continue
        yield c.swap(s, replace(s, refs=(first.index, s.refs[1])))


def _non_composable(c: _Chain):
    if c.ps.quantitative:
        return
    for s in c.of_kind(INFERRED):
        a, b = (c.by_index[r] for r in s.refs)
        for axis in sorted(_conflict_axes(a, b) - _axes(s.relations)):
            lab = a.relations.label_on(axis)
            try:
                yield c.swap(s, replace(s, relations=_with(s.relations, lab)))
            except ValueError:
                continue


def _quantitative(c: _Chain):
    if not c.ps.quantitative:
        return
    for s in c.of_kind(INFERRED):
        a, b = (c.by_index[r] for r in s.refs)
        for axis in sorted(_axes(s.relations) & {"x", "y"}):
            m = s.relations.magnitude(axis)
            for new in (m + 1, m - 1):
                if new < 1:
                    continue
                mags = dict(s.relations.magnitudes)
                mags[axis] = new
                mags = {k: v for k, v in mags.items() if v != 1}
                rs = RelationSet(s.relations.labels, tuple(sorted(mags.items())))
                if rs != a.relations and rs != b.relations:
                    yield c.swap(s, replace(s, relations=rs))


def _reverse_answer(c: _Chain):
    if c.gold is None:
        return
    for s in c.of_kind(ANSWER):
        flipped = c.gold.inverse().without_magnitudes()
        if flipped.labels != c.gold.labels:
            yield c.swap(s, replace(s, relations=flipped))


MUTATORS: dict[str, Callable] = {
    "IncorrectExtraction": _incorrect_extraction,
    "IncompleteExtraction": _incomplete_extraction,
    "IncorrectClockExtraction": _incorrect_clock,
    "IncorrectReversal": _incorrect_reversal,
    "ReverseStepMerge": _reverse_step_merge,
    "CopiedNotComposed": _copied,
    "ComposedWithoutConnection": _composed_without_connection,
    "NonComposableComposition": _non_composable,
    "QuantitativeError": _quantitative,
    "ReverseAnswer": _reverse_answer,
}


def fault_sites(steps: Sequence[StepStatement], kind: str, ctx: SymbolicContext, ps,
                gold: Optional[RelationSet] = None, graph: Optional[RelationGraph] = None) -> list:
    """Every ``(mutated_steps, step_index)`` injection of ``kind`` this chain allows."""
    if kind not in MUTATORS:
        raise ValueError(f"unknown fault kind {kind!r}")
    return list(MUTATORS[kind](_Chain(steps, ctx, ps, graph, gold)))


def inject_fault(steps: Sequence[StepStatement], kind: str, ctx: SymbolicContext, ps,
                 gold: Optional[RelationSet] = None, seed: Optional[int] = None,
                 graph: Optional[RelationGraph] = None):
    """One injection of ``kind`` (the first site, or a seeded choice), or None."""
    sites = fault_sites(steps, kind, ctx, ps, gold, graph)
    if not sites:
        return None
    return sites[0] if seed is None else random.Random(seed).choice(sites)
