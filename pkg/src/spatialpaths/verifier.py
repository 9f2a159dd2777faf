"""Replay a step-by-step reasoning chain and report where it goes wrong.

Each step is checked against the context and the composition engine of the
property set, using the facts the chain itself stated earlier (right or
wrong), so one early mistake does not make every later step look wrong.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .composition import (
    EmptyAnswerError, InconsistencyError, InequalityStore, OffsetVector,
    assert_context_inequalities, compose_offsets, entailed_relations,
    facts_from_relations, offset_to_relations, relations_between,
    relations_to_offset, spartun_closure,
)
from .context import RelationGraph, SymbolicContext, build_graph
from .relations import ContradictionError, RelationSet, get_property_set
from .verbalize import ANSWER, FROM_CONTEXT, INFERRED, INVERTED, StepStatement

ERROR_KINDS = (
    "IncorrectExtraction",
    "IncompleteExtraction",
    "IncorrectClockExtraction",
    "IncorrectReversal",
    "ReverseStepMerge",
    "CopiedNotComposed",
    "ComposedWithoutConnection",
    "NonComposableComposition",
    "QuantitativeError",
    "ReverseAnswer",
)


@dataclass(frozen=True)
class ErrorFinding:
    step_index: int
    kind: str
    detail: str

    def __post_init__(self):
        if self.kind not in ERROR_KINDS:
            raise ValueError(f"unknown error kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"step": self.step_index, "kind": self.kind, "detail": self.detail}


@dataclass
class _Fact:
    head: str
    tail: str
    relations: RelationSet
    kind: str
    refs: tuple
    offset: Optional[OffsetVector] = None   # PS2/PS3 only; None on an axis = unknown


def observed_num_hops(steps: Sequence[StepStatement]) -> int:
    """Number of context look-ups in a chain."""
    return sum(1 for s in steps if s.kind == FROM_CONTEXT)


class _Replay:
    def __init__(self, ctx: SymbolicContext, ps, graph: Optional[RelationGraph] = None):
        self.ctx = ctx
        self.ps = get_property_set(ps)
        self.graph = graph or build_graph(ctx)
        self.facts: dict[int, _Fact] = {}
        self.findings: list[ErrorFinding] = []
        self._folded = {e.casefold(): e for e in ctx.entity_ids}

    # -- helpers ---------------------------------------------------------
    def flag(self, step: StepStatement, kind: str, detail: str) -> None:
        self.findings.append(ErrorFinding(step.index, kind, detail))

    def resolve(self, name: str) -> str:
        """Entity id as written, or its unique case-insensitive match."""
        if name in self.graph:
            return name
        return self._folded.get(name.casefold(), name)

    def same(self, a: RelationSet, b: RelationSet) -> bool:
        if self.ps.quantitative:
            return a == b
        return a.labels == b.labels

    def offset_of(self, rs: RelationSet, head: str, tail: str) -> Optional[OffsetVector]:
        try:
            return relations_to_offset(rs, head, tail)
        except (ValueError, ContradictionError):
            return None

    def ancestors(self, refs: Sequence[int]) -> list[_Fact]:
        out, seen, stack = [], set(), list(refs)
        while stack:
            i = stack.pop()
            if i in seen or i not in self.facts:
                continue
            seen.add(i)
            out.append(self.facts[i])
            stack.extend(self.facts[i].refs)
        return out

    # -- step checks -----------------------------------------------------
    def context_step(self, step: StepStatement, head: str, tail: str) -> None:
        edge = self.graph.edge(head, tail)
        if edge is None:
            self.flag(step, "IncorrectExtraction", f"the context states nothing between {head} and {tail}")
            return
        truth = edge.merged(head, tail)
        if self.same(step.relations, truth):
            return
        if any(t.clock is not None for t in edge.triples):
            hours = ", ".join(f"{t.clock} o'clock" for t in edge.triples if t.clock is not None)
            self.flag(step, "IncorrectClockExtraction",
                      f"{hours} between {head} and {tail} reads as {truth!r}, not {step.relations!r}")
        elif step.relations.labels < truth.labels:
            missing = sorted(truth.labels - step.relations.labels)
            self.flag(step, "IncompleteExtraction", f"missed {missing} between {head} and {tail}")
        else:
            self.flag(step, "IncorrectExtraction",
                      f"context gives {head} {truth!r} {tail}, step says {step.relations!r}")

    def inverted_step(self, step: StepStatement, head: str, tail: str) -> None:
        src = self.facts.get(step.refs[0])
        if src is None:
            return
        expected = src.relations.inverse()
        if (head, tail) != (src.tail, src.head) or not self.same(step.relations, expected):
            self.flag(step, "IncorrectReversal",
                      f"reversing step {step.refs[0]} gives {src.tail} {expected!r} {src.head}")

    def expected_composition(self, step: StepStatement, a: _Fact, b: _Fact):
        """(relations, offset) the engine derives from the two cited steps, or None if unknown."""
        name = self.ps.name
        if name in ("PS2", "PS3"):
            if a.offset is None or b.offset is None:
                return None
            vec = compose_offsets(a.offset, b.offset, self.ps.quantitative)
            try:
                return offset_to_relations(vec, self.ps.quantitative), vec
            except EmptyAnswerError:
                return RelationSet(), vec
        chain = self.ancestors(step.refs)
        try:
            if name == "PS1":
                facts = set()
                for f in chain:
                    facts |= facts_from_relations(f.head, f.relations, f.tail)
                return relations_between(spartun_closure(facts), a.head, b.tail), None
            store = InequalityStore()
            for f in reversed(chain):
                mode = self.ps.completeness if f.kind == FROM_CONTEXT else "RI"
                assert_context_inequalities((f.head, f.relations, f.tail), store, mode)
            return entailed_relations(store, a.head, b.tail), None
        except (ContradictionError, InconsistencyError, ValueError):
            return None

    def inferred_step(self, step: StepStatement, head: str, tail: str) -> Optional[OffsetVector]:
        i, j = step.refs
        a, b = self.facts.get(i), self.facts.get(j)
        if a is None or b is None:
            return None
        if a.tail != b.head:
            if {a.head, a.tail} & {b.head, b.tail}:
                self.flag(step, "ReverseStepMerge",
                          f"steps {i} ({a.head}->{a.tail}) and {j} ({b.head}->{b.tail}) share an entity "
                          f"but are not chained head to tail")
            else:
                self.flag(step, "ComposedWithoutConnection", f"steps {i} and {j} have no entity in common")
            return None
        if (head, tail) != (a.head, b.tail):
            self.flag(step, "ComposedWithoutConnection",
                      f"merging steps {i} and {j} relates {a.head} to {b.tail}, not {head} to {tail}")
            return None
        got = self.expected_composition(step, a, b)
        if got is None:
            return None
        expected, vec = got
        stated = step.relations
        carried = self._carry(stated, vec, head, tail)
        if self.same(stated, expected):
            return carried
        if not self.ps.quantitative:
            for axis in ("x", "y", "z"):
                la, lb = a.relations.label_on(axis), b.relations.label_on(axis)
                if (la and lb and la != lb and stated.label_on(axis)
                        and not expected.label_on(axis)):
                    self.flag(step, "NonComposableComposition",
                              f"{la} and {lb} cannot be combined without distances")
                    return carried
        for src, idx in ((a, i), (b, j)):
            if self.same(stated, src.relations):
                self.flag(step, "CopiedNotComposed",
                          f"step repeats step {idx} instead of combining; expected {expected!r}")
                return carried
        self.flag(step, "QuantitativeError", f"combining steps {i} and {j} gives {expected!r}, not {stated!r}")
        return carried

    def _carry(self, stated: RelationSet, vec: Optional[OffsetVector], head: str, tail: str):
        """Offset for a stated merge; axes the engine could not resolve stay unknown."""
        if self.ps.name not in ("PS2", "PS3"):
            return None
        own = self.offset_of(stated, head, tail)
        if own is None:
            return None
        dx, dy = own.dx, own.dy
        if vec is not None:
            if vec.dx is None and stated.label_on("x") is None:
                dx = None
            if vec.dy is None and stated.label_on("y") is None:
                dy = None
        return OffsetVector(head, tail, dx, dy)

    def answer_step(self, step: StepStatement, gold: Optional[RelationSet]) -> None:
        if gold is None:
            return
        got, want = step.relations.labels, gold.labels
        if got != want and got == gold.inverse().labels:
            self.flag(step, "ReverseAnswer", f"answer {sorted(got)} is the reverse of {sorted(want)}")

    def run(self, steps: Sequence[StepStatement], gold: Optional[RelationSet]) -> list[ErrorFinding]:
        for step in steps:
            if step.kind == ANSWER:
                self.answer_step(step, gold)
                continue
            head, tail = self.resolve(step.head), self.resolve(step.tail)
            offset = None
            if step.kind == FROM_CONTEXT:
                self.context_step(step, head, tail)
            elif step.kind == INVERTED:
                self.inverted_step(step, head, tail)
            elif step.kind == INFERRED:
                offset = self.inferred_step(step, head, tail)
            if offset is None and self.ps.name in ("PS2", "PS3"):
                offset = self.offset_of(step.relations, head, tail)
            self.facts[step.index] = _Fact(head, tail, step.relations, step.kind, step.refs, offset)
        return self.findings


def verify_path(steps: Sequence[StepStatement], ctx: SymbolicContext, ps,
                gold: Optional[RelationSet] = None, graph: Optional[RelationGraph] = None) -> list[ErrorFinding]:
    """Findings for a parsed chain; an empty list means it replays cleanly."""
    return _Replay(ctx, ps, graph).run(steps, gold)
