"""Reasoning paths: find the question's path through the graph and fold its links."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .composition import (
    EmptyAnswerError, InequalityStore, RuleFact, assert_context_inequalities,
    compose_inequalities, entailed_relations, facts_from_relations, fold_offsets,
    offset_to_relations, relations_between, relations_to_offset, spartun_closure,
)
from .context import RelationGraph, SymbolicContext, build_graph
from .relations import PropertySet, RelationSet, get_property_set


class NoPathError(ValueError):
    """The question's entities are not connected in the context."""


@dataclass(frozen=True)
class ReasoningLink:
    head: str
    tail: str
    r_c: RelationSet = RelationSet()    # stated head -> tail
    r_ic: RelationSet = RelationSet()   # stated tail -> head
    r_d: Optional[RelationSet] = None   # deduced head-of-path -> tail, filled by derivation

    def __post_init__(self):
        if self.r_d is None:
            object.__setattr__(self, "r_d", self.stated)

    @property
    def stated(self) -> RelationSet:
        """Everything the context says about head -> tail."""
        return self.r_c.union(self.r_ic.inverse())

    def reversed(self) -> "ReasoningLink":
        return ReasoningLink(self.tail, self.head, self.r_ic, self.r_c)


@dataclass(frozen=True)
class ReasoningPath:
    links: tuple

    def __post_init__(self):
        if not self.links:
            raise ValueError("a reasoning path needs at least one link")
        for prev, nxt in zip(self.links, self.links[1:]):
            if prev.tail != nxt.head:
                raise ValueError(f"links {prev.head}->{prev.tail} and {nxt.head}->{nxt.tail} do not chain")

    @property
    def head(self) -> str:
        return self.links[0].head

    @property
    def tail(self) -> str:
        return self.links[-1].tail

    @property
    def num_hops(self) -> int:
        return len(self.links)

    @property
    def entities(self) -> list[str]:
        return [self.head] + [lk.tail for lk in self.links]

    def reversed(self) -> "ReasoningPath":
        return ReasoningPath(tuple(lk.reversed() for lk in reversed(self.links)))


@dataclass(frozen=True)
class QAInstance:
    id: str
    context: SymbolicContext
    question: tuple
    answer: RelationSet
    path: ReasoningPath

    @property
    def num_hops(self) -> int:
        return self.path.num_hops

    @property
    def property_set(self) -> PropertySet:
        return self.context.property_set


def find_path(graph: RelationGraph, h_q: str, t_q: str) -> ReasoningPath:
    """Shortest path; ties go to the lexicographically smallest entity sequence."""
    for name in (h_q, t_q):
        if name not in graph:
            raise NoPathError(f"unknown entity {name!r}")
    if h_q == t_q:
        raise ValueError("question head and tail must differ")
    dist = graph.distances_from(t_q)
    if h_q not in dist:
        raise NoPathError(f"{h_q!r} and {t_q!r} are not connected")
    links = []
    node = h_q
    while node != t_q:
        step = min(v for v in graph.neighbors(node) if dist.get(v) == dist[node] - 1)
        fwd, bwd = graph.edge(node, step).stated(node, step)
        links.append(ReasoningLink(node, step, fwd, bwd))
        node = step
    return ReasoningPath(tuple(links))


def _derive_offsets(path: ReasoningPath, quantitative: bool) -> list[RelationSet]:
    out = []
    merged = None
    for lk in path.links:
        vec = relations_to_offset(lk.stated, lk.head, lk.tail)
        merged = fold_offsets([vec] if merged is None else [merged, vec], quantitative)
        try:
            out.append(offset_to_relations(merged, quantitative))
        except EmptyAnswerError:
            out.append(RelationSet())
    return out


def _link_facts(lk: ReasoningLink) -> set[RuleFact]:
    return facts_from_relations(lk.head, lk.r_c, lk.tail) | facts_from_relations(lk.tail, lk.r_ic, lk.head)


def _derive_rules(path: ReasoningPath) -> list[RelationSet]:
    out = []
    facts: set[RuleFact] = set()
    for lk in path.links:
        facts |= _link_facts(lk)
        facts = spartun_closure(facts)
        out.append(relations_between(facts, path.head, lk.tail))
    return out


def _assert_link(store: InequalityStore, lk: ReasoningLink, completeness: str) -> None:
    if lk.r_c:
        assert_context_inequalities((lk.head, lk.r_c, lk.tail), store, completeness)
    if lk.r_ic:
        assert_context_inequalities((lk.tail, lk.r_ic, lk.head), store, completeness)


def _derive_inequalities(path: ReasoningPath, completeness: str, mode: str) -> list[RelationSet]:
    store = InequalityStore()
    out = []
    for i, lk in enumerate(path.links):
        _assert_link(store, lk, completeness)
        if mode == "entailment":
            out.append(entailed_relations(store, path.head, lk.tail))
        elif i == 0:
            out.append(lk.stated)
        else:
            rs, store = compose_inequalities((path.head, lk.head), (lk.head, lk.tail), store, mode)
            out.append(rs)
    return out


def derive_path(path: ReasoningPath, ps, ps4_mode: str = "entailment") -> ReasoningPath:
    """Copy of ``path`` whose link ``i`` carries the relation from the path head to its tail."""
    ps = get_property_set(ps)
    if ps.name == "PS1":
        merged = _derive_rules(path)
    elif ps.name in ("PS2", "PS3"):
        merged = _derive_offsets(path, ps.quantitative)
    else:
        merged = _derive_inequalities(path, ps.completeness, ps4_mode)
    return ReasoningPath(tuple(replace(lk, r_d=rs) for lk, rs in zip(path.links, merged)))


def derive_answer(path: ReasoningPath, ps, ps4_mode: str = "entailment") -> RelationSet:
    """Answer labels for the path's endpoints (magnitudes stay on the path's links)."""
    answer = derive_path(path, ps, ps4_mode).links[-1].r_d.without_magnitudes()
    if not answer:
        raise EmptyAnswerError(f"nothing can be concluded between {path.head} and {path.tail}")
    return answer


def build_instance(ctx: SymbolicContext, h_q: str, t_q: str, instance_id: str = "",
                   ps4_mode: str = "entailment", graph: Optional[RelationGraph] = None) -> QAInstance:
    """Question over ``ctx`` with its derived path and answer.

    Raises :class:`NoPathError` or :class:`EmptyAnswerError` when the question
    cannot be answered, including when some intermediate merge is empty (such a
    path cannot be narrated step by step).
    """
    graph = graph or build_graph(ctx)
    path = derive_path(find_path(graph, h_q, t_q), ctx.property_set, ps4_mode)
    for lk in path.links:
        if not lk.r_d:
            raise EmptyAnswerError(f"nothing can be concluded between {path.head} and {lk.tail}")
    return QAInstance(instance_id or ctx.id, ctx, (h_q, t_q), path.links[-1].r_d.without_magnitudes(), path)
