"""Symbolic contexts: parsing stories, reading annotated records, relation graphs."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .relations import (
    AXIS_OF, ContradictionError, PropertySet, Relation, RelationSet,
    UnknownLabelError, _asset_path, canonical_labels, get_property_set, labels_of,
    lexicon, parse_phrase,
)


class UnparseableSentenceError(ValueError):
    def __init__(self, index: int, sentence: str, reason: str = "no pattern matches"):
        super().__init__(f"sentence {index}: {reason}: {sentence!r}")
        self.index = index
        self.sentence = sentence


class SchemaError(ValueError):
    def __init__(self, missing: Sequence[str], where: str = "record"):
        super().__init__(f"{where} is missing field(s): {', '.join(missing)}")
        self.missing = list(missing)


_ARTICLE = re.compile(r"^(?:the|a|an)\s+", re.IGNORECASE)
_ABSTRACT = re.compile(r"^[A-Z]{1,3}$")


def normalize_entity(name: str) -> str:
    """Collapse whitespace and drop a leading article; case is preserved."""
    name = re.sub(r"\s+", " ", name.strip())
    return _ARTICLE.sub("", name)


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str = "abstract"   # "abstract" | "described"

    @classmethod
    def named(cls, name: str) -> "Entity":
        name = normalize_entity(name)
        return cls(name, "abstract" if _ABSTRACT.match(name) else "described")


@dataclass(frozen=True)
class ContextTriple:
    head: str
    relations: RelationSet
    tail: str
    sentence: int = 0
    clock: Optional[int] = None   # clock position the relation was read from, if any

    def __post_init__(self):
        if self.head == self.tail:
            raise ValueError(f"triple relates {self.head!r} to itself")
        if not self.relations:
            raise ValueError(f"triple {self.head} -> {self.tail} has no relations")

    @property
    def magnitudes(self) -> Optional[dict]:
        return self.relations.magnitudes_json()


@dataclass(frozen=True)
class SymbolicContext:
    entities: tuple
    triples: tuple
    text: tuple
    property_set: PropertySet
    id: str = ""

    def __post_init__(self):
        ids = [e.id for e in self.entities]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate entity ids")
        known = set(ids)
        for t in self.triples:
            for name in (t.head, t.tail):
                if name not in known:
                    raise ValueError(f"triple mentions unknown entity {name!r}")

    @property
    def entity_ids(self) -> list[str]:
        return [e.id for e in self.entities]


# ---------------------------------------------------------------------------
# story parsing

def _relation_regex(lex: Mapping[str, tuple]) -> str:
    phrases = sorted(lex, key=len, reverse=True)
    return "(?:" + "|".join(re.escape(p).replace(r"\ ", r"\s+") for p in phrases) + ")"


@dataclass
class _Pattern:
    regex: re.Pattern
    fixed: Optional[str]


@lru_cache(maxsize=8)
def _compiled_patterns(path: Optional[str] = None):
    lex = lexicon()
    phrase = _relation_regex(lex)
    comp = r"(?:\d+ units? )?" + phrase
    rel = f"(?P<rel>{comp}(?:(?:,? and |, ){comp})*)"
    clock = r"(?:the )?(?P<clock>1[0-2]|[1-9]) o'clock(?: position)?"
    file = Path(path) if path else _asset_path("sentence_patterns.tsv")
    out = []
    for raw in file.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        template, _, fixed = line.partition("\t")
        # templates are regular expressions with {H}/{T}/{REL}/{CLOCK} placeholders
        body = template.strip()
        for ph, grp in (("{H2}", r"(?P<h2>.+?)"), ("{T2}", r"(?P<t2>.+?)"),
                        ("{H}", r"(?P<h>.+?)"), ("{T}", r"(?P<t>.+?)"),
                        ("{REL}", rel), ("{CLOCK}", clock)):
            body = body.replace(ph, grp)
        out.append(_Pattern(re.compile("^" + body + "$", re.IGNORECASE), fixed.strip() or None))
    comp_re = re.compile(r"(?:(?P<n>\d+) units? )?(?P<p>" + phrase + ")", re.IGNORECASE)
    return out, comp_re


def parse_relation_phrase(text: str) -> RelationSet:
    """``"2 units above and left of"`` -> ``{above:2, left}``."""
    _, comp_re = _compiled_patterns()
    labels: set[str] = set()
    mags: dict[str, int] = {}
    for m in comp_re.finditer(text):
        rels = parse_phrase(m.group("p"))
        got = labels_of(rels)
        if m.group("n"):
            n = int(m.group("n"))
            for lab in got.labels:
                if lab in AXIS_OF:
                    mags[AXIS_OF[lab]] = n
        labels |= got.labels
    if not labels:
        raise UnknownLabelError(text)
    return RelationSet(frozenset(labels), tuple(mags.items()))


def split_sentences(text: Union[str, Sequence[str]]) -> list[str]:
    if isinstance(text, str):
        parts = re.split(r"(?<=[.!?])\s+", text.strip())
    else:
        parts = list(text)
    return [p.strip() for p in parts if p.strip()]


def parse_sentence(sentence: str, index: int = 0) -> list[ContextTriple]:
    """Triples stated by one sentence (raises if no pattern matches)."""
    patterns, _ = _compiled_patterns()
    s = re.sub(r"\s+", " ", sentence.strip()).rstrip(".!").strip()
    for pat in patterns:
        m = pat.regex.match(s)
        if not m:
            continue
        groups = m.groupdict()
        try:
            if groups.get("clock"):
                hour = int(groups["clock"])
                rs = canonical_labels(Relation.clock(hour))
            elif pat.fixed:
                rs = RelationSet.of(pat.fixed)
                hour = None
            else:
                rs = parse_relation_phrase(groups["rel"])
                hour = None
        except (UnknownLabelError, ContradictionError):
            continue
        h, t = normalize_entity(groups["h"]), normalize_entity(groups["t"])
        if groups.get("t2") is not None:
            h2, t2 = normalize_entity(groups["h2"]), normalize_entity(groups["t2"])
            if {h2, t2} != {h, t}:
                continue
            h, t = h2, t2
        elif groups.get("h2") is not None:
            # "{H} and {H2} are {REL} {T}": both heads relate to the tail
            h2 = normalize_entity(groups["h2"])
            if t in (h, h2) or h == h2:
                continue
            return [ContextTriple(h, rs, t, index, hour), ContextTriple(h2, rs, t, index, hour)]
        if h == t or not h or not t:
            continue
        return [ContextTriple(h, rs, t, index, hour)]
    raise UnparseableSentenceError(index, sentence)


def parse_story(text: Union[str, Sequence[str]], ps, context_id: str = "") -> SymbolicContext:
    """Parse template-style story sentences into a :class:`SymbolicContext`."""
    ps = get_property_set(ps)
    sentences = split_sentences(text)
    triples: list[ContextTriple] = []
    for i, sent in enumerate(sentences):
        got = parse_sentence(sent, i)
        for t in got:
            bad = [lab for lab in t.relations if lab not in ps.labels]
            if bad:
                raise UnparseableSentenceError(i, sent, f"relation(s) {bad} not available under {ps.name}")
        triples.extend(got)
    return _assemble(triples, sentences, ps, context_id)


def _assemble(triples, sentences, ps, context_id, entity_names: Iterable[str] = ()) -> SymbolicContext:
    seen: dict[str, Entity] = {}
    for name in entity_names:
        seen.setdefault(normalize_entity(name), Entity.named(name))
    for t in triples:
        for name in (t.head, t.tail):
            seen.setdefault(name, Entity.named(name))
    ctx = SymbolicContext(tuple(seen.values()), tuple(triples), tuple(sentences), ps, context_id)
    build_graph(ctx)   # surfaces contradictory parallel statements at ingest
    return ctx


# ---------------------------------------------------------------------------
# annotated records

_REQUIRED = ("id", "text", "entities", "triples", "property_set")
_TRIPLE_REQUIRED = ("head", "relations", "tail")


def _relations_from_record(raw: Mapping) -> RelationSet:
    labels: set[str] = set()
    for item in raw["relations"]:
        labels |= labels_of(parse_phrase(item)).labels
    mags = raw.get("magnitudes") or {}
    axis_mag = {}
    for key, axis in (("dx", "x"), ("dy", "y")):
        if mags.get(key):
            axis_mag[axis] = abs(int(mags[key]))
    return RelationSet(frozenset(labels), tuple(axis_mag.items()))


def ingest_annotated(record: Mapping) -> SymbolicContext:
    """Build a context from one annotated JSON record (schema in the README)."""
    missing = [k for k in _REQUIRED if k not in record]
    if missing:
        raise SchemaError(missing)
    ps = get_property_set(record["property_set"])
    triples = []
    for i, raw in enumerate(record["triples"]):
        miss = [k for k in _TRIPLE_REQUIRED if k not in raw]
        if miss:
            raise SchemaError(miss, f"triple {i}")
        triples.append(ContextTriple(
            normalize_entity(raw["head"]), _relations_from_record(raw), normalize_entity(raw["tail"]),
            int(raw.get("sentence", 0)), raw.get("clock"),
        ))
    return _assemble(triples, list(record["text"]), ps, str(record["id"]), record["entities"])


def triple_record(t: ContextTriple) -> dict:
    rec = {"head": t.head, "relations": t.relations.to_json(), "tail": t.tail,
           "magnitudes": t.magnitudes, "sentence": t.sentence}
    if t.clock is not None:
        rec["clock"] = t.clock
    return rec


def emit(ctx: SymbolicContext) -> dict:
    return {
        "id": ctx.id,
        "text": list(ctx.text),
        "entities": ctx.entity_ids,
        "triples": [triple_record(t) for t in ctx.triples],
        "property_set": ctx.property_set.name,
    }


def read_jsonl(path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None


def write_jsonl(path, records: Iterable[Mapping]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# relation graph

@dataclass
class Edge:
    """Everything stated about one unordered pair, kept in both orientations."""

    a: str
    b: str
    forward: RelationSet = field(default_factory=RelationSet)    # stated a -> b
    backward: RelationSet = field(default_factory=RelationSet)   # stated b -> a
    triples: list = field(default_factory=list)

    def stated(self, head: str, tail: str) -> tuple[RelationSet, RelationSet]:
        """(relations stated head->tail, relations stated tail->head)."""
        if (head, tail) == (self.a, self.b):
            return self.forward, self.backward
        if (head, tail) == (self.b, self.a):
            return self.backward, self.forward
        raise KeyError((head, tail))

    def merged(self, head: str, tail: str) -> RelationSet:
        fwd, bwd = self.stated(head, tail)
        return fwd.union(bwd.inverse())


class RelationGraph:
    """Undirected adjacency over entities; each edge remembers statement direction."""

    def __init__(self, nodes: Iterable[str] = ()):
        self._adj: dict[str, set[str]] = {n: set() for n in nodes}
        self._edges: dict[frozenset, Edge] = {}

    def add_triple(self, t: ContextTriple) -> None:
        key = frozenset((t.head, t.tail))
        edge = self._edges.get(key)
        if edge is None:
            edge = self._edges[key] = Edge(t.head, t.tail)
            self._adj.setdefault(t.head, set()).add(t.tail)
            self._adj.setdefault(t.tail, set()).add(t.head)
        if (t.head, t.tail) == (edge.a, edge.b):
            edge.forward = edge.forward.union(t.relations)
        else:
            edge.backward = edge.backward.union(t.relations)
        edge.merged(edge.a, edge.b)   # raises on a label next to its inverse
        edge.triples.append(t)

    @property
    def nodes(self) -> list[str]:
        return list(self._adj)

    def neighbors(self, node: str) -> set[str]:
        return self._adj.get(node, set())

    def edge(self, u: str, v: str) -> Optional[Edge]:
        return self._edges.get(frozenset((u, v)))

    def edges(self) -> list[Edge]:
        return list(self._edges.values())

    def __contains__(self, node) -> bool:
        return node in self._adj

    def number_of_edges(self) -> int:
        return len(self._edges)

    def distances_from(self, source: str) -> dict[str, int]:
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self._adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def components(self) -> list[set[str]]:
        seen: set[str] = set()
        comps = []
        for n in self._adj:
            if n not in seen:
                comp = set(self.distances_from(n))
                seen |= comp
                comps.append(comp)
        return comps


def build_graph(ctx: SymbolicContext) -> RelationGraph:
    g = RelationGraph(ctx.entity_ids)
    for t in ctx.triples:
        g.add_triple(t)
    return g
