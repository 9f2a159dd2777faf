"""Step-by-step text for reasoning paths, and the parser that reads such text back."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .context import UnparseableSentenceError, parse_sentence
from .pathgen import ReasoningPath
from .relations import (
    AXIS_OF, ContradictionError, RelationSet, UnknownLabelError, get_property_set,
    labels_of, lexicon, parse_phrase,
)

FROM_CONTEXT = "FromContext"
INVERTED = "Inverted"
INFERRED = "Inferred"
ANSWER = "Answer"


class NoStepsFound(ValueError):
    """No step-formatted statement could be read from the text."""


class NoAnswerFound(ValueError):
    """The text has no recognisable final answer."""


@dataclass(frozen=True)
class StepStatement:
    index: int
    kind: str
    head: Optional[str]
    tail: Optional[str]
    relations: RelationSet
    refs: tuple = ()

    def __post_init__(self):
        for r in self.refs:
            if r >= self.index:
                raise ValueError(f"step {self.index} cites step {r}, which is not earlier")


class ParsedSteps(list):
    """Parsed statements; ``skipped`` counts step lines that could not be read."""

    skipped: int = 0


PHRASE = {
    "left": "left of", "right": "right of", "above": "above", "below": "below",
    "front": "in front of", "behind": "behind",
    "outside": "outside", "outside and touching": "outside and touching",
    "partially overlapping": "partially overlapping", "overlapping": "overlapping",
    "inside and touching": "inside and touching", "inside": "inside",
    "contains and touches": "containing and touching", "contains": "containing",
    "near": "near", "far": "far from",
}


def _join(parts: list[str]) -> str:
    if len(parts) <= 2:
        return " and ".join(parts)
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def relation_phrase(rs: RelationSet, quantitative: bool) -> str:
    parts = []
    for lab in rs:
        text = PHRASE[lab]
        axis = AXIS_OF.get(lab)
        if quantitative and axis in ("x", "y") and rs.magnitude(axis) > 1:
            text = f"{rs.magnitude(axis)} unit {text}"
        parts.append(text)
    return _join(parts)


def answer_phrase(rs: RelationSet) -> str:
    labels = list(rs)
    if len(labels) == 1:
        return labels[0]
    return ", ".join(labels[:-1]) + ", and " + labels[-1]


def render_step(step: StepStatement, quantitative: bool = False) -> str:
    if step.kind == ANSWER:
        return f"Hence, the answer is {answer_phrase(step.relations)}."
    clause = f"{step.head} is {relation_phrase(step.relations, quantitative)} {step.tail}."
    if step.kind == FROM_CONTEXT:
        lead = "From the context, "
    elif step.kind == INVERTED:
        lead = f"From step {step.refs[0]}, we can infer that "
    else:
        lead = f"From step {step.refs[0]} and {step.refs[1]}, we can infer that "
    return f"Step {step.index}: {lead}{clause}"


def path_steps(path: ReasoningPath, ps) -> list[StepStatement]:
    """Statements narrating a derived path; the last one is the answer."""
    ps = get_property_set(ps)
    strip = (lambda rs: rs) if ps.quantitative else (lambda rs: rs.without_magnitudes())
    steps: list[StepStatement] = []

    def push(kind, head, rs, tail, refs=()):
        steps.append(StepStatement(len(steps) + 1, kind, head, tail, strip(rs), tuple(refs)))
        return len(steps)

    merged_at = None
    for lk in path.links:
        if lk.r_c and not lk.r_ic:
            link_at = push(FROM_CONTEXT, lk.head, lk.r_c, lk.tail)
        elif lk.r_ic and not lk.r_c:
            given = push(FROM_CONTEXT, lk.tail, lk.r_ic, lk.head)
            link_at = push(INVERTED, lk.head, lk.r_ic.inverse(), lk.tail, [given])
        else:
            link_at = push(FROM_CONTEXT, lk.head, lk.stated, lk.tail)
        if merged_at is None:
            merged_at = link_at
        else:
            merged_at = push(INFERRED, path.head, lk.r_d, lk.tail, [merged_at, link_at])
    push(ANSWER, None, path.links[-1].r_d.without_magnitudes(), None)
    return steps


def verbalize_steps(path: ReasoningPath, ps) -> list[str]:
    ps = get_property_set(ps)
    return [render_step(s, ps.quantitative) for s in path_steps(path, ps)]


def verbalize_path(path: ReasoningPath, ps) -> str:
    return "\n".join(verbalize_steps(path, ps))


# ---------------------------------------------------------------------------
# parsing

_STEP = re.compile(r"\bStep\s+(\d+)\s*:\s*", re.IGNORECASE)
_CTX = re.compile(r"^(?:from the context|it is given|given)(?: that)?,?\s+(?P<s>.*)$", re.IGNORECASE | re.DOTALL)
_INF2 = re.compile(r"^from steps?\s+(?P<a>\d+)\s*(?:and|,|&)\s*(?:step\s+)?(?P<b>\d+),?\s+"
                   r"we can (?:infer|say|conclude)(?: that)?\s+(?P<s>.*)$", re.IGNORECASE | re.DOTALL)
_INF1 = re.compile(r"^from step\s+(?P<a>\d+),?\s+we can (?:infer|say|conclude)(?: that)?\s+(?P<s>.*)$",
                   re.IGNORECASE | re.DOTALL)
_ANSWER = re.compile(r"the answer is\b", re.IGNORECASE)


def _first_sentence(text: str) -> str:
    m = re.search(r"\.(?:\s|$)", text)
    return (text[:m.start()] if m else text).strip()


def _statement(text: str):
    triples = parse_sentence(_first_sentence(text))
    if len(triples) != 1:
        raise UnparseableSentenceError(0, text, "expected a single relation")
    return triples[0]


def parse_reasoning_text(text: str) -> ParsedSteps:
    """Read step statements (and a final answer) out of free text."""
    out = ParsedSteps()
    out.skipped = 0
    marks = list(_STEP.finditer(text))
    for m, nxt in zip(marks, marks[1:] + [None]):
        index = int(m.group(1))
        body = text[m.end(): nxt.start() if nxt else len(text)].strip()
        try:
            if (g := _CTX.match(body)):
                kind, refs = FROM_CONTEXT, ()
            elif (g := _INF2.match(body)):
                kind, refs = INFERRED, (int(g.group("a")), int(g.group("b")))
            elif (g := _INF1.match(body)):
                kind, refs = INVERTED, (int(g.group("a")),)
            else:
                out.skipped += 1
                continue
            t = _statement(g.group("s"))
            out.append(StepStatement(index, kind, t.head, t.tail, t.relations, refs))
        except (UnparseableSentenceError, UnknownLabelError, ContradictionError, ValueError):
            out.skipped += 1
    if not out:
        raise NoStepsFound(f"no reasoning steps found ({out.skipped} unreadable step lines)")
    try:
        labels = extract_final_answer(text)
    except (NoAnswerFound, ContradictionError):
        labels = None
    if labels is not None:
        out.append(StepStatement(max(s.index for s in out) + 1, ANSWER, None, None, labels))
    return out


@lru_cache(maxsize=1)
def _label_regex() -> re.Pattern:
    phrases = sorted(lexicon(), key=len, reverse=True)
    alt = "|".join(re.escape(p).replace(r"\ ", r"\s+") for p in phrases)
    return re.compile(r"(?<![\w'])(" + alt + r")(?![\w'])", re.IGNORECASE)


def extract_answer_labels(text: str) -> frozenset:
    """Labels after the last answer marker, without consistency checks."""
    marks = list(_ANSWER.finditer(text))
    if not marks:
        raise NoAnswerFound("no answer marker in text")
    tail = text[marks[-1].end():]
    tail = _first_sentence(tail.replace("\n", " "))
    labels: set[str] = set()
    for m in _label_regex().finditer(tail):
        labels |= labels_of(parse_phrase(m.group(1))).labels
    if not labels:
        raise NoAnswerFound(f"no relation label after the answer marker: {tail!r}")
    return frozenset(labels)


def extract_final_answer(text: str) -> RelationSet:
    """Relation set named after the last ``the answer is`` in ``text``."""
    return RelationSet(extract_answer_labels(text))
