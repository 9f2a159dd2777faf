"""Signed-offset composition for point objects (PS2 and PS3)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from ..relations import AXIS_OF, SIGN_OF, RelationSet

# ``None`` on an axis marks it invalid: the displacement along it is unknown.
Delta = Optional[int]


class ChainBreakError(ValueError):
    """The tail of one link is not the head of the next."""


class EmptyAnswerError(ValueError):
    """Nothing can be concluded about the queried pair."""


@dataclass(frozen=True)
class OffsetVector:
    head: str
    tail: str
    dx: Delta = 0
    dy: Delta = 0

    @property
    def valid(self) -> bool:
        return self.dx is not None or self.dy is not None


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _merge_axis(a: Delta, b: Delta, quantitative: bool) -> Delta:
    if a is None or b is None:
        return None
    if not quantitative:
        if a * b < 0:
            return None
        return _sign(a + b)
    return a + b


def compose_offsets(pair1: OffsetVector, pair2: OffsetVector, quantitative: bool = True) -> OffsetVector:
    """Offset of ``pair1.head`` relative to ``pair2.tail``.

    Without magnitudes, opposite headings on an axis cannot be reconciled,
    so that axis becomes invalid and stays invalid from then on.
    """
    if pair1.tail != pair2.head:
        raise ChainBreakError(f"cannot chain {pair1.head}->{pair1.tail} with {pair2.head}->{pair2.tail}")
    return OffsetVector(
        pair1.head,
        pair2.tail,
        _merge_axis(pair1.dx, pair2.dx, quantitative),
        _merge_axis(pair1.dy, pair2.dy, quantitative),
    )


def fold_offsets(links: Iterable[OffsetVector], quantitative: bool = True) -> OffsetVector:
    it = iter(links)
    try:
        merged = next(it)
    except StopIteration:
        raise ValueError("fold_offsets needs at least one link") from None
    if not quantitative:
        merged = OffsetVector(merged.head, merged.tail,
                              None if merged.dx is None else _sign(merged.dx),
                              None if merged.dy is None else _sign(merged.dy))
    for link in it:
        merged = compose_offsets(merged, link, quantitative)
    return merged


def offset_to_relations(v: OffsetVector, quantitative: bool = True) -> RelationSet:
    """Read labels off an offset; magnitudes are kept only when ``quantitative``."""
    if v.dx == 0 and v.dy == 0:
        return RelationSet.of("overlapping")
    labels = []
    mags = {}
    if v.dx:
        labels.append("right" if v.dx > 0 else "left")
        mags["x"] = abs(v.dx)
    if v.dy:
        labels.append("above" if v.dy > 0 else "below")
        mags["y"] = abs(v.dy)
    if not labels:
        raise EmptyAnswerError(f"no relation derivable between {v.head} and {v.tail}")
    return RelationSet.of(*labels, magnitudes=mags if quantitative else None)


def relations_to_offset(rs: Union[RelationSet, Iterable[str]], head: str, tail: str) -> OffsetVector:
    """Signed displacement implied by a 2D directional relation set (1 unit when unstated)."""
    if not isinstance(rs, RelationSet):
        rs = RelationSet(frozenset(rs))
    delta = {"x": 0, "y": 0}
    for lab in rs.labels:
        if lab == "overlapping":
            continue
        axis = AXIS_OF.get(lab)
        if axis not in delta:
            raise ValueError(f"{lab!r} is not a 2D direction")
        delta[axis] = SIGN_OF[lab] * rs.magnitude(axis)
    if "overlapping" in rs.labels and (delta["x"] or delta["y"]):
        raise ValueError("overlapping cannot be combined with a direction")
    return OffsetVector(head, tail, delta["x"], delta["y"])
