"""Relation vocabulary: formalisms, canonical labels, inverses and property sets.

Every relation maps onto one or two canonical text labels.  Cardinal and
clock-face relations only exist on the way in; once canonicalized, the rest
of the package speaks in labels (``"left"``, ``"inside and touching"``, ...).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional


class UnknownLabelError(ValueError):
    """Raised when a string does not name any known relation."""

    def __init__(self, token: str):
        super().__init__(f"unknown relation label: {token!r}")
        self.token = token


class ContradictionError(ValueError):
    """Raised when a set of relations cannot hold simultaneously."""


class Formalism(Enum):
    RCC8 = "topological-RCC8"
    RELATIVE = "directional-relative"
    CARDINAL = "directional-cardinal"
    CLOCK = "directional-clock"
    DISTANCE = "distance-qualitative"


class Relation(Enum):
    DC = "DC"
    EC = "EC"
    PO = "PO"
    EQ = "EQ"
    TPP = "TPP"
    NTPP = "NTPP"
    TPPI = "TPPI"
    NTPPI = "NTPPI"
    LEFT = "LEFT"
    RIGHT = "RIGHT"
    ABOVE = "ABOVE"
    BELOW = "BELOW"
    FRONT = "FRONT"
    BEHIND = "BEHIND"
    NORTH = "NORTH"
    SOUTH = "SOUTH"
    EAST = "EAST"
    WEST = "WEST"
    CLOCK_1 = "CLOCK_1"
    CLOCK_2 = "CLOCK_2"
    CLOCK_3 = "CLOCK_3"
    CLOCK_4 = "CLOCK_4"
    CLOCK_5 = "CLOCK_5"
    CLOCK_6 = "CLOCK_6"
    CLOCK_7 = "CLOCK_7"
    CLOCK_8 = "CLOCK_8"
    CLOCK_9 = "CLOCK_9"
    CLOCK_10 = "CLOCK_10"
    CLOCK_11 = "CLOCK_11"
    CLOCK_12 = "CLOCK_12"
    NEAR = "NEAR"
    FAR = "FAR"

    def __repr__(self) -> str:
        return self.name

    @property
    def formalism(self) -> Formalism:
        return _FORMALISM[self]

    @property
    def inverse(self) -> "Relation":
        return inverse(self)

    @classmethod
    def clock(cls, hour: int) -> "Relation":
        if not 1 <= hour <= 12:
            raise UnknownLabelError(f"{hour} o'clock")
        return cls[f"CLOCK_{hour}"]


RCC8 = (Relation.DC, Relation.EC, Relation.PO, Relation.EQ,
        Relation.TPP, Relation.NTPP, Relation.TPPI, Relation.NTPPI)
RELATIVE = (Relation.LEFT, Relation.RIGHT, Relation.ABOVE, Relation.BELOW,
            Relation.FRONT, Relation.BEHIND)
CARDINAL = (Relation.NORTH, Relation.SOUTH, Relation.EAST, Relation.WEST)
CLOCK = tuple(Relation.clock(h) for h in range(1, 13))
DISTANCE = (Relation.NEAR, Relation.FAR)

_FORMALISM = {
    **{r: Formalism.RCC8 for r in RCC8},
    **{r: Formalism.RELATIVE for r in RELATIVE},
    **{r: Formalism.CARDINAL for r in CARDINAL},
    **{r: Formalism.CLOCK for r in CLOCK},
    **{r: Formalism.DISTANCE for r in DISTANCE},
}

_INVERSE = {
    Relation.LEFT: Relation.RIGHT,
    Relation.ABOVE: Relation.BELOW,
    Relation.FRONT: Relation.BEHIND,
    Relation.NORTH: Relation.SOUTH,
    Relation.EAST: Relation.WEST,
    Relation.TPP: Relation.TPPI,
    Relation.NTPP: Relation.NTPPI,
}
_INVERSE.update({v: k for k, v in list(_INVERSE.items())})
for _h in range(1, 13):
    _INVERSE[Relation.clock(_h)] = Relation.clock((_h + 5) % 12 + 1)

# Table order of the canonical labels.
LABELS = (
    "outside", "outside and touching", "partially overlapping", "overlapping",
    "inside and touching", "inside", "contains and touches", "contains",
    "left", "right", "above", "below", "front", "behind",
    "near", "far",
)
RCC8_LABELS = LABELS[:8]
DIRECTION_LABELS = LABELS[8:14]
DIRECTION_2D_LABELS = ("left", "right", "above", "below")
DISTANCE_LABELS = LABELS[14:]

# Order used whenever a label set is written out.
_RENDER_ORDER = RCC8_LABELS + ("above", "below", "left", "right", "front", "behind") + DISTANCE_LABELS
_RANK = {label: i for i, label in enumerate(_RENDER_ORDER)}

_LABEL_OF = {r: lab for r, lab in zip(RCC8 + RELATIVE + DISTANCE, LABELS)}
_LABEL_OF.update({Relation.NORTH: "above", Relation.SOUTH: "below",
                  Relation.EAST: "right", Relation.WEST: "left"})

# Clock face: 12/3/6/9 single labels, the rest split into their two quadrant labels.
_CLOCK_LABELS = {
    12: ("above",), 1: ("above", "right"), 2: ("above", "right"),
    3: ("right",), 4: ("below", "right"), 5: ("below", "right"),
    6: ("below",), 7: ("below", "left"), 8: ("below", "left"),
    9: ("left",), 10: ("above", "left"), 11: ("above", "left"),
}
for _h, _labs in _CLOCK_LABELS.items():
    _LABEL_OF[Relation.clock(_h)] = _labs

# Primary relation behind each canonical label.
LABEL_RELATION = {lab: r for r, lab in zip(RCC8 + RELATIVE + DISTANCE, LABELS)}

_LABEL_INVERSE = {lab: _LABEL_OF[_INVERSE.get(r, r)] for lab, r in LABEL_RELATION.items()}

AXIS_OF = {"left": "x", "right": "x", "above": "y", "below": "y", "front": "z", "behind": "z"}
SIGN_OF = {"left": -1, "right": 1, "above": 1, "below": -1, "front": 1, "behind": -1}


def inverse(r: Relation) -> Relation:
    """Reverse relation: ``r(X, Y)`` holds iff ``inverse(r)(Y, X)`` does."""
    return _INVERSE.get(r, r)


def inverse_label(label: str) -> str:
    try:
        return _LABEL_INVERSE[label]
    except KeyError:
        raise UnknownLabelError(label) from None


def label_order(labels: Iterable[str]) -> list[str]:
    """Labels sorted in rendering order (topology, vertical, horizontal, depth, distance)."""
    return sorted(labels, key=lambda lab: _RANK[lab])


def canonical_labels(r: Relation) -> "RelationSet":
    lab = _LABEL_OF[r]
    if isinstance(lab, tuple):
        return RelationSet.of(*lab)
    return RelationSet.of(lab)


@dataclass(frozen=True)
class RelationSet:
    """An immutable multi-label set of canonical relation labels.

    ``magnitudes`` holds per-axis unit counts for quantitatively specified
    directions.  A count of one is the implicit default and is never stored,
    so ``{left}`` and ``{left: 1 unit}`` compare equal.
    """

    labels: frozenset = frozenset()
    magnitudes: tuple = ()

    def __post_init__(self):
        labels = frozenset(self.labels)
        for lab in labels:
            if lab not in _RANK:
                raise UnknownLabelError(lab)
        for lab in labels:
            inv = _LABEL_INVERSE[lab]
            if inv != lab and inv in labels:
                raise ContradictionError(f"{lab!r} together with its inverse {inv!r}")
        topo = labels.intersection(RCC8_LABELS)
        if len(topo) > 1:
            raise ContradictionError(f"mutually exclusive topological labels: {sorted(topo)}")
        mags = dict(self.magnitudes)
        axes = {AXIS_OF[lab] for lab in labels if lab in AXIS_OF}
        for axis, units in mags.items():
            if axis not in axes:
                raise ValueError(f"magnitude given for axis {axis!r} without a direction on it")
            if int(units) != units or units < 1:
                raise ValueError(f"magnitude must be a positive integer, got {units!r}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "magnitudes",
                           tuple(sorted((a, int(u)) for a, u in mags.items() if u != 1)))

    @classmethod
    def of(cls, *labels: str, magnitudes: Optional[Mapping[str, int]] = None) -> "RelationSet":
        return cls(frozenset(labels), tuple((magnitudes or {}).items()))

    def __iter__(self):
        return iter(label_order(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __bool__(self) -> bool:
        return bool(self.labels)

    def __repr__(self) -> str:
        parts = []
        mags = dict(self.magnitudes)
        for lab in self:
            axis = AXIS_OF.get(lab)
            parts.append(f"{lab}:{mags[axis]}" if axis in mags else lab)
        return "{" + ", ".join(parts) + "}"

    def magnitude(self, axis: str) -> int:
        """Units along ``axis``; 1 when unstated."""
        return dict(self.magnitudes).get(axis, 1)

    def label_on(self, axis: str) -> Optional[str]:
        for lab in self.labels:
            if AXIS_OF.get(lab) == axis:
                return lab
        return None

    def inverse(self) -> "RelationSet":
        return RelationSet(frozenset(_LABEL_INVERSE[lab] for lab in self.labels), self.magnitudes)

    def union(self, other: "RelationSet") -> "RelationSet":
        mags = dict(self.magnitudes)
        for axis, units in other.magnitudes:
            if mags.get(axis, units) != units:
                raise ContradictionError(f"conflicting magnitudes on axis {axis}")
            mags[axis] = units
        return RelationSet(self.labels | other.labels, tuple(mags.items()))

    def without_magnitudes(self) -> "RelationSet":
        return RelationSet(self.labels)

    def relations(self) -> list[Relation]:
        return [LABEL_RELATION[lab] for lab in self]

    def to_json(self) -> list[str]:
        return list(self)

    def magnitudes_json(self) -> Optional[dict]:
        if not any(lab in AXIS_OF for lab in self.labels) or not self.magnitudes:
            return None
        return {"dx": self.magnitude("x") if self.label_on("x") else 0,
                "dy": self.magnitude("y") if self.label_on("y") else 0}


# ---------------------------------------------------------------------------
# label parsing

def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip()).lower()


def _asset_path(name: str) -> Path:
    return Path(str(resources.files("spatialpaths") / "assets" / name))


def load_synonyms(path: Optional[Path] = None) -> dict[str, tuple[Relation, ...]]:
    """Read a ``surface_form<TAB>relation_name`` table.

    Composite surface forms list several relation names joined by ``+``.
    """
    path = Path(path) if path is not None else _asset_path("synonyms.tsv")
    table: dict[str, tuple[Relation, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            try:
                surface, names = line.split("\t")
                rels = tuple(Relation[n.strip().upper()] for n in names.split("+"))
            except (ValueError, KeyError):
                raise ValueError(f"{path}:{lineno}: malformed synonym line {raw!r}") from None
            table[_normalize(surface)] = rels
    return table


@lru_cache(maxsize=None)
def _default_lexicon() -> dict[str, tuple[Relation, ...]]:
    return build_lexicon(load_synonyms())


def build_lexicon(synonyms: Mapping[str, tuple[Relation, ...]]) -> dict[str, tuple[Relation, ...]]:
    """Every recognised surface form: labels, relation names, clock positions, synonyms."""
    lex: dict[str, tuple[Relation, ...]] = {}
    for r in Relation:
        lex[r.name.lower()] = (r,)
    for h in range(1, 13):
        lex[f"{h} o'clock"] = (Relation.clock(h),)
    lex.update({lab: (r,) for lab, r in LABEL_RELATION.items()})
    lex.update(synonyms)
    return lex


def lexicon(synonyms: Optional[Mapping[str, tuple[Relation, ...]]] = None) -> dict[str, tuple[Relation, ...]]:
    return _default_lexicon() if synonyms is None else build_lexicon(synonyms)


def parse_phrase(text: str, synonyms=None) -> tuple[Relation, ...]:
    """Like :func:`parse_label` but keeps composite phrases (``"upper left of"``)."""
    try:
        return lexicon(synonyms)[_normalize(text)]
    except KeyError:
        raise UnknownLabelError(text) from None


def parse_label(text: str, synonyms=None) -> Relation:
    rels = parse_phrase(text, synonyms)
    if len(rels) != 1:
        raise UnknownLabelError(text)
    return rels[0]


def labels_of(relations: Iterable[Relation]) -> RelationSet:
    out: set[str] = set()
    for r in relations:
        out |= canonical_labels(r).labels
    return RelationSet(frozenset(out))


# ---------------------------------------------------------------------------
# property sets

@dataclass(frozen=True)
class PropertySet:
    name: str
    objects: str          # "PO" | "EO"
    completeness: str     # "RI" | "RC"
    quantification: str   # "QS" | "QU"
    dimensions: str       # "2D" | "3D"
    formalisms: frozenset = field(default_factory=frozenset)

    @property
    def quantitative(self) -> bool:
        return self.quantification == "QS"

    @property
    def directional_only(self) -> bool:
        return Formalism.RCC8 not in self.formalisms

    @property
    def labels(self) -> tuple[str, ...]:
        """Answer choices offered for this property set."""
        return _CHOICES[self.name]

    def __str__(self) -> str:
        return self.name


_DIRECTIONAL = frozenset({Formalism.RELATIVE, Formalism.CARDINAL, Formalism.CLOCK})

PS1 = PropertySet("PS1", "EO", "RI", "QU", "3D",
                  frozenset({Formalism.RCC8, Formalism.DISTANCE}) | _DIRECTIONAL)
PS2 = PropertySet("PS2", "PO", "RC", "QS", "2D", _DIRECTIONAL)
PS3 = PropertySet("PS3", "PO", "RC", "QU", "2D", _DIRECTIONAL)
PS4 = PropertySet("PS4", "EO", "RC", "QU", "2D", _DIRECTIONAL)

PROPERTY_SETS = {ps.name: ps for ps in (PS1, PS2, PS3, PS4)}

_CHOICES = {
    "PS1": LABELS,
    "PS2": DIRECTION_2D_LABELS + ("overlapping",),
    "PS3": DIRECTION_2D_LABELS + ("overlapping",),
    "PS4": DIRECTION_2D_LABELS,
}


def get_property_set(name) -> PropertySet:
    if isinstance(name, PropertySet):
        return name
    try:
        return PROPERTY_SETS[str(name).upper()]
    except KeyError:
        raise ValueError(f"unknown property set {name!r}; expected one of PS1..PS4") from None
