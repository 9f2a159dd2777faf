"""Synthetic scenes: coordinates first, then a context that describes them truthfully.

Point scenes (PS2, PS3) are integer random walks; rectangle scenes (PS4) are
axis-aligned boxes with strict extents; PS1 scenes are 3D boxes arranged as
containment chains joined by directional links, so every step of the
question's path stays derivable.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from typing import Optional

from .context import ContextTriple, SymbolicContext, _assemble
from .relations import AXIS_OF, PropertySet, RelationSet, get_property_set
from .verbalize import PHRASE

Box = tuple  # ((xs, xe), (ys, ye)[, (zs, ze)])


@dataclass(frozen=True)
class Scene:
    context: SymbolicContext
    truth: dict            # (head, tail) -> RelationSet read off the layout
    layout: dict           # entity -> point (x, y) or box of (start, end) pairs
    chain: tuple           # entities along the question's path
    extras: tuple = field(default=())

    @property
    def question(self) -> tuple:
        return (self.chain[0], self.chain[-1])


# ---------------------------------------------------------------------------
# ground truth read-off

def point_relations(p, q, quantitative: bool = True) -> RelationSet:
    """Relations of point ``p`` relative to point ``q``."""
    dx, dy = p[0] - q[0], p[1] - q[1]
    if dx == 0 and dy == 0:
        return RelationSet.of("overlapping")
    labels, mags = [], {}
    if dx:
        labels.append("right" if dx > 0 else "left")
        mags["x"] = abs(dx)
    if dy:
        labels.append("above" if dy > 0 else "below")
        mags["y"] = abs(dy)
    return RelationSet.of(*labels, magnitudes=mags if quantitative else None)


_AXIS_LABELS = (("left", "right"), ("below", "above"), ("behind", "front"))


def box_directions(a: Box, b: Box) -> set[str]:
    """Directional labels of box ``a`` relative to box ``b`` (boundary contact allowed)."""
    out = set()
    for (lo, hi), (a_s, a_e), (b_s, b_e) in zip(_AXIS_LABELS, a, b):
        if a_e <= b_s:
            out.add(lo)
        if a_s >= b_e:
            out.add(hi)
    return out


def box_gap(a: Box, b: Box) -> int:
    return max(max(b_s - a_e, a_s - b_e, 0) for (a_s, a_e), (b_s, b_e) in zip(a, b))


def box_topology(a: Box, b: Box) -> str:
    """RCC8 label of closed box ``a`` relative to closed box ``b``."""
    if any(a_e < b_s or b_e < a_s for (a_s, a_e), (b_s, b_e) in zip(a, b)):
        return "outside"
    if any(a_e == b_s or b_e == a_s for (a_s, a_e), (b_s, b_e) in zip(a, b)):
        return "outside and touching"
    if a == b:
        return "overlapping"
    a_in_b = all(b_s <= a_s and a_e <= b_e for (a_s, a_e), (b_s, b_e) in zip(a, b))
    b_in_a = all(a_s <= b_s and b_e <= a_e for (a_s, a_e), (b_s, b_e) in zip(a, b))
    if a_in_b or b_in_a:
        inner, outer = (a, b) if a_in_b else (b, a)
        touching = any(i_s == o_s or i_e == o_e for (i_s, i_e), (o_s, o_e) in zip(inner, outer))
        if a_in_b:
            return "inside and touching" if touching else "inside"
        return "contains and touches" if touching else "contains"
    return "partially overlapping"


NEAR_GAP = 2
FAR_GAP = 8


def box_relations(a: Box, b: Box, with_topology: bool = True) -> RelationSet:
    labels = box_directions(a, b)
    if with_topology:
        labels.add(box_topology(a, b))
        if box_topology(a, b) in ("outside", "outside and touching"):
            gap = box_gap(a, b)
            if gap <= NEAR_GAP:
                labels.add("near")
            elif gap >= FAR_GAP:
                labels.add("far")
    return RelationSet(frozenset(labels))


# ---------------------------------------------------------------------------
# names and sentences

_RESERVED = {"A", "I", "AN", "AS", "AT", "BE", "BY", "DO", "GO", "HE", "IF", "IN", "IS", "IT",
             "ME", "MY", "NO", "OF", "ON", "OR", "SO", "TO", "UP", "US", "WE"}
_SIZES = ("tiny", "small", "medium", "midsize", "large", "big")
_COLORS = ("white", "black", "yellow", "green", "blue", "red", "orange", "purple")
_SHAPES = ("square", "circle", "triangle", "rectangle", "diamond", "hexagon")
_CONTAINERS = ("box", "block", "crate", "tray")


def abstract_names(rng: random.Random, n: int) -> list[str]:
    pool = [c for c in string.ascii_uppercase if c not in _RESERVED]
    pool += [a + b for a in string.ascii_uppercase for b in string.ascii_uppercase if a + b not in _RESERVED]
    return rng.sample(pool[:150], n) if n <= 40 else rng.sample(pool, n)


def _container_name(rng, used):
    while True:
        code = rng.choice(string.ascii_uppercase) * 3
        name = f"{rng.choice(_CONTAINERS)} {code}"
        if name not in used:
            used.add(name)
            return name


def _object_name(rng, used):
    while True:
        name = f"{rng.choice(_SIZES)} {rng.choice(_COLORS)} {rng.choice(_SHAPES)}"
        if name not in used:
            used.add(name)
            return name


_COMPOSITE = {
    frozenset({"above", "left"}): ("upper left of", "northwest of", "to the upper left of"),
    frozenset({"above", "right"}): ("upper right of", "northeast of", "to the upper right of"),
    frozenset({"below", "left"}): ("lower left of", "southwest of", "to the lower left of"),
    frozenset({"below", "right"}): ("lower right of", "southeast of", "to the lower right of"),
}
_SINGLE = {
    "left": ("left of", "to the left of", "on the left side of", "west of"),
    "right": ("right of", "to the right of", "on the right side of", "east of"),
    "above": ("above", "over", "north of", "on top of"),
    "below": ("below", "under", "south of", "beneath"),
}
_CLOCK = {
    frozenset({"above"}): (12,), frozenset({"right"}): (3,), frozenset({"below"}): (6,),
    frozenset({"left"}): (9,), frozenset({"above", "right"}): (1, 2),
    frozenset({"below", "right"}): (4, 5), frozenset({"below", "left"}): (7, 8),
    frozenset({"above", "left"}): (10, 11),
}


def point_sentence(rng: random.Random, h: str, rs: RelationSet, t: str, quantitative: bool):
    """(sentence, clock hour or None) describing a 2D relation between abstract entities."""
    if "overlapping" in rs:
        return rng.choice([f"{h} and {t} are overlapping.", f"{h} overlaps with {t}.",
                           f"{h} is in the same place as {t}."]), None
    labels = frozenset(rs.labels)
    if quantitative and rs.magnitudes:
        parts = []
        for lab in rs:
            n = rs.magnitude(AXIS_OF[lab])
            parts.append(f"{n} unit{'s' if n != 1 else ''} {rng.choice(_SINGLE[lab][:3])}")
        return f"{h} is {' and '.join(parts)} {t}.", None
    roll = rng.random()
    if roll < 0.2:
        hour = rng.choice(_CLOCK[labels])
        if rng.random() < 0.5:
            return f"{h} is at {hour} o'clock relative to {t}.", hour
        lead = PHRASE[rng.choice(sorted(labels))]
        return f"{h} is {lead} {t} at {hour} o'clock.", hour
    if len(labels) == 2:
        if roll < 0.6:
            return f"{h} is {rng.choice(_COMPOSITE[labels])} {t}.", None
        a, b = list(rs)
        return f"{h} is {rng.choice(_SINGLE[a])} and {rng.choice(_SINGLE[b])} {t}.", None
    (lab,) = labels
    if roll < 0.35:
        kind = "horizontal" if AXIS_OF[lab] == "x" else "vertical"
        return f"{h} and {t} are {kind} and {h} is {rng.choice(_SINGLE[lab][:2])} {t}.", None
    return f"{h} is {rng.choice(_SINGLE[lab])} {t}.", None


def box_sentence(rng: random.Random, h: str, rs: RelationSet, t: str) -> str:
    labels = set(rs.labels)
    if labels == {"contains"}:
        return rng.choice([f"The {h} contains the {t}.", f"The {h} has the {t}."])
    if labels == {"contains and touches"}:
        return rng.choice([f"The {h} covers the {t}.", f"The {h} contains and touches the {t}."])
    parts = [PHRASE[lab] for lab in rs]
    body = parts[0] if len(parts) == 1 else ", ".join(parts[:-1]) + " and " + parts[-1]
    return f"The {h} is {body} the {t}."


def _orient(rng, h, rs, t):
    """Randomly restate ``rs(h, t)`` from ``t``'s side."""
    if rng.random() < 0.5:
        return t, rs.inverse(), h
    return h, rs, t


# ---------------------------------------------------------------------------
# generators

def _attach_points(rng, layout, anchors, names, side):
    extras = []
    for name in names:
        anchor = rng.choice(anchors)
        ax, ay = layout[anchor]
        layout[name] = (ax + rng.randint(-side // 2, side // 2), ay + rng.randint(-side // 2, side // 2))
        extras.append((name, anchor))
    return extras


KEEP_HEADING = 0.85


def _point_scene(ps: PropertySet, rng: random.Random, n_links: int, n_extra: int):
    names = abstract_names(rng, n_links + 1 + n_extra)
    chain, extra = names[:n_links + 1], names[n_links + 1:]
    side = 4 * len(names)
    # most steps keep one heading so that long unquantified walks stay informative
    axis, sign = rng.randrange(2), rng.choice((-1, 1))
    layout = {chain[0]: (rng.randrange(side), rng.randrange(side))}
    for prev, cur in zip(chain, chain[1:]):
        while True:
            step = [rng.randint(-2, 2), rng.randint(-2, 2)]
            if rng.random() < KEEP_HEADING:
                step[axis] = sign * rng.randint(1, 2)
            if step != [0, 0] or rng.random() < 0.1:
                break
        px, py = layout[prev]
        layout[cur] = (px + step[0], py + step[1])
    pairs = list(zip(chain, chain[1:])) + [(e, a) for e, a in _attach_points(rng, layout, chain, extra, side)]
    return layout, chain, pairs, lambda a, b: point_relations(layout[a], layout[b], ps.quantitative)


def _rect_near(rng, prev, heading: Optional[str]):
    """A rectangle with some directional relation to ``prev``; ``heading(prev, new)`` if given."""
    while True:
        box = []
        for ax, (s, e) in enumerate(prev):
            size = rng.randint(1, 4)
            start = s + rng.randint(-4, 4)
            if heading and AXIS_OF[heading] == "xy"[ax]:
                gap = rng.choice((0, 0, 1, 2))
                # heading(prev, new): prev is left/below new when heading is left/below
                start = e + gap if heading in ("left", "below") else s - gap - size
            box.append((start, start + size))
        box = tuple(box)
        if box_directions(prev, box):
            return box


def _rect_scene(ps: PropertySet, rng: random.Random, n_links: int, n_extra: int):
    names = abstract_names(rng, n_links + 1 + n_extra)
    chain, extra = names[:n_links + 1], names[n_links + 1:]
    side = 4 * len(names)
    heading = rng.choice(("left", "right", "above", "below"))
    layout = {chain[0]: _random_rect(rng, side)}
    for prev, cur in zip(chain, chain[1:]):
        layout[cur] = _rect_near(rng, layout[prev], heading if rng.random() < KEEP_HEADING else None)
    pairs = list(zip(chain, chain[1:]))
    for name in extra:
        anchor = rng.choice(chain)
        layout[name] = _rect_near(rng, layout[anchor], None)
        pairs.append((name, anchor))
    rel = lambda a, b: RelationSet(frozenset(box_directions(layout[a], layout[b])))
    return layout, chain, pairs, rel


def _random_rect(rng, side):
    xs = rng.randrange(side - 1)
    ys = rng.randrange(side - 1)
    return ((xs, rng.randint(xs + 1, min(side, xs + 1 + side // 3))),
            (ys, rng.randint(ys + 1, min(side, ys + 1 + side // 3))))


def _shrink(rng, box, touching: bool):
    """A box strictly inside ``box`` (sharing one face if ``touching``)."""
    out = []
    for s, e in box:
        lo = rng.randint(s + 1, s + max(1, (e - s) // 4))
        hi = rng.randint(e - max(1, (e - s) // 4), e - 1)
        out.append([lo, max(hi, lo + 1)])
    if touching:
        axis = rng.randrange(len(box))
        end = rng.randrange(2)
        out[axis][end] = box[axis][end]
    return tuple(tuple(p) for p in out)


def ps1_pattern(rng: random.Random, n_links: int) -> tuple[int, int, int]:
    """(links into containers, directional links, links out to contents) for a path."""
    options = [(n_links, 0, 0), (0, 0, n_links)]
    for a in range(n_links):
        for c in range(n_links - a):
            options.append((a, n_links - a - c, c))
    return rng.choice(options)


def _ps1_scene(rng: random.Random, n_links: int, n_extra: int):
    a, b, c = ps1_pattern(rng, n_links)
    used: set[str] = set()
    depth = max(a, c, 1)
    size_lo = 4 * depth + 4
    # directional backbone of b + 1 disjoint containers, each ``through`` the next
    through = rng.choice(["left", "right", "above", "below", "front", "behind"])
    t_axis = "xyz".index(AXIS_OF[through])
    ahead = through in ("left", "below", "behind")   # next container lies further along the axis
    boxes = []
    for i in range(b + 1):
        box = []
        for ax in range(3):
            size = rng.randint(size_lo, size_lo + 6)
            if i == 0:
                start = rng.randint(0, 20)
            elif ax != t_axis:
                start = boxes[-1][ax][0] + rng.randint(-size_lo, size_lo)
            elif ahead:
                start = boxes[-1][ax][1] + rng.choice([0, 0, 1, 3, 9])
            else:
                start = boxes[-1][ax][0] - rng.choice([0, 0, 1, 3, 9]) - size
            box.append((start, start + size))
        boxes.append(tuple(box))
    # nested contents at both ends
    first, last = boxes[0], boxes[-1]
    inner = [first]
    for k in range(a):
        inner.append(_shrink(rng, inner[-1], touching=(a == 1 and rng.random() < 0.5)))
    outer = [last]
    for k in range(c):
        outer.append(_shrink(rng, outer[-1], touching=(c == 1 and rng.random() < 0.5)))
    chain_boxes = list(reversed(inner)) + boxes[1:] + outer[1:]
    if b == 0:
        chain_boxes = list(reversed(inner)) + outer[1:]
    names = []
    for k in range(len(chain_boxes)):
        container = a <= k <= a + b
        names.append(_container_name(rng, used) if container else _object_name(rng, used))
    layout = dict(zip(names, chain_boxes))
    pairs = list(zip(names, names[1:]))
    extras = []
    for _ in range(n_extra):
        anchor = rng.choice(names)
        for _attempt in range(50):
            box = tuple((s, s + rng.randint(2, 6)) for s in
                        (rng.randint(-40, 60), rng.randint(-40, 60), rng.randint(-40, 60)))
            if all(box_topology(box, other) in ("outside", "outside and touching") for other in layout.values()):
                name = _container_name(rng, used)
                layout[name] = box
                pairs.append((name, anchor))
                extras.append(name)
                break
    rel = lambda p, q: box_relations(layout[p], layout[q])
    return layout, names, pairs, rel, through, (a, b, c)


def _ri_subset(rng, rs: RelationSet, keep: Optional[str]) -> RelationSet:
    labels = [lab for lab in rs if lab != keep]
    chosen = {lab for lab in labels if rng.random() < 0.35}
    if keep:
        chosen.add(keep)
    if not chosen:
        chosen.add(rng.choice(labels))
    return RelationSet(frozenset(chosen))


def gen_scene(ps, n_entities: int, seed, n_links: Optional[int] = None, context_id: str = "") -> Scene:
    """A connected scene whose question spans ``n_links`` links (default: all entities)."""
    ps = get_property_set(ps)
    if n_entities < 2:
        raise ValueError("a scene needs at least two entities")
    n_links = n_entities - 1 if n_links is None else n_links
    if not 1 <= n_links <= n_entities - 1:
        raise ValueError("n_links must be between 1 and n_entities - 1")
    n_extra = n_entities - 1 - n_links
    rng = random.Random(seed)
    statements = []
    if ps.name == "PS1":
        layout, chain, pairs, rel, through, (a, b, c) = _ps1_scene(rng, n_links, n_extra)
        for k, (p, q) in enumerate(pairs):
            truth = rel(p, q)
            if k < len(chain) - 1 and not (a <= k < a + b):
                stated = RelationSet.of(box_topology(layout[p], layout[q]))
            elif k < len(chain) - 1:
                stated = _ri_subset(rng, truth, through)
            else:
                stated = _ri_subset(rng, truth, None)
            h, rs, t = _orient(rng, p, stated, q)
            statements.append((h, rs, t, box_sentence(rng, h, rs, t), None))
    else:
        maker = _point_scene if ps.objects == "PO" else _rect_scene
        layout, chain, pairs, rel = maker(ps, rng, n_links, n_extra)
        for p, q in pairs:
            h, rs, t = _orient(rng, p, rel(p, q), q)
            sentence, hour = point_sentence(rng, h, rs, t, ps.quantitative)
            statements.append((h, rs, t, sentence, hour))
    rng.shuffle(statements)
    triples = [ContextTriple(h, rs, t, i, hour) for i, (h, rs, t, _, hour) in enumerate(statements)]
    text = [s for *_, s, _ in statements]
    ctx = _assemble(triples, text, ps, context_id, sorted(layout))
    names = list(layout)
    if ps.name == "PS1":
        truth = {(p, q): box_relations(layout[p], layout[q]) for p in names for q in names if p != q}
    elif ps.objects == "PO":
        truth = {(p, q): point_relations(layout[p], layout[q], ps.quantitative)
                 for p in names for q in names if p != q}
    else:
        truth = {(p, q): RelationSet(frozenset(box_directions(layout[p], layout[q])))
                 for p in names for q in names if p != q}
    return Scene(ctx, truth, layout, tuple(chain), tuple(n for n in names if n not in chain))
