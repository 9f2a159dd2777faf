"""Brute-force reference models, written independently of the library's engines.

Each oracle answers "which labels hold in every model of the path's
statements" by enumerating models directly instead of composing relations.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from spatialpaths.relations import Relation

# ---------------------------------------------------------------------------
# shared: statements along a path, straight from the context triples

def path_statements(inst):
    """Per link, the context triples between its endpoints as (head, labels, tail, magnitudes)."""
    out = []
    for lk in inst.path.links:
        pair = {lk.head, lk.tail}
        out.append([(t.head, set(t.relations.labels), t.tail, dict(t.relations.magnitudes))
                    for t in inst.context.triples if {t.head, t.tail} == pair])
    return out


SIGN = {"right": ("x", 1), "left": ("x", -1), "above": ("y", 1), "below": ("y", -1)}


def _link_signs(lk_head, statements):
    """Per axis, the signed unit direction from the link head to its tail (0 when aligned)."""
    signs = {"x": 0, "y": 0}
    mags = {"x": 1, "y": 1}
    for head, labels, tail, m in statements:
        flip = 1 if head == lk_head else -1
        for lab in labels:
            if lab in SIGN:
                axis, s = SIGN[lab]
                signs[axis] = s * flip
                mags[axis] = m.get(axis, 1)
    return signs, mags


def _read_labels(per_axis_sets):
    """Labels that hold under every reachable (x, y) total."""
    xs, ys = per_axis_sets
    out = set()
    if min(xs) > 0:
        out.add("right")
    if max(xs) < 0:
        out.add("left")
    if min(ys) > 0:
        out.add("above")
    if max(ys) < 0:
        out.add("below")
    if xs == {0} and ys == {0}:
        out.add("overlapping")
    return out


# ---------------------------------------------------------------------------
# PS2: coordinates are fully determined, read them off

def ps2_oracle(inst):
    """Labels and magnitudes of head relative to tail from the summed displacements."""
    x = y = 0
    for lk, stmts in zip(inst.path.links, path_statements(inst)):
        signs, mags = _link_signs(lk.head, stmts)
        x += signs["x"] * mags["x"]
        y += signs["y"] * mags["y"]
    # each link contributes head-minus-tail, so the sum is path head minus path tail
    return _read_labels(({x}, {y})), {"x": abs(x), "y": abs(y)}


# ---------------------------------------------------------------------------
# PS3: unknown magnitudes; a label holds iff every magnitude assignment agrees

def ps3_oracle(inst):
    """Enumerate per-link magnitudes in 1..L+1 on each axis; keep labels true in all models."""
    stmts = path_statements(inst)
    bound = len(stmts) + 1
    totals = {"x": {0}, "y": {0}}
    for lk, st in zip(inst.path.links, stmts):
        signs, _ = _link_signs(lk.head, st)
        for axis in "xy":
            s = signs[axis]
            if s:
                totals[axis] = {t + s * m for t in totals[axis] for m in range(1, bound + 1)}
    return _read_labels((totals["x"], totals["y"]))


def ps3_oracle_naive(inst):
    """Same question by literally enumerating the full magnitude grid (small paths only)."""
    stmts = path_statements(inst)
    bound = len(stmts) + 1
    signs = [_link_signs(lk.head, st)[0] for lk, st in zip(inst.path.links, stmts)]
    xs, ys = set(), set()
    for mags in product(range(1, bound + 1), repeat=2 * len(signs)):
        x = sum(s["x"] * mags[2 * i] for i, s in enumerate(signs))
        y = sum(s["y"] * mags[2 * i + 1] for i, s in enumerate(signs))
        xs.add(x)
        ys.add(y)
    return _read_labels((xs, ys))


# ---------------------------------------------------------------------------
# PS4: rectangles on a finite grid, one axis at a time

def intervals(grid: int):
    return [(s, e) for s in range(grid + 1) for e in range(s + 1, grid + 1)]


def _axis_allowed(head_iv, tail_iv, labels, axis, complete):
    """Boolean array: which (head interval, tail interval) pairs one statement allows on ``axis``."""
    (hs, he), (ts, te) = head_iv, tail_iv
    ok = np.ones(np.broadcast(hs, ts).shape, dtype=bool)
    dirs = [lab for lab in labels if lab in SIGN]
    for lab in dirs:
        ax, s = SIGN[lab]
        if ax == axis:
            ok &= (te <= hs) if s > 0 else (he <= ts)
    if complete and len(dirs) == 1 and SIGN[dirs[0]][0] != axis:
        ok &= (ts <= he) & (hs <= te)
    return ok


def ps4_models(inst, grid=None, complete=True):
    """Per axis, boolean matrix R[i, j]: path head on interval i and path tail on j is realisable."""
    stmts = path_statements(inst)
    grid = grid or max(8, 2 * (len(stmts) + 1))
    ivs = intervals(grid)
    s = np.array([a for a, _ in ivs])
    e = np.array([b for _, b in ivs])
    rows = (s[:, None], e[:, None])     # link head on interval i
    cols = (s[None, :], e[None, :])     # link tail on interval j
    out = {}
    for axis in "xy":
        reach = np.eye(len(ivs), dtype=bool)
        for lk, st in zip(inst.path.links, stmts):
            step = np.ones((len(ivs), len(ivs)), dtype=bool)
            for head, labels, tail, _ in st:
                if head == lk.head:
                    step &= _axis_allowed(rows, cols, labels, axis, complete)
                else:
                    step &= _axis_allowed(cols, rows, labels, axis, complete)
            reach = (reach.astype(np.int64) @ step.astype(np.int64)) > 0
        out[axis] = reach
    return ivs, out


def ps4_oracle(inst, grid=None):
    ivs, reach = ps4_models(inst, grid)
    starts = np.array([s for s, _ in ivs])
    ends = np.array([e for _, e in ivs])
    # before[i, j]: interval i ends no later than interval j starts
    before = ends[:, None] <= starts[None, :]
    after = starts[:, None] >= ends[None, :]
    labels = set()
    for axis, (pos, neg) in (("x", ("right", "left")), ("y", ("above", "below"))):
        r = reach[axis]
        if not r.any():
            raise AssertionError("path statements have no model on the grid")
        if not (r & ~after).any():
            labels.add(pos)
        if not (r & ~before).any():
            labels.add(neg)
    return labels


# ---------------------------------------------------------------------------
# PS1: the rule system run by exhaustive enumeration over entity tuples

INV = {
    Relation.LEFT: Relation.RIGHT, Relation.RIGHT: Relation.LEFT,
    Relation.ABOVE: Relation.BELOW, Relation.BELOW: Relation.ABOVE,
    Relation.FRONT: Relation.BEHIND, Relation.BEHIND: Relation.FRONT,
    Relation.TPP: Relation.TPPI, Relation.TPPI: Relation.TPP,
    Relation.NTPP: Relation.NTPPI, Relation.NTPPI: Relation.NTPP,
}
DIRS = {Relation.LEFT, Relation.RIGHT, Relation.ABOVE, Relation.BELOW, Relation.FRONT, Relation.BEHIND}
PPS = {Relation.TPP, Relation.NTPP, Relation.TPPI, Relation.NTPPI}
SYMM = {Relation.DC, Relation.EC, Relation.PO, Relation.EQ, Relation.NEAR, Relation.FAR}


def naive_closure(facts):
    """Fixed point of the five rules, trying every entity tuple on every round."""
    known = {(f.head, f.relation, f.tail) for f in facts}
    ents = sorted({x for h, _, t in known for x in (h, t)})
    while True:
        new = set()
        for (x, r, y) in known:
            if r in INV:
                new.add((y, INV[r], x))
            if r in SYMM:
                new.add((y, r, x))
        for x, z, y in product(ents, repeat=3):
            for r in DIRS | PPS:
                if (x, r, z) in known and (z, r, y) in known:
                    new.add((x, r, y))
        for x, z, h, y in product(ents, repeat=4):
            lead = x == z or (x, Relation.TPP, z) in known or (x, Relation.NTPP, z) in known
            trail = h == y or (h, Relation.TPPI, y) in known or (h, Relation.NTPPI, y) in known
            if not (lead and trail):
                continue
            for r in DIRS:
                if (z, r, h) in known:
                    new.add((x, r, y))
        new = {f for f in new if f[0] != f[2]} - known
        if not new:
            return known
        known |= new


def has_contradiction(triples) -> bool:
    return any((h, INV[r], t) in triples for h, r, t in triples if r in INV)
