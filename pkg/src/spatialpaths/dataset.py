"""Instance generation, JSON Lines records and hop-balanced splits."""

from __future__ import annotations

import hashlib
import logging
import math
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .composition import EmptyAnswerError
from .context import (
    SymbolicContext, ingest_annotated, read_jsonl, triple_record, write_jsonl,
)
from .pathgen import NoPathError, QAInstance, build_instance
from .relations import RelationSet, get_property_set
from .scenes import gen_scene
from .verbalize import verbalize_steps

log = logging.getLogger(__name__)

DEFAULT_SIZES = (2000, 500, 1000)
SPLIT_NAMES = ("train", "dev", "test")


class InsufficientDataError(ValueError):
    """The pool cannot fill the requested split sizes."""


def derive_seed(seed: int, purpose: str, ident) -> int:
    """Stable child seed for ``(seed, purpose, ident)``."""
    digest = hashlib.sha256(f"{seed}\x1f{purpose}\x1f{ident}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class DatasetSplit:
    name: str
    instances: list
    seed: int

    def __post_init__(self):
        ids = [inst.id for inst in self.instances]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate instance ids in split {self.name}")

    def hop_counts(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for inst in self.instances:
            out[inst.num_hops] += 1
        return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# records

def instance_record(inst: QAInstance) -> dict:
    ctx = inst.context
    return {
        "id": inst.id,
        "property_set": ctx.property_set.name,
        "context_id": ctx.id,
        "context_text": list(ctx.text),
        "triples": [triple_record(t) for t in ctx.triples],
        "question": {"head": inst.question[0], "tail": inst.question[1]},
        "answer": inst.answer.to_json(),
        "reasoning": verbalize_steps(inst.path, ctx.property_set),
        "num_hops": inst.num_hops,
    }


def context_from_record(rec: dict) -> SymbolicContext:
    names: list[str] = []
    for t in rec["triples"]:
        for key in ("head", "tail"):
            if t[key] not in names:
                names.append(t[key])
    return ingest_annotated({
        "id": rec.get("context_id", rec["id"]), "text": rec.get("context_text", []),
        "entities": names, "triples": rec["triples"], "property_set": rec["property_set"],
    })


def instance_from_record(rec: dict, ps4_mode: str = "entailment") -> QAInstance:
    """Rebuild an instance (re-deriving its path) from a dataset record."""
    ctx = context_from_record(rec)
    q = rec["question"]
    inst = build_instance(ctx, q["head"], q["tail"], rec["id"], ps4_mode)
    if "answer" in rec and set(rec["answer"]) != set(inst.answer.labels):
        raise ValueError(f"{rec['id']}: stored answer {rec['answer']} differs from derived {inst.answer.to_json()}")
    return inst


def gold_answer(rec: dict) -> RelationSet:
    return RelationSet(frozenset(rec["answer"]))


# ---------------------------------------------------------------------------
# generation

def generate_sparp(items: Iterable[tuple[SymbolicContext, str, str]], ps4_mode: str = "entailment",
                   dropped: Optional[list] = None) -> list[QAInstance]:
    """Derive instances for ``(context, head, tail)`` questions, dropping unanswerable ones."""
    out = []
    for k, (ctx, h, t) in enumerate(items):
        qid = f"{ctx.id or k}:{h}->{t}"
        try:
            out.append(build_instance(ctx, h, t, qid, ps4_mode))
        except (EmptyAnswerError, NoPathError) as exc:
            log.info("dropped %s: %s", qid, exc)
            if dropped is not None:
                dropped.append((qid, str(exc)))
    return out


MAX_ATTEMPTS = 200


def generate_one(ps, hops: int, seed: int, index: int, ps4_mode: str = "entailment",
                 max_extra: int = 2) -> QAInstance:
    """The ``index``-th instance with ``hops`` links; dropped scenes are retried with new seeds."""
    ps = get_property_set(ps)
    for attempt in range(MAX_ATTEMPTS):
        child = derive_seed(seed, "scene", f"{ps.name}-{hops}-{index}-{attempt}")
        extra = random.Random(child).randint(0, max_extra)
        cid = f"{ps.name.lower()}-h{hops}-{index:05d}"
        scene = gen_scene(ps, hops + 1 + extra, child, n_links=hops, context_id=cid)
        try:
            return build_instance(scene.context, *scene.question, cid, ps4_mode)
        except EmptyAnswerError:
            continue
    raise RuntimeError(f"no answerable {ps.name} scene with {hops} hops after {MAX_ATTEMPTS} attempts")


def _generate_task(args):
    return generate_one(*args)


def generate_pool(ps, seed: int, per_hop: int, hops: Sequence[int] = range(1, 7),
                  ps4_mode: str = "entailment", workers: int = 1,
                  max_extra: int = 2) -> list[QAInstance]:
    """``per_hop`` instances for every hop count; order is independent of ``workers``."""
    ps = get_property_set(ps)
    tasks = [(ps.name, h, seed, i, ps4_mode, max_extra) for h in hops for i in range(per_hop)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_generate_task, tasks, chunksize=32))
    return [_generate_task(t) for t in tasks]


def pool_size_for(sizes: Sequence[int], n_hops: int) -> int:
    return sum(math.ceil(s / n_hops) for s in sizes)


# ---------------------------------------------------------------------------
# balanced sampling

def _quotas(size: int, hops: list[int]) -> dict[int, int]:
    base, extra = divmod(size, len(hops))
    return {h: base + (1 if i < extra else 0) for i, h in enumerate(hops)}


def sample_balanced(instances: Sequence[QAInstance], sizes: Sequence[int] = DEFAULT_SIZES, seed: int = 0,
                    names: Sequence[str] = SPLIT_NAMES) -> dict[str, DatasetSplit]:
    """Hop-balanced splits, disjoint by context id.

    Each split asks for ``size / #hops`` instances per hop.  When a hop bucket
    runs dry the missing instances are taken one at a time, round-robin, from
    the buckets that still have some, always topping up the least-filled one.
    """
    if len(sizes) != len(names):
        raise ValueError("need one size per split name")
    if any(s < 0 for s in sizes):
        raise ValueError("split sizes must be non-negative")
    if sum(sizes) > len(instances):
        raise InsufficientDataError(f"pool has {len(instances)} instances, {sum(sizes)} requested")
    buckets: dict[int, list] = defaultdict(list)
    for inst in sorted(instances, key=lambda i: i.id):
        buckets[inst.num_hops].append(inst)
    hops = sorted(buckets)
    for h in hops:
        random.Random(derive_seed(seed, "bucket", h)).shuffle(buckets[h])
    owner: dict[str, str] = {}
    cursor = {h: 0 for h in hops}

    def take(h: int, split: str):
        bucket = buckets[h]
        while cursor[h] < len(bucket):
            inst = bucket[cursor[h]]
            cursor[h] += 1
            cid = inst.context.id or inst.id
            if owner.setdefault(cid, split) == split:
                return inst
        return None

    splits = {}
    for name, size in zip(names, sizes):
        chosen = []
        taken = {h: 0 for h in hops}
        shortfall = 0
        for h, quota in _quotas(size, hops).items():
            for _ in range(quota):
                inst = take(h, name)
                if inst is None:
                    shortfall += 1
                else:
                    chosen.append(inst)
                    taken[h] += 1
        live = [h for h in hops if cursor[h] < len(buckets[h])]
        while shortfall and live:
            # round-robin over the remaining buckets, least-filled first
            h = min(live, key=lambda b: (taken[b], b))
            inst = take(h, name)
            if inst is None:
                live.remove(h)
                continue
            chosen.append(inst)
            taken[h] += 1
            shortfall -= 1
        if shortfall:
            raise InsufficientDataError(f"split {name!r} is {shortfall} instances short")
        splits[name] = DatasetSplit(name, sorted(chosen, key=lambda i: i.id), seed)
    return splits


def write_split(path, split: DatasetSplit) -> None:
    write_jsonl(path, (instance_record(i) for i in split.instances))


def read_records(path) -> list[dict]:
    return list(read_jsonl(Path(path)))
