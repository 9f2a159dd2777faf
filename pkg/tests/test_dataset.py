import json

import pytest

from spatialpaths.dataset import (
    DatasetSplit, InsufficientDataError, context_from_record, derive_seed, generate_one, generate_pool,
    generate_sparp, instance_from_record, instance_record, sample_balanced, write_split,
)
from spatialpaths.context import parse_story
from spatialpaths.relations import RelationSet
from spatialpaths.verbalize import extract_final_answer, path_steps
from spatialpaths.verifier import verify_path

from helpers import PS_NAMES, corpus


class _Stub:
    """Just enough of an instance for sampling."""

    def __init__(self, i, hops, cid=None):
        self.id = f"q{i:05d}"
        self.num_hops = hops
        self.context = type("C", (), {"id": cid or f"c{i:05d}"})()


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(42, "scene", "a") == derive_seed(42, "scene", "a")
    assert len({derive_seed(42, p, i) for p in ("scene", "prompt") for i in range(50)}) == 100


def test_uniform_pool_balances():
    pool = [_Stub(i, 1 + i % 6) for i in range(6000)]
    splits = sample_balanced(pool, (2000, 500, 1000), seed=1)
    for name, size in zip(("train", "dev", "test"), (2000, 500, 1000)):
        counts = splits[name].hop_counts()
        assert sum(counts.values()) == size
        assert max(counts.values()) - min(counts.values()) <= 1
    assert splits["train"].hop_counts()[1] in (333, 334)
    used = [i.context.id for s in splits.values() for i in s.instances]
    assert len(used) == len(set(used))


def test_exhausted_bucket_is_refilled():
    pool = [_Stub(i, h) for i, h in enumerate([1, 2, 3, 4, 6] * 300)]    # no hop-5 instances
    pool += [_Stub(10_000 + i, 5) for i in range(10)]
    splits = sample_balanced(pool, (600, 60, 60), seed=0)
    counts = splits["train"].hop_counts()
    assert sum(counts.values()) == 600
    assert counts[5] == 10
    others = [c for h, c in counts.items() if h != 5]
    assert max(others) - min(others) <= 1


def test_shared_contexts_stay_in_one_split():
    pool = [_Stub(i, 1 + i % 3, cid=f"ctx{i // 2}") for i in range(600)]
    splits = sample_balanced(pool, (100, 50, 50), seed=3)
    owner = {}
    for name, split in splits.items():
        for inst in split.instances:
            assert owner.setdefault(inst.context.id, name) == name


def test_insufficient_data():
    with pytest.raises(InsufficientDataError):
        sample_balanced([_Stub(i, 1) for i in range(10)], (5, 5, 5))


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError):
        DatasetSplit("train", [_Stub(1, 1), _Stub(1, 2)], 0)


def test_generate_sparp_drops_unanswerable():
    ok = parse_story(["A is left of B.", "B is above C."], "PS3", "ok")
    bad = parse_story(["A is right of B.", "B is left of C."], "PS3", "bad")
    apart = parse_story(["A is right of B.", "C is left of D."], "PS3", "apart")
    dropped = []
    kept = generate_sparp([(ok, "A", "C"), (bad, "A", "C"), (apart, "A", "D")], dropped=dropped)
    assert [i.answer for i in kept] == [RelationSet.of("left", "above")]
    assert [qid for qid, _ in dropped] == ["bad:A->C", "apart:A->D"]


def test_quantified_instances_are_kept():
    ctx = parse_story(["A is 2 units right of B.", "B is left of C."], "PS2", "q")
    (inst,) = generate_sparp([(ctx, "A", "C")])
    assert inst.answer == RelationSet.of("right")


@pytest.mark.parametrize("ps", PS_NAMES)
def test_records_round_trip(ps):
    for inst in corpus(ps, 100):
        rec = json.loads(json.dumps(instance_record(inst)))
        again = instance_from_record(rec)
        assert again.answer == inst.answer and again.path == inst.path
        assert context_from_record(rec).triples == inst.context.triples
        assert extract_final_answer("\n".join(rec["reasoning"])) == inst.answer
        assert verify_path(path_steps(inst.path, ps), inst.context, ps, inst.answer) == []
        assert set(rec) >= {"id", "property_set", "context_text", "triples", "question", "answer",
                            "reasoning", "num_hops"}


def test_tampered_answer_is_caught():
    rec = instance_record(corpus("PS2", 1)[0])
    rec["answer"] = ["overlapping"] if rec["answer"] != ["overlapping"] else ["left"]
    with pytest.raises(ValueError):
        instance_from_record(rec)


def test_split_files_are_byte_identical(tmp_path):
    for run in ("a", "b"):
        pool = generate_pool("PS3", 5, 20, hops=range(1, 4), workers=1 if run == "a" else 2)
        splits = sample_balanced(pool, (30, 6, 12), seed=5)
        (tmp_path / run).mkdir()
        for name, split in splits.items():
            write_split(tmp_path / run / f"{name}.jsonl", split)
    for name in ("train", "dev", "test"):
        assert (tmp_path / "a" / f"{name}.jsonl").read_bytes() == (tmp_path / "b" / f"{name}.jsonl").read_bytes()


def test_generate_one_hits_requested_hops():
    for hops in range(1, 7):
        assert generate_one("PS4", hops, 0, 0).num_hops == hops
