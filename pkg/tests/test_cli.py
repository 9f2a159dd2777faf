import json

import pytest

from spatialpaths.cli import run


def _lines(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    assert run(["generate", "--ps", "ps2", "--seed", "42", "--sizes", "60,12,24", "--out", str(out)]) == 0
    return out


def test_generate_writes_three_balanced_splits(data):
    for name, size in (("train", 60), ("dev", 12), ("test", 24)):
        recs = _lines(data / f"{name}.jsonl")
        assert len(recs) == size
        assert [r["id"] for r in recs] == sorted(r["id"] for r in recs)


def test_generate_is_deterministic_across_workers(data, tmp_path):
    assert run(["generate", "--ps", "ps2", "--seed", "42", "--sizes", "60,12,24", "--workers", "3",
                "--out", str(tmp_path)]) == 0
    for name in ("train", "dev", "test"):
        assert (tmp_path / f"{name}.jsonl").read_bytes() == (data / f"{name}.jsonl").read_bytes()


def test_eval_verify_prompt_stats(data, tmp_path, capsys):
    gold = _lines(data / "test.jsonl")
    pred = tmp_path / "preds.jsonl"
    pred.write_text("".join(json.dumps({"id": g["id"], "output_text": "\n".join(g["reasoning"])}) + "\n"
                            for g in gold), encoding="utf-8")
    report = tmp_path / "report.json"
    assert run(["eval", "--ps", "ps2", "--gold", str(data / "test.jsonl"), "--pred", str(pred),
                "--report", str(report), "--csv", str(tmp_path / "b.csv")]) == 0
    rep = json.loads(report.read_text())
    assert rep["accuracy"] == 1.0 and rep["counts"] == {"n": 24, "unparseable": 0}

    findings = tmp_path / "findings.jsonl"
    assert run(["verify", "--ps", "ps2", "--gold", str(data / "test.jsonl"), "--pred", str(pred),
                "--out", str(findings)]) == 0
    assert all(r["clean"] and r["findings"] == [] for r in _lines(findings))

    prompts = tmp_path / "prompts.jsonl"
    assert run(["prompt", "--ps", "ps2", "--input", str(data / "test.jsonl"), "--dev", str(data / "dev.jsonl"),
                "--k", "3", "--out", str(prompts)]) == 0
    bundles = _lines(prompts)
    assert len(bundles) == 24 and all(len(b["exemplars"]) == 3 for b in bundles)

    assert run(["stats", "--input", str(data / "train.jsonl")]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["n"] == 60 and sum(stats["per_hop"].values()) == 60


def test_scene(tmp_path):
    out = tmp_path / "scenes.jsonl"
    assert run(["scene", "--ps", "ps1", "--entities", "4", "--count", "3", "--out", str(out)]) == 0
    recs = _lines(out)
    assert len(recs) == 3 and all(r["question"]["head"] for r in recs)


def test_generate_from_annotated_contexts(tmp_path):
    ctx = tmp_path / "ctx.jsonl"
    assert run(["scene", "--ps", "ps3", "--entities", "3", "--count", "40", "--out", str(ctx)]) == 0
    assert run(["generate", "--ps", "ps3", "--input", str(ctx), "--sizes", "5,2,2", "--out", str(tmp_path / "o")]) == 0
    assert len(_lines(tmp_path / "o" / "train.jsonl")) == 5


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["generate", "--ps", "ps9", "--out", "x"],
    ["generate", "--ps", "ps2", "--sizes", "1,2", "--out", "x"],
    ["generate", "--ps", "ps2", "--sizes", "0,2,3", "--out", "x"],
    ["eval", "--ps", "ps2"],
    ["generate", "--ps", "ps2", "--out", "x", "--frobnicate"],
])
def test_validation_errors_exit_1(argv, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 1
    assert "usage" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_io_errors_exit_2(tmp_path):
    assert run(["stats", "--input", str(tmp_path / "missing.jsonl")]) == 2


def test_help_exits_cleanly(capsys):
    for cmd in ("scene", "generate", "prompt", "eval", "verify", "stats"):
        assert run([cmd, "--help"]) == 0
    assert "--sizes" in capsys.readouterr().out


def test_insufficient_pool_is_a_validation_error(tmp_path):
    ctx = tmp_path / "ctx.jsonl"
    assert run(["scene", "--ps", "ps2", "--entities", "3", "--count", "3", "--out", str(ctx)]) == 0
    assert run(["generate", "--ps", "ps2", "--input", str(ctx), "--sizes", "5,5,5", "--out", str(tmp_path / "o")]) == 1
