import shutil
from importlib import resources

import pytest

from spatialpaths.dataset import instance_record
from spatialpaths.prompts import ASSETS_ENV, AssetStore, MissingAssetError, build_prompt, question_text
from spatialpaths.relations import LABELS

from helpers import corpus

MARKER = "to be of 1 unit distance"


def _dev(ps, n=12):
    return [instance_record(i) for i in corpus(ps, 40)[-n:]]


def test_quantified_sets_get_the_implicit_unit_paragraph():
    inst = corpus("PS2", 1)[0]
    assert MARKER in build_prompt("PS2", inst, k=0).system_text
    for ps in ("PS1", "PS3", "PS4"):
        assert MARKER not in build_prompt(ps, corpus(ps, 1)[0], k=0).system_text


def test_ps1_lists_all_labels():
    text = build_prompt("PS1", corpus("PS1", 1)[0], k=0).system_text
    choices = text.split("The possible spatial relations are: ")[1]
    for label in LABELS:
        assert label in choices
    assert "overlapping" not in build_prompt("PS4", corpus("PS4", 1)[0], k=0).system_text.split(
        "The possible spatial relations are: ")[1].split(".")[0]


def test_placeholders_are_all_filled():
    for ps in ("PS1", "PS2", "PS3", "PS4"):
        text = build_prompt(ps, corpus(ps, 1)[0], k=0).system_text
        assert "{" not in text and "}" not in text


def test_zero_shot_has_only_the_system_text():
    bundle = build_prompt("PS3", corpus("PS3", 1)[0], k=0)
    assert bundle.exemplars == ()
    assert [m["role"] for m in bundle.to_messages()] == ["system", "user"]


def test_exemplars_come_from_dev_and_are_seeded():
    inst = corpus("PS3", 1)[0]
    dev = _dev("PS3")
    a = build_prompt("PS3", inst, k=5, seed=1, dev=dev)
    b = build_prompt("PS3", inst, k=5, seed=1, dev=dev)
    c = build_prompt("PS3", inst, k=5, seed=2, dev=dev)
    assert a == b and len(a.exemplars) == 5
    assert a.exemplars != c.exemplars or a.system_text != c.system_text
    contexts = {" ".join(d["context_text"]) for d in dev}
    assert all(ex.context in contexts for ex in a.exemplars)
    assert all(ex.reasoning.startswith("Step 1:") for ex in a.exemplars)
    assert a.query[1] == question_text(*inst.question)


def test_not_enough_exemplars():
    with pytest.raises(ValueError):
        build_prompt("PS3", corpus("PS3", 1)[0], k=5, dev=_dev("PS3", 3))


def _copy_assets(tmp_path):
    src = resources.files("spatialpaths") / "assets"
    dst = tmp_path / "assets"
    shutil.copytree(str(src), dst)
    return dst


def test_missing_asset_is_named(tmp_path):
    root = _copy_assets(tmp_path)
    (root / "descriptions" / "QS").rename(root / "descriptions" / "gone")
    with pytest.raises(MissingAssetError) as err:
        build_prompt("PS2", corpus("PS2", 1)[0], k=0, assets=root)
    assert err.value.name.startswith("descriptions/QS/")
    (root / "implicit_quantification.txt").unlink()
    with pytest.raises(MissingAssetError) as err:
        build_prompt("PS3", corpus("PS3", 1)[0], k=0, assets=root)
    assert err.value.name == "implicit_quantification.txt"


def test_environment_override(tmp_path, monkeypatch):
    root = _copy_assets(tmp_path)
    (root / "fixed_orientation.txt").write_text("CUSTOM VIEWPOINT TEXT", encoding="utf-8")
    monkeypatch.setenv(ASSETS_ENV, str(root))
    assert AssetStore().root == root
    assert "CUSTOM VIEWPOINT TEXT" in build_prompt("PS3", corpus("PS3", 1)[0], k=0).system_text
