"""Few-shot prompt assembly from the system template and description assets."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .relations import PropertySet, get_property_set

ASSETS_ENV = "SPARC_ASSETS"
N_VARIANTS = 5

PROPERTY_NAMES = {
    "PO": "Point Objects",
    "EO": "Extended Objects",
    "RI": "Relation Incomplete",
    "RC": "Relation Complete",
    "QS": "Quantitatively Specified",
    "QU": "Quantitatively Unspecified",
}
POINT_OF_VIEW = "Fixed Orientation Point of View"


class MissingAssetError(FileNotFoundError):
    """A description asset is absent; ``name`` is its path relative to the asset root."""

    def __init__(self, name: str, root):
        super().__init__(f"missing prompt asset {name!r} under {root}")
        self.name = name
        self.root = root


class AssetStore:
    """Reads prompt assets from a directory, ``$SPARC_ASSETS``, or the packaged copy."""

    def __init__(self, directory=None):
        directory = directory or os.environ.get(ASSETS_ENV)
        self.root = Path(directory) if directory else resources.files("spatialpaths") / "assets"

    def read(self, name: str) -> str:
        path = self.root / name
        try:
            return path.read_text(encoding="utf-8")
        except (FileNotFoundError, NotADirectoryError):
            raise MissingAssetError(name, self.root) from None

    def description(self, prop: str, variant: int) -> str:
        return self.read(f"descriptions/{prop}/{variant}.txt").strip()


@dataclass(frozen=True)
class Exemplar:
    context: str
    question: str
    reasoning: str
    answer: str


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    exemplars: tuple = ()
    query: tuple = ()
    instance_id: str = ""

    def to_messages(self) -> list[dict]:
        msgs = [{"role": "system", "content": self.system_text}]
        for ex in self.exemplars:
            msgs.append({"role": "user", "content": f"Context: {ex.context}\nQuestion: {ex.question}"})
            msgs.append({"role": "assistant", "content": f"{ex.reasoning}\nAnswer: {ex.answer}"})
        if self.query:
            ctx, q = self.query
            msgs.append({"role": "user", "content": f"Context: {ctx}\nQuestion: {q}"})
        return msgs

    def to_json(self) -> dict:
        return {
            "id": self.instance_id,
            "system_text": self.system_text,
            "exemplars": [ex.__dict__ for ex in self.exemplars],
            "query": {"context": self.query[0], "question": self.query[1]} if self.query else None,
            "messages": self.to_messages(),
        }


def question_text(head: str, tail: str) -> str:
    return f"What is the relation of {head} to {tail}?"


def _record_view(inst) -> dict:
    """Accept either a dataset record or a QAInstance."""
    if isinstance(inst, dict):
        return inst
    from .dataset import instance_record
    return instance_record(inst)


def _exemplar(rec: dict) -> Exemplar:
    q = rec["question"]
    return Exemplar(
        context=" ".join(rec["context_text"]),
        question=question_text(q["head"], q["tail"]),
        reasoning="\n".join(rec["reasoning"][:-1]),
        answer=", ".join(rec["answer"]),
    )


def system_text(ps, rng: random.Random, assets: Optional[AssetStore] = None) -> str:
    """Template filled with one randomly chosen description variant per property."""
    ps: PropertySet = get_property_set(ps)
    assets = assets or AssetStore()
    template = assets.read("system_template.txt")
    implicit = assets.read("implicit_quantification.txt").rstrip("\n")
    fields = {
        "point_of_view_type": POINT_OF_VIEW,
        "point_of_view_type_desc": assets.read("fixed_orientation.txt").strip(),
        "point_of_view_type_default": "",
        "spatial_relation_choices": ", ".join(ps.labels),
    }
    for slot, prop in (("entity_type", ps.objects), ("quantitative_type", ps.quantification),
                       ("relation_type", ps.completeness)):
        fields[slot] = PROPERTY_NAMES[prop]
        fields[f"{slot}_desc"] = assets.description(prop, rng.randint(1, N_VARIANTS))
        fields[f"{slot}_default"] = ""
    if ps.quantification == "QS":
        fields["quantitative_type_default"] = implicit
    return template.format(**fields).strip()


def build_prompt(ps, instance, k: int = 5, seed: int = 0, dev: Sequence = (),
                 assets=None) -> PromptBundle:
    """Prompt for ``instance`` with ``k`` exemplars drawn from ``dev``.

    Exemplars are resampled per instance from a seed derived from ``seed`` and
    the instance id.
    """
    from .dataset import derive_seed

    ps = get_property_set(ps)
    if k < 0:
        raise ValueError("k must be non-negative")
    store = assets if isinstance(assets, AssetStore) else AssetStore(assets)
    rec = _record_view(instance)
    rng = random.Random(derive_seed(seed, "prompt", rec["id"]))
    text = system_text(ps, rng, store)
    exemplars = ()
    if k:
        pool = [_record_view(d) for d in dev]
        pool = [d for d in pool if d["id"] != rec["id"] and d["property_set"] == ps.name]
        if len(pool) < k:
            raise ValueError(f"need {k} dev exemplars for {ps.name}, have {len(pool)}")
        exemplars = tuple(_exemplar(d) for d in rng.sample(pool, k))
    q = rec["question"]
    return PromptBundle(text, exemplars, (" ".join(rec["context_text"]), question_text(q["head"], q["tail"])),
                        rec["id"])
