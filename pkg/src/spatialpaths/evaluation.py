"""Scoring predictions against gold splits."""

from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .relations import get_property_set
from .verbalize import NoAnswerFound, NoStepsFound, extract_answer_labels, parse_reasoning_text
from .verifier import observed_num_hops


class PredictionMismatchError(ValueError):
    """Prediction ids do not line up with the gold split."""

    def __init__(self, missing: Sequence[str], unknown: Sequence[str]):
        self.missing = sorted(missing)
        self.unknown = sorted(unknown)
        parts = []
        if self.missing:
            parts.append(f"{len(self.missing)} gold ids without a prediction: {self.missing[:10]}")
        if self.unknown:
            parts.append(f"{len(self.unknown)} prediction ids not in gold: {self.unknown[:10]}")
        super().__init__("; ".join(parts))


@dataclass(frozen=True)
class Prediction:
    id: str
    output_text: str
    extracted: Optional[frozenset]   # None when no answer could be read
    observed_hops: int


def exact_match(pred, gold) -> int:
    if pred is None:
        return 0
    return int(frozenset(pred) == frozenset(gold))


def label_counts(pairs: Iterable[tuple], labels: Sequence[str]) -> dict[str, list[int]]:
    """Per-label [TP, FP, FN] over (pred, gold) pairs; a None prediction counts as empty."""
    counts = {lab: [0, 0, 0] for lab in labels}
    for pred, gold in pairs:
        pred = frozenset(pred or ())
        gold = frozenset(gold)
        for lab in labels:
            p, g = lab in pred, lab in gold
            if p and g:
                counts[lab][0] += 1
            elif p:
                counts[lab][1] += 1
            elif g:
                counts[lab][2] += 1
    return counts


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def per_label_f1(pairs, labels) -> dict[str, float]:
    """F1 of each label that occurs in some gold or predicted set."""
    return {lab: _f1(*c) for lab, c in label_counts(pairs, labels).items() if any(c)}


def macro_f1(pairs, labels) -> float:
    scores = per_label_f1(list(pairs), labels)
    return sum(scores.values()) / len(scores) if scores else 0.0


def pearson_hops(observed: Sequence[int], gold: Sequence[int]) -> Optional[float]:
    """Pearson correlation, or None when either side has no variance."""
    if len(observed) != len(gold):
        raise ValueError(f"length mismatch: {len(observed)} observed vs {len(gold)} gold")
    if len(observed) < 2 or len(set(observed)) < 2 or len(set(gold)) < 2:
        return None
    rho = statistics.correlation([float(x) for x in observed], [float(x) for x in gold])
    return max(-1.0, min(1.0, rho))


def read_prediction(rec: dict, labels: Sequence[str]) -> Prediction:
    text = rec.get("output_text") or ""
    try:
        extracted = frozenset(extract_answer_labels(text)) & frozenset(labels)
        extracted = extracted or None
    except NoAnswerFound:
        extracted = None
    try:
        hops = observed_num_hops(parse_reasoning_text(text))
    except NoStepsFound:
        hops = 0
    return Prediction(rec["id"], text, extracted, hops)


@dataclass
class EvalReport:
    property_set: str
    n: int
    unparseable: int
    accuracy: float
    macro_f1: float
    pearson_hops: Optional[float]
    per_hop: dict = field(default_factory=dict)
    per_label: dict = field(default_factory=dict)
    included_labels: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "property_set": self.property_set,
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "pearson_hops": self.pearson_hops,
            "counts": {"n": self.n, "unparseable": self.unparseable},
            "per_hop": {str(h): v for h, v in self.per_hop.items()},
            "per_label": self.per_label,
            "included_labels": self.included_labels,
        }


def evaluate(predictions: Iterable[dict], gold: Iterable[dict], ps) -> EvalReport:
    """Score prediction records ``{"id", "output_text"}`` against gold dataset records."""
    ps = get_property_set(ps)
    labels = ps.labels
    gold = {g["id"]: g for g in gold}
    preds = {}
    for rec in predictions:
        preds[rec["id"]] = rec
    missing, unknown = set(gold) - set(preds), set(preds) - set(gold)
    if missing or unknown:
        raise PredictionMismatchError(missing, unknown)
    ids = sorted(gold)
    parsed = {i: read_prediction(preds[i], labels) for i in ids}
    pairs = [(parsed[i].extracted, frozenset(gold[i]["answer"])) for i in ids]
    hops = [gold[i]["num_hops"] for i in ids]
    by_hop = defaultdict(list)
    for h, pair in zip(hops, pairs):
        by_hop[h].append(pair)
    n = len(ids)
    per_label = per_label_f1(pairs, labels)
    return EvalReport(
        property_set=ps.name,
        n=n,
        unparseable=sum(1 for p in parsed.values() if p.extracted is None),
        accuracy=sum(exact_match(p, g) for p, g in pairs) / n if n else 0.0,
        macro_f1=sum(per_label.values()) / len(per_label) if per_label else 0.0,
        pearson_hops=pearson_hops([parsed[i].observed_hops for i in ids], hops),
        per_hop={h: {"n": len(ps_), "accuracy": sum(exact_match(p, g) for p, g in ps_) / len(ps_),
                     "macro_f1": macro_f1(ps_, labels)}
                 for h, ps_ in sorted(by_hop.items())},
        per_label=per_label,
        included_labels=[lab for lab in labels if lab in per_label],
    )


def write_breakdown_csv(report: EvalReport, path) -> None:
    """Per-hop and per-label tables as one long CSV (table, key, metric, value)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["table", "key", "metric", "value"])
        for h, row in report.per_hop.items():
            for metric, value in row.items():
                w.writerow(["per_hop", h, metric, value])
        for lab, value in report.per_label.items():
            w.writerow(["per_label", lab, "f1", value])
