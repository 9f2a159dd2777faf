"""Command-line entry points: scene, generate, prompt, eval, verify, stats."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from .context import emit, ingest_annotated, read_jsonl, write_jsonl
from .relations import PROPERTY_SETS

log = logging.getLogger("spatialpaths")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _ps(text: str) -> str:
    name = text.upper()
    if name not in PROPERTY_SETS:
        raise argparse.ArgumentTypeError(f"unknown property set {text!r} (choose from PS1..PS4)")
    return name


def _sizes(text: str) -> tuple:
    try:
        sizes = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}") from None
    if len(sizes) != 3 or any(s <= 0 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be three positive integers: train,dev,test")
    return sizes


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _non_negative(text: str) -> int:
    value = int(text) if text.lstrip("-").isdigit() else -1
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spatialpaths", description="Spatial reasoning path datasets, prompts and scoring.")
    p.add_argument("-v", "--verbose", action="store_true", help="log dropped instances and progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("scene", help="synthesize contexts")
    s.add_argument("--ps", type=_ps, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--entities", type=_positive, default=4, help="entities per scene (at least 2)")
    s.add_argument("--count", type=_positive, default=10)
    s.add_argument("--out", type=Path, required=True)

    g = sub.add_parser("generate", help="build instances with reasoning paths and split them")
    g.add_argument("--ps", type=_ps, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sizes", type=_sizes, default=(2000, 500, 1000), help="train,dev,test")
    g.add_argument("--max-hops", type=_positive, default=6)
    g.add_argument("--input", type=Path, help="annotated contexts with questions instead of synthetic scenes")
    g.add_argument("--ps4-semantics", choices=("entailment", "literal"), default="entailment")
    g.add_argument("--workers", type=_positive, default=1)
    g.add_argument("--out", type=Path, required=True, help="output directory")

    pr = sub.add_parser("prompt", help="emit few-shot prompt bundles")
    pr.add_argument("--ps", type=_ps, required=True)
    pr.add_argument("--input", type=Path, required=True, help="instances to prompt for")
    pr.add_argument("--dev", type=Path, help="dev split for exemplars")
    pr.add_argument("--k", type=_non_negative, default=5)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--assets", type=Path, help="description asset directory")
    pr.add_argument("--out", type=Path, required=True)

    e = sub.add_parser("eval", help="score predictions")
    e.add_argument("--ps", type=_ps, required=True)
    e.add_argument("--gold", type=Path, required=True)
    e.add_argument("--pred", type=Path, required=True)
    e.add_argument("--report", type=Path, required=True)
    e.add_argument("--csv", type=Path, help="also write the breakdown tables as CSV")

    v = sub.add_parser("verify", help="audit reasoning chains in predictions")
    v.add_argument("--ps", type=_ps, required=True)
    v.add_argument("--gold", type=Path, required=True)
    v.add_argument("--pred", type=Path, required=True)
    v.add_argument("--out", type=Path, required=True)

    st = sub.add_parser("stats", help="per-hop and per-label summary of a dataset file")
    st.add_argument("--input", type=Path, required=True)
    st.add_argument("--out", type=Path, help="write JSON here instead of standard output")
    return p


# ---------------------------------------------------------------------------

def cmd_scene(args) -> None:
    from .dataset import derive_seed
    from .scenes import gen_scene

    if args.entities < 2:
        raise ValueError("--entities must be at least 2")
    records = []
    for i in range(args.count):
        cid = f"{args.ps.lower()}-scene-{i:05d}"
        scene = gen_scene(args.ps, args.entities, derive_seed(args.seed, "scene-cli", cid), context_id=cid)
        rec = emit(scene.context)
        rec["question"] = {"head": scene.question[0], "tail": scene.question[1]}
        records.append(rec)
    write_jsonl(args.out, records)


def _questions(path: Path, ps: str):
    for rec in read_jsonl(path):
        rec = dict(rec, property_set=rec.get("property_set", ps))
        if rec["property_set"] != ps:
            raise ValueError(f"context {rec.get('id')} is {rec['property_set']}, expected {ps}")
        q = rec.get("question")
        if not q:
            raise ValueError(f"context {rec.get('id')} has no question")
        yield ingest_annotated(rec), q["head"], q["tail"]


def cmd_generate(args) -> None:
    from .dataset import generate_pool, generate_sparp, pool_size_for, sample_balanced, write_split

    hops = range(1, args.max_hops + 1)
    if args.input:
        dropped: list = []
        pool = generate_sparp(_questions(args.input, args.ps), args.ps4_semantics, dropped)
        for qid, reason in dropped:
            log.info("dropped %s: %s", qid, reason)
    else:
        pool = generate_pool(args.ps, args.seed, pool_size_for(args.sizes, len(hops)), hops,
                             args.ps4_semantics, args.workers)
    splits = sample_balanced(pool, args.sizes, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, split in splits.items():
        write_split(args.out / f"{name}.jsonl", split)


def cmd_prompt(args) -> None:
    from .prompts import AssetStore, build_prompt

    if args.k and not args.dev:
        raise ValueError("--dev is required when --k is positive")
    store = AssetStore(args.assets)
    dev = list(read_jsonl(args.dev)) if args.dev else []
    bundles = [build_prompt(args.ps, rec, args.k, args.seed, dev, store).to_json()
               for rec in read_jsonl(args.input)]
    write_jsonl(args.out, bundles)


def cmd_eval(args) -> None:
    from .evaluation import evaluate, write_breakdown_csv

    report = evaluate(read_jsonl(args.pred), read_jsonl(args.gold), args.ps)
    args.report.write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    if args.csv:
        write_breakdown_csv(report, args.csv)


def verify_record(gold: dict, output_text: str, ps: str) -> dict:
    from .dataset import context_from_record, gold_answer
    from .verbalize import NoStepsFound, parse_reasoning_text
    from .verifier import observed_num_hops, verify_path

    try:
        steps = parse_reasoning_text(output_text)
    except NoStepsFound:
        return {"id": gold["id"], "findings": [], "clean": False, "observed_hops": 0, "parsed": False}
    findings = verify_path(steps, context_from_record(gold), ps, gold_answer(gold))
    return {"id": gold["id"], "findings": [f.to_json() for f in findings], "clean": not findings,
            "observed_hops": observed_num_hops(steps), "parsed": True}


def cmd_verify(args) -> None:
    gold = {g["id"]: g for g in read_jsonl(args.gold)}
    out = []
    for rec in read_jsonl(args.pred):
        if rec["id"] not in gold:
            raise ValueError(f"prediction {rec['id']!r} has no gold instance")
        out.append(verify_record(gold[rec["id"]], rec.get("output_text") or "", args.ps))
    write_jsonl(args.out, sorted(out, key=lambda r: r["id"]))


def dataset_stats(records) -> dict:
    hops, labels, sets = Counter(), Counter(), Counter()
    n = 0
    for rec in records:
        n += 1
        hops[rec["num_hops"]] += 1
        sets[rec["property_set"]] += 1
        labels.update(rec["answer"])
    return {"n": n, "property_sets": dict(sorted(sets.items())),
            "per_hop": {str(h): c for h, c in sorted(hops.items())},
            "per_label": dict(sorted(labels.items()))}


def cmd_stats(args) -> None:
    text = json.dumps(dataset_stats(read_jsonl(args.input)), indent=2) + "\n"
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


COMMANDS = {"scene": cmd_scene, "generate": cmd_generate, "prompt": cmd_prompt,
            "eval": cmd_eval, "verify": cmd_verify, "stats": cmd_stats}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"spatialpaths {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, TypeError) as exc:
        print(f"spatialpaths {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
