import pytest

from spatialpaths.context import (
    SchemaError, UnparseableSentenceError, build_graph, emit, ingest_annotated, normalize_entity,
    parse_sentence, parse_story, read_jsonl, write_jsonl,
)
from spatialpaths.relations import ContradictionError, RelationSet
from spatialpaths.scenes import gen_scene

from helpers import PS_NAMES


def _one(sentence):
    (t,) = parse_sentence(sentence)
    return t.head, t.relations, t.tail


def test_plain_relation_sentence():
    assert _one("BB is to the right of AA.") == ("BB", RelationSet.of("right"), "AA")


def test_clock_sentence():
    (t,) = parse_sentence("P is above X at 10 o'clock.")
    assert (t.head, t.relations, t.tail, t.clock) == ("P", RelationSet.of("above", "left"), "X", 10)


def test_horizontal_sentence_uses_second_clause():
    assert _one("AA and BB are horizontal and AA is to the right of BB.") == ("AA", RelationSet.of("right"), "BB")


def test_quantified_sentence():
    assert _one("A is 2 units above and 3 units left of B.") == (
        "A", RelationSet.of("above", "left", magnitudes={"y": 2, "x": 3}), "B")


def test_unknown_sentence_fails_loudly():
    with pytest.raises(UnparseableSentenceError):
        parse_sentence("The weather is nice today.")


def test_labels_outside_property_set_are_rejected():
    with pytest.raises(UnparseableSentenceError):
        parse_story(["A is inside B."], "PS3")


def test_entity_normalization_keeps_case():
    assert normalize_entity("the  Tiny White  rectangle") == "Tiny White rectangle"
    assert normalize_entity("theatre") == "theatre"


def test_annotation_from_inverse_view():
    ctx = ingest_annotated({
        "id": "c", "text": ["Box EEE has a tiny white rectangle."], "entities": ["box EEE", "tiny white rectangle"],
        "triples": [{"head": "tiny white rectangle", "relations": ["NTPP"], "tail": "box EEE"}],
        "property_set": "PS1"})
    (t,) = ctx.triples
    assert (t.head, t.relations, t.tail) == ("tiny white rectangle", RelationSet.of("inside"), "box EEE")


def test_empty_context_is_valid():
    ctx = ingest_annotated({"id": "e", "text": [], "entities": [], "triples": [], "property_set": "PS2"})
    assert ctx.triples == () and build_graph(ctx).number_of_edges() == 0


def test_schema_errors():
    with pytest.raises(SchemaError):
        ingest_annotated({"id": "e", "text": [], "entities": [], "property_set": "PS2"})
    with pytest.raises(SchemaError) as err:
        ingest_annotated({"id": "e", "text": [], "entities": ["A", "B"], "property_set": "PS2",
                          "triples": [{"head": "A", "relations": ["left"]}]})
    assert "tail" in err.value.missing


def test_contradictory_parallel_statements():
    with pytest.raises(ContradictionError):
        parse_story(["A is left of B.", "B is left of A."], "PS3")


def test_graph_shapes():
    g = build_graph(parse_story(["A is left of B.", "B is above C."], "PS3"))
    assert g.neighbors("B") == {"A", "C"}
    g = build_graph(parse_story(["A is left of B.", "C is above D."], "PS3"))
    assert len(g.components()) == 2


def test_parallel_statements_merge_into_one_edge():
    ctx = parse_story(["A is left of B.", "B is below A."], "PS3")
    g = build_graph(ctx)
    assert g.number_of_edges() == 1
    assert g.edge("A", "B").merged("A", "B") == RelationSet.of("left", "above")


@pytest.mark.parametrize("ps", PS_NAMES)
def test_generated_text_parses_and_round_trips(ps, tmp_path):
    for seed in range(40):
        ctx = gen_scene(ps, 2 + seed % 5, seed, context_id=f"s{seed}").context
        again = parse_story(list(ctx.text), ps, ctx.id)
        assert [(t.head, t.relations, t.tail, t.clock) for t in again.triples] == \
               [(t.head, t.relations, t.tail, t.clock) for t in ctx.triples]
        assert ingest_annotated(emit(ctx)) == ctx
        assert build_graph(ctx).number_of_edges() <= len(ctx.triples)
    path = tmp_path / "ctx.jsonl"
    write_jsonl(path, [emit(ctx)])
    assert ingest_annotated(next(read_jsonl(path))) == ctx
