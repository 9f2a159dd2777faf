import pytest

from spatialpaths.composition import EmptyAnswerError, context_inequalities, facts_from_relations, relations_between, spartun_closure
from spatialpaths.context import build_graph
from spatialpaths.pathgen import build_instance, derive_path, find_path
from spatialpaths.relations import RelationSet
from spatialpaths.scenes import box_relations, box_topology, gen_scene, point_relations

from helpers import PS_NAMES


def test_ps2_every_pair_matches_coordinates():
    scene = gen_scene("PS2", 3, 7)
    g = build_graph(scene.context)
    names = scene.context.entity_ids
    assert len(g.components()) == 1
    for h in names:
        for t in names:
            if h != t:
                path = derive_path(find_path(g, h, t), "PS2")
                assert path.links[-1].r_d == scene.truth[(h, t)]


@pytest.mark.parametrize("ps", PS_NAMES)
def test_two_entities_give_one_statement(ps):
    for seed in range(20):
        scene = gen_scene(ps, 2, seed)
        (t,) = scene.context.triples
        inst = build_instance(scene.context, t.head, t.tail)
        assert inst.answer == t.relations.without_magnitudes()


def _value(layout, var):
    name, which = var
    box = layout[name]
    axis = 0 if which[0] == "x" else 1
    return box[axis][0 if which[1] == "s" else 1]


def test_ps4_statements_hold_on_the_placement():
    for seed in range(200):
        scene = gen_scene("PS4", 2 + seed % 6, seed)
        for t in scene.context.triples:
            for u, v, strict in context_inequalities(t.head, t.relations, t.tail, "RC"):
                a, b = _value(scene.layout, u), _value(scene.layout, v)
                assert a < b if strict else a <= b


@pytest.mark.parametrize("ps", PS_NAMES)
def test_statements_are_true_of_the_layout(ps):
    for seed in range(150):
        scene = gen_scene(ps, 2 + seed % 6, seed)
        for t in scene.context.triples:
            assert t.relations.labels <= scene.truth[(t.head, t.tail)].labels
            if ps != "PS1":     # RC: the statement is everything that holds
                assert t.relations == (scene.truth[(t.head, t.tail)] if ps == "PS2"
                                       else scene.truth[(t.head, t.tail)].without_magnitudes())


@pytest.mark.parametrize("ps", PS_NAMES)
def test_answers_are_sound(ps):
    kept = 0
    for seed in range(300):
        scene = gen_scene(ps, 2 + seed % 5, seed)
        try:
            inst = build_instance(scene.context, *scene.question)
        except EmptyAnswerError:
            assert ps in ("PS3", "PS4")
            continue
        kept += 1
        truth = scene.truth[scene.question]
        assert inst.answer.labels <= truth.labels
        if ps == "PS2":
            assert inst.answer == truth.without_magnitudes()
        if ps == "PS1":
            facts = set()
            for t in scene.context.triples:
                facts |= facts_from_relations(t.head, t.relations, t.tail)
            assert inst.answer.labels <= relations_between(spartun_closure(facts), *scene.question).labels
    assert kept > 150


def test_ps1_chain_through_container_uses_combination():
    found = 0
    for seed in range(200):
        scene = gen_scene("PS1", 4, seed)
        inst = build_instance(scene.context, *scene.question)
        direct = set()
        for lk in inst.path.links:
            direct |= lk.stated.labels
        if any(lab in ("left", "right", "above", "below", "front", "behind") for lab in inst.answer.labels) \
                and any(lab in ("inside", "inside and touching", "contains", "contains and touches") for lab in direct):
            found += 1
    assert found > 0


def test_geometry_helpers():
    assert point_relations((0, 0), (2, -1)) == RelationSet.of("left", "above", magnitudes={"x": 2})
    assert point_relations((1, 1), (1, 1)) == RelationSet.of("overlapping")
    inner, outer = ((1, 2), (1, 2), (1, 2)), ((0, 4), (0, 4), (0, 4))
    assert box_topology(inner, outer) == "inside"
    assert box_topology(((0, 2), (1, 2), (1, 2)), outer) == "inside and touching"
    assert box_topology(outer, inner) == "contains"
    far = ((20, 21), (0, 1), (0, 1))
    assert box_relations(far, outer) == RelationSet.of("outside", "right", "far")
    assert box_topology(((4, 5), (0, 1), (0, 1)), outer) == "outside and touching"


def test_invalid_scene_sizes():
    with pytest.raises(ValueError):
        gen_scene("PS2", 1, 0)
    with pytest.raises(ValueError):
        gen_scene("PS2", 3, 0, n_links=3)


def test_scenes_are_deterministic():
    assert gen_scene("PS3", 5, 99) == gen_scene("PS3", 5, 99)
