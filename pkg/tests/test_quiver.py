import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.errors import NotATree, UnboundedPathSet, ValidationError
from injquiver.generators import random_acyclic_quiver, random_tree
from injquiver.quiver import (
    AInfBoth,
    AInfPlus,
    BarrenForest,
    BranchingTree,
    Quiver,
    Ray,
    a_n,
    classify_source_injective,
    dumps,
    is_barren,
    is_left_rooted,
    level_sizes,
    loop_quiver,
    opposite,
    paths,
    quiver_from_json,
    quiver_to_json,
    ray_as_forest,
    sample_barren_tree,
    stratify,
    tree_structure,
)

A2 = a_n(2)


@st.composite
def quivers(draw, max_vertices=6, max_arrows=8):
    n = draw(st.integers(1, max_vertices))
    vs = list(range(n))
    m = draw(st.integers(0, max_arrows))
    ends = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), min_size=m, max_size=m))
    return Quiver.build(vs, [(f"e{i}", s, t) for i, (s, t) in enumerate(ends)])


def has_cycle(Q: Quiver) -> bool:
    """Three-colour depth-first search, independent of the library's cycle code."""
    colour = {v: 0 for v in Q.vertices}

    def visit(u):
        colour[u] = 1
        for a in Q.arrows:
            if a.src != u:
                continue
            if colour[a.tgt] == 1 or (colour[a.tgt] == 0 and visit(a.tgt)):
                return True
        colour[u] = 2
        return False

    return any(colour[v] == 0 and visit(v) for v in Q.vertices)


@pytest.mark.parametrize(
    "Q, w, v, bound, expected",
    [
        (A2, 1, 2, None, [("a1",)]),
        (A2, 2, 1, None, []),
        (A2, 1, 1, None, [()]),
        (loop_quiver(), "v", "v", 3, [(), ("x",), ("x", "x"), ("x", "x", "x")]),
    ],
)
def test_paths_examples(Q, w, v, bound, expected):
    assert paths(Q, w, v, bound) == expected


def test_paths_unbounded_on_cycle():
    with pytest.raises(UnboundedPathSet):
        paths(loop_quiver(), "v", "v")


def test_parallel_arrows_give_two_paths():
    Q = Quiver.build([1, 2], [("f", 1, 2), ("g", 1, 2)])
    assert paths(Q, 1, 2) == [("f",), ("g",)]


def test_stratify_examples():
    s = stratify(A2)
    assert s.stages == (frozenset({2}), frozenset({1}))
    assert s.right_rooted
    loop = stratify(loop_quiver())
    assert loop.stages == () and loop.residual == frozenset({"v"})
    assert not loop.right_rooted
    assert not stratify(AInfPlus()).right_rooted
    assert stratify(AInfPlus(reversed=True)).right_rooted


@given(quivers())
@settings(max_examples=150, deadline=None)
def test_right_rooted_iff_acyclic(Q):
    s = stratify(Q)
    assert s.right_rooted == (not has_cycle(Q))
    seen = set()
    for stage in s.stages:
        assert not seen & stage
        seen |= stage
    residual = s.residual if isinstance(s.residual, frozenset) else frozenset()
    assert seen | residual == set(Q.vertices)
    if s.stages:
        assert all(not Q.out_arrows(v) for v in s.stages[0])


@given(quivers())
@settings(max_examples=100, deadline=None)
def test_stratify_shifts_after_removing_sinks(Q):
    s = stratify(Q)
    if not s.stages:
        return
    keep = [v for v in Q.vertices if v not in s.stages[0]]
    rest = Quiver.build(keep, [(a.id, a.src, a.tgt) for a in Q.arrows if a.src in keep and a.tgt in keep])
    assert stratify(rest).stages == s.stages[1:]


@pytest.mark.parametrize(
    "T, barren, index, sizes",
    [
        (AInfPlus(), True, 1, (1,)),
        (sample_barren_tree(), True, 3, (1, 2, 4)),
        (BranchingTree(2), False, None, (1, 2, 4, 8, 16, 32)),
        (a_n(3), True, 4, (1, 1, 1)),
    ],
)
def test_is_barren_examples(T, barren, index, sizes):
    r = is_barren(T)
    assert (r.barren, r.stabilization_index, r.state_sizes[: len(sizes)]) == (barren, index, sizes)


def test_barren_tree_levels_stabilize_at_four():
    assert level_sizes(sample_barren_tree(), 10) == [1, 2, 4] + [4] * 7


def test_finite_tree_level_sizes_vanish():
    assert level_sizes(a_n(3), 5) == [1, 1, 1, 0, 0]


@given(st.integers(0, 10_000), st.integers(1, 8))
@settings(max_examples=60, deadline=None)
def test_barren_claim_agrees_with_direct_levels(seed, n):
    T = random_tree(random.Random(seed), n, outward=True)
    r = is_barren(T)
    depth = 2 * r.stabilization_index + n
    sizes = level_sizes(T, depth)
    k = r.stabilization_index
    assert all(x == sizes[k - 1] for x in sizes[k - 1:])


def test_not_a_tree():
    Q = Quiver.build([1, 2, 3], [("a", 1, 3), ("b", 2, 3)])
    with pytest.raises(NotATree):
        tree_structure(Q)
    with pytest.raises(NotATree):
        is_barren(Q)


@pytest.mark.parametrize(
    "Q, verdict, reason",
    [
        (A2, "yes", "right-rooted"),
        (AInfBoth(), "yes", "a-inf-both"),
        (AInfPlus(), "yes", "barren-forest"),
        (sample_barren_tree(), "yes", "barren-forest"),
        (loop_quiver(), "unknown", None),
        (BranchingTree(2), "unknown", None),
    ],
)
def test_classify_examples(Q, verdict, reason):
    c = classify_source_injective(Q)
    assert (c.verdict, c.reason) == (verdict, reason)


def test_loop_classification_carries_the_counterexample_note():
    note = classify_source_injective(loop_quiver()).note
    assert "not divisible" in note and "k[x]" in note


@given(quivers())
@settings(max_examples=100, deadline=None)
def test_right_rooted_verdict_implies_empty_residual(Q):
    c = classify_source_injective(Q)
    assert c.verdict in ("yes", "unknown")
    if c.reason == "right-rooted":
        assert stratify(Q).right_rooted


def test_opposite_examples():
    assert opposite(A2).arrows[0].src == 2 and opposite(A2).arrows[0].tgt == 1
    assert opposite(loop_quiver()) == loop_quiver()


@given(quivers())
@settings(max_examples=100, deadline=None)
def test_opposite_is_an_involution(Q):
    assert opposite(opposite(Q)) == Q
    assert is_left_rooted(Q) == stratify(opposite(Q)).right_rooted


@pytest.mark.parametrize("Q", [AInfPlus(), AInfBoth(), sample_barren_tree(), BranchingTree(3)])
def test_descriptor_opposite_is_an_involution(Q):
    assert opposite(opposite(Q)) == Q


def test_tree_structure_examples():
    t = tree_structure(A2)
    assert t.root == 1 and t.paths == {1: (), 2: ("a1",)} and t.vertices_at_infinity == ()
    ray = tree_structure(AInfPlus())
    assert ray.root == 0 and len(ray.vertices_at_infinity) == 1
    big = tree_structure(sample_barren_tree())
    assert big.root == "r"
    assert len(set(big.vertices_at_infinity)) == 4


def test_barren_forest_validation():
    with pytest.raises(ValidationError):
        BarrenForest(A2, (Ray(7, "w"),))
    with pytest.raises(ValidationError):
        BarrenForest(A2, (Ray(1, "w"), Ray(2, "w")))


@pytest.mark.parametrize(
    "Q", [A2, loop_quiver(), AInfPlus(), AInfBoth(reversed=True), sample_barren_tree(), ray_as_forest()]
)
def test_json_round_trip_is_bit_exact(Q):
    text = dumps(Q)
    back = quiver_from_json(json.loads(text))
    assert back == Q
    assert dumps(back) == text


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_random_quiver_json_round_trip(seed, n):
    Q = random_acyclic_quiver(random.Random(seed), n)
    assert quiver_from_json(quiver_to_json(Q)) == Q


@pytest.mark.parametrize(
    "obj, message",
    [
        ({"vertices": [1], "arrows": [{"id": "a", "src": 1, "tgt": 2}]}, "unknown vertex"),
        ({"vertices": [1, 1], "arrows": []}, "duplicate"),
        ({"arrows": []}, "vertices"),
    ],
)
def test_json_rejects_malformed_quivers(obj, message):
    with pytest.raises(ValidationError, match=message):
        quiver_from_json(obj)
