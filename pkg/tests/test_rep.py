import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.errors import BudgetExceeded, ShapeMismatch, ValidationError
from injquiver.generators import random_chain, random_representation
from injquiver.quiver import Quiver, a_n, loop_quiver, sample_barren_tree
from injquiver.rep import (
    RepMorphism,
    chain,
    make_representation,
    rep_cokernel,
    rep_direct_sum,
    rep_from_json,
    rep_kernel,
    rep_to_json,
    sink_map,
    source_map,
    zero_representation,
)
from injquiver.rep.chain import ISO, PERIODIC, ZERO
from injquiver.rep.finite import HomReps, hom_reps, rep_image
from injquiver.ring import BaseRing, FinModule, ModuleMap, hom_module

F2 = BaseRing.gf(2)
Z4 = BaseRing.zmod(2, 2)
A2, A3 = a_n(2), a_n(3)
KK = make_representation(A2, F2, {1: 1, 2: 1}, {"a1": [[1]]})
SMALL_QUIVERS = [A2, A3, Quiver.build([1, 2, 3], [("a", 1, 3), ("b", 2, 3)]),
                 Quiver.build([1, 2], [("f", 1, 2), ("g", 1, 2)])]


def brute_hom_count(X, Y):
    """Try every tuple of vertex maps and keep the natural ones."""
    Q = X.quiver
    per_vertex = [list(hom_module(X[v], Y[v]).elements()) for v in Q.vertices]
    count = 0
    for comps in itertools.product(*per_vertex):
        phi = dict(zip(Q.vertices, comps))
        count += all(Y.maps[a.id] @ phi[a.src] == phi[a.tgt] @ X.maps[a.id] for a in Q.arrows)
    return count


@st.composite
def small_pairs(draw):
    Q = draw(st.sampled_from(SMALL_QUIVERS))
    ring = draw(st.sampled_from([F2, Z4]))
    rng = random.Random(draw(st.integers(0, 10_000)))
    X = random_representation(Q, ring, rng, max_card=4, zero_bias=0.2)
    Y = random_representation(Q, ring, rng, max_card=4, zero_bias=0.2)
    return X, Y


def test_make_representation_examples():
    assert KK.maps["a1"] == ModuleMap.identity(KK[1])
    ok = make_representation(A2, Z4, {1: [2], 2: [1]}, {"a1": [[1]]})
    assert ok.maps["a1"].matrix.tolist() == [[1]]
    with pytest.raises(ShapeMismatch):
        make_representation(A2, Z4, {1: [2], 2: [1]}, {"a1": [[1], [0]]})
    with pytest.raises(ValidationError):
        make_representation(A2, F2, {7: 1})


def test_chain_with_iso_tail():
    c = chain(Z4, [[2]], [None], ISO, [[2]])
    assert c.stage(0).exps == (2,) and c.stage(10).exps == (2,)
    assert c.map(5) == ModuleMap.identity(c.stage(5))


def test_chain_json_without_tail_is_underspecified():
    obj = rep_to_json(chain(Z4, [], [], ISO, [[2]]))
    del obj["tail"]
    with pytest.raises(ValidationError, match="tail underspecified"):
        rep_from_json(obj)


def test_source_map_examples():
    X = make_representation(A2, F2, {1: 2, 2: 1}, {"a1": [[1, 0]]})
    assert source_map(X, 1).matrix.tolist() == [[1, 0]]
    f2 = source_map(X, 2)
    assert f2.codomain.is_zero and f2.domain == X[2]
    Y = make_representation(loop_quiver(), Z4, {"v": [2]}, {"x": [[2]]})
    assert source_map(Y, "v") == ModuleMap.scalar(Y["v"], 2)


def test_sink_map_examples():
    assert sink_map(KK, 2) == ModuleMap.identity(KK[2])
    g1 = sink_map(KK, 1)
    assert g1.domain.is_zero and g1.codomain == KK[1]
    P = SMALL_QUIVERS[3]
    X = make_representation(P, F2, {1: 1, 2: 2}, {"f": [[1], [0]], "g": [[0], [1]]})
    assert sink_map(X, 2).matrix.tolist() == [[1, 0], [0, 1]]


def test_kernel_and_cokernel_examples():
    K, _ = rep_kernel(KK.identity())
    assert K.is_zero
    C, _ = rep_cokernel(zero_representation(A2, F2).zero_to(KK))
    assert C == KK
    X = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[1]]})
    Y = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[2]]})
    eta = RepMorphism(X, Y, {1: ModuleMap.identity(X[1]), 2: ModuleMap.scalar(X[2], 2)})
    K, inc = rep_kernel(eta)
    assert K[1].is_zero and K[2].exps == (1,)
    assert (eta @ inc).is_zero


def test_non_natural_morphism_rejected():
    X = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[1]]})
    Y = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[2]]})
    with pytest.raises(ValidationError):
        RepMorphism(X, Y, {1: ModuleMap.identity(X[1]), 2: ModuleMap.identity(X[2])})


def test_hom_examples():
    assert len(hom_reps(KK, KK)) == 2
    Z = zero_representation(A2, F2)
    assert [m.is_zero for m in hom_reps(KK, Z)] == [True]
    assert [m.is_zero for m in hom_reps(Z, KK)] == [True]


def test_hom_budget():
    X = make_representation(A2, F2, {1: 3, 2: 3}, {"a1": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    with pytest.raises(BudgetExceeded):
        hom_reps(X, X, budget=100)


@given(small_pairs())
@settings(max_examples=60, deadline=None)
def test_hom_matches_brute_force_and_is_natural(pair):
    X, Y = pair
    H = HomReps(X, Y)
    assert H.cardinality == brute_hom_count(X, Y)
    for eta in itertools.islice(H.elements(), 20):
        for a in X.quiver.arrows:
            assert Y.maps[a.id] @ eta[a.src] == eta[a.tgt] @ X.maps[a.id]


@given(small_pairs(), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_hom_out_of_a_sum_is_a_product(pair, seed):
    X, Y = pair
    X2 = random_representation(X.quiver, X.ring, random.Random(seed), max_card=4)
    S = rep_direct_sum([X, X2]).rep
    assert HomReps(S, Y).cardinality == HomReps(X, Y).cardinality * HomReps(X2, Y).cardinality


@given(small_pairs())
@settings(max_examples=40, deadline=None)
def test_kernel_cokernel_image_vertexwise(pair):
    X, Y = pair
    H = HomReps(X, Y)
    rng = random.Random(H.cardinality)
    coords = [rng.randrange(X.ring.size) for _ in range(H.module.rank)]
    eta = H.to_morphism(coords)
    K, inc = rep_kernel(eta)
    C, proj = rep_cokernel(eta)
    I, _ = rep_image(eta)
    for v in X.quiver.vertices:
        zeros = {x for x in X[v].elements() if not any(eta[v](x))}
        assert {tuple(inc[v](k)) for k in K[v].elements()} == zeros
        assert (proj @ eta)[v].is_zero and proj[v].is_surjective()
        # |X| = |ker| * |im| and |Y| = |im| * |coker| at every vertex
        assert X[v].cardinality == K[v].cardinality * I[v].cardinality
        assert Y[v].cardinality == I[v].cardinality * C[v].cardinality


@given(small_pairs())
@settings(max_examples=30, deadline=None)
def test_kernel_universal_property(pair):
    X, Y = pair
    H = HomReps(X, Y)
    eta = H.to_morphism([1] * H.module.rank) if H.module.rank else X.zero_to(Y)
    K, inc = rep_kernel(eta)
    # every map into X killed by eta factors uniquely through the kernel
    for T in (K, X):
        for phi in itertools.islice(HomReps(T, X).elements(), 30):
            factors = [psi for psi in HomReps(T, K).elements() if inc @ psi == phi]
            assert len(factors) == ((eta @ phi).is_zero)


@given(st.integers(0, 10_000), st.sampled_from([F2, Z4]))
@settings(max_examples=40, deadline=None)
def test_tail_materialization_is_stable(seed, ring):
    c = random_chain(ring, random.Random(seed), max_card=8)
    d = c.tail.start + 2 * c.tail.period
    short, long = c.truncate(d), c.truncate(d + 5)
    for n in range(d):
        assert short[n] == long[n]
    for n in range(d - 1):
        assert short.maps[f"r{n}"] == long.maps[f"r{n}"]
    assert c.reperiod(c.tail.start + 1, 2 * c.tail.period).truncate(d + 5) == long


@pytest.mark.parametrize(
    "kind, tail_modules, tail_maps, limit",
    [(ISO, [[2]], (), (2,)), (ZERO, (), (), ()), (PERIODIC, [[2]], [[[2]]], ())],
)
def test_chain_tail_kinds(kind, tail_modules, tail_maps, limit):
    from injquiver.rep import colim_along_ray

    c = chain(Z4, [], [], kind, tail_modules, tail_maps)
    assert colim_along_ray(c).module.exps == limit


@given(small_pairs())
@settings(max_examples=40, deadline=None)
def test_finite_json_round_trip(pair):
    X, _ = pair
    text = json.dumps(rep_to_json(X), sort_keys=True)
    assert rep_from_json(json.loads(text)) == X


def test_forest_json_round_trip():
    from injquiver.adjoint import e_star

    X = e_star(sample_barren_tree(), ("inf", "wa1"), FinModule.cyclic(Z4, 2))
    back = rep_from_json(json.loads(json.dumps(rep_to_json(X))))
    assert rep_to_json(back) == rep_to_json(X)


def test_json_unknown_vertex_key_rejected():
    obj = rep_to_json(KK)
    obj["modules"]["9"] = 1
    with pytest.raises(ValidationError, match="unknown key"):
        rep_from_json(obj)
