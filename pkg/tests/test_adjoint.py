import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.adjoint import colim, e_star, e_star_finite, verify_adjunction
from injquiver.errors import UnboundedPathSet
from injquiver.generators import random_acyclic_quiver, random_module, random_representation, random_tree
from injquiver.injclass import local_injectivity_test, ray_injectivity_test
from injquiver.quiver import AInfPlus, a_n, loop_quiver, paths, ray_as_forest, sample_barren_tree
from injquiver.rep import chain, make_representation
from injquiver.rep.chain import ISO, PERIODIC, ZERO
from injquiver.rep.finite import HomReps
from injquiver.ring import BaseRing, FinModule, ModuleMap, hom_module

F2 = BaseRing.gf(2)
Z4 = BaseRing.zmod(2, 2)
A2 = a_n(2)
k = FinModule.cyclic(F2, 1)


def test_e_star_examples():
    X = e_star(A2, 2, k)
    assert X == make_representation(A2, F2, {1: 1, 2: 1}, {"a1": [[1]]})
    Y = e_star(A2, 1, k)
    assert Y[1] == k and Y[2].is_zero
    assert e_star(A2, 2, FinModule.zero(F2)).is_zero


def test_e_star_refuses_cycles():
    with pytest.raises(UnboundedPathSet):
        e_star(loop_quiver(), "v", k)


def test_e_star_takes_one_factor_per_path():
    from injquiver.quiver import Quiver

    Q = Quiver.build([1, 2], [("f", 1, 2), ("g", 1, 2)])
    X = e_star(Q, 2, k)
    assert X[1].rank == 2 and X[2].rank == 1
    assert X.maps["f"].matrix.tolist() == [[1, 0]]
    assert X.maps["g"].matrix.tolist() == [[0, 1]]


@pytest.mark.parametrize(
    "X, limit",
    [
        (chain(Z4, [], [], ISO, [[2]]), (2,)),
        (chain(Z4, [[2]], [None], ZERO), ()),
        (chain(Z4, [], [], PERIODIC, [[2]], [[[2]]]), ()),
        (chain(Z4, [[1]], [[[2]]], ISO, [[2]]), (2,)),
    ],
)
def test_colim_examples(X, limit):
    assert colim(X).exps == limit


def test_adjunction_examples():
    KK = e_star(A2, 2, k)
    cert = verify_adjunction(KK, 2, k)
    assert cert and cert.payload["size"] == 2
    zero = verify_adjunction(KK, 2, FinModule.zero(F2))
    assert zero.payload["size"] == 1
    F4 = BaseRing.gf(4)
    k4 = FinModule.cyclic(F4, 1)
    assert verify_adjunction(e_star(A2, 2, k4), 2, k4).payload["size"] == 4


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_adjunction_cardinality_on_random_instances(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, Z4, BaseRing.gf(3)])
    Q = random_acyclic_quiver(rng, rng.randint(1, 3), max_arrows=3)
    X = random_representation(Q, ring, rng, max_card=4)
    v = rng.choice(Q.vertices)
    M = random_module(ring, rng, max_card=4)
    es = e_star_finite(Q, v, M)
    assert HomReps(X, es.rep).cardinality == hom_module(X[v], M).module.cardinality
    assert verify_adjunction(X, v, M)


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_injective_seed_gives_a_locally_injective_representation(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, Z4])
    Q = random_acyclic_quiver(rng, rng.randint(1, 4))
    E = FinModule.free(ring, rng.randint(0, 2))
    X = e_star(Q, rng.choice(Q.vertices), E)
    assert local_injectivity_test(X).is_injective


@given(st.integers(0, 100_000), st.integers(1, 7))
@settings(max_examples=60, deadline=None)
def test_tree_e_star_lives_on_the_root_path(seed, n):
    rng = random.Random(seed)
    T = random_tree(rng, n, outward=True)
    v = rng.choice(T.vertices)
    E = FinModule.cyclic(Z4, 2)
    X = e_star(T, v, E)
    for u in T.vertices:
        expected = E if paths(T, u, v) else FinModule.zero(Z4)
        assert X[u] == expected
    for a in T.arrows:
        if not X[a.tgt].is_zero:
            assert X.maps[a.id] == ModuleMap.identity(E)


def test_ray_target_is_the_constant_chain():
    E = FinModule.cyclic(Z4, 2)
    X = e_star(AInfPlus(), ("inf", 0), E)
    assert all(X.stage(n) == E and X.map(n) == ModuleMap.identity(E) for n in range(6))
    assert ray_injectivity_test(X).injective
    F = e_star(ray_as_forest(), ("inf", "w"), E)
    assert F.rays["w"] == X


def test_barren_tree_ray_target():
    E = FinModule.cyclic(Z4, 2)
    X = e_star(sample_barren_tree(), ("inf", "wb2"), E)
    on_path = {"r", "b", "b2"}
    for u in sample_barren_tree().core.vertices:
        assert X.core[u] == (E if u in on_path else FinModule.zero(Z4))
    assert X.rays["wb2"].stage(7) == E
    assert X.rays["wa1"].is_zero
    assert local_injectivity_test(X).is_injective
