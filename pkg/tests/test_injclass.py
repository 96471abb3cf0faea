import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.adjoint import e_star
from injquiver.errors import NotInjective, UnsupportedQuiver, ValidationError
from injquiver.generators import random_chain, random_injective, random_representation, random_tree
from injquiver.injclass import (
    baer_oracle,
    decompose_injective_tree,
    essential_check,
    extend_morphism,
    local_injectivity_test,
    ray_envelope,
    ray_injectivity_test,
    split_injective,
)
from injquiver.injclass.local import INJECTIVE, LOCAL_PASS_UNKNOWN, NOT_INJECTIVE
from injquiver.quiver import Quiver, a_n, loop_quiver
from injquiver.rep import RepMorphism, chain, constant_chain, make_representation, torsion_subrep, zero_representation
from injquiver.rep.chain import ISO, PERIODIC, chain_quotient
from injquiver.rep.finite import HomReps, rep_kernel
from injquiver.ring import BaseRing, FinModule, ModuleMap

F2 = BaseRing.gf(2)
Z4 = BaseRing.zmod(2, 2)
A2 = a_n(2)
k = FinModule.cyclic(F2, 1)
KK = e_star(A2, 2, k)
ORACLE_QUIVERS = [A2, a_n(3), Quiver.build([1, 2, 3], [("a", 1, 3), ("b", 2, 3)])]


@pytest.mark.parametrize(
    "X, overall, condition",
    [
        (KK, INJECTIVE, None),
        (make_representation(A2, F2, {2: 1}), NOT_INJECTIVE, "source map not surjective"),
        (make_representation(A2, Z4, {1: [1], 2: [1]}, {"a1": [[1]]}), NOT_INJECTIVE, "vertex module not injective"),
        (make_representation(loop_quiver(), F2, {"v": 1}, {"x": [[1]]}), LOCAL_PASS_UNKNOWN, None),
    ],
)
def test_local_test_examples(X, overall, condition):
    v = local_injectivity_test(X)
    assert v.overall == overall
    assert (v.failure or {}).get("condition") == condition


@pytest.mark.parametrize(
    "X, expected",
    [(KK, True), (make_representation(A2, F2, {2: 1}), False), (zero_representation(A2, F2), True)],
)
def test_baer_examples(X, expected):
    assert bool(baer_oracle(X)) is expected


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_local_test_agrees_with_baer(seed):
    rng = random.Random(seed)
    Q = rng.choice(ORACLE_QUIVERS)
    ring = rng.choice([F2, Z4])
    X = random_injective(Q, ring, rng, max_card=16) if rng.random() < 0.5 else None
    if X is None:
        X = random_representation(Q, ring, rng, max_card=4, zero_bias=0.3)
    assert local_injectivity_test(X).is_injective == bool(baer_oracle(X))


def _z4_extension_problem():
    X = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[1]]})
    S = make_representation(A2, Z4, {1: [1], 2: [1]}, {"a1": [[1]]})
    g = RepMorphism(S, X, {v: ModuleMap(S[v], X[v], [[2]]) for v in (1, 2)})
    return S, X, g


def test_extend_examples():
    S, X, g = _z4_extension_problem()
    t = extend_morphism(g, g)
    assert t == X.identity()
    assert extend_morphism(g, S.zero_to(X)).is_zero
    h = X.identity()
    assert extend_morphism(X.identity(), h) == h


def test_extend_rejects_bad_targets():
    S, X, g = _z4_extension_problem()
    bad = make_representation(A2, Z4, {1: [1], 2: [1]}, {"a1": [[1]]})
    h = RepMorphism(S, bad, {v: ModuleMap.identity(S[v]) for v in (1, 2)})
    with pytest.raises(NotInjective, match="local criteria"):
        extend_morphism(g, h)
    L = make_representation(loop_quiver(), F2, {"v": 1}, {"x": [[1]]})
    with pytest.raises(UnsupportedQuiver):
        extend_morphism(L.identity(), L.identity())


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_extensions_satisfy_both_laws(seed):
    rng = random.Random(seed)
    Q = rng.choice(ORACLE_QUIVERS)
    ring = rng.choice([F2, Z4])
    E = random_injective(Q, ring, rng, max_card=16)
    if E is None:
        return
    X = random_representation(Q, ring, rng, max_card=8)
    Y = random_representation(Q, ring, rng, max_card=8)
    H = HomReps(X, Y)
    eta = H.to_morphism([rng.randrange(ring.size) for _ in range(H.module.rank)])
    S, g = rep_kernel(eta)
    HE = HomReps(S, E)
    h = HE.to_morphism([rng.randrange(ring.size) for _ in range(HE.module.rank)])
    t = extend_morphism(g, h)
    assert t @ g == h
    for a in Q.arrows:
        assert E.maps[a.id] @ t[a.src] == t[a.tgt] @ X.maps[a.id]


def test_decompose_examples():
    X = make_representation(A2, F2, {1: 2, 2: 1}, {"a1": [[1, 0]]})
    assert decompose_injective_tree(X).multiset() == {1: 1, 2: 1}
    assert decompose_injective_tree(zero_representation(A2, F2)).multiset() == {}
    assert decompose_injective_tree(constant_chain(k)).multiset() == {("inf", "w"): 1}


def test_decompose_refuses_non_fields_and_non_injectives():
    with pytest.raises(ValidationError):
        decompose_injective_tree(e_star(A2, 2, FinModule.cyclic(Z4, 2)))
    with pytest.raises(NotInjective):
        decompose_injective_tree(make_representation(A2, F2, {2: 1}))


@given(st.integers(0, 100_000), st.integers(1, 6))
@settings(max_examples=50, deadline=None)
def test_decompose_round_trip_on_trees(seed, n):
    rng = random.Random(seed)
    T = random_tree(rng, n)
    X = random_injective(T, F2, rng, max_card=16, parts=4)
    if X is None:
        return
    d = decompose_injective_tree(X)
    assert d.iso.is_iso()
    assert d.iso.source == X and d.iso.target == d.rebuild
    for v in T.vertices:
        assert sum(s.multiplicity * e_star(T, s.target, s.seed)[v].rank for s in d.summands) == X[v].rank


@pytest.mark.parametrize(
    "X, everything",
    [
        (chain(Z4, [], [], ISO, [[2]]), False),
        (chain(Z4, [[2], [1]], [[[1]], None], "eventually_zero"), True),
        (chain(Z4, [], [], PERIODIC, [[2]], [[[2]]]), True),
    ],
)
def test_torsion_examples(X, everything):
    T, inc = torsion_subrep(X)
    if everything:
        assert all(inc[n].is_iso() for n in range(X.window + 2))
    else:
        assert T.is_zero


@given(st.integers(0, 100_000), st.sampled_from([F2, Z4]))
@settings(max_examples=50, deadline=None)
def test_torsion_is_idempotent_and_leaves_a_torsion_free_quotient(seed, ring):
    X = random_chain(ring, random.Random(seed), max_card=8)
    T, inc = torsion_subrep(X)
    TT, _ = torsion_subrep(T)
    assert all(TT.stage(n) == T.stage(n) for n in range(T.window + 3))
    C, _ = chain_quotient(X, inc)
    assert all(C.map(n).is_injective() for n in range(C.window + 1))


def test_envelope_example():
    R = FinModule.free(Z4, 1)
    env = ray_envelope([R, R])
    assert [env.envelope.stage(n).exps for n in range(4)] == [(2, 2), (2,), (), ()]
    assert env.verdict.injective and env.essential


def test_split_and_ray_test_examples():
    sp = split_injective(constant_chain(k))
    assert sp.torsion.is_zero and sp.free == constant_chain(k)
    v = ray_injectivity_test(chain(F2, [0], [None], ISO, [1]))
    assert not v.injective and v.failing_index == 0


def test_essential_examples():
    one = Quiver.build(["p"])
    S = make_representation(one, Z4, {"p": [1]})
    X = make_representation(one, Z4, {"p": [2]})
    assert essential_check(RepMorphism(S, X, {"p": ModuleMap(S["p"], X["p"], [[2]])}))
    assert essential_check(X.identity())
    assert not essential_check(zero_representation(one, Z4).zero_to(X))


@given(st.integers(0, 100_000), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_e_star_of_a_field_is_indecomposable(seed, n):
    rng = random.Random(seed)
    T = random_tree(rng, n, outward=True)
    X = e_star(T, rng.choice(T.vertices), k)
    idempotents = [e for e in HomReps(X, X).elements() if e @ e == e]
    assert len(idempotents) == 2
