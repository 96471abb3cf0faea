import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.adjoint import e_star
from injquiver.errors import UnsupportedQuiver
from injquiver.generators import random_acyclic_quiver, random_injective, random_representation
from injquiver.homdim import (
    check_module_witness,
    dual_representation,
    ginjdim_bound,
    gorenstein_flat_test,
    gorenstein_injective_test,
    gorenstein_projective_test,
    injdim_representation,
    is_flat_representation,
    qf_module_witness,
    verify_duality,
)
from injquiver.injclass import baer_oracle, local_injectivity_test
from injquiver.quiver import AInfBoth, a_n, loop_quiver
from injquiver.rep import make_representation, zero_representation
from injquiver.ring import BaseRing, FinModule, ModuleMap

F2 = BaseRing.gf(2)
Z4 = BaseRing.zmod(2, 2)
A2 = a_n(2)
TWICE = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[2]]})  # Z/4 -2-> Z/4
HALF = make_representation(A2, Z4, {1: [1], 2: [1]}, {"a1": [[1]]})  # Z/2 -id-> Z/2
TOP = make_representation(A2, Z4, {2: [2]})  # 0 -> Z/4
ZERO = zero_representation(A2, Z4)
INJ = e_star(A2, 2, FinModule.free(Z4, 1))


@st.composite
def finite_reps(draw, max_vertices=4):
    rng = random.Random(draw(st.integers(0, 1_000_000)))
    ring = draw(st.sampled_from([F2, Z4]))
    Q = random_acyclic_quiver(rng, rng.randint(1, max_vertices), max_arrows=4)
    if rng.random() < 0.3:
        X = random_injective(Q, ring, rng, max_card=16)
        if X is not None:
            return X
    return random_representation(Q, ring, rng, max_card=8, zero_bias=0.2)


def test_dual_examples():
    D = dual_representation(TWICE)
    assert D.quiver.arrows[0].src == 2 and D.quiver.arrows[0].tgt == 1
    assert D.maps["a1"] == ModuleMap.scalar(D[1], 2)
    assert dual_representation(ZERO).is_zero


@given(finite_reps())
@settings(max_examples=60, deadline=None)
def test_double_dual_and_pairing(X):
    assert dual_representation(dual_representation(X)) == X
    assert verify_duality(X)


@pytest.mark.parametrize("X, flat", [(TOP, True), (TWICE, False), (ZERO, True), (HALF, False)])
def test_flat_examples(X, flat):
    v = is_flat_representation(X)
    assert v.flat is flat
    assert v.dual_injective is flat


@given(finite_reps(max_vertices=5))
@settings(max_examples=80, deadline=None)
def test_flat_iff_dual_injective(X):
    v = is_flat_representation(X)
    assert v.flat == local_injectivity_test(dual_representation(X)).is_injective


def test_flat_needs_left_rooted():
    L = make_representation(loop_quiver(), F2, {"v": 1}, {"x": [[1]]})
    with pytest.raises(UnsupportedQuiver):
        is_flat_representation(L)


@pytest.mark.parametrize(
    "X, sup, exact",
    [(INJ, 0, 0), (TWICE, 0, 1), (make_representation(A2, Z4, {1: [1]}), math.inf, math.inf)],
)
def test_injdim_examples(X, sup, exact):
    r = injdim_representation(X)
    assert (r.sup, r.exact) == (sup, exact)


def _recheck_resolution(report, is_injective):
    """Re-verify every cosyzygy step without going through the library's own exactness code."""
    for step in report.certificate.payload["steps"]:
        assert is_injective(step.injective)
        assert (step.projection @ step.embedding).is_zero
        for v in step.source.quiver.vertices:
            assert step.embedding[v].is_injective() and step.projection[v].is_surjective()
            assert step.source[v].cardinality * step.cokernel[v].cardinality == step.injective[v].cardinality


@given(finite_reps(max_vertices=3))
@settings(max_examples=60, deadline=None)
def test_injdim_within_bound(X):
    r = injdim_representation(X)
    if r.sup == math.inf:
        assert r.exact == math.inf
        return
    assert r.exact is not None and r.exact <= r.sup + 1
    _recheck_resolution(r, lambda I: local_injectivity_test(I).is_injective)


def test_stored_witness_reaches_the_bound():
    r = injdim_representation(TWICE)
    assert r.exact == r.sup + 1
    _recheck_resolution(r, baer_oracle)


def test_gorenstein_injective_examples():
    v = gorenstein_injective_test(HALF, witness=True)
    assert v.holds and not local_injectivity_test(HALF).is_injective
    assert v.witness and v.witness.kind == "complete_resolution"
    bad = gorenstein_injective_test(TWICE)
    assert not bad.holds and bad.failure["vertex"] == 1
    assert gorenstein_injective_test(INJ).holds


@pytest.mark.parametrize("X, holds", [(TOP, True), (TWICE, False), (ZERO, True)])
def test_gorenstein_projective_examples(X, holds):
    assert gorenstein_projective_test(X).holds is holds


def test_gorenstein_projective_rejects_the_line():
    from injquiver.rep import chain, constant_chain
    from injquiver.rep.chain import ISO
    from injquiver.rep.forest import LineRep

    E = FinModule.free(Z4, 1)
    line = LineRep(constant_chain(E), chain(Z4, [], [], ISO, [E], reversed=True))
    assert line.quiver == AInfBoth()
    with pytest.raises(UnsupportedQuiver):
        gorenstein_projective_test(line)


@pytest.mark.parametrize("X, holds", [(HALF, True), (TWICE, False), (ZERO, True)])
def test_gorenstein_flat_examples(X, holds):
    v = gorenstein_flat_test(X)
    assert v.holds is holds
    assert v.routes_agree


@given(finite_reps())
@settings(max_examples=80, deadline=None)
def test_gorenstein_classes_nest(X):
    gi = gorenstein_injective_test(X)
    if local_injectivity_test(X).is_injective:
        assert gi.holds
    if is_flat_representation(X).flat:
        assert gorenstein_flat_test(X).holds
    assert gorenstein_flat_test(X).routes_agree
    if gi.holds:
        # the source-map conditions every QF ring must satisfy
        from injquiver.rep import source_map

        assert all(source_map(X, v).is_surjective() for v in X.quiver.vertices)


@pytest.mark.parametrize("X, exact", [(TWICE, 1), (HALF, 0), (INJ, 0)])
def test_ginjdim_examples(X, exact):
    r = ginjdim_bound(X)
    assert r.bound == 1 and r.exact == exact
    assert r.exact <= r.bound


def test_ginjdim_certificate_is_short_exact():
    cert = ginjdim_bound(TWICE).certificate
    I, C = cert.payload["injective"], cert.payload["cokernel"]
    assert baer_oracle(I)
    assert gorenstein_injective_test(C).holds
    for v in A2.vertices:
        assert TWICE[v].cardinality * C[v].cardinality == I[v].cardinality


@pytest.mark.parametrize("ring", [Z4, BaseRing.zmod(3, 2), BaseRing.zmod(2, 3), F2])
def test_module_witness_complexes_are_exact(ring):
    for e in range(ring.k + 1):
        assert check_module_witness(qf_module_witness(FinModule.cyclic(ring, e)))
