import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injquiver.errors import ShapeMismatch
from injquiver.ring import (
    BaseRing,
    FinModule,
    ModuleMap,
    character_pairing,
    dual_map,
    hom_module,
    injective_hull,
    kernel,
    linear_solve,
    module_classify,
    pontryagin_dual,
    smith_normal_form,
    split_epi_witness,
)

Z4 = BaseRing.zmod(2, 2)
F2 = BaseRing.gf(2)
RINGS = [F2, BaseRing.gf(3), BaseRing.gf(4), Z4, BaseRing.zmod(3, 2), BaseRing.zmod(2, 3)]


def cyc(ring, e):
    return FinModule.cyclic(ring, e)


@pytest.mark.parametrize(
    "A, diag",
    [
        ([[2, 4], [6, 8]], [2, 4]),
        (np.eye(3, dtype=int).tolist(), [1, 1, 1]),
        ([[0]], [0]),
        ([[0, 6], [4, 0]], [2, 12]),
    ],
)
def test_smith_examples(A, diag):
    D, U, V = smith_normal_form(A)
    assert np.diag(D).tolist() == diag
    assert (U @ np.array(A, dtype=object) @ V == D).all()


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=2, max_size=3))
@settings(max_examples=60, deadline=None)
def test_smith_divisibility_and_invariants(rows):
    A = np.array(rows, dtype=object)
    D, U, V = smith_normal_form(A)
    assert (U @ A @ V == D).all()
    d = [int(x) for x in np.diag(D)]
    assert all(x >= 0 for x in d)
    assert all(b % a == 0 if a else b == 0 for a, b in zip(d, d[1:]))
    # first invariant factor is the gcd of all entries
    g = math.gcd(*[abs(int(x)) for x in A.flat])
    assert d[0] == g


def test_linear_solve_examples():
    f = ModuleMap.scalar(cyc(Z4, 2), 2)
    assert linear_solve(f, [2]).tolist() == [1]
    assert linear_solve(f, [1]) is None
    z = ModuleMap.zero(cyc(Z4, 2), cyc(Z4, 2))
    assert linear_solve(z, [0]).tolist() == [0]


@given(st.sampled_from(RINGS[3:]), st.data())
@settings(max_examples=40, deadline=None)
def test_linear_solve_matches_enumeration(ring, data):
    exps = st.lists(st.integers(1, ring.k), min_size=1, max_size=2)
    M = FinModule.of(ring, data.draw(exps))
    N = FinModule.of(ring, data.draw(exps))
    hom = hom_module(M, N)
    f = hom.to_map(data.draw(st.lists(st.integers(0, ring.size - 1), min_size=len(hom), max_size=len(hom))))
    image = {tuple(f(x)) for x in M.elements()}
    b = tuple(data.draw(st.sampled_from(list(map(tuple, N.elements())))))
    x = linear_solve(f, b)
    assert (x is not None) == (b in image)
    if x is not None:
        assert tuple(f(x)) == b
        # least solution in lexicographic order
        sols = [tuple(y) for y in M.elements() if tuple(f(y)) == b]
        assert tuple(int(t) for t in x) == min(sols)


@pytest.mark.parametrize(
    "ring, exps, injective, injdim",
    [
        (Z4, [1], False, math.inf),
        (Z4, [2], True, 0),
        (F2, [1, 1, 1], True, 0),
        (BaseRing.zmod(3, 2), [2, 1], False, math.inf),
    ],
)
def test_module_classify(ring, exps, injective, injdim):
    c = module_classify(FinModule.of(ring, exps))
    assert c.is_injective is injective
    assert c.is_flat is injective
    assert c.injdim == injdim


def test_split_epi_examples():
    M = cyc(Z4, 2)
    cert = split_epi_witness(ModuleMap.identity(M))
    assert cert and cert.payload["section"] == ModuleMap.identity(M)
    fail = split_epi_witness(ModuleMap.scalar(M, 2))
    assert not fail and fail.reason == "not surjective"
    S = FinModule.of(Z4, [2, 2])
    proj = ModuleMap(S, M, [[1, 0]])
    g = split_epi_witness(proj).payload["section"]
    assert g.matrix.tolist() == [[1], [0]]


def test_surjection_without_section():
    # Z/4 -> Z/2 is onto but does not split
    f = ModuleMap(cyc(Z4, 2), cyc(Z4, 1), [[1]])
    assert split_epi_witness(f).reason == "surjective but no section"


@pytest.mark.parametrize("exps, matrix", [([1], [[2]]), ([2], [[1]]), ([], [])])
def test_injective_hull_examples(exps, matrix):
    iota = injective_hull(FinModule.of(Z4, exps))
    assert iota.codomain.exps == (2,) * len(exps)
    assert iota.matrix.reshape(len(exps), len(exps)).tolist() == (matrix if exps else [])
    assert iota.is_injective()


@given(st.sampled_from(RINGS), st.data())
@settings(max_examples=40, deadline=None)
def test_injective_hull_is_essential(ring, data):
    M = FinModule.of(ring, data.draw(st.lists(st.integers(1, ring.k), max_size=2)))
    iota = injective_hull(M)
    assert module_classify(iota.codomain).is_injective
    image = {tuple(iota(x)) for x in M.elements()}
    # essential: every nonzero cyclic submodule of E meets the image
    for y in iota.codomain.elements():
        if not any(y):
            continue
        multiples = {tuple(iota.codomain.scale(c, y)) for c in range(ring.size)}
        assert any(any(m) for m in multiples & image)


def test_dual_examples():
    Z2, Z4m = cyc(Z4, 1), cyc(Z4, 2)
    assert pontryagin_dual(Z2) == Z2
    assert dual_map(ModuleMap.scalar(Z4m, 2)).matrix.tolist() == [[2]]
    d = dual_map(ModuleMap(Z2, Z4m, [[2]]))
    assert (d.domain, d.codomain) == (Z4m, Z2)
    assert d.is_surjective()


@given(st.sampled_from(RINGS), st.data())
@settings(max_examples=50, deadline=None)
def test_dual_map_agrees_with_character_pairing(ring, data):
    exps = st.lists(st.integers(1, ring.k), min_size=1, max_size=2)
    M = FinModule.of(ring, data.draw(exps))
    N = FinModule.of(ring, data.draw(exps))
    hom = hom_module(M, N)
    f = hom.to_map(data.draw(st.lists(st.integers(0, ring.size - 1), min_size=len(hom), max_size=len(hom))))
    fd = dual_map(f)
    for chi in N.elements():
        for x in M.elements():
            assert character_pairing(N, chi, f(x)) == character_pairing(M, fd(chi), x)
    assert dual_map(fd) == f


def _brute_hom_count(M, N):
    """Count additive maps commuting with scalars by trying all images of generators."""
    count = 0
    elems = [tuple(y) for y in N.elements()]
    for images in itertools.product(elems, repeat=M.rank):
        # a generator of order pi^a must land in the pi^a-torsion of N
        ok = all(not any(N.scale(M.ring.pi_pow(a), y)) for a, y in zip(M.exps, images))
        count += ok
    return count


@pytest.mark.parametrize(
    "M, N, exps",
    [
        ([1], [2], (1,)),
        ([2], [1, 2], (1, 2)),
        ([], [2], ()),
    ],
)
def test_hom_module_examples(M, N, exps):
    H = hom_module(FinModule.of(Z4, M), FinModule.of(Z4, N))
    assert H.module.exps == exps


@given(st.sampled_from(RINGS), st.data())
@settings(max_examples=40, deadline=None)
def test_hom_cardinality_matches_enumeration(ring, data):
    exps = st.lists(st.integers(1, ring.k), max_size=2)
    M = FinModule.of(ring, data.draw(exps))
    N = FinModule.of(ring, data.draw(exps))
    assert hom_module(M, N).module.cardinality == _brute_hom_count(M, N)


def test_hom_between_rings_rejected():
    with pytest.raises(ShapeMismatch):
        hom_module(cyc(Z4, 1), cyc(F2, 1))


@given(st.sampled_from(RINGS), st.data())
@settings(max_examples=40, deadline=None)
def test_kernel_is_the_zero_set(ring, data):
    exps = st.lists(st.integers(1, ring.k), min_size=1, max_size=2)
    M = FinModule.of(ring, data.draw(exps))
    N = FinModule.of(ring, data.draw(exps))
    hom = hom_module(M, N)
    f = hom.to_map(data.draw(st.lists(st.integers(0, ring.size - 1), min_size=len(hom), max_size=len(hom))))
    k = kernel(f)
    zeros = {tuple(x) for x in M.elements() if not any(f(x))}
    assert {tuple(k(x)) for x in k.domain.elements()} == zeros
    assert k.is_injective()


@pytest.mark.parametrize("text", ["zmod:2^2", "zmod:3^2", "gf:3", "gf:4", "gf:9"])
def test_ring_descriptor_round_trip(text):
    assert str(BaseRing.parse(text)) == text
