"""Hom modules, injectivity data, splittings and Pontryagin duality."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..certificate import Certificate, Failure
from ..errors import BudgetExceeded, DEFAULT_BUDGET, ShapeMismatch
from .base import BaseRing
from .module import (
    FinModule,
    ModuleMap,
    direct_sum,
    image,
    linear_solve,
    torsion_part,
)


class HomSpace:
    """Hom_R(M, N) as a module in normal form.

    Hom(R/pi^a, R/pi^b) is cyclic of order pi^min(a,b), generated by
    1 -> pi^max(b-a, 0); the space is the sum of these over all generator
    pairs, reordered so the exponents ascend.
    """

    def __init__(self, M: FinModule, N: FinModule):
        if M.ring != N.ring:
            raise ShapeMismatch("Hom between modules over different rings")
        self.source, self.target, self.ring = M, N, M.ring
        slots = []
        for j, b in enumerate(N.exps):
            for i, a in enumerate(M.exps):
                slots.append((min(a, b), j, i, max(b - a, 0)))
        slots.sort(key=lambda s: s[0])
        self._slots = slots
        self.module = FinModule(self.ring, tuple(s[0] for s in slots))

    def __len__(self) -> int:
        return self.module.rank

    def to_map(self, coords) -> ModuleMap:
        c = self.module.vec(coords)
        mat = np.zeros((self.target.rank, self.source.rank), dtype=np.int64)
        for x, (_, j, i, shift) in zip(c, self._slots):
            mat[j, i] = self.ring.mul(int(x), self.ring.pi_pow(shift))
        return ModuleMap(self.source, self.target, mat)

    def coords(self, f: ModuleMap) -> np.ndarray:
        if f.domain != self.source or f.codomain != self.target:
            raise ShapeMismatch("map does not belong to this Hom space")
        out = [self.ring.div_pi(int(f.matrix[j, i]), shift) for (_, j, i, shift) in self._slots]
        return self.module.vec(out)

    def basis(self) -> list[ModuleMap]:
        return [self.to_map(self.module.basis(t)) for t in range(len(self))]

    def elements(self, budget: int = DEFAULT_BUDGET):
        if self.module.cardinality > budget:
            raise BudgetExceeded(f"|Hom| = {self.module.cardinality} exceeds budget {budget}")
        for c in self.module.elements():
            yield self.to_map(c)

    def induced(self, other: "HomSpace", fn) -> ModuleMap:
        """The linear map self -> other given by phi -> fn(phi)."""
        cols = [other.coords(fn(b)).reshape(-1, 1) for b in self.basis()]
        mat = np.hstack(cols) if cols else np.zeros((len(other), 0))
        return ModuleMap(self.module, other.module, mat)


def hom_module(M: FinModule, N: FinModule) -> HomSpace:
    return HomSpace(M, N)


@dataclass(frozen=True)
class ModuleClass:
    invariants: tuple[int, ...]
    is_injective: bool
    is_flat: bool
    injdim: float

    def to_json(self) -> dict:
        return {
            "invariants": list(self.invariants),
            "is_injective": self.is_injective,
            "is_flat": self.is_flat,
            "injdim": "infinity" if self.injdim == math.inf else int(self.injdim),
        }


def module_classify(M: FinModule) -> ModuleClass:
    # self-injective chain ring: injective = flat = projective = free
    inj = all(e == M.ring.k for e in M.exps)
    return ModuleClass(M.exps, inj, inj, 0 if inj else math.inf)


def is_injective_module(M: FinModule) -> bool:
    return module_classify(M).is_injective


def injective_hull(M: FinModule) -> ModuleMap:
    """Essential monomorphism M -> E with E free (hence injective)."""
    ring = M.ring
    E = FinModule.free(ring, M.rank)
    mat = np.diag([ring.pi_pow(ring.k - a) for a in M.exps]).astype(np.int64).reshape(M.rank, M.rank)
    return ModuleMap(M, E, mat)


def projective_cover(M: FinModule) -> ModuleMap:
    """Surjection from a free module of minimal rank onto M."""
    F = FinModule.free(M.ring, M.rank)
    return ModuleMap(F, M, np.eye(M.rank, dtype=np.int64))


def split_epi_witness(f: ModuleMap) -> Certificate | Failure:
    """A section g with f @ g == id, or the reason none exists."""
    if not f.is_surjective():
        return Failure("not surjective", {"map": f})
    N = f.codomain
    cols = []
    for j, b in enumerate(N.exps):
        inc = torsion_part(f.domain, b)
        y = linear_solve(f @ inc, N.basis(j))
        if y is None:
            return Failure("surjective but no section", {"map": f, "generator": j})
        cols.append(inc(y).reshape(-1, 1))
    mat = np.hstack(cols) if cols else np.zeros((f.domain.rank, 0))
    g = ModuleMap(N, f.domain, mat)
    assert f @ g == ModuleMap.identity(N)
    return Certificate("section", {"map": f, "section": g}, ("f@g == id",))


def extend_along(g: ModuleMap, h: ModuleMap) -> ModuleMap | None:
    """t with t @ g == h (g: S -> X, h: S -> E), or None if none exists."""
    if g.domain != h.domain:
        raise ShapeMismatch("extension problem needs a common source")
    big = HomSpace(g.codomain, h.codomain)
    small = HomSpace(g.domain, h.codomain)
    res = big.induced(small, lambda phi: phi @ g)
    c = linear_solve(res, small.coords(h))
    if c is None:
        return None
    t = big.to_map(c)
    assert t @ g == h
    return t


def split_mono_witness(f: ModuleMap) -> Certificate | Failure:
    """A retraction r with r @ f == id, or the reason none exists."""
    if not f.is_injective():
        return Failure("not injective", {"map": f})
    r = extend_along(f, ModuleMap.identity(f.domain))
    if r is None:
        return Failure("injective but no retraction", {"map": f})
    return Certificate("retraction", {"map": f, "retraction": r}, ("r@f == id",))


def complement(inc: ModuleMap) -> ModuleMap | None:
    """Inclusion of a complement C with codomain = im(inc) + C, if inc splits."""
    r = extend_along(inc, ModuleMap.identity(inc.domain))
    if r is None:
        return None
    return r.kernel()


# -- Pontryagin duality ----------------------------------------------------

def pontryagin_dual(M: FinModule) -> FinModule:
    """Characters of M; a finite module is non-canonically its own dual.

    Coordinates are taken against the dual basis: chi_i(e_j) = delta_ij /
    |R/pi^{a_i}| over Z/p^k, and the trace form over F_q.
    """
    return M


def dual_map(f: ModuleMap) -> ModuleMap:
    """f+ : N+ -> M+, chi -> chi o f."""
    ring = f.ring
    M, N = f.domain, f.codomain
    A = f.matrix
    D = np.zeros((M.rank, N.rank), dtype=np.int64)
    for i, a in enumerate(M.exps):
        for j, b in enumerate(N.exps):
            x = int(A[j, i])
            D[i, j] = ring.mul(x, ring.pi_pow(a - b)) if a >= b else ring.div_pi(x, b - a)
    return ModuleMap(N, M, D)


def _trace(ring: BaseRing, x: int) -> int:
    if ring.degree == 1:
        return x % ring.p
    # sum of the Frobenius conjugates x^(p^i); lands in the prime field
    acc, y = 0, x
    for _ in range(ring.degree):
        acc = ring.add(acc, y)
        y = _power(ring, y, ring.p)
    return acc % ring.p


def _power(ring: BaseRing, x: int, n: int) -> int:
    out = 1
    for _ in range(n):
        out = ring.mul(out, x)
    return out


def character_pairing(M: FinModule, chi, x) -> Fraction:
    """Value in Q/Z (as a Fraction in [0, 1)) of the character chi at x."""
    ring = M.ring
    if ring.is_field:
        s = 0
        for c, y in zip(chi, x):
            s = ring.add(s, ring.mul(int(c), int(y)))
        return Fraction(_trace(ring, s), ring.p)
    total = Fraction(0)
    for c, y, a in zip(chi, x, M.exps):
        total += Fraction(int(c) * int(y), ring.p**a)
    return total - math.floor(total)


def evaluation_map(M: FinModule) -> ModuleMap:
    """The canonical M -> M++, identity in dual-basis coordinates."""
    return ModuleMap.identity(M)


def is_exact_at(f: ModuleMap, g: ModuleMap) -> bool:
    """Exactness of A -f-> B -g-> C at B."""
    if not (g @ f).is_zero:
        return False
    return image(f).domain.cardinality == g.kernel().domain.cardinality


def sum_of_maps(maps: list[ModuleMap]) -> ModuleMap:
    """The block-diagonal map between direct sums of domains and codomains."""
    D, _, dproj = direct_sum([m.domain for m in maps])
    C, cinc, _ = direct_sum([m.codomain for m in maps])
    total = ModuleMap.zero(D, C)
    for m, i, p in zip(maps, cinc, dproj):
        total = total + i @ m @ p
    return total
