"""Finite modules in invariant-factor normal form and the maps between them.

A module over a chain ring R with uniformizer pi is carried as
R/pi^a1 + ... + R/pi^ar with a1 <= ... <= ar, each generator e_i of
order pi^ai.  A map is an integer matrix whose column i is the image of
e_i, row j reduced modulo the order of the j-th target generator.

Every kernel, image and quotient is recomputed into this normal form via
``local_smith``, so two modules are isomorphic iff their exponent tuples
agree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch, ValidationError
from .base import BaseRing
from .smith import local_smith, matrix_kernel, matrix_solve


@dataclass(frozen=True)
class FinModule:
    ring: BaseRing
    exps: tuple[int, ...] = ()

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exps)
        object.__setattr__(self, "exps", exps)
        if any(not 1 <= e <= self.ring.k for e in exps):
            raise ValidationError(f"invariant factor exponents {exps} out of range 1..{self.ring.k}")
        if list(exps) != sorted(exps):
            raise ValidationError(f"invariant factors {exps} are not sorted")

    @classmethod
    def free(cls, ring: BaseRing, rank: int) -> "FinModule":
        return cls(ring, (ring.k,) * rank)

    @classmethod
    def cyclic(cls, ring: BaseRing, e: int) -> "FinModule":
        return cls(ring, (e,) if e > 0 else ())

    @classmethod
    def zero(cls, ring: BaseRing) -> "FinModule":
        return cls(ring, ())

    @classmethod
    def of(cls, ring: BaseRing, exps) -> "FinModule":
        return cls(ring, tuple(sorted(e for e in exps if e > 0)))

    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def is_zero(self) -> bool:
        return not self.exps

    @property
    def cardinality(self) -> int:
        out = 1
        for e in self.exps:
            out *= self.ring.quotient_size(e)
        return out

    def __len__(self) -> int:
        return self.rank

    def describe(self) -> str:
        if not self.exps:
            return "0"
        r = self.ring
        if r.is_field:
            return f"F{r.residue_size}^{self.rank}"
        return " + ".join(f"Z/{r.p**e}" for e in self.exps)

    def relations(self) -> np.ndarray:
        return np.diag([self.ring.pi_pow(e) for e in self.exps]).astype(np.int64).reshape(self.rank, self.rank)

    def reduce(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if x.ndim != 2:
            x = x.reshape(self.rank, -1) if x.size else np.zeros((self.rank, 0), dtype=np.int64)
        if x.size == 0:
            return np.zeros(x.shape, dtype=np.int64)
        return self.ring.areduce_rows(self.ring.arr(x), self.exps)

    def vec(self, x) -> np.ndarray:
        return self.reduce(x).reshape(self.rank)

    def zero_element(self) -> np.ndarray:
        return np.zeros(self.rank, dtype=np.int64)

    def basis(self, i: int) -> np.ndarray:
        x = self.zero_element()
        x[i] = 1
        return x

    def elements(self):
        """All elements as tuples, in lexicographic order."""
        return itertools.product(*(self.ring.residues(e) for e in self.exps))

    def add(self, x, y) -> np.ndarray:
        return self.vec(self.ring.aadd(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)))

    def scale(self, c: int, x) -> np.ndarray:
        return self.vec(self.ring.ascale(c, np.asarray(x, dtype=np.int64)))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ModuleMap:
    domain: FinModule
    codomain: FinModule
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dom, cod = self.domain, self.codomain
        if dom.ring != cod.ring:
            raise ShapeMismatch("domain and codomain live over different rings")
        a = np.asarray(self.matrix, dtype=np.int64)
        if a.size == 0:
            a = np.zeros((cod.rank, dom.rank), dtype=np.int64)
        if a.shape != (cod.rank, dom.rank):
            raise ShapeMismatch(f"matrix shape {a.shape} does not match {cod.rank}x{dom.rank}")
        a = cod.reduce(dom.ring.arr(a))
        ring = dom.ring
        if not ring.is_field and a.size:
            p = ring.p
            pa = np.array([p**e for e in dom.exps], dtype=np.int64)[None, :]
            pb = np.array([p**e for e in cod.exps], dtype=np.int64)[:, None]
            if ((a * pa) % pb).any():
                raise ShapeMismatch("matrix sends a generator outside the annihilator of its order")
        object.__setattr__(self, "matrix", _readonly(a))

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, M: FinModule) -> "ModuleMap":
        return cls(M, M, np.eye(M.rank, dtype=np.int64))

    @classmethod
    def zero(cls, M: FinModule, N: FinModule) -> "ModuleMap":
        return cls(M, N, np.zeros((N.rank, M.rank), dtype=np.int64))

    @classmethod
    def scalar(cls, M: FinModule, c: int) -> "ModuleMap":
        return cls(M, M, np.eye(M.rank, dtype=np.int64) * int(c))

    # -- algebra -----------------------------------------------------------
    @property
    def ring(self) -> BaseRing:
        return self.domain.ring

    def key(self):
        return (self.domain, self.codomain, self.matrix.tobytes())

    def __eq__(self, other):
        return isinstance(other, ModuleMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"ModuleMap({self.domain.describe()} -> {self.codomain.describe()}, {self.matrix.tolist()})"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64).reshape(self.domain.rank, 1)
        return self.codomain.vec(self.ring.matmul(self.matrix, x))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition: (self @ other)(x) = self(other(x))."""
        if other.codomain != self.domain:
            raise ShapeMismatch("composition of incompatible maps")
        return ModuleMap(other.domain, self.codomain, self.ring.matmul(self.matrix, other.matrix))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._same_shape(other)
        return ModuleMap(self.domain, self.codomain, self.ring.aadd(self.matrix, other.matrix))

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, self.ring.aneg(self.matrix))

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + (-other)

    def scaled(self, c: int) -> "ModuleMap":
        return ModuleMap(self.domain, self.codomain, self.ring.ascale(int(c), self.matrix))

    def _same_shape(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ShapeMismatch("maps have different domains or codomains")

    @property
    def is_zero(self) -> bool:
        return not self.matrix.any()

    # -- derived objects ---------------------------------------------------
    def kernel(self) -> "ModuleMap":
        return kernel(self)

    def image(self) -> "ModuleMap":
        return image(self)

    def cokernel(self) -> "ModuleMap":
        return cokernel(self)

    def is_injective(self) -> bool:
        return kernel(self).domain.is_zero

    def is_surjective(self) -> bool:
        return image(self).domain.cardinality == self.codomain.cardinality

    def is_iso(self) -> bool:
        return self.is_injective() and self.domain.cardinality == self.codomain.cardinality


def _cols(M: FinModule, gens) -> np.ndarray:
    g = np.asarray(gens, dtype=np.int64)
    if g.ndim == 1:
        g = g.reshape(M.rank, -1)
    return g.reshape(M.rank, -1) if g.size else np.zeros((M.rank, 0), dtype=np.int64)


def submodule(M: FinModule, gens) -> ModuleMap:
    """Inclusion of the submodule of M generated by the columns of ``gens``."""
    ring = M.ring
    G = M.reduce(_cols(M, gens))
    s = G.shape[1]
    if s == 0 or not G.any():
        return ModuleMap.zero(FinModule.zero(ring), M)
    rel = matrix_kernel(ring, np.hstack([G, M.relations()]))[:s, :]
    sm = local_smith(ring, rel)
    exps, cols = [], []
    for t in range(s):
        e = sm.exps[t] if t < len(sm.exps) else ring.k
        if e > 0:
            exps.append(e)
            cols.append(ring.matmul(G, sm.U_inv[:, t : t + 1]))
    S = FinModule(ring, tuple(exps))
    return ModuleMap(S, M, np.hstack(cols) if cols else np.zeros((M.rank, 0)))


def quotient(M: FinModule, gens) -> ModuleMap:
    """Projection of M onto M / <columns of gens>."""
    ring = M.ring
    G = M.reduce(_cols(M, gens))
    if M.rank == 0:
        return ModuleMap.identity(M)
    sm = local_smith(ring, np.hstack([M.relations(), G]))
    exps, rows = [], []
    for t in range(M.rank):
        e = sm.exps[t]
        if e > 0:
            exps.append(e)
            rows.append(sm.U[t])
    Q = FinModule(ring, tuple(exps))
    mat = np.vstack(rows) if rows else np.zeros((0, M.rank), dtype=np.int64)
    return ModuleMap(M, Q, mat)


def _kernel_lifts(f: ModuleMap) -> np.ndarray:
    m = f.domain.rank
    B = np.hstack([f.matrix, f.codomain.relations()])
    return matrix_kernel(f.ring, B)[:m, :]


def kernel(f: ModuleMap) -> ModuleMap:
    return submodule(f.domain, _kernel_lifts(f))


def image(f: ModuleMap) -> ModuleMap:
    return submodule(f.codomain, f.matrix)


def cokernel(f: ModuleMap) -> ModuleMap:
    return quotient(f.codomain, f.matrix)


def solve(f: ModuleMap, b) -> np.ndarray | None:
    """Some x with f(x) = b, or None."""
    b = f.codomain.vec(b)
    m = f.domain.rank
    w = matrix_solve(f.ring, np.hstack([f.matrix, f.codomain.relations()]), b)
    if w is None:
        return None
    return f.domain.vec(w[:m])


def linear_solve(f: ModuleMap, b) -> np.ndarray | None:
    """The lexicographically least x (canonical coordinates) with f(x) = b."""
    x0 = solve(f, b)
    if x0 is None:
        return None
    M, ring = f.domain, f.ring
    x = [int(c) for c in x0]
    gens = [M.vec(c) for c in _kernel_lifts(f).T]
    gens = [[int(c) for c in g] for g in gens if g.any()]
    for i, a in enumerate(M.exps):
        vals = [min(ring.valuation(g[i]), a) for g in gens]
        e = min(vals, default=a)
        if ring.is_field:
            target = 0 if e == 0 else x[i]
        else:
            target = x[i] % ring.p**e
        delta = ring.reduce(ring.sub(target, x[i]), a)
        if e < a:
            piv = vals.index(e)
            g = gens[piv]
            lam = ring.divide(g[i], delta)
            x = [ring.reduce(ring.add(xc, ring.mul(lam, gc)), ae) for xc, gc, ae in zip(x, g, M.exps)]
            rest = []
            for j, h in enumerate(gens):
                if j == piv:
                    continue
                if ring.reduce(h[i], a):
                    c = ring.neg(ring.divide(g[i], h[i]))
                    h = [ring.add(hc, ring.mul(c, gc)) for hc, gc in zip(h, g)]
                rest.append(h)
            rest.append([ring.mul(ring.pi_pow(a - e), gc) for gc in g])
            gens = [list(M.vec(h)) for h in rest]
            gens = [[int(c) for c in h] for h in gens if any(h)]
    return M.vec(x)


def lift_through(j: ModuleMap, f: ModuleMap) -> ModuleMap | None:
    """g with j @ g == f, for a monomorphism j; None if f(X) is not inside j(S)."""
    if j.codomain != f.codomain:
        raise ShapeMismatch("lift_through needs a common codomain")
    cols = []
    for i in range(f.domain.rank):
        y = solve(j, f.matrix[:, i])
        if y is None:
            return None
        cols.append(y.reshape(-1, 1))
    mat = np.hstack(cols) if cols else np.zeros((j.domain.rank, 0))
    return ModuleMap(f.domain, j.domain, mat)


def direct_sum(mods, ring: BaseRing | None = None) -> tuple[FinModule, list[ModuleMap], list[ModuleMap]]:
    """(S, inclusions, projections) for the direct sum of ``mods``.

    The empty sum is the zero module; it needs ``ring``.
    """
    mods = list(mods)
    if not mods:
        if ring is None:
            raise ValueError("the empty direct sum needs a ring")
        return FinModule.zero(ring), [], []
    ring = mods[0].ring
    slots = [(e, n, i) for n, M in enumerate(mods) for i, e in enumerate(M.exps)]
    order = sorted(range(len(slots)), key=lambda s: (slots[s][0], s))
    S = FinModule(ring, tuple(slots[s][0] for s in order))
    pos = {(slots[s][1], slots[s][2]): r for r, s in enumerate(order)}
    incs, projs = [], []
    for n, M in enumerate(mods):
        P = np.zeros((S.rank, M.rank), dtype=np.int64)
        for i in range(M.rank):
            P[pos[(n, i)], i] = 1
        incs.append(ModuleMap(M, S, P))
        projs.append(ModuleMap(S, M, P.T))
    return S, incs, projs


def block_map(dom_parts, cod_parts, blocks) -> tuple[ModuleMap, tuple, tuple]:
    """Assemble a map between direct sums from a grid of component maps.

    ``blocks[r][c]`` maps dom_parts[c] to cod_parts[r] (None means zero).
    Returns the map together with the (inclusions, projections) of both sums.
    """
    D, dinc, dproj = direct_sum(dom_parts) if dom_parts else (None, [], [])
    C, cinc, cproj = direct_sum(cod_parts) if cod_parts else (None, [], [])
    ring = (dom_parts or cod_parts)[0].ring
    if D is None:
        D = FinModule.zero(ring)
    if C is None:
        C = FinModule.zero(ring)
    total = ModuleMap.zero(D, C)
    for r in range(len(cod_parts)):
        for c in range(len(dom_parts)):
            b = blocks[r][c]
            if b is not None and not b.is_zero:
                total = total + cinc[r] @ b @ dproj[c]
    return total, (dinc, dproj), (cinc, cproj)


def torsion_part(M: FinModule, e: int) -> ModuleMap:
    """Inclusion of {x in M : pi^e x = 0}."""
    return kernel(ModuleMap.scalar(M, M.ring.pi_pow(e)))


def elements_of(inc: ModuleMap) -> set[tuple[int, ...]]:
    """The image of a map, enumerated as a set of element tuples."""
    out = set()
    for x in inc.domain.elements():
        out.add(tuple(int(c) for c in inc(x)))
    return out
