"""Brute-force injectivity oracle for finite acyclic quivers.

A representation X is injective iff for every submodule I of a projective
generator P, every morphism I -> X extends to P.  We use the principal
projectives P_v (P_v(w) = R^{paths v -> w}) and, when it is small, the
whole path algebra.  Hom(P, X) is the product of X(v) over the free
generators, so extendability of everything is the cardinality equation
|image of restriction| = |Hom(I, X)|.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..certificate import Certificate, Failure
from ..errors import BudgetExceeded, DEFAULT_BUDGET, UnboundedPathSet
from ..quiver import Quiver, paths
from ..rep.finite import HomReps, Representation, subrepresentation
from ..ring.base import BaseRing
from ..ring.module import FinModule, ModuleMap, direct_sum, elements_of, kernel, submodule


@dataclass(frozen=True, eq=False)
class FreeRep:
    """Projective rep with free generators at ``gens``; basis of P(w) is (g, path)."""

    rep: Representation
    gens: tuple
    basis: dict  # w -> list of (generator index, path)


def free_rep(Q: Quiver, ring: BaseRing, gens: tuple) -> FreeRep:
    basis = {w: [(g, p) for g, v in enumerate(gens) for p in paths(Q, v, w)] for w in Q.vertices}
    mods = {w: FinModule.free(ring, len(basis[w])) for w in Q.vertices}
    maps = {}
    for a in Q.arrows:
        mat = np.zeros((len(basis[a.tgt]), len(basis[a.src])), dtype=np.int64)
        for j, (g, p) in enumerate(basis[a.src]):
            mat[basis[a.tgt].index((g, p + (a.id,))), j] = 1
        maps[a.id] = ModuleMap(mods[a.src], mods[a.tgt], mat)
    return FreeRep(Representation(Q, ring, mods, maps), tuple(gens), basis)


def _closure(P: FreeRep, seeds: dict) -> dict:
    """Per-vertex generator columns of the subrep generated by ``seeds``."""
    Q = P.rep.quiver
    out = {}
    for w in Q.vertices:
        cols = []
        for u, vecs in seeds.items():
            if not vecs:
                continue
            for p in paths(Q, u, w):
                f = P.rep.path_map(p, u)
                cols.extend(f(v) for v in vecs)
        out[w] = cols
    return out


def _key(P: FreeRep, cols: dict) -> tuple:
    key = []
    for w in P.rep.quiver.vertices:
        M = P.rep[w]
        if cols[w]:
            inc = submodule(M, np.stack(cols[w], axis=1))
            key.append(frozenset(elements_of(inc)))
        else:
            key.append(frozenset([tuple([0] * M.rank)]))
    return tuple(key)


def subreps(P: FreeRep, budget: int = DEFAULT_BUDGET) -> list[dict]:
    """Every subrepresentation of P, as per-vertex sets of elements."""
    Q = P.rep.quiver
    zero = {w: [] for w in Q.vertices}
    start = _key(P, zero)
    seen = {start: start}
    todo = [start]
    while todo:
        key = todo.pop()
        for wi, w in enumerate(Q.vertices):
            for y in P.rep[w].elements():
                if tuple(y) in key[wi]:
                    continue
                new = _key(P, _closure(P, _reduce_seeds(P, key, w, y)))
                if new not in seen:
                    seen[new] = new
                    todo.append(new)
                    if len(seen) > budget:
                        raise BudgetExceeded("too many subrepresentations")
    return [dict(zip(Q.vertices, k)) for k in sorted(seen, key=lambda k: (sum(map(len, k)), repr(k)))]


def _reduce_seeds(P: FreeRep, key: tuple, w, y) -> dict:
    seeds = {u: [np.array(e) for e in key[ui] if any(e)] for ui, u in enumerate(P.rep.quiver.vertices)}
    seeds[w] = seeds[w] + [np.array(y)]
    return seeds


def _as_subrep(P: FreeRep, elems: dict) -> tuple[Representation, dict]:
    """The subrep with element sets ``elems`` and its inclusion matrices (columns in P-coordinates)."""
    incs = {}
    for w, S in elems.items():
        M = P.rep[w]
        cols = [np.array(e) for e in S if any(e)]
        incs[w] = submodule(M, np.stack(cols, axis=1)) if cols else ModuleMap.zero(FinModule.zero(M.ring), M)
    I = subrepresentation(P.rep, incs)[0]
    return I, {w: np.asarray(f.matrix, dtype=np.int64) for w, f in incs.items()}


@lru_cache(maxsize=256)
def _cached_subreps(Q: Quiver, ring: BaseRing, gens: tuple) -> tuple[FreeRep, tuple]:
    P = free_rep(Q, ring, gens)
    return P, tuple((elems,) + _as_subrep(P, elems) for elems in subreps(P))


class _PathCache:
    """Matrices of X along paths, computed once per representation."""

    def __init__(self, X: Representation):
        self.X = X
        self._cache = {}

    def __call__(self, path: tuple, start) -> np.ndarray:
        key = (path, start)
        if key not in self._cache:
            self._cache[key] = np.asarray(self.X.path_map(path, start).matrix, dtype=np.int64)
        return self._cache[key]


def _restriction_matrix(P: FreeRep, cols: dict, X: Representation, pm: _PathCache) -> tuple[np.ndarray, list]:
    """Rows: values at each generator of I of a morphism P -> X given by its generator images."""
    widths = [X[v].rank for v in P.gens]
    offs = np.cumsum([0] + widths)
    blocks, codomains = [], []
    for w in X.quiver.vertices:
        C = cols[w]
        for j in range(C.shape[1]):
            row = np.zeros((X[w].rank, int(offs[-1])), dtype=np.int64)
            for c, (g, p) in zip(C[:, j], P.basis[w]):
                if c:
                    row[:, offs[g]:offs[g + 1]] += int(c) * pm(p, P.gens[g])
            blocks.append(row)
            codomains.append(X[w])
    if not blocks:
        return np.zeros((0, int(offs[-1])), dtype=np.int64), codomains
    return np.concatenate(blocks, axis=0), codomains


def _restriction_image_size(P: FreeRep, cols: dict, X: Representation, pm: _PathCache) -> int:
    """|image of Hom(P, X) = prod X(v_g) -> Hom(I, X)|."""
    ring = X.ring
    D, _, _ = direct_sum([X[v] for v in P.gens], ring)
    mat, cods = _restriction_matrix(P, cols, X, pm)
    if not cods:
        return 1
    T, _, _ = direct_sum(cods, ring)
    total = ModuleMap(D, T, ring.arr(mat))
    return D.cardinality // kernel(total).domain.cardinality


# -- prime-field fast path ------------------------------------------------------

def _rank_mod_p(A: np.ndarray, p: int) -> int:
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        r += 1
    return r


def _field_hom_dim(I: Representation, X: Representation) -> int:
    """dim Hom(I, X) over a prime field, from the vectorised naturality equations."""
    p = X.ring.p
    Q = X.quiver
    offs, n = {}, 0
    for w in Q.vertices:
        offs[w] = n
        n += X[w].rank * I[w].rank
    rows = []
    for a in Q.arrows:
        xs, xt = X[a.src].rank, X[a.tgt].rank
        is_, it = I[a.src].rank, I[a.tgt].rank
        if xt * is_ == 0:
            continue
        blk = np.zeros((xt * is_, n), dtype=np.int64)
        Ma = np.asarray(X.maps[a.id].matrix, dtype=np.int64).reshape(xt, xs)
        Aa = np.asarray(I.maps[a.id].matrix, dtype=np.int64).reshape(it, is_)
        # column-major vec: vec(M phi) = (1 (x) M) vec phi, vec(phi A) = (A^T (x) 1) vec phi
        if xs * is_:
            blk[:, offs[a.src]:offs[a.src] + xs * is_] += np.kron(np.eye(is_, dtype=np.int64), Ma)
        if xt * it:
            blk[:, offs[a.tgt]:offs[a.tgt] + xt * it] -= np.kron(Aa.T, np.eye(xt, dtype=np.int64))
        rows.append(blk)
    if not rows:
        return n
    return n - _rank_mod_p(np.concatenate(rows, axis=0), p)


def _fast_field(ring: BaseRing) -> bool:
    return ring.is_field and ring.degree == 1


def algebra_size(Q: Quiver, ring: BaseRing) -> int:
    n = sum(len(paths(Q, v, w)) for v in Q.vertices for w in Q.vertices)
    return ring.size**n


def baer_oracle(X: Representation, budget: int = DEFAULT_BUDGET, algebra_limit: int = 256) -> Certificate | Failure:
    """Exhaustive extension test over submodules of the projective generators."""
    Q, ring = X.quiver, X.ring
    if not Q.is_acyclic():
        raise UnboundedPathSet("the path algebra of a cyclic quiver is infinite")
    gens_list = [(v,) for v in Q.vertices]
    if algebra_size(Q, ring) <= algebra_limit:
        gens_list.append(tuple(Q.vertices))
    pm = _PathCache(X)
    fast = _fast_field(ring)
    tested = 0
    for gens in gens_list:
        P, subs = _cached_subreps(Q, ring, gens)
        for elems, I, cols in subs:
            if fast:
                hom = ring.p ** _field_hom_dim(I, X)
                mat, _ = _restriction_matrix(P, cols, X, pm)
                img = ring.p ** _rank_mod_p(mat, ring.p) if mat.size else 1
            else:
                hom = HomReps(I, X).cardinality
                img = _restriction_image_size(P, cols, X, pm)
            tested += 1
            if img != hom:
                return Failure(
                    "a morphism from a submodule of a projective does not extend",
                    {"generators": list(gens), "submodule": {str(w): sorted(s) for w, s in elems.items()},
                     "hom_size": hom, "extendable": img},
                )
    return Certificate("baer", {"submodules_tested": tested}, ("|restriction image| == |Hom(I, X)|",))
