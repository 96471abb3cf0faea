"""Smith normal forms over Z and over the shipped chain rings.

The integer version is the textbook one and is exposed as a public
utility.  Everything else in the package runs on ``local_smith``: over a
chain ring a minimal-valuation pivot divides every other entry, so a
single elimination pass per pivot suffices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseRing


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (D, U, V) with U @ A @ V == D over the integers.

    D is diagonal with non-negative entries d1 | d2 | ...; U and V are
    unimodular.
    """
    A = [[int(x) for x in row] for row in np.atleast_2d(np.asarray(A, dtype=object))]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _eye(m), _eye(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        for M in (A, U):
            M[dst] = [x + c * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, c):
        for M in (A, V):
            for row in M:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not cands:
                break
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean &= A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    as_arr = lambda M, r, c: np.array(M, dtype=np.int64).reshape(r, c)
    return as_arr(A, m, n), as_arr(U, m, m), as_arr(V, n, n)


@dataclass(frozen=True)
class LocalSmith:
    """U @ A @ V == D over a chain ring, with D[t, t] = pi^exps[t]."""

    U: np.ndarray
    U_inv: np.ndarray
    V: np.ndarray
    exps: tuple[int, ...]  # one per diagonal slot, ascending; k marks a zero pivot
    shape: tuple[int, int]


def local_smith(ring: BaseRing, A: np.ndarray) -> LocalSmith:
    arr = np.asarray(A, dtype=np.int64)
    m, n = arr.shape
    A = [[int(x) for x in row] for row in arr]
    U, Ui, V = _eye(m), _eye(m), _eye(n)
    k = ring.k
    add, mul, neg = ring.add, ring.mul, ring.neg
    exps: list[int] = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                if row[j]:
                    v = ring.valuation(row[j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            exps.extend([k] * (min(m, n) - t))
            break
        e, i, j = best
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
            for row in Ui:
                row[t], row[i] = row[i], row[t]
        if j != t:
            for M in (A, V):
                for row in M:
                    row[t], row[j] = row[j], row[t]
        u = ring.unit_part(A[t][t])
        if u != 1:
            ui = ring.unit_inverse(u)
            A[t] = [mul(ui, x) for x in A[t]]
            U[t] = [mul(ui, x) for x in U[t]]
            for row in Ui:
                row[t] = mul(row[t], u)
        piv = A[t][t]
        for i in range(t + 1, m):
            if A[i][t]:
                c = ring.divide(piv, A[i][t])
                nc = neg(c)
                A[i] = [add(x, mul(nc, y)) for x, y in zip(A[i], A[t])]
                U[i] = [add(x, mul(nc, y)) for x, y in zip(U[i], U[t])]
                for row in Ui:
                    row[t] = add(row[t], mul(c, row[i]))
        for j in range(t + 1, n):
            if A[t][j]:
                nc = neg(ring.divide(piv, A[t][j]))
                for M in (A, V):
                    for row in M:
                        row[j] = add(row[j], mul(nc, row[t]))
        exps.append(e)
    arr = lambda M, r, c: np.array(M, dtype=np.int64).reshape(r, c)
    return LocalSmith(arr(U, m, m), arr(Ui, m, m), arr(V, n, n), tuple(exps), (m, n))


def matrix_kernel(ring: BaseRing, B: np.ndarray) -> np.ndarray:
    """Columns generating {w : B w = 0} as a submodule of R^n."""
    B = np.asarray(B, dtype=np.int64)
    m, n = B.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    s = local_smith(ring, B)
    cols = []
    for t in range(n):
        e = s.exps[t] if t < len(s.exps) else ring.k
        c = ring.ascale(ring.pi_pow(ring.k - e), s.V[:, t])
        if c.any():
            cols.append(c)
    if not cols:
        return np.zeros((n, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def matrix_solve(ring: BaseRing, B: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some w with B w = b over R, or None."""
    B = np.asarray(B, dtype=np.int64)
    m, n = B.shape
    b = ring.arr(np.asarray(b).reshape(m))
    if n == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    s = local_smith(ring, B)
    y = ring.matmul(s.U, b.reshape(m, 1)).reshape(m)
    z = [0] * n
    for t in range(m):
        if t < len(s.exps):
            e = s.exps[t]
            if e >= ring.k:
                if y[t]:
                    return None
                continue
            if ring.valuation(int(y[t])) < e:
                return None
            z[t] = ring.divide(ring.pi_pow(e), int(y[t]))
        elif y[t]:
            return None
    return ring.matmul(s.V, np.array(z, dtype=np.int64).reshape(n, 1)).reshape(n)
