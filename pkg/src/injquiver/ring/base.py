"""Coefficient rings: Z/p^k and finite fields F_q.

Both kinds are finite chain rings: every ideal is a power of a single
uniformizer (p for Z/p^k, 0 for a field), which is what makes the module
theory below decidable.  A field is the chain ring of length 1.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ValidationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1 or not _is_prime(p):
                break
            return p, n
    raise ValidationError(f"{q} is not a prime power")


def _poly_mulmod(a: list[int], b: list[int], modpoly: list[int], p: int) -> list[int]:
    n = len(modpoly) - 1
    prod = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # modpoly is monic of degree n, coefficients low to high
    for d in range(2 * n - 1, n - 1, -1):
        c = prod[d]
        if c:
            for i in range(n + 1):
                prod[d - n + i] = (prod[d - n + i] - c * modpoly[i]) % p
    return prod[:n]


def _irreducible(p: int, n: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree n over F_p (low to high)."""
    for tail in itertools.product(range(p), repeat=n):
        poly = list(tail) + [1]
        if poly[0] == 0:
            continue
        if not any(_has_root_factor(poly, d, p) for d in range(1, n // 2 + 1)):
            return poly
    raise AssertionError("no irreducible polynomial found")


def _has_root_factor(poly: list[int], d: int, p: int) -> bool:
    for tail in itertools.product(range(p), repeat=d):
        div = list(tail) + [1]
        rem = list(poly)
        for s in range(len(rem) - 1, d - 1, -1):
            c = rem[s]
            if c:
                for i in range(d + 1):
                    rem[s - d + i] = (rem[s - d + i] - c * div[i]) % p
        if not any(rem[:d]):
            return True
    return False


@dataclass(frozen=True)
class BaseRing:
    """Z/p^k (degree 1) or the field with p^degree elements (k = 1).

    Elements are non-negative ints: residues mod p^k, or base-p digit
    encodings of polynomials for proper extension fields.
    """

    p: int
    k: int = 1
    degree: int = 1

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValidationError(f"p = {self.p} is not prime")
        if self.k < 1 or self.degree < 1:
            raise ValidationError("exponent and degree must be >= 1")
        if self.k > 1 and self.degree > 1:
            raise ValidationError("only Z/p^k or F_q are supported")

    @classmethod
    def zmod(cls, p: int, k: int = 1) -> "BaseRing":
        return cls(p, k, 1)

    @classmethod
    def gf(cls, q: int) -> "BaseRing":
        p, n = _prime_power(q)
        return cls(p, 1, n)

    @classmethod
    def parse(cls, text: str) -> "BaseRing":
        """Parse ``zmod:<p>^<k>``, ``zmod:<n>`` or ``gf:<q>``."""
        m = re.fullmatch(r"\s*zmod:(\d+)(?:\^(\d+))?\s*", text)
        if m:
            base, exp = int(m.group(1)), m.group(2)
            if exp is not None:
                return cls.zmod(base, int(exp))
            p, n = _prime_power(base)
            return cls.zmod(p, n)
        m = re.fullmatch(r"\s*gf:(\d+)\s*", text)
        if m:
            return cls.gf(int(m.group(1)))
        raise ValidationError(f"cannot parse ring descriptor {text!r}")

    # -- descriptive flags -------------------------------------------------
    @property
    def is_field(self) -> bool:
        return self.k == 1

    @property
    def kind(self) -> str:
        return "finite_field" if self.is_field else "zmod_pk"

    @property
    def is_quasi_frobenius(self) -> bool:
        return True

    @property
    def is_noetherian(self) -> bool:
        return True

    @property
    def residue_size(self) -> int:
        return self.p**self.degree

    @property
    def size(self) -> int:
        return self.residue_size**self.k

    @property
    def modulus(self) -> int:
        """Integer modulus for prime-modulus arithmetic (p^k, or p for F_p)."""
        return self.p**self.k

    @property
    def _tabled(self) -> bool:
        return self.degree > 1

    def describe(self) -> str:
        if self.is_field:
            return f"gf:{self.residue_size}"
        return f"zmod:{self.p}^{self.k}"

    def __str__(self) -> str:
        return self.describe()

    # -- extension-field tables --------------------------------------------
    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        p, n, q = self.p, self.degree, self.residue_size
        modpoly = _irreducible(p, n)
        digits = [[(x // p**i) % p for i in range(n)] for x in range(q)]

        def enc(ds):
            return sum(d * p**i for i, d in enumerate(ds))

        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = enc([(x + y) % p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = enc(_poly_mulmod(digits[a], digits[b], modpoly, p))
        neg = np.array([enc([(-d) % p for d in digits[a]]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return add, mul, neg, inv

    # -- scalar arithmetic -------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self._tabled:
            return int(self._tables[0][a, b])
        return (a + b) % self.modulus

    def neg(self, a: int) -> int:
        if self._tabled:
            return int(self._tables[2][a])
        return (-a) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._tabled:
            return int(self._tables[1][a, b])
        return (a * b) % self.modulus

    def valuation(self, a: int) -> int:
        """Largest e with a in (pi^e); k for zero."""
        if self.is_field:
            return 1 if a == 0 else 0
        a %= self.modulus
        if a == 0:
            return self.k
        e = 0
        while a % self.p == 0:
            a //= self.p
            e += 1
        return e

    def pi_pow(self, e: int) -> int:
        if e <= 0:
            return 1
        if self.is_field:
            return 0
        return self.p**e % self.modulus

    def unit_inverse(self, u: int) -> int:
        if self._tabled:
            if u == 0:
                raise ZeroDivisionError("0 is not a unit")
            return int(self._tables[3][u])
        return pow(u, -1, self.modulus)

    def unit_part(self, a: int) -> int:
        """u with a = u * pi^valuation(a); 1 for zero."""
        if a == 0:
            return 1
        if self.is_field:
            return a
        return a // self.p ** self.valuation(a)

    def divide(self, a: int, b: int) -> int:
        """Some c with a*c = b; requires valuation(a) <= valuation(b)."""
        va, vb = self.valuation(a), self.valuation(b)
        if va > vb:
            raise ArithmeticError(f"{a} does not divide {b}")
        if b == 0:
            return 0
        if self.is_field:
            return self.mul(self.unit_inverse(a), b)
        return (b // self.p**va) * self.unit_inverse(self.unit_part(a)) % self.modulus

    def div_pi(self, a: int, s: int) -> int:
        """a / pi^s for a known to lie in (pi^s)."""
        if s == 0:
            return a
        if self.is_field:
            if a != 0:
                raise ArithmeticError("not divisible")
            return 0
        if a % self.p**s:
            raise ArithmeticError(f"{a} not divisible by p^{s}")
        return a // self.p**s

    def reduce(self, a: int, e: int) -> int:
        """Canonical representative of a modulo pi^e."""
        if e <= 0:
            return 0
        if self.is_field:
            return a
        return a % self.p**e

    def residues(self, e: int) -> range:
        """Canonical representatives of R/pi^e."""
        if e <= 0:
            return range(1)
        if self.is_field:
            return range(self.residue_size)
        return range(self.p**e)

    def quotient_size(self, e: int) -> int:
        return self.residue_size ** max(e, 0)

    # -- array arithmetic --------------------------------------------------
    def arr(self, data) -> np.ndarray:
        a = np.array(data, dtype=np.int64)
        if not self._tabled:
            a %= self.modulus
        return a

    def aadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._tabled:
            return self._tables[0][a, b]
        return (a + b) % self.modulus

    def aneg(self, a: np.ndarray) -> np.ndarray:
        if self._tabled:
            return self._tables[2][a]
        return (-a) % self.modulus

    def asub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.aadd(a, self.aneg(b))

    def ascale(self, c: int, a: np.ndarray) -> np.ndarray:
        if self._tabled:
            return self._tables[1][c, a]
        return (c * a) % self.modulus

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if not self._tabled:
            return (a @ b) % self.modulus
        add, mul = self._tables[0], self._tables[1]
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for l in range(a.shape[1]):
            out = add[out, mul[a[:, l][:, None], b[l, :][None, :]]]
        return out

    def areduce_rows(self, a: np.ndarray, exps) -> np.ndarray:
        """Reduce row j of a modulo pi^{exps[j]}."""
        a = np.array(a, dtype=np.int64)
        if self.is_field:
            for j, e in enumerate(exps):
                if e <= 0:
                    a[j, :] = 0
            return a
        mods = np.array([self.p ** max(e, 0) for e in exps], dtype=np.int64).reshape(-1, 1)
        return a % mods if a.size else a

    def elements(self):
        return range(self.size)
