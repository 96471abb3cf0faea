"""Representations of the ray 0 -> 1 -> 2 -> ... with eventually periodic tails.

A chain is stored as a finite window: stages 0..L-1 with L = start + period,
and L maps where map i joins stage i to stage i+1 and the last one wraps
back to stage ``start``.  Beyond the window everything repeats, so every
question about the infinite object reduces to finitely many stages.

Reversed chains (arrows n+1 -> n) arise as Pontryagin duals; they use the
same storage with every map pointing down.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


from ..errors import ShapeMismatch, UnsupportedTail, ValidationError
from ..quiver import AInfPlus, Quiver
from ..ring.base import BaseRing
from ..ring.module import FinModule, ModuleMap, direct_sum, image, kernel, lift_through
from .finite import Representation, make_representation

ZERO, ISO, PERIODIC = "eventually_zero", "eventually_iso", "eventually_periodic"


@dataclass(frozen=True)
class TailSpec:
    kind: str
    start: int
    period: int = 1

    def __post_init__(self):
        if self.kind not in (ZERO, ISO, PERIODIC):
            raise UnsupportedTail(f"unknown tail kind {self.kind!r}")
        if self.start < 0 or self.period < 1:
            raise ValidationError("tail start must be >= 0 and period >= 1")

    def to_json(self) -> dict:
        return {"kind": self.kind, "start": self.start, "period": self.period}


@dataclass(frozen=True, eq=False)
class ChainRep:
    ring: BaseRing
    modules: tuple
    maps: tuple
    tail: TailSpec
    reversed: bool = False

    def __post_init__(self):
        L = self.tail.start + self.tail.period
        if len(self.modules) != L or len(self.maps) != L:
            raise ValidationError(f"window needs {L} stages and {L} maps")
        for i, f in enumerate(self.maps):
            a, b = self.modules[i], self.modules[self._next(i)]
            dom, cod = (b, a) if self.reversed else (a, b)
            if f.domain != dom or f.codomain != cod:
                raise ShapeMismatch(f"map {i} does not match its stages")
        tail = self.modules[self.tail.start :]
        if self.tail.kind == ZERO and any(not M.is_zero for M in tail):
            raise ValidationError("eventually-zero tail has a nonzero stage")
        if self.tail.kind == ISO:
            for f in self.maps[self.tail.start :]:
                if f != ModuleMap.identity(f.domain):
                    raise ValidationError("eventually-iso tail must use identity maps")

    def _next(self, i: int) -> int:
        return i + 1 if i + 1 < len(self.modules) else self.tail.start

    @property
    def quiver(self) -> AInfPlus:
        return AInfPlus(self.reversed)

    @property
    def window(self) -> int:
        return len(self.modules)

    def index(self, n: int) -> int:
        s, p = self.tail.start, self.tail.period
        return n if n < s else s + (n - s) % p

    def stage(self, n: int) -> FinModule:
        return self.modules[self.index(n)]

    def __getitem__(self, n: int) -> FinModule:
        return self.stage(n)

    def map(self, n: int) -> ModuleMap:
        """The map on the arrow between stages n and n+1."""
        return self.maps[self.index(n)]

    def composite(self, n: int, m: int) -> ModuleMap:
        """X(n) -> X(m) for n <= m (forward chains)."""
        if self.reversed:
            raise ValidationError("forward composite on a reversed chain")
        f = ModuleMap.identity(self.stage(n))
        for i in range(n, m):
            f = self.map(i) @ f
        return f

    def period_endomorphism(self) -> ModuleMap:
        s = self.tail.start
        return self.composite(s, s + self.tail.period)

    def truncate(self, depth: int) -> Representation:
        """The finite representation on stages 0..depth-1."""
        Q = truncated_quiver(depth, self.reversed)
        mods = {n: self.stage(n) for n in range(depth)}
        maps = {f"r{n}": self.map(n) for n in range(depth - 1)}
        return make_representation(Q, self.ring, mods, maps)

    @property
    def is_zero(self) -> bool:
        return all(M.is_zero for M in self.modules)

    def key(self):
        return (
            self.ring, self.reversed, self.tail,
            tuple(self.modules), tuple(f.key() for f in self.maps),
        )

    def __eq__(self, other):
        return isinstance(other, ChainRep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        mods = ", ".join(M.describe() for M in self.modules)
        return f"ChainRep([{mods}], {self.tail.kind}@{self.tail.start}/{self.tail.period})"

    def reperiod(self, start: int, period: int) -> "ChainRep":
        """Same chain stored with a later start and a multiple period."""
        if start < self.tail.start or period % self.tail.period:
            raise ValidationError("can only lengthen the window")
        L = start + period
        mods = tuple(self.stage(n) for n in range(L))
        maps = tuple(self.map(n) for n in range(L))
        kind = self.tail.kind if period == self.tail.period or self.tail.kind != ISO else ISO
        return ChainRep(self.ring, mods, maps, TailSpec(kind, start, period), self.reversed)


def truncated_quiver(depth: int, reversed: bool = False) -> Quiver:
    if reversed:
        arrows = [(f"r{n}", n + 1, n) for n in range(depth - 1)]
    else:
        arrows = [(f"r{n}", n, n + 1) for n in range(depth - 1)]
    return Quiver.build(range(depth), arrows)


def chain(ring: BaseRing, prefix_modules, prefix_maps, tail_kind: str, tail_modules=(), tail_maps=(),
          reversed: bool = False) -> ChainRep:
    """Build a chain from raw data.

    ``prefix_maps[i]`` joins prefix stage i to stage i+1 (the last one lands
    in the first tail stage).  For eventually-iso tails ``tail_modules`` is
    the single module E; for periodic tails both lists have the period length
    and the last tail map wraps around.
    """
    from .finite import as_map, as_module

    pm = [as_module(ring, M) for M in prefix_modules]
    if tail_kind == ZERO:
        tm = [FinModule.zero(ring)]
    elif tail_kind == ISO:
        tm = [as_module(ring, tail_modules[0] if isinstance(tail_modules, (list, tuple)) else tail_modules)]
    elif tail_kind == PERIODIC:
        tm = [as_module(ring, M) for M in tail_modules]
    else:
        raise UnsupportedTail(tail_kind)
    mods = pm + tm
    s = len(pm)
    L = len(mods)
    nxt = lambda i: i + 1 if i + 1 < L else s
    raw = list(prefix_maps) + (list(tail_maps) if tail_kind == PERIODIC else [None] * len(tm))
    if len(raw) != L:
        raise ValidationError(f"expected {L} maps, got {len(raw)}")
    maps = []
    for i, spec in enumerate(raw):
        a, b = mods[i], mods[nxt(i)]
        dom, cod = (b, a) if reversed else (a, b)
        if spec is None and tail_kind == ISO and i >= s:
            maps.append(ModuleMap.identity(a))
        else:
            maps.append(as_map(dom, cod, spec))
    return ChainRep(ring, tuple(mods), tuple(maps), TailSpec(tail_kind, s, len(tm)), reversed)


def constant_chain(E: FinModule) -> ChainRep:
    """E -> E -> E -> ... with identity maps."""
    return chain(E.ring, [], [], ISO, [E])


@dataclass(frozen=True, eq=False)
class ChainMorphism:
    """Components eta_n: X(n) -> Y(n), stored on a window with a periodic tail."""

    source: ChainRep
    target: ChainRep
    components: tuple
    start: int
    period: int

    def __post_init__(self):
        if self.source.reversed != self.target.reversed:
            raise ShapeMismatch("chains point in different directions")
        if len(self.components) != self.start + self.period:
            raise ValidationError("component window has the wrong length")
        for n, c in enumerate(self.components):
            if c.domain != self.source.stage(n) or c.codomain != self.target.stage(n):
                raise ShapeMismatch(f"component {n} does not match the stages")
        X, Y = self.source, self.target
        for n in range(self.check_depth()):
            if X.reversed:
                ok = Y.map(n) @ self[n + 1] == self[n] @ X.map(n)
            else:
                ok = Y.map(n) @ self[n] == self[n + 1] @ X.map(n)
            if not ok:
                raise ValidationError(f"naturality fails at arrow {n}")

    def check_depth(self) -> int:
        """Arrows 0..d-1 cover every distinct naturality square."""
        X, Y = self.source, self.target
        s = max(self.start, X.tail.start, Y.tail.start)
        p = math.lcm(self.period, X.tail.period, Y.tail.period)
        return s + p

    def __getitem__(self, n: int) -> ModuleMap:
        i = n if n < self.start else self.start + (n - self.start) % self.period
        return self.components[i]

    @classmethod
    def from_function(cls, X: ChainRep, Y: ChainRep, comp, start: int, period: int) -> "ChainMorphism":
        return cls(X, Y, tuple(comp(n) for n in range(start + period)), start, period)

    @classmethod
    def identity(cls, X: ChainRep) -> "ChainMorphism":
        return cls.from_function(X, X, lambda n: ModuleMap.identity(X.stage(n)), X.tail.start, X.tail.period)

    @classmethod
    def zero(cls, X: ChainRep, Y: ChainRep) -> "ChainMorphism":
        s = max(X.tail.start, Y.tail.start)
        p = math.lcm(X.tail.period, Y.tail.period)
        return cls.from_function(X, Y, lambda n: ModuleMap.zero(X.stage(n), Y.stage(n)), s, p)

    def _joint(self, other) -> tuple[int, int]:
        return max(self.start, other.start), math.lcm(self.period, other.period)

    def __matmul__(self, other: "ChainMorphism") -> "ChainMorphism":
        s, p = self._joint(other)
        return ChainMorphism.from_function(other.source, self.target, lambda n: self[n] @ other[n], s, p)

    def __add__(self, other: "ChainMorphism") -> "ChainMorphism":
        s, p = self._joint(other)
        return ChainMorphism.from_function(self.source, self.target, lambda n: self[n] + other[n], s, p)

    def __sub__(self, other: "ChainMorphism") -> "ChainMorphism":
        s, p = self._joint(other)
        return ChainMorphism.from_function(self.source, self.target, lambda n: self[n] - other[n], s, p)

    def equals(self, other: "ChainMorphism") -> bool:
        s, p = self._joint(other)
        s = max(s, self.source.tail.start, self.target.tail.start)
        return all(self[n] == other[n] for n in range(s + p))

    def is_mono(self) -> bool:
        return all(c.is_injective() for c in self.components)


# -- colimits and torsion ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Colimit:
    """colim X as a submodule I of the first tail stage.

    ``base`` is the projection X(start) -> I onto the stable image along the
    stable kernel of the period endomorphism psi; ``alpha`` is psi restricted
    to I, an automorphism of order ``order``.
    """

    chain: ChainRep
    module: FinModule
    inclusion: ModuleMap
    base: ModuleMap
    alpha: ModuleMap
    alpha_inv: ModuleMap
    order: int

    def cocone(self, n: int) -> ModuleMap:
        """c_n : X(n) -> colim X, compatible with every chain map."""
        X = self.chain
        s, p = X.tail.start, X.tail.period
        if n <= s:
            return self.base @ X.composite(n, s)
        j = -(-(n - s) // p)  # first multiple of the period at or after n
        c = self.base
        for _ in range(j % self.order):
            c = self.alpha_inv @ c
        return c @ X.composite(n, s + j * p)


def _power(f: ModuleMap, e: int) -> ModuleMap:
    out = ModuleMap.identity(f.domain)
    for _ in range(e):
        out = f @ out
    return out


def fitting_index(psi: ModuleMap) -> int:
    """Least m with im psi^m = im psi^(m+1) (then also for kernels)."""
    m, prev = 0, psi.domain.cardinality
    g = ModuleMap.identity(psi.domain)
    while True:
        g = psi @ g
        size = image(g).domain.cardinality
        if size == prev:
            return m
        prev = size
        m += 1


def colim_along_ray(X: ChainRep) -> Colimit:
    if X.reversed:
        raise UnsupportedTail("a reversed chain has no forward colimit")
    if X.tail.kind not in (ZERO, ISO, PERIODIC):
        raise UnsupportedTail(X.tail.kind)
    psi = X.period_endomorphism()
    m = fitting_index(psi)
    pm = _power(psi, m)
    inc = image(pm)
    alpha = lift_through(inc, psi @ inc)
    I = inc.domain
    ident = ModuleMap.identity(I)
    order, g = 1, alpha
    while g != ident:
        g = alpha @ g
        order += 1
    alpha_inv = _power(alpha, order - 1)
    # x_I = alpha^-m psi^m x on the Fitting decomposition
    base = _power(alpha_inv, m) @ lift_through(inc, pm)
    return Colimit(X, I, inc, base, alpha, alpha_inv, order)


def cocone_period(X: ChainRep) -> tuple[int, int]:
    """(start, period) after which the cocone maps repeat."""
    col = colim_along_ray(X)
    return X.tail.start, X.tail.period * col.order


def torsion_subrep(X: ChainRep) -> tuple[ChainRep, ChainMorphism]:
    """t(X)_n = elements of X(n) that die at some later stage."""
    col = colim_along_ray(X)
    # Ker c_n does not see the alpha twist, so the torsion has the chain's period
    s, p = X.tail.start, X.tail.period
    incs = [kernel(col.cocone(n)) for n in range(s + p)]
    maps = []
    for n in range(s + p):
        nxt = n + 1 if n + 1 < s + p else s
        g = lift_through(incs[nxt], X.map(n) @ incs[n])
        maps.append(g)
    mods = tuple(i.domain for i in incs)
    kind = ZERO if all(M.is_zero for M in mods[s:]) else PERIODIC
    if kind == ZERO:
        mods, maps = mods[: s + 1], maps[: s + 1]
        incs = incs[: s + 1]
        T = ChainRep(X.ring, mods, tuple(maps), TailSpec(ZERO, s, 1))
        return T, ChainMorphism(T, X, tuple(incs), s, 1)
    T = ChainRep(X.ring, mods, tuple(maps), TailSpec(PERIODIC, s, p))
    return T, ChainMorphism(T, X, tuple(incs), s, p)


def chain_quotient(X: ChainRep, sub: ChainMorphism) -> tuple[ChainRep, ChainMorphism]:
    """X / image(sub) with its projection."""
    from ..ring.hom import extend_along
    from ..ring.module import quotient

    s = max(sub.start, X.tail.start, sub.source.tail.start)
    p = math.lcm(sub.period, X.tail.period, sub.source.tail.period)
    projs = [quotient(X.stage(n), sub[n].matrix) for n in range(s + p)]
    maps = []
    for n in range(s + p):
        nxt = n + 1 if n + 1 < s + p else s
        maps.append(extend_along(projs[n], projs[nxt] @ X.map(n)))
    mods = tuple(q.codomain for q in projs)
    C = ChainRep(X.ring, mods, tuple(maps), TailSpec(PERIODIC, s, p))
    return C, ChainMorphism(X, C, tuple(projs), s, p)


def chain_layout(chains, morphisms=()) -> tuple[int, int]:
    """Common (start, period) past which all the given chains and morphisms repeat."""
    s = max([c.tail.start for c in chains] + [m.start for m in morphisms])
    p = math.lcm(*([c.tail.period for c in chains] + [m.period for m in morphisms]))
    return s, p


def chain_kernel(eta: ChainMorphism) -> tuple[ChainRep, ChainMorphism]:
    """Ker eta with its inclusion."""
    X = eta.source
    s, p = chain_layout([X, eta.target], [eta])
    incs = [kernel(eta[n]) for n in range(s + p)]
    maps = []
    for n in range(s + p):
        nxt = n + 1 if n + 1 < s + p else s
        maps.append(lift_through(incs[nxt], X.map(n) @ incs[n]))
    K = ChainRep(X.ring, tuple(i.domain for i in incs), tuple(maps), TailSpec(PERIODIC, s, p))
    return K, ChainMorphism(K, X, tuple(incs), s, p)


@dataclass(frozen=True, eq=False)
class ChainSum:
    chain: ChainRep
    inclusions: tuple  # ChainMorphisms X_i -> sum
    projections: tuple


def chain_direct_sum(parts: list[ChainRep]) -> ChainSum:
    ring = parts[0].ring
    s, p = chain_layout(parts)
    L = s + p
    mods, incs, projs = [], [], []
    for n in range(L):
        M, i, q = direct_sum([X.stage(n) for X in parts], ring)
        mods.append(M)
        incs.append(i)
        projs.append(q)
    maps = []
    for n in range(L):
        nxt = n + 1 if n + 1 < L else s
        f = ModuleMap.zero(mods[n], mods[nxt])
        for k, X in enumerate(parts):
            f = f + incs[nxt][k] @ X.map(n) @ projs[n][k]
        maps.append(f)
    tails = mods[s:]
    if all(M.is_zero for M in tails):
        kind = ZERO
    elif all(X.tail.kind in (ZERO, ISO) for X in parts):
        kind = ISO
    else:
        kind = PERIODIC
    if kind == ZERO:
        mods, maps = mods[: s + 1], maps[: s + 1]
        p = 1
    S = ChainRep(ring, tuple(mods), tuple(maps), TailSpec(kind, s, p))
    stage_sum = lambda n: direct_sum([X.stage(n) for X in parts], ring)
    inc_m = tuple(ChainMorphism.from_function(X, S, lambda n, k=k: stage_sum(n)[1][k], s, p)
                  for k, X in enumerate(parts))
    proj_m = tuple(ChainMorphism.from_function(S, X, lambda n, k=k: stage_sum(n)[2][k], s, p)
                   for k, X in enumerate(parts))
    return ChainSum(S, inc_m, proj_m)


