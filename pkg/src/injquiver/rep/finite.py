"""Representations of finite quivers and the morphisms between them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, DEFAULT_BUDGET, ShapeMismatch, ValidationError
from ..quiver import Quiver, vkey
from ..ring.base import BaseRing
from ..ring.hom import HomSpace, extend_along
from ..ring.module import (
    FinModule,
    ModuleMap,
    cokernel,
    direct_sum,
    image,
    kernel,
    lift_through,
    solve,
)


def as_module(ring: BaseRing, spec) -> FinModule:
    """FinModule from a FinModule, an exponent list, or (fields only) a dimension."""
    if isinstance(spec, FinModule):
        if spec.ring != ring:
            raise ShapeMismatch("module over a different ring")
        return spec
    if isinstance(spec, (int, np.integer)):
        if not ring.is_field:
            raise ValidationError("a bare integer module size is only meaningful over a field")
        return FinModule(ring, (1,) * int(spec))
    return FinModule.of(ring, [int(e) for e in spec])


def as_map(dom: FinModule, cod: FinModule, spec) -> ModuleMap:
    if isinstance(spec, ModuleMap):
        if spec.domain != dom or spec.codomain != cod:
            raise ShapeMismatch(f"map {spec!r} does not match {dom.describe()} -> {cod.describe()}")
        return spec
    if spec is None:
        return ModuleMap.zero(dom, cod)
    a = np.asarray(spec, dtype=np.int64)
    if a.size == 0:
        a = np.zeros((cod.rank, dom.rank), dtype=np.int64)
    return ModuleMap(dom, cod, a.reshape(a.shape if a.ndim == 2 else (cod.rank, dom.rank)))


@dataclass(frozen=True, eq=False)
class Representation:
    quiver: Quiver
    ring: BaseRing
    modules: dict
    maps: dict

    def __post_init__(self):
        for v in self.quiver.vertices:
            if v not in self.modules:
                raise ValidationError(f"no module at vertex {v!r}")
        for a in self.quiver.arrows:
            if a.id not in self.maps:
                raise ValidationError(f"no map on arrow {a.id!r}")
            f = self.maps[a.id]
            if f.domain != self.modules[a.src] or f.codomain != self.modules[a.tgt]:
                raise ShapeMismatch(f"arrow {a.id!r}: map does not match the vertex modules")

    def __getitem__(self, v) -> FinModule:
        return self.modules[v]

    def arrow_map(self, aid) -> ModuleMap:
        return self.maps[aid]

    @property
    def is_zero(self) -> bool:
        return all(M.is_zero for M in self.modules.values())

    @property
    def cardinality(self) -> int:
        out = 1
        for M in self.modules.values():
            out *= M.cardinality
        return out

    def key(self):
        return (
            self.quiver,
            tuple((v, self.modules[v]) for v in self.quiver.vertices),
            tuple((a.id, self.maps[a.id].key()) for a in self.quiver.arrows),
        )

    def __eq__(self, other):
        return isinstance(other, Representation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        mods = ", ".join(f"{v}: {self.modules[v].describe()}" for v in self.quiver.vertices)
        return f"Representation({mods})"

    def path_map(self, path: tuple, start) -> ModuleMap:
        f = ModuleMap.identity(self.modules[start])
        for aid in path:
            f = self.maps[aid] @ f
        return f

    def identity(self) -> "RepMorphism":
        return RepMorphism(self, self, {v: ModuleMap.identity(M) for v, M in self.modules.items()})

    def zero_to(self, other: "Representation") -> "RepMorphism":
        return RepMorphism(
            self, other, {v: ModuleMap.zero(self[v], other[v]) for v in self.quiver.vertices}
        )


def make_representation(quiver: Quiver, ring: BaseRing, modules: dict, maps: dict | None = None) -> Representation:
    """Validated representation; modules/maps may be given in raw form."""
    maps = maps or {}
    mods = {v: as_module(ring, modules.get(v, ())) for v in quiver.vertices}
    unknown = set(modules) - set(quiver.vertices)
    if unknown:
        raise ValidationError(f"modules given for unknown vertices {sorted(unknown, key=vkey)}")
    fmaps = {}
    for a in quiver.arrows:
        fmaps[a.id] = as_map(mods[a.src], mods[a.tgt], maps.get(a.id))
    return Representation(quiver, ring, mods, fmaps)


def zero_representation(quiver: Quiver, ring: BaseRing) -> Representation:
    return make_representation(quiver, ring, {})


@dataclass(frozen=True, eq=False)
class RepMorphism:
    source: Representation
    target: Representation
    components: dict

    def __post_init__(self):
        if self.source.quiver != self.target.quiver:
            raise ShapeMismatch("morphism between representations of different quivers")
        X, Y = self.source, self.target
        for v in X.quiver.vertices:
            c = self.components.get(v)
            if c is None or c.domain != X[v] or c.codomain != Y[v]:
                raise ShapeMismatch(f"component at {v!r} does not match the vertex modules")
        for a in X.quiver.arrows:
            if Y.maps[a.id] @ self.components[a.src] != self.components[a.tgt] @ X.maps[a.id]:
                raise ValidationError(f"naturality fails at arrow {a.id!r}")

    def __getitem__(self, v) -> ModuleMap:
        return self.components[v]

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(
            other.source, self.target, {v: self[v] @ other[v] for v in self.source.quiver.vertices}
        )

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: self[v] + other[v] for v in self.components})

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: self[v] - other[v] for v in self.components})

    def key(self):
        return tuple((v, self.components[v].key()) for v in self.source.quiver.vertices)

    def __eq__(self, other):
        return isinstance(other, RepMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        comps = ", ".join(f"{v}: {self.components[v].matrix.tolist()}" for v in self.source.quiver.vertices)
        return f"RepMorphism({comps})"

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components.values())

    def is_mono(self) -> bool:
        return all(c.is_injective() for c in self.components.values())

    def is_epi(self) -> bool:
        return all(c.is_surjective() for c in self.components.values())

    def is_iso(self) -> bool:
        return all(c.is_iso() for c in self.components.values())


# -- local maps --------------------------------------------------------------

@dataclass(frozen=True)
class LocalMap:
    """A source or sink map with the structure maps of its product/sum side."""

    map: ModuleMap
    arrows: tuple
    inclusions: tuple
    projections: tuple


def source_map_parts(X: Representation, v) -> LocalMap:
    """f_v : X(v) -> prod over arrows a with s(a) = v of X(t(a))."""
    outs = X.quiver.out_arrows(v)
    P, incs, projs = direct_sum([X[a.tgt] for a in outs], X.ring)
    f = ModuleMap.zero(X[v], P)
    for a, i in zip(outs, incs):
        f = f + i @ X.maps[a.id]
    return LocalMap(f, tuple(a.id for a in outs), tuple(incs), tuple(projs))


def source_map(X: Representation, v) -> ModuleMap:
    return source_map_parts(X, v).map


def sink_map_parts(X: Representation, v) -> LocalMap:
    """sum over arrows a with t(a) = v of X(s(a)) -> X(v)."""
    ins = X.quiver.in_arrows(v)
    S, incs, projs = direct_sum([X[a.src] for a in ins], X.ring)
    f = ModuleMap.zero(S, X[v])
    for a, p in zip(ins, projs):
        f = f + X.maps[a.id] @ p
    return LocalMap(f, tuple(a.id for a in ins), tuple(incs), tuple(projs))


def sink_map(X: Representation, v) -> ModuleMap:
    return sink_map_parts(X, v).map


# -- kernels, cokernels, sums ------------------------------------------------

def _sub_rep(Y: Representation, incs: dict) -> tuple[Representation, RepMorphism]:
    """Subrepresentation with vertexwise inclusions ``incs`` (must be closed)."""
    maps = {}
    for a in Y.quiver.arrows:
        g = lift_through(incs[a.tgt], Y.maps[a.id] @ incs[a.src])
        if g is None:
            raise ValidationError(f"submodules are not closed under arrow {a.id!r}")
        maps[a.id] = g
    S = Representation(Y.quiver, Y.ring, {v: i.domain for v, i in incs.items()}, maps)
    return S, RepMorphism(S, Y, incs)


def _quotient_rep(Y: Representation, projs: dict) -> tuple[Representation, RepMorphism]:
    maps = {}
    for a in Y.quiver.arrows:
        g = extend_along(projs[a.src], projs[a.tgt] @ Y.maps[a.id])
        if g is None:
            raise ValidationError(f"quotient is not compatible with arrow {a.id!r}")
        maps[a.id] = g
    C = Representation(Y.quiver, Y.ring, {v: p.codomain for v, p in projs.items()}, maps)
    return C, RepMorphism(Y, C, projs)


def subrepresentation(Y: Representation, incs: dict) -> tuple[Representation, RepMorphism]:
    return _sub_rep(Y, incs)


def quotient_representation(Y: Representation, projs: dict) -> tuple[Representation, RepMorphism]:
    return _quotient_rep(Y, projs)


def rep_kernel(eta: RepMorphism) -> tuple[Representation, RepMorphism]:
    return _sub_rep(eta.source, {v: kernel(c) for v, c in eta.components.items()})


def rep_image(eta: RepMorphism) -> tuple[Representation, RepMorphism]:
    return _sub_rep(eta.target, {v: image(c) for v, c in eta.components.items()})


def rep_cokernel(eta: RepMorphism) -> tuple[Representation, RepMorphism]:
    return _quotient_rep(eta.target, {v: cokernel(c) for v, c in eta.components.items()})


@dataclass(frozen=True)
class RepSum:
    rep: Representation
    inclusions: tuple
    projections: tuple


def rep_direct_sum(reps: list[Representation]) -> RepSum:
    Q, ring = reps[0].quiver, reps[0].ring
    mods, incs, projs = {}, {}, {}
    for v in Q.vertices:
        mods[v], incs[v], projs[v] = direct_sum([X[v] for X in reps], ring)
    maps = {}
    for a in Q.arrows:
        f = ModuleMap.zero(mods[a.src], mods[a.tgt])
        for n, X in enumerate(reps):
            f = f + incs[a.tgt][n] @ X.maps[a.id] @ projs[a.src][n]
        maps[a.id] = f
    S = Representation(Q, ring, mods, maps)
    inc_m = tuple(RepMorphism(X, S, {v: incs[v][n] for v in Q.vertices}) for n, X in enumerate(reps))
    proj_m = tuple(RepMorphism(S, X, {v: projs[v][n] for v in Q.vertices}) for n, X in enumerate(reps))
    return RepSum(S, inc_m, proj_m)


def direct_sum_reps(X: Representation, Y: Representation) -> Representation:
    return rep_direct_sum([X, Y]).rep


def transport(X: Representation, isos: dict) -> tuple[Representation, RepMorphism]:
    """The representation obtained by moving X along vertexwise isomorphisms."""
    inv = {}
    for v, f in isos.items():
        g = lift_through(f, ModuleMap.identity(f.codomain))
        if g is None or g @ f != ModuleMap.identity(f.domain):
            raise ValidationError(f"component at {v!r} is not an isomorphism")
        inv[v] = g
    maps = {a.id: isos[a.tgt] @ X.maps[a.id] @ inv[a.src] for a in X.quiver.arrows}
    Y = Representation(X.quiver, X.ring, {v: f.codomain for v, f in isos.items()}, maps)
    return Y, RepMorphism(X, Y, dict(isos))


# -- Hom ---------------------------------------------------------------------

class HomReps:
    """Hom(X, Y) as the kernel of the naturality defect map.

    delta : prod_v Hom(X(v), Y(v)) -> prod_a Hom(X(s a), Y(t a)),
    phi -> Y(a) phi_s - phi_t X(a).
    """

    def __init__(self, X: Representation, Y: Representation):
        if X.quiver != Y.quiver:
            raise ShapeMismatch("Hom between representations of different quivers")
        self.source, self.target = X, Y
        Q, ring = X.quiver, X.ring
        self._vspaces = {v: HomSpace(X[v], Y[v]) for v in Q.vertices}
        self._aspaces = {a.id: HomSpace(X[a.src], Y[a.tgt]) for a in Q.arrows}
        self.total, self._vinc, self._vproj = direct_sum(
            [self._vspaces[v].module for v in Q.vertices], ring
        )
        D, ainc, _ = direct_sum([self._aspaces[a.id].module for a in Q.arrows], ring)
        cols = []
        for t in range(self.total.rank):
            comps = self._components(self.total.basis(t))
            col = D.zero_element()
            for a, inc in zip(Q.arrows, ainc):
                d = Y.maps[a.id] @ comps[a.src] - comps[a.tgt] @ X.maps[a.id]
                col = D.add(col, inc(self._aspaces[a.id].coords(d)))
            cols.append(col.reshape(-1, 1))
        mat = np.hstack(cols) if cols else np.zeros((D.rank, 0))
        self.defect = ModuleMap(self.total, D, mat)
        self.inclusion = kernel(self.defect)
        self.module = self.inclusion.domain

    def _components(self, x) -> dict:
        Q = self.source.quiver
        return {
            v: self._vspaces[v].to_map(p(x)) for v, p in zip(Q.vertices, self._vproj)
        }

    @property
    def cardinality(self) -> int:
        return self.module.cardinality

    def to_morphism(self, coords) -> RepMorphism:
        return RepMorphism(self.source, self.target, self._components(self.inclusion(coords)))

    def coords(self, eta: RepMorphism) -> np.ndarray:
        Q = self.source.quiver
        x = self.total.zero_element()
        for v, inc in zip(Q.vertices, self._vinc):
            x = self.total.add(x, inc(self._vspaces[v].coords(eta[v])))
        c = solve(self.inclusion, x)
        if c is None:
            raise ValidationError("not a natural transformation")
        return c

    def basis(self) -> list[RepMorphism]:
        return [self.to_morphism(self.module.basis(t)) for t in range(self.module.rank)]

    def elements(self, budget: int = DEFAULT_BUDGET):
        if self.cardinality > budget:
            raise BudgetExceeded(f"|Hom| = {self.cardinality} exceeds budget {budget}")
        for c in self.module.elements():
            yield self.to_morphism(c)


def hom_reps(X: Representation, Y: Representation, budget: int = DEFAULT_BUDGET) -> list[RepMorphism]:
    """All morphisms X -> Y, in a deterministic order."""
    return list(HomReps(X, Y).elements(budget))


def hom_space(X: Representation, Y: Representation) -> HomReps:
    return HomReps(X, Y)
