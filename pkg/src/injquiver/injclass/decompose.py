"""Decomposition of injective representations of trees into e_* indecomposables.

Over a field every injective representation of a finite acyclic quiver, the
forward ray, or a barren forest is a direct sum of e_*^w(k) with w a vertex
or a vertex at infinity.  The multiplicity of a finite vertex v is the
dimension of the kernel of the source map at v; that of the vertex at the end
of a ray is the dimension of the colimit along the ray.  The isomorphism to
the rebuilt sum is assembled from adjunction components: a retraction of
X(v) onto that kernel gives the summand map X -> e_*^v(kernel).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import NotATree, NotInjective, ValidationError
from ..quiver import AInfPlus, BarrenForest, Quiver, paths, vkey
from ..rep.chain import ChainMorphism, ChainRep, chain_direct_sum, chain_layout, colim_along_ray
from ..rep.finite import RepMorphism, Representation, rep_direct_sum, source_map
from ..rep.forest import ForestMorphism, ForestRep, forest_direct_sum
from ..rep.local import assemble_source, local_sources
from ..ring.hom import extend_along
from ..ring.module import FinModule, ModuleMap, kernel
from .local import local_injectivity_test

RAY = "w"  # name of the single ray when a chain is read as a one-ray forest


@dataclass(frozen=True)
class Summand:
    target: object  # vertex, ("ray", ray id, n) or ("inf", ray id)
    seed: FinModule
    multiplicity: int

    def to_json(self) -> dict:
        t = list(self.target) if isinstance(self.target, tuple) else self.target
        return {"target": t, "seed": list(self.seed.exps), "multiplicity": self.multiplicity}


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    summands: tuple
    rebuild: object
    iso: object  # X -> rebuild

    def multiset(self) -> dict:
        return {s.target: s.multiplicity for s in self.summands}

    def to_json(self) -> dict:
        return {"summands": [s.to_json() for s in self.summands]}


def _target_key(t):
    return vkey(t)


def _retraction(inc: ModuleMap) -> ModuleMap:
    r = extend_along(inc, ModuleMap.identity(inc.domain))
    assert r is not None  # over a field every mono splits
    return r


def _check(X) -> None:
    if not X.ring.is_field:
        raise ValidationError("non-field base: the constructive multiplicity count needs a field")
    verdict = local_injectivity_test(X)
    if not verdict.local_pass:
        raise NotInjective(f"not injective: {verdict.failure}")


def decompose_injective_tree(X) -> TreeDecomposition:
    """Split an injective X into e_*^w(k) summands with an explicit isomorphism."""
    _check(X)
    if isinstance(X, Representation):
        if not X.quiver.is_acyclic():
            raise NotATree("decomposition needs an acyclic quiver")
        return _decompose_finite(X)
    if isinstance(X, ChainRep):
        if X.reversed:
            raise NotATree("the reversed ray is not a rooted tree")
        return _decompose_chain(X)
    if isinstance(X, ForestRep):
        if X.quiver.reversed:
            raise NotATree("a reversed forest is not a rooted tree")
        return _decompose_forest(X)
    raise NotATree(f"cannot decompose {type(X).__name__}")


def _summands(mults: dict, ring) -> tuple:
    one = FinModule(ring, (1,))
    return tuple(Summand(t, one, m) for t, m in sorted(mults.items(), key=lambda kv: _target_key(kv[0])) if m)


# -- finite acyclic quivers --------------------------------------------------------

def _decompose_finite(X: Representation) -> TreeDecomposition:
    from ..adjoint import adjunction_backward, e_star_finite

    Q = X.quiver
    parts, maps, mults = [], [], {}
    for v in Q.vertices:
        K = kernel(source_map(X, v))
        mults[v] = K.domain.rank
        if mults[v]:
            es = e_star_finite(Q, v, K.domain)
            parts.append(es.rep)
            maps.append(adjunction_backward(es, X, _retraction(K)))
    if not parts:
        from ..rep.finite import zero_representation

        Z = zero_representation(Q, X.ring)
        return TreeDecomposition((), Z, X.zero_to(Z))
    S = rep_direct_sum(parts)
    phi = S.inclusions[0] @ maps[0]
    for inc, m in zip(S.inclusions[1:], maps[1:]):
        phi = phi + inc @ m
    if not phi.is_iso():
        raise ArithmeticError("assembled map to the rebuilt sum is not an isomorphism")
    return TreeDecomposition(_summands(mults, X.ring), S.rep, phi)


# -- the forward ray -----------------------------------------------------------------

def _decompose_chain(X: ChainRep) -> TreeDecomposition:
    from ..adjoint import e_star

    parts, maps, mults = [], [], {}
    s, p = X.tail.start, X.tail.period
    for n in range(X.window):
        K = kernel(X.map(n))
        if K.domain.rank:
            mults[n] = mults.get(n, 0) + K.domain.rank
            r = _retraction(K)
            E = e_star(AInfPlus(), n, K.domain)
            start = max(n + 1, s, E.tail.start)
            comp = (lambda u, r=r, n=n, E=E: r @ X.composite(u, n) if u <= n else ModuleMap.zero(X.stage(u), E.stage(u)))
            parts.append(E)
            maps.append(ChainMorphism.from_function(X, E, comp, start, math.lcm(p, E.tail.period)))
    col = colim_along_ray(X)
    mults[("inf", RAY)] = col.module.rank
    if col.module.rank:
        E = e_star(AInfPlus(), ("inf", RAY), col.module)
        parts.append(E)
        maps.append(ChainMorphism.from_function(X, E, col.cocone, s, p * col.order))
    if not parts:
        return TreeDecomposition((), X, ChainMorphism.identity(X))
    S = chain_direct_sum(parts)
    phi = S.inclusions[0] @ maps[0]
    for inc, m in zip(S.inclusions[1:], maps[1:]):
        phi = phi + inc @ m
    if not all(phi[n].is_iso() for n in range(phi.check_depth() + 1)):
        raise ArithmeticError("assembled map to the rebuilt sum is not an isomorphism")
    return TreeDecomposition(_summands(mults, X.ring), S.chain, phi)


# -- barren forests ------------------------------------------------------------------

def _decompose_forest(X: ForestRep) -> TreeDecomposition:
    from ..adjoint import e_star

    T = X.quiver
    mults, seeds = {}, {}
    for loc in local_sources(X):
        f, _, _ = assemble_source(loc)
        K = kernel(f)
        if K.domain.rank:
            label = loc.label
            target = ("ray", label[0], label[1]) if _is_ray_label(T, label) else label
            mults[target] = K.domain.rank
            seeds[target] = _retraction(K)
    cols = {r.id: colim_along_ray(X.rays[r.id]) for r in T.rays}
    for rid, col in cols.items():
        if col.module.rank:
            mults[("inf", rid)] = col.module.rank
            seeds[("inf", rid)] = ModuleMap.identity(col.module)
    parts, maps = [], []
    for target in sorted(seeds, key=_target_key):
        phi = seeds[target]
        E = e_star(T, target, phi.codomain)
        parts.append(E)
        maps.append(_forest_component(X, E, target, phi, cols))
    if not parts:
        return TreeDecomposition((), X, None)
    S = forest_direct_sum(parts)
    iso = S.inclusions[0] @ maps[0]
    for inc, m in zip(S.inclusions[1:], maps[1:]):
        iso = iso + inc @ m
    if not iso.is_iso():
        raise ArithmeticError("assembled map to the rebuilt sum is not an isomorphism")
    return TreeDecomposition(_summands(mults, X.ring), S.rep, iso)


def _is_ray_label(T: BarrenForest, label) -> bool:
    return isinstance(label, tuple) and len(label) == 2 and any(r.id == label[0] for r in T.rays)


def _core_path(Q: Quiver, u, v):
    ps = paths(Q, u, v)
    return ps[0] if ps else None


def _forest_component(X: ForestRep, E: ForestRep, target, phi: ModuleMap, cols: dict) -> ForestMorphism:
    """The morphism X -> e_*^target corresponding to phi: X(target) -> seed."""
    T = X.quiver
    if isinstance(target, tuple) and target[0] in ("ray", "inf"):
        rid = target[1]
        end = T.ray(rid).attach
    else:
        rid, end = None, target

    def at_end(u):
        """X(u) -> X(end) along the core, or None."""
        path = _core_path(T.core, u, end)
        return None if path is None else X.core.path_map(path, u)

    def finish(g, stage_from):
        """Compose X(end) -> ... -> target with phi, starting at ray stage ``stage_from``."""
        if rid is None:
            return phi @ g
        ch = X.rays[rid]
        if target[0] == "ray":
            return phi @ ch.composite(stage_from, target[2]) @ g
        return phi @ cols[rid].cocone(stage_from) @ g

    core = {}
    for u in T.core.vertices:
        g = at_end(u)
        core[u] = ModuleMap.zero(X.core[u], E.core[u]) if g is None else finish(g, 0)
    core_m = RepMorphism(X.core, E.core, core)
    rays = {}
    for r in T.rays:
        ch, ech = X.rays[r.id], E.rays[r.id]
        s, p = chain_layout([ch, ech])
        if r.id == rid:
            if target[0] == "ray":
                s = max(s, target[2] + 1)
            else:
                p = p * cols[rid].order

            def comp(m, ch=ch, ech=ech):
                if m == 0:
                    return core[r.attach]
                if target[0] == "ray" and m > target[2]:
                    return ModuleMap.zero(ch.stage(m), ech.stage(m))
                return finish(ModuleMap.identity(ch.stage(m)), m)
        else:
            def comp(m, ch=ch, ech=ech, att=r.attach):
                return core[att] if m == 0 else ModuleMap.zero(ch.stage(m), ech.stage(m))
        rays[r.id] = ChainMorphism.from_function(ch, ech, comp, max(s, 1), p)
    return ForestMorphism(X, E, core_m, rays)


def rebuild(summands, quiver, ring):
    """The direct sum of e_*^target(k^multiplicity) over the summands."""
    from ..adjoint import e_star

    parts = [e_star(quiver, s.target, FinModule(ring, (1,) * s.multiplicity)) for s in summands]
    if isinstance(quiver, Quiver):
        return rep_direct_sum(parts).rep
    if isinstance(quiver, AInfPlus):
        return chain_direct_sum(parts).chain
    return forest_direct_sum(parts).rep
