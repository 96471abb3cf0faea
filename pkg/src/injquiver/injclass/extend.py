"""Constructive extension of morphisms into locally injective targets.

Given a mono g: S -> X and h: S -> E, build t: X -> E with t o g = h.  On a
finite acyclic quiver vertices are handled sinks first.  At a vertex v with
source map f: E(v) -> prod E(w), a section s of f and K = Ker f, the
component is

    t_v = s o beta + incl_K o gamma,    beta = (t_w o X(a))_a,

where gamma: X(v) -> K extends the K-part of h_v - s o beta o g_v along g_v
(possible because K is a summand of the injective module E(v)).  On the ray
the problem is first compactified: past the stage where every chain is
periodic and E has invertible maps, a morphism is the same as one map out
of the colimit.
"""
from __future__ import annotations

import math

from ..errors import NotInjective, ShapeMismatch, UnsupportedQuiver, ValidationError
from ..quiver import Quiver
from ..rep.chain import ChainMorphism, ChainRep, colim_along_ray
from ..rep.finite import RepMorphism, Representation, make_representation, source_map_parts
from ..ring.hom import extend_along, split_epi_witness
from ..ring.module import ModuleMap, kernel, lift_through
from .local import local_injectivity_test

INF = "inf"


def _check_problem(g, h):
    if g.source != h.source:
        raise ShapeMismatch("g and h must share their source")
    if not g.is_mono():
        raise ValidationError("g must be a monomorphism")


def _require_locally_injective(E) -> None:
    verdict = local_injectivity_test(E)
    if not verdict.local_pass:
        raise NotInjective(f"E fails local criteria: {verdict.failure}")


def _extend_finite(g: RepMorphism, h: RepMorphism) -> RepMorphism:
    X, E = g.target, h.target
    Q = X.quiver
    comps = {}
    for v in reversed(Q.topological_order()):
        parts = source_map_parts(E, v)
        f = parts.map
        cert = split_epi_witness(f)
        if not cert:
            raise NotInjective(f"E fails local criteria at vertex {v!r}: {cert.reason}")
        sec = cert.payload["section"]
        beta = ModuleMap.zero(X[v], f.codomain)
        for aid, inc in zip(parts.arrows, parts.inclusions):
            a = Q.arrow(aid)
            beta = beta + inc @ comps[a.tgt] @ X.maps[aid]
        base = sec @ beta
        k = kernel(f)
        delta = lift_through(k, h[v] - base @ g[v])
        if delta is None:
            raise ValidationError(f"residual at vertex {v!r} leaves the kernel of the source map")
        gamma = extend_along(g[v], delta)
        if gamma is None:
            raise NotInjective(f"E({v!r}) does not admit the required extension")
        comps[v] = base + k @ gamma
    t = RepMorphism(X, E, comps)  # validates naturality
    if t @ g != h:
        raise ValidationError("constructed extension does not satisfy t o g = h")
    return t


def extend_morphism(g, h):
    """t: X -> E with t o g = h, for g: S -> X mono and E locally injective.

    Works on finite acyclic quivers and on the forward ray when E has an
    eventually invertible tail (every injective of the ray does).
    """
    if isinstance(g, ChainMorphism):
        return _extend_chain(g, h)
    _check_problem(g, h)
    Q = g.target.quiver
    if not isinstance(Q, Quiver) or not Q.is_acyclic():
        raise UnsupportedQuiver("quiver unsupported: extension needs a right-rooted quiver with finitely many stages")
    _require_locally_injective(h.target)
    return _extend_finite(g, h)


# -- the forward ray -------------------------------------------------------------

def _iso_tail(E: ChainRep) -> bool:
    return all(E.map(n).is_iso() for n in range(E.tail.start, E.window))


def compactify(X: ChainRep, M: int, col=None) -> Representation:
    """Stages 0..M of X plus a vertex ``inf`` carrying colim X, joined by the cocone at M."""
    col = col or colim_along_ray(X)
    verts = list(range(M + 1)) + [INF]
    arrows = [(f"r{n}", n, n + 1) for n in range(M)] + [("c", M, INF)]
    Q = Quiver.build(verts, arrows)
    mods = {n: X.stage(n) for n in range(M + 1)}
    mods[INF] = col.module
    maps = {f"r{n}": X.map(n) for n in range(M)}
    maps["c"] = col.cocone(M)
    return make_representation(Q, X.ring, mods, maps)


def _compact_target(E: ChainRep, M: int, Q: Quiver) -> Representation:
    mods = {n: E.stage(n) for n in range(M + 1)}
    mods[INF] = E.stage(M)
    maps = {f"r{n}": E.map(n) for n in range(M)}
    maps["c"] = ModuleMap.identity(E.stage(M))
    return make_representation(Q, E.ring, mods, maps)


def _extend_chain(g: ChainMorphism, h: ChainMorphism) -> ChainMorphism:
    S, X, E = g.source, g.target, h.target
    if h.source != S:
        raise ShapeMismatch("g and h must share their source")
    if S.reversed or X.reversed or E.reversed:
        raise UnsupportedQuiver("quiver unsupported: only the forward ray is handled")
    if not g.is_mono():
        raise ValidationError("g must be a monomorphism")
    if not _iso_tail(E):
        raise NotInjective("E fails local criteria: its tail maps are not all invertible")
    _require_locally_injective(E)
    M = max(S.tail.start, X.tail.start, E.tail.start, g.start, h.start)
    colS, colX = colim_along_ray(S), colim_along_ray(X)
    Shat, Xhat = compactify(S, M, colS), compactify(X, M, colX)
    Ehat = _compact_target(E, M, Xhat.quiver)
    # cocones at M are onto the colimit, so the limit components descend from stage M
    g_inf = extend_along(colS.cocone(M), colX.cocone(M) @ g[M])
    h_inf = extend_along(colS.cocone(M), h[M])
    if g_inf is None or h_inf is None:
        raise ValidationError("morphism is not compatible with the colimit")
    gc = {n: g[n] for n in range(M + 1)}
    hc = {n: h[n] for n in range(M + 1)}
    gc[INF], hc[INF] = g_inf, h_inf
    that = _extend_finite(RepMorphism(Shat, Xhat, gc), RepMorphism(Shat, Ehat, hc))

    # past M: t_n = E(M -> n) o t_inf o c_n, periodic once both factors are
    order, psi = 1, E.period_endomorphism()
    acc = psi
    while acc != ModuleMap.identity(psi.domain):
        acc = psi @ acc
        order += 1
    period = math.lcm(X.tail.period * colX.order, E.tail.period * order, g.period, h.period)

    def comp(n):
        if n <= M:
            return that[n]
        return E.composite(M, n) @ that[INF] @ colX.cocone(n)

    t = ChainMorphism.from_function(X, E, comp, M, period)
    if not (t @ g).equals(h):
        raise ValidationError("constructed extension does not satisfy t o g = h")
    return t
