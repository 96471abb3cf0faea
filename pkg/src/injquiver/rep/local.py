"""Uniform access to the finitely many distinct local situations of a representation.

Every supported representation, finite or with periodic tails, has finitely
many distinct (vertex module, outgoing maps) and (vertex module, incoming
maps) configurations; the local criteria only ever look at those.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnsupportedQuiver
from ..quiver import classify_source_injective
from ..ring.module import FinModule, ModuleMap, direct_sum
from .chain import ChainRep
from .finite import Representation
from .forest import ForestRep, LineRep


@dataclass(frozen=True)
class Local:
    label: object
    module: FinModule
    maps: tuple  # outgoing maps (domain = module) or incoming maps (codomain = module)


def _chain_window(ch: ChainRep) -> range:
    # indices 0..L cover every distinct stage together with its neighbours
    return range(ch.window + 1)


def local_sources(X) -> list[Local]:
    if isinstance(X, Representation):
        return [
            Local(v, X[v], tuple(X.maps[a.id] for a in X.quiver.out_arrows(v)))
            for v in X.quiver.vertices
        ]
    if isinstance(X, ChainRep):
        return _chain_sources(X, "", include_zero=True)
    if isinstance(X, ForestRep):
        out = []
        Q = X.quiver
        for v in Q.core.vertices:
            maps = [X.core.maps[a.id] for a in Q.core.out_arrows(v)]
            if not Q.reversed:
                maps += [X.rays[r.id].map(0) for r in Q.rays if r.attach == v]
            out.append(Local(v, X.core[v], tuple(maps)))
        for r in Q.rays:
            out += _chain_sources(X.rays[r.id], r.id, include_zero=False)
        return out
    if isinstance(X, LineRep):
        zero_maps = []
        for ch in (X.right, X.left):
            if not ch.reversed:
                zero_maps.append(ch.map(0))
        out = [Local(0, X.right.stage(0), tuple(zero_maps))]
        out += _chain_sources(X.right, "+", include_zero=False)
        out += _chain_sources(X.left, "-", include_zero=False)
        return out
    raise UnsupportedQuiver(f"no local view for {type(X).__name__}")


def _chain_sources(ch: ChainRep, tag, include_zero: bool) -> list[Local]:
    out = []
    for n in _chain_window(ch):
        if n == 0 and not include_zero:
            continue
        label = (tag, n) if tag != "" else n
        if ch.reversed:
            maps = (ch.map(n - 1),) if n >= 1 else ()
        else:
            maps = (ch.map(n),)
        out.append(Local(label, ch.stage(n), maps))
    return out


def local_sinks(X) -> list[Local]:
    if isinstance(X, Representation):
        return [
            Local(v, X[v], tuple(X.maps[a.id] for a in X.quiver.in_arrows(v)))
            for v in X.quiver.vertices
        ]
    if isinstance(X, ChainRep):
        return _chain_sinks(X, "", include_zero=True)
    if isinstance(X, ForestRep):
        out = []
        Q = X.quiver
        for v in Q.core.vertices:
            maps = [X.core.maps[a.id] for a in Q.core.in_arrows(v)]
            if Q.reversed:
                maps += [X.rays[r.id].map(0) for r in Q.rays if r.attach == v]
            out.append(Local(v, X.core[v], tuple(maps)))
        for r in Q.rays:
            out += _chain_sinks(X.rays[r.id], r.id, include_zero=False)
        return out
    if isinstance(X, LineRep):
        zero_maps = [ch.map(0) for ch in (X.right, X.left) if ch.reversed]
        out = [Local(0, X.right.stage(0), tuple(zero_maps))]
        out += _chain_sinks(X.right, "+", include_zero=False)
        out += _chain_sinks(X.left, "-", include_zero=False)
        return out
    raise UnsupportedQuiver(f"no local view for {type(X).__name__}")


def _chain_sinks(ch: ChainRep, tag, include_zero: bool) -> list[Local]:
    out = []
    for n in _chain_window(ch):
        if n == 0 and not include_zero:
            continue
        label = (tag, n) if tag != "" else n
        if ch.reversed:
            maps = (ch.map(n),)
        else:
            maps = (ch.map(n - 1),) if n >= 1 else ()
        out.append(Local(label, ch.stage(n), maps))
    return out


def assemble_source(loc: Local) -> tuple[ModuleMap, list, list]:
    """The map M -> prod of codomains, with inclusions and projections."""
    P, incs, projs = direct_sum([f.codomain for f in loc.maps], loc.module.ring)
    f = ModuleMap.zero(loc.module, P)
    for g, i in zip(loc.maps, incs):
        f = f + i @ g
    return f, incs, projs


def assemble_sink(loc: Local) -> tuple[ModuleMap, list, list]:
    S, incs, projs = direct_sum([f.domain for f in loc.maps], loc.module.ring)
    f = ModuleMap.zero(S, loc.module)
    for g, p in zip(loc.maps, projs):
        f = f + g @ p
    return f, incs, projs


def quiver_of(X):
    return X.quiver


def classification_of(X):
    return classify_source_injective(X.quiver)


def ring_of(X):
    return X.ring
