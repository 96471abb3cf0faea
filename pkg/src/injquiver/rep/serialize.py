"""JSON form of representations and morphisms.

A representation is its quiver's JSON plus "ring", "modules" and "maps".
Modules are exponent lists (a bare integer is a dimension over a field),
maps are row-major integer matrices.  Finite quivers key both by vertex or
arrow id; the ray stores its window as lists together with "tail"; a
barren forest stores its core like a finite quiver and one chain per ray
under "rays"; the line stores "right" and "left" chains.
"""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..quiver import AInfBoth, AInfPlus, BarrenForest, Quiver, quiver_from_json, quiver_to_json, vkey
from ..ring.base import BaseRing
from ..ring.module import FinModule, ModuleMap
from .chain import ChainMorphism, ChainRep, TailSpec
from .finite import RepMorphism, Representation, as_map, as_module, make_representation
from .forest import ForestRep, LineRep

REP_TYPES = (Representation, ChainRep, ForestRep, LineRep)


def _mat(f: ModuleMap) -> list:
    return np.asarray(f.matrix, dtype=np.int64).reshape(f.codomain.rank, f.domain.rank).tolist()


def _finite_body(X: Representation) -> dict:
    Q = X.quiver
    return {
        "modules": {str(v): list(X[v].exps) for v in sorted(Q.vertices, key=vkey)},
        "maps": {str(a.id): _mat(X.maps[a.id]) for a in Q.arrows},
    }


def _chain_body(ch: ChainRep) -> dict:
    return {"modules": [list(M.exps) for M in ch.modules], "maps": [_mat(f) for f in ch.maps],
            "tail": ch.tail.to_json()}


def rep_to_json(X) -> dict:
    if isinstance(X, Representation):
        out = quiver_to_json(X.quiver)
        out.update(_finite_body(X))
    elif isinstance(X, ChainRep):
        out = quiver_to_json(X.quiver)
        out.update(_chain_body(X))
    elif isinstance(X, ForestRep):
        out = quiver_to_json(X.quiver)
        out.update(_finite_body(X.core))
        out["rays"] = {str(rid): _chain_body(ch) for rid, ch in X.rays.items()}
    elif isinstance(X, LineRep):
        out = quiver_to_json(X.quiver)
        out["right"] = _chain_body(X.right)
        out["left"] = _chain_body(X.left)
    else:
        raise ValidationError(f"cannot serialize {type(X).__name__}")
    out["ring"] = str(X.ring)
    return out


def _keyed(obj: dict, keys, where: str) -> dict:
    """Look up JSON object entries by the string form of the given keys."""
    by_str = {str(k): k for k in keys}
    out = {}
    for s, val in obj.items():
        if s not in by_str:
            raise ValidationError(f"{where}: unknown key {s!r}")
        out[by_str[s]] = val
    return out


def _finite_from(Q: Quiver, ring: BaseRing, obj: dict) -> Representation:
    mods = _keyed(obj.get("modules", {}), Q.vertices, "modules")
    maps = _keyed(obj.get("maps", {}), [a.id for a in Q.arrows], "maps")
    return make_representation(Q, ring, mods, maps)


def _chain_from(ring: BaseRing, obj: dict, reversed: bool) -> ChainRep:
    if "tail" not in obj:
        raise ValidationError("tail underspecified: chain needs a 'tail' object")
    t = obj["tail"]
    tail = TailSpec(t["kind"], int(t["start"]), int(t.get("period", 1)))
    mods = [as_module(ring, m) for m in obj.get("modules", [])]
    L = len(mods)
    if L != tail.start + tail.period:
        raise ValidationError(f"chain window needs {tail.start + tail.period} modules, got {L}")
    raw = obj.get("maps", [None] * L)
    maps = []
    for i in range(L):
        j = i + 1 if i + 1 < L else tail.start
        dom, cod = (mods[j], mods[i]) if reversed else (mods[i], mods[j])
        maps.append(as_map(dom, cod, raw[i]))
    return ChainRep(ring, tuple(mods), tuple(maps), tail, reversed)


def rep_from_json(obj: dict, ring: BaseRing | None = None):
    """Parse a representation; ``ring`` overrides the file's "ring" field."""
    if not isinstance(obj, dict):
        raise ValidationError("representation: expected an object")
    if ring is None:
        if "ring" not in obj:
            raise ValidationError("representation: no 'ring' field and no ring given")
        ring = BaseRing.parse(obj["ring"])
    Q = quiver_from_json(obj)
    if isinstance(Q, Quiver):
        return _finite_from(Q, ring, obj)
    if isinstance(Q, AInfPlus):
        return _chain_from(ring, obj, Q.reversed)
    if isinstance(Q, BarrenForest):
        core = _finite_from(Q.core, ring, obj)
        raw = _keyed(obj.get("rays", {}), [r.id for r in Q.rays], "rays")
        missing = [r.id for r in Q.rays if r.id not in raw]
        if missing:
            raise ValidationError(f"tail underspecified: no chain on ray {missing[0]!r}")
        return ForestRep(Q, core, {rid: _chain_from(ring, c, Q.reversed) for rid, c in raw.items()})
    if isinstance(Q, AInfBoth):
        return LineRep(_chain_from(ring, obj["right"], Q.reversed), _chain_from(ring, obj["left"], not Q.reversed))
    raise ValidationError(f"no representation format for {type(Q).__name__}")


def morphism_to_json(eta) -> dict:
    if isinstance(eta, RepMorphism):
        return {"components": {str(v): _mat(eta[v]) for v in sorted(eta.source.quiver.vertices, key=vkey)}}
    if isinstance(eta, ChainMorphism):
        return {"components": [_mat(c) for c in eta.components], "start": eta.start, "period": eta.period}
    raise ValidationError(f"cannot serialize {type(eta).__name__}")


def morphism_from_json(obj: dict, source: Representation, target: Representation) -> RepMorphism:
    comps = _keyed(obj.get("components", {}), source.quiver.vertices, "components")
    return RepMorphism(source, target, {v: as_map(source[v], target[v], comps.get(v)) for v in source.quiver.vertices})


def module_json(M: FinModule) -> list:
    return list(M.exps)
