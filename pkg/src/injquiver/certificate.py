"""Machine-checkable witnesses and their JSON form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class Certificate:
    """A witness such as a section, a resolution or an isomorphism.

    ``payload`` holds the maps/objects; ``checks`` records which
    compositions were re-verified when the certificate was produced.
    """

    kind: str
    payload: dict = field(default_factory=dict)
    checks: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": to_jsonable(self.payload), "checks": list(self.checks)}


@dataclass(frozen=True)
class Failure:
    reason: str
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"failure": self.reason, "detail": to_jsonable(self.detail)}


def to_jsonable(obj: Any) -> Any:
    """Best-effort conversion of package objects into plain JSON values."""
    from .rep.serialize import REP_TYPES, morphism_to_json, rep_to_json
    from .rep.chain import ChainMorphism
    from .rep.finite import RepMorphism
    from .ring.module import FinModule, ModuleMap

    if isinstance(obj, REP_TYPES):
        return rep_to_json(obj)
    if isinstance(obj, (RepMorphism, ChainMorphism)):
        return morphism_to_json(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, FinModule):
        return list(obj.exps)
    if isinstance(obj, ModuleMap):
        return {
            "domain": list(obj.domain.exps),
            "codomain": list(obj.codomain.exps),
            "matrix": obj.matrix.tolist(),
        }
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted((to_jsonable(v) for v in obj), key=str)
    return obj
