"""Representations of barren forests (finite core plus rays) and of the line."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ShapeMismatch, ValidationError
from ..quiver import AInfBoth, BarrenForest, vkey
from .chain import ChainRep, chain_direct_sum
from .finite import RepMorphism, Representation, rep_direct_sum


@dataclass(frozen=True, eq=False)
class ForestRep:
    """A core representation with one chain per ray; stage 0 of a ray chain is
    the module at its attachment vertex."""

    quiver: BarrenForest
    core: Representation
    rays: dict

    def __post_init__(self):
        Q = self.quiver
        if self.core.quiver != Q.core:
            raise ShapeMismatch("core representation lives on a different quiver")
        for r in Q.rays:
            ch = self.rays.get(r.id)
            if ch is None:
                raise ValidationError(f"tail underspecified: no chain on ray {r.id!r}")
            if ch.reversed != Q.reversed:
                raise ShapeMismatch(f"ray {r.id!r} points the wrong way")
            if ch.stage(0) != self.core[r.attach]:
                raise ShapeMismatch(f"ray {r.id!r} does not start at its attachment module")

    @property
    def ring(self):
        return self.core.ring

    def __repr__(self):
        rays = ", ".join(f"{rid}: {ch!r}" for rid, ch in sorted(self.rays.items(), key=lambda t: vkey(t[0])))
        return f"ForestRep({self.core!r}; {rays})"

    def ray_chain(self, rid) -> ChainRep:
        return self.rays[rid]


@dataclass(frozen=True, eq=False)
class ForestMorphism:
    """A core morphism plus one chain morphism per ray, agreeing at attachment vertices."""

    source: ForestRep
    target: ForestRep
    core: RepMorphism
    rays: dict

    def __post_init__(self):
        Q = self.source.quiver
        if self.target.quiver != Q:
            raise ShapeMismatch("forest morphism between different quivers")
        for r in Q.rays:
            if self.rays[r.id][0] != self.core[r.attach]:
                raise ValidationError(f"ray {r.id!r} disagrees with the core at its attachment vertex")

    def __matmul__(self, other: "ForestMorphism") -> "ForestMorphism":
        return ForestMorphism(other.source, self.target, self.core @ other.core,
                              {rid: self.rays[rid] @ other.rays[rid] for rid in self.rays})

    def __add__(self, other: "ForestMorphism") -> "ForestMorphism":
        return ForestMorphism(self.source, self.target, self.core + other.core,
                              {rid: self.rays[rid] + other.rays[rid] for rid in self.rays})

    def is_iso(self) -> bool:
        return self.core.is_iso() and all(
            all(m[n].is_iso() for n in range(m.check_depth() + 1)) for m in self.rays.values()
        )


@dataclass(frozen=True, eq=False)
class ForestSum:
    rep: ForestRep
    inclusions: tuple
    projections: tuple


def forest_direct_sum(parts: list[ForestRep]) -> ForestSum:
    Q = parts[0].quiver
    core = rep_direct_sum([X.core for X in parts])
    rays = {r.id: chain_direct_sum([X.rays[r.id] for X in parts]) for r in Q.rays}
    S = ForestRep(Q, core.rep, {rid: cs.chain for rid, cs in rays.items()})
    incs = tuple(
        ForestMorphism(X, S, core.inclusions[k], {rid: cs.inclusions[k] for rid, cs in rays.items()})
        for k, X in enumerate(parts)
    )
    projs = tuple(
        ForestMorphism(S, X, core.projections[k], {rid: cs.projections[k] for rid, cs in rays.items()})
        for k, X in enumerate(parts)
    )
    return ForestSum(S, incs, projs)


@dataclass(frozen=True, eq=False)
class LineRep:
    """Representation of ... -> -1 -> 0 -> 1 -> ...

    ``right`` holds stages 0, 1, 2, ... and ``left`` holds stages 0, -1, -2, ...
    (left stage n is vertex -n).  For the forward line the right chain points
    forward and the left chain is stored reversed; the dual line swaps both.
    """

    right: ChainRep
    left: ChainRep

    def __post_init__(self):
        if self.right.reversed == self.left.reversed:
            raise ShapeMismatch("the two halves of a line must point the same way")
        if self.right.stage(0) != self.left.stage(0):
            raise ShapeMismatch("the two halves disagree at vertex 0")

    @property
    def quiver(self) -> AInfBoth:
        return AInfBoth(self.right.reversed)

    @property
    def ring(self):
        return self.right.ring

    def __repr__(self):
        return f"LineRep(left={self.left!r}, right={self.right!r})"
