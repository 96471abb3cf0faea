"""The right adjoint e_*^v of evaluation at a vertex, and its ray version.

On a finite acyclic quiver e_*^v(M)(u) is a product of copies of M, one
per path u -> v, and an arrow a: u1 -> u2 sends the coordinate of a path p
from u2 to the coordinate of the path a.p from u1.  For a ray of a tree
(a vertex at infinity) the seed sits on the root-to-ray path and along the
whole ray with identity maps.
"""
from __future__ import annotations

from dataclasses import dataclass

from .certificate import Certificate, Failure
from .errors import BudgetExceeded, DEFAULT_BUDGET, UnsupportedQuiver, ValidationError
from .quiver import AInfPlus, BarrenForest, Quiver, paths, tree_structure
from .rep.chain import ZERO, ChainRep, chain, colim_along_ray, constant_chain
from .rep.finite import HomReps, RepMorphism, Representation, make_representation
from .rep.forest import ForestRep
from .ring.hom import HomSpace
from .ring.module import FinModule, ModuleMap, direct_sum


@dataclass(frozen=True)
class EStarSpec:
    """Target vertex (or ("inf", ray_id), or ("ray", ray_id, n)) and seed module."""

    target: object
    seed: FinModule


@dataclass(frozen=True, eq=False)
class EStar:
    """e_*^v(M) with the path indexing of every product coordinate."""

    rep: Representation
    target: object
    seed: FinModule
    path_index: dict  # vertex -> list of paths to the target
    inclusions: dict  # vertex -> list of coordinate inclusions M -> rep(u)
    projections: dict

    def coordinate(self, u, path) -> ModuleMap:
        return self.projections[u][self.path_index[u].index(path)]


def e_star_finite(Q: Quiver, v, M: FinModule) -> EStar:
    ring = M.ring
    index, mods, incs, projs = {}, {}, {}, {}
    for u in Q.vertices:
        index[u] = paths(Q, u, v)
        mods[u], incs[u], projs[u] = direct_sum([M] * len(index[u]), ring)
    maps = {}
    for a in Q.arrows:
        f = ModuleMap.zero(mods[a.src], mods[a.tgt])
        src_paths = index[a.src]
        for j, p in enumerate(index[a.tgt]):
            i = src_paths.index((a.id,) + p)
            f = f + incs[a.tgt][j] @ projs[a.src][i]
        maps[a.id] = f
    rep = Representation(Q, ring, mods, maps)
    return EStar(rep, v, M, index, incs, projs)


def _forest_e_star(T: BarrenForest, target, E: FinModule) -> ForestRep:
    ring = E.ring
    ts = tree_structure(T)
    if isinstance(target, tuple) and target[0] == "inf":
        ray = T.ray(target[1])
        end, after = ray.attach, None
    elif isinstance(target, tuple) and target[0] == "ray":
        ray = T.ray(target[1])
        end, after = ray.attach, (ray.id, int(target[2]))
    else:
        if target not in T.core.vertices:
            raise ValidationError(f"unknown target {target!r}")
        end, after = target, None
    path_arrows = ts.paths[end]
    path_verts = {ts.root} | {T.core.arrow(a).tgt for a in path_arrows}
    mods = {u: (E if u in path_verts else FinModule.zero(ring)) for u in T.core.vertices}
    maps = {a.id: (ModuleMap.identity(E) if a.src in path_verts and a.tgt in path_verts else None)
            for a in T.core.arrows}
    core = make_representation(T.core, ring, mods, maps)
    rays = {}
    for r in T.rays:
        base = mods[r.attach]
        if isinstance(target, tuple) and target[0] == "inf" and r.id == target[1]:
            rays[r.id] = constant_chain(E)
        elif after is not None and r.id == after[0]:
            n = after[1]
            rays[r.id] = chain(ring, [E] * (n + 1), [ModuleMap.identity(E)] * n + [None], ZERO)
        else:
            rays[r.id] = chain(ring, [base], [None], ZERO) if not base.is_zero else chain(ring, [], [], ZERO)
    return ForestRep(T, core, rays)


def e_star(Q, target, M: FinModule):
    """e_*^target(M) on a finite acyclic quiver, the ray, or a barren forest."""
    if isinstance(Q, Quiver):
        return e_star_finite(Q, target, M).rep
    if isinstance(Q, AInfPlus) and not Q.reversed:
        if isinstance(target, tuple) and target[0] == "inf":
            return constant_chain(M)
        n = int(target)
        return chain(M.ring, [M] * (n + 1), [ModuleMap.identity(M)] * n + [None], ZERO)
    if isinstance(Q, BarrenForest) and not Q.reversed:
        return _forest_e_star(Q, target, M)
    raise UnsupportedQuiver(f"e_star is not available on {Q!r}")


def e_star_spec(Q, spec: EStarSpec):
    return e_star(Q, spec.target, spec.seed)


# -- adjunction ----------------------------------------------------------------

def adjunction_forward(es: EStar, eta: RepMorphism) -> ModuleMap:
    """Hom(X, e_*^v M) -> Hom(X(v), M): take the trivial-path coordinate at v."""
    return es.coordinate(es.target, ()) @ eta[es.target]


def adjunction_backward(es: EStar, X: Representation, phi: ModuleMap) -> RepMorphism:
    """Hom(X(v), M) -> Hom(X, e_*^v M): x -> (phi(X(p) x))_p."""
    comps = {}
    for u in X.quiver.vertices:
        f = ModuleMap.zero(X[u], es.rep[u])
        for inc, p in zip(es.inclusions[u], es.path_index[u]):
            f = f + inc @ phi @ X.path_map(p, u)
        comps[u] = f
    return RepMorphism(X, es.rep, comps)


def verify_adjunction(X: Representation, v, M: FinModule, budget: int = DEFAULT_BUDGET,
                      probe: RepMorphism | None = None) -> Certificate | Failure:
    """Check Hom(X, e_*^v M) = Hom(X(v), M) element by element."""
    es = e_star_finite(X.quiver, v, M)
    left = HomReps(X, es.rep)
    right = HomSpace(X[v], M)
    if left.cardinality != right.module.cardinality:
        return Failure("cardinalities differ", {"left": left.cardinality, "right": right.module.cardinality})
    if left.cardinality > budget:
        raise BudgetExceeded(f"|Hom| = {left.cardinality} exceeds budget {budget}")
    seen = set()
    for phi in right.elements(budget):
        eta = adjunction_backward(es, X, phi)
        if adjunction_forward(es, eta) != phi:
            return Failure("backward then forward is not the identity", {"phi": phi})
        seen.add(eta)
    for eta in left.elements(budget):
        if eta not in seen:
            return Failure("backward map misses a morphism", {"eta": eta})
        if adjunction_backward(es, X, adjunction_forward(es, eta)) != eta:
            return Failure("forward then backward is not the identity", {"eta": eta})
    # naturality in X along one probe xi: X' -> X
    if probe is None:
        probe = X.identity()
        basis = HomReps(X, X).basis()
        if basis:
            probe = basis[-1]
    for phi in list(right.elements(budget))[:8]:
        eta = adjunction_backward(es, X, phi)
        if adjunction_forward(es, eta @ probe) != phi @ probe[v]:
            return Failure("not natural in X", {"phi": phi})
    return Certificate(
        "adjunction_bijection",
        {"size": left.cardinality, "vertex": v, "seed": M},
        ("forward o backward = id", "backward o forward = id", "naturality on a probe"),
    )


def colim(X: ChainRep) -> FinModule:
    return colim_along_ray(X).module
