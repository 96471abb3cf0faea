"""Quivers, path enumeration, rootedness stratification and classification.

Finite quivers are explicit.  The infinite families that the theory
handles (the forward ray, the two-sided line, barren forests made of a
finite core plus rays, and the complete branching tree used as a
non-barren probe) are closed-form descriptors.
"""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Hashable, Union

from .errors import NotATree, UnboundedPathSet, UnsupportedQuiver, ValidationError

Vertex = Hashable


def vkey(v) -> tuple:
    """Total order on vertex/arrow ids: ints before strings, then tuples."""
    if isinstance(v, bool):
        return (2, str(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (3, tuple(vkey(x) for x in v))
    return (4, repr(v))


def path_key(path: tuple) -> tuple:
    return tuple(vkey(a) for a in path)


@dataclass(frozen=True)
class Arrow:
    id: Vertex
    src: Vertex
    tgt: Vertex


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices), key=vkey))
        if len(verts) != len(tuple(self.vertices)):
            raise ValidationError("duplicate vertex id")
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate arrow id")
        vs = set(verts)
        for a in arrows:
            if a.src not in vs or a.tgt not in vs:
                raise ValidationError(f"unknown vertex in arrow {a.id!r}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", tuple(sorted(arrows, key=lambda a: vkey(a.id))))

    @classmethod
    def build(cls, vertices, arrows=()) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))

    def arrow(self, aid) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise KeyError(aid)

    def out_arrows(self, v) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def in_arrows(self, v) -> list[Arrow]:
        return [a for a in self.arrows if a.tgt == v]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.id, a.tgt, a.src) for a in self.arrows))

    def successors(self, v) -> set:
        return {a.tgt for a in self.out_arrows(v)}

    def reachable_from(self, v) -> set:
        seen, todo = {v}, [v]
        while todo:
            for w in self.successors(todo.pop()):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def cyclic_vertices(self) -> set:
        """Vertices lying on some directed cycle (loops included)."""
        out = set()
        for v in self.vertices:
            for w in self.successors(v):
                if v in self.reachable_from(w):
                    out.add(v)
                    break
        return out

    def is_acyclic(self) -> bool:
        return not self.cyclic_vertices()

    def topological_order(self) -> list:
        """Sources first; raises for cyclic quivers."""
        indeg = {v: len(self.in_arrows(v)) for v in self.vertices}
        ready = sorted((v for v, d in indeg.items() if d == 0), key=vkey)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.out_arrows(v):
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    ready.append(a.tgt)
                    ready.sort(key=vkey)
        if len(order) != len(self.vertices):
            raise UnboundedPathSet("quiver has a directed cycle")
        return order

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }


def a_n(n: int) -> Quiver:
    """Linear quiver 1 -> 2 -> ... -> n."""
    return Quiver.build(range(1, n + 1), [(f"a{i}", i, i + 1) for i in range(1, n)])


def loop_quiver() -> Quiver:
    return Quiver.build(["v"], [("x", "v", "v")])


# -- infinite descriptors ----------------------------------------------------

@dataclass(frozen=True)
class AInfPlus:
    """0 -> 1 -> 2 -> ...; reversed gives ... -> 2 -> 1 -> 0."""

    reversed: bool = False

    def opposite(self) -> "AInfPlus":
        return AInfPlus(not self.reversed)


@dataclass(frozen=True)
class AInfBoth:
    """... -> -1 -> 0 -> 1 -> ...; self-opposite up to relabelling n -> -n."""

    reversed: bool = False

    def opposite(self) -> "AInfBoth":
        return AInfBoth(not self.reversed)


@dataclass(frozen=True)
class Ray:
    attach: Vertex
    id: Vertex


@dataclass(frozen=True)
class BarrenForest:
    """A finite forest with infinite rays attach -> r1 -> r2 -> ... glued on."""

    core: Quiver
    rays: tuple[Ray, ...] = ()
    reversed: bool = False

    def __post_init__(self):
        rays = tuple(r if isinstance(r, Ray) else Ray(*r) for r in self.rays)
        for r in rays:
            if r.attach not in self.core.vertices:
                raise ValidationError(f"ray {r.id!r} attaches to unknown vertex")
        if len({r.id for r in rays}) != len(rays):
            raise ValidationError("duplicate ray id")
        _forest_parents(self.core.opposite() if self.reversed else self.core)
        object.__setattr__(self, "rays", rays)

    def opposite(self) -> "BarrenForest":
        return BarrenForest(self.core.opposite(), self.rays, not self.reversed)

    def ray(self, rid) -> Ray:
        for r in self.rays:
            if r.id == rid:
                return r
        raise KeyError(rid)


@dataclass(frozen=True)
class BranchingTree:
    """Complete infinite tree where every vertex has ``branching`` children."""

    branching: int
    reversed: bool = False

    def opposite(self) -> "BranchingTree":
        return BranchingTree(self.branching, not self.reversed)


Descriptor = Union[AInfPlus, AInfBoth, BarrenForest, BranchingTree]
AnyQuiver = Union[Quiver, AInfPlus, AInfBoth, BarrenForest, BranchingTree]


def opposite(Q: AnyQuiver) -> AnyQuiver:
    return Q.opposite()


def sample_barren_tree() -> BarrenForest:
    """Root with two children, four grandchildren, each grandchild starting a ray.

    Level sizes are 1, 2, 4, 4, 4, ...
    """
    core = Quiver.build(
        ["r", "a", "b", "a1", "a2", "b1", "b2"],
        [("ra", "r", "a"), ("rb", "r", "b"), ("aa1", "a", "a1"), ("aa2", "a", "a2"),
         ("bb1", "b", "b1"), ("bb2", "b", "b2")],
    )
    return BarrenForest(core, tuple(Ray(v, f"w{v}") for v in ["a1", "a2", "b1", "b2"]))


def ray_as_forest(rid="w") -> BarrenForest:
    """The forward ray as a barren forest: one core vertex with one ray."""
    return BarrenForest(Quiver.build([0]), (Ray(0, rid),))


# -- paths -------------------------------------------------------------------

def paths(Q: Quiver, w, v, bound: int | None = None) -> list[tuple]:
    """All paths w -> v as tuples of arrow ids, in lexicographic order."""
    if w not in Q.vertices or v not in Q.vertices:
        raise ValidationError("unknown vertex")
    if bound is None:
        between = {u for u in Q.reachable_from(w) if v in Q.reachable_from(u)}
        if between & Q.cyclic_vertices():
            raise UnboundedPathSet(f"infinitely many paths from {w!r} to {v!r}; pass a bound")
    out = []

    def walk(u, acc):
        if u == v:
            out.append(tuple(acc))
        if bound is not None and len(acc) >= bound:
            return
        for a in Q.out_arrows(u):
            if bound is None and v not in Q.reachable_from(a.tgt):
                continue
            acc.append(a.id)
            walk(a.tgt, acc)
            acc.pop()

    walk(w, [])
    return sorted(out, key=path_key)


def path_endpoints(Q: Quiver, path: tuple, start) -> list:
    """Vertices visited by ``path`` starting at ``start``."""
    seq = [start]
    for aid in path:
        a = Q.arrow(aid)
        if a.src != seq[-1]:
            raise ValidationError("arrows do not compose")
        seq.append(a.tgt)
    return seq


# -- stratification ----------------------------------------------------------

@dataclass(frozen=True)
class Stratification:
    """Stages V_0, V_1, ... of the sink-peeling fixpoint.

    For descriptors ``stages`` lists an initial segment and ``closed_form``
    describes the whole; ``residual`` is ``"all"``/``"none"``/a description
    when it is not a finite set.
    """

    stages: tuple[frozenset, ...]
    residual: Union[frozenset, str]
    closed_form: str | None = None

    @property
    def right_rooted(self) -> bool:
        if isinstance(self.residual, str):
            return self.residual == "none"
        return not self.residual

    def stage_of(self, v) -> int:
        for i, s in enumerate(self.stages):
            if v in s:
                return i
        raise KeyError(v)

    def to_json(self) -> dict:
        res = self.residual if isinstance(self.residual, str) else sorted(self.residual, key=vkey)
        return {
            "stages": [sorted(s, key=vkey) for s in self.stages],
            "residual": res,
            "right_rooted": self.right_rooted,
            "closed_form": self.closed_form,
        }


def _stratify_finite(Q: Quiver) -> Stratification:
    staged: set = set()
    stages = []
    while True:
        nxt = frozenset(
            v for v in Q.vertices
            if v not in staged and all(a.tgt in staged for a in Q.out_arrows(v))
        )
        if not nxt:
            break
        stages.append(nxt)
        staged |= nxt
    return Stratification(tuple(stages), frozenset(v for v in Q.vertices if v not in staged))


def stratify(Q: AnyQuiver) -> Stratification:
    if isinstance(Q, Quiver):
        return _stratify_finite(Q)
    if isinstance(Q, AInfPlus):
        if Q.reversed:
            return Stratification(
                tuple(frozenset([n]) for n in range(4)), "none", "V_n = {n}; omega stages"
            )
        return Stratification((), "all", "every vertex starts an infinite forward path")
    if isinstance(Q, AInfBoth):
        return Stratification((), "all", "every vertex starts an infinite forward path")
    if isinstance(Q, BranchingTree):
        if Q.branching == 0:
            return Stratification((frozenset(["root"]),), "none", "single vertex")
        if Q.reversed:
            return Stratification((frozenset(["root"]),), "none", "V_n = level n; omega stages")
        return Stratification((), "all", "every vertex starts an infinite forward path")
    if isinstance(Q, BarrenForest):
        if Q.reversed:
            # arrows point towards the roots; every ray vertex is reached at its depth
            base = _stratify_finite(Q.core)
            return Stratification(
                base.stages, "none" if not base.residual else base.residual,
                "core stages, then ray vertex n of every ray joins stage (attach stage + n)",
            )
        upstream = set()
        rev = Q.core.opposite()
        for r in Q.rays:
            upstream |= rev.reachable_from(r.attach)
        sub = Quiver(
            tuple(v for v in Q.core.vertices if v not in upstream),
            tuple(a for a in Q.core.arrows if a.src not in upstream and a.tgt not in upstream),
        )
        base = _stratify_finite(sub)
        if not upstream:
            return base
        res = sorted(upstream, key=vkey)
        return Stratification(
            base.stages, f"core vertices {res} and all ray vertices",
            "vertices upstream of a ray start infinite forward paths",
        )
    raise UnsupportedQuiver(f"cannot stratify {type(Q).__name__}")


# -- trees -------------------------------------------------------------------

def _forest_parents(Q: Quiver) -> dict:
    parent = {}
    for v in Q.vertices:
        ins = Q.in_arrows(v)
        if len(ins) > 1:
            raise NotATree(f"vertex {v!r} has several incoming arrows")
        if ins:
            parent[v] = ins[0]
    if not Q.is_acyclic():
        raise NotATree("quiver has a directed cycle")
    return parent


def _components(Q: Quiver) -> list[set]:
    adj = defaultdict(set)
    for a in Q.arrows:
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    seen, comps = set(), []
    for v in Q.vertices:
        if v in seen:
            continue
        comp, todo = {v}, [v]
        while todo:
            for w in adj[todo.pop()]:
                if w not in comp:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class TreeStructure:
    root: Vertex
    paths: dict  # vertex -> tuple of arrow ids from the root
    vertices_at_infinity: tuple = ()

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "paths": [[v, list(p)] for v, p in sorted(self.paths.items(), key=lambda t: vkey(t[0]))],
            "vertices_at_infinity": [list(w) for w in self.vertices_at_infinity],
        }


def _finite_tree(Q: Quiver) -> TreeStructure:
    parent = _forest_parents(Q)
    roots = [v for v in Q.vertices if v not in parent]
    if len(roots) != 1:
        raise NotATree(f"expected one root, found {len(roots)}")
    root = roots[0]
    out = {root: ()}
    todo = deque([root])
    while todo:
        u = todo.popleft()
        for a in Q.out_arrows(u):
            out[a.tgt] = out[u] + (a.id,)
            todo.append(a.tgt)
    return TreeStructure(root, out)


def tree_structure(T) -> TreeStructure:
    if isinstance(T, Quiver):
        return _finite_tree(T)
    if isinstance(T, AInfPlus) and not T.reversed:
        return TreeStructure(0, {0: ()}, (("inf", 0),))
    if isinstance(T, BarrenForest) and not T.reversed:
        base = _finite_tree(T.core)
        return TreeStructure(base.root, base.paths, tuple(("inf", r.id) for r in T.rays))
    if isinstance(T, BranchingTree) and not T.reversed:
        raise UnsupportedQuiver("the branching tree has uncountably many ends")
    raise NotATree(f"{T!r} is not a rooted tree")


def vertices_at_infinity(T) -> tuple:
    return tree_structure(T).vertices_at_infinity


@dataclass(frozen=True)
class BarrenReport:
    barren: bool
    stabilization_index: int | None
    state_sizes: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "barren": self.barren,
            "stabilization_index": self.stabilization_index,
            "state_sizes": list(self.state_sizes),
        }


def _stabilization(sizes: list[int]) -> int:
    """1-based index from which ``sizes`` is constant (last entry repeats forever)."""
    k = len(sizes)
    while k > 1 and sizes[k - 2] == sizes[-1]:
        k -= 1
    return k


def level_sizes(T, depth: int) -> list[int]:
    """n_1, ..., n_depth: number of vertices at distance i - 1 from the root."""
    if isinstance(T, AInfPlus) and not T.reversed:
        return [1] * depth
    if isinstance(T, BranchingTree) and not T.reversed:
        return [T.branching**i for i in range(depth)]
    if isinstance(T, Quiver):
        T = BarrenForest(T)
    if isinstance(T, BarrenForest) and not T.reversed:
        ts = _finite_tree(T.core)
        d = {v: len(p) for v, p in ts.paths.items()}
        out = []
        for i in range(depth):
            n = sum(1 for v in d if d[v] == i) + sum(1 for r in T.rays if d[r.attach] < i)
            out.append(n)
        return out
    raise NotATree(f"{T!r} is not a rooted tree")


def is_barren(T) -> BarrenReport:
    if isinstance(T, BranchingTree) and not T.reversed:
        sizes = level_sizes(T, 6)
        if T.branching <= 1:
            return BarrenReport(True, 1 if T.branching == 1 else 2, tuple(sizes))
        return BarrenReport(False, None, tuple(sizes))
    if isinstance(T, AInfPlus) and not T.reversed:
        return BarrenReport(True, 1, (1,))
    if isinstance(T, Quiver):
        T = BarrenForest(T)
    if isinstance(T, BarrenForest) and not T.reversed:
        ts = _finite_tree(T.core)
        depth = max(len(p) for p in ts.paths.values()) + 2
        sizes = level_sizes(T, depth)
        k = _stabilization(sizes)
        return BarrenReport(True, k, tuple(sizes[:k]))
    raise NotATree(f"{T!r} is not a rooted tree")


# -- classification ----------------------------------------------------------

LOOP_NOTE = (
    "one vertex with one loop: a representation over a field k is a k[x]-module; "
    "k[x, x^-1] with the loop acting by x passes both local conditions (the module is "
    "injective over k and x is a split surjection) but is not an injective k[x]-module, "
    "since it is not divisible by x - 1; local checks do not decide injectivity here"
)


@dataclass(frozen=True)
class Classification:
    verdict: str  # "yes" or "unknown"
    reason: str | None = None  # right-rooted | barren-forest | a-inf-both
    note: str | None = None

    @property
    def is_yes(self) -> bool:
        return self.verdict == "yes"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "note": self.note}


def _is_single_loop(Q: Quiver) -> bool:
    return len(Q.vertices) == 1 and len(Q.arrows) == 1


def classify_source_injective(Q: AnyQuiver) -> Classification:
    """Yes(reason) for the first sufficient condition that applies, else Unknown."""
    if stratify(Q).right_rooted:
        return Classification("yes", "right-rooted")
    if isinstance(Q, AInfPlus) or isinstance(Q, BarrenForest):
        return Classification("yes", "barren-forest")
    if isinstance(Q, AInfBoth):
        return Classification("yes", "a-inf-both")
    if isinstance(Q, BranchingTree):
        return Classification("unknown", note="infinite tree whose level sizes grow without bound")
    if isinstance(Q, Quiver):
        note = LOOP_NOTE if _is_single_loop(Q) else "quiver has a directed cycle"
        return Classification("unknown", note=note)
    raise UnsupportedQuiver(f"cannot classify {type(Q).__name__}")


def is_left_rooted(Q: AnyQuiver) -> bool:
    return stratify(opposite(Q)).right_rooted


# -- JSON --------------------------------------------------------------------

def quiver_to_json(Q: AnyQuiver) -> dict:
    if isinstance(Q, Quiver):
        return Q.to_json()
    if isinstance(Q, AInfPlus):
        desc = {"kind": "a_inf_plus", "reversed": Q.reversed}
        base = {"vertices": [], "arrows": []}
    elif isinstance(Q, AInfBoth):
        desc = {"kind": "a_inf_both", "reversed": Q.reversed}
        base = {"vertices": [], "arrows": []}
    elif isinstance(Q, BranchingTree):
        desc = {"kind": "branching_tree", "branching": Q.branching, "reversed": Q.reversed}
        base = {"vertices": [], "arrows": []}
    elif isinstance(Q, BarrenForest):
        desc = {
            "kind": "barren_forest",
            "rays": [{"attach": r.attach, "id": r.id} for r in Q.rays],
            "reversed": Q.reversed,
        }
        base = Q.core.to_json()
    else:
        raise UnsupportedQuiver(type(Q).__name__)
    base["descriptor"] = desc
    return base


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def quiver_from_json(obj: dict) -> AnyQuiver:
    if not isinstance(obj, dict):
        raise ValidationError("quiver: expected an object")
    verts = obj.get("vertices", []) if "descriptor" in obj else _need(obj, "vertices", "quiver")
    arrows = []
    for i, a in enumerate(obj.get("arrows", [])):
        where = f"arrows[{i}]"
        arrows.append(Arrow(_need(a, "id", where), _need(a, "src", where), _need(a, "tgt", where)))
    vs = set(verts)
    for a in arrows:
        for end in (a.src, a.tgt):
            if end not in vs:
                raise ValidationError(f"unknown vertex {end!r} in arrow {a.id!r}")
    core = Quiver(tuple(verts), tuple(arrows))
    desc = obj.get("descriptor")
    if desc is None:
        return core
    kind = _need(desc, "kind", "descriptor")
    rev = bool(desc.get("reversed", False))
    if kind == "a_inf_plus":
        return AInfPlus(rev)
    if kind == "a_inf_both":
        return AInfBoth(rev)
    if kind == "branching_tree":
        return BranchingTree(int(_need(desc, "branching", "descriptor")), rev)
    if kind == "barren_forest":
        rays = tuple(Ray(_need(r, "attach", "ray"), _need(r, "id", "ray")) for r in desc.get("rays", []))
        return BarrenForest(core, rays, rev)
    raise ValidationError(f"unknown descriptor kind {kind!r}")


def dumps(Q: AnyQuiver) -> str:
    return json.dumps(quiver_to_json(Q), sort_keys=True)
