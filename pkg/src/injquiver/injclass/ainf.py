"""The forward ray 0 -> 1 -> 2 -> ...: criterion, splitting, envelopes, brute force.

Chains here are eventually periodic, so a morphism between them is an
infinite path in a finite "phase graph": nodes are (stage, component) with
stages past the common start folded modulo the common period, and edges are
naturality squares.  A morphism exists iff such a path starts at stage 0,
which happens iff some cycle is reachable (a finite graph has an infinite
path exactly then).  This gives an exhaustive extension test that shares
nothing with the constructive route in ``extend``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from ..certificate import Certificate, Failure
from ..errors import BudgetExceeded, DEFAULT_BUDGET, ShapeMismatch
from ..rep.chain import ISO, ZERO, ChainMorphism, ChainRep, ChainSum, TailSpec, chain, chain_direct_sum
from ..rep.chain import chain_layout as _layout
from ..ring.hom import HomSpace
from ..ring.module import FinModule, ModuleMap, direct_sum, kernel


class PhaseGraph:
    """Candidate components per stage 0..s+p-1 with naturality edges; stage s+p-1 wraps to s."""

    def __init__(self, X: ChainRep, Y: ChainRep, start: int, period: int, allowed, budget: int = DEFAULT_BUDGET):
        self.X, self.Y, self.start, self.period = X, Y, start, period
        L = start + period
        self.nodes = []
        total = 0
        for n in range(L):
            cands = [t for t in HomSpace(X.stage(n), Y.stage(n)).elements(budget) if allowed(n, t)]
            total += len(cands)
            if total > budget:
                raise BudgetExceeded("phase graph exceeds the budget")
            self.nodes.append(cands)
        self.edges = []
        for n in range(L):
            nxt = n + 1 if n + 1 < L else start
            # naturality Y(n) t = u X(n): bucket the right-hand sides by key
            buckets = {}
            for j, u in enumerate(self.nodes[nxt]):
                buckets.setdefault((u @ X.map(n)).key(), []).append(j)
            self.edges.append([buckets.get((Y.map(n) @ t).key(), []) for t in self.nodes[n]])
        self.alive = self._prune()

    def _next(self, n: int) -> int:
        return n + 1 if n + 1 < self.start + self.period else self.start

    def _prune(self) -> list[set]:
        """Nodes with an infinite forward path (greatest fixed point)."""
        L = self.start + self.period
        alive = [set(range(len(c))) for c in self.nodes]
        changed = True
        while changed:
            changed = False
            for n in range(L):
                nxt = self._next(n)
                for i in list(alive[n]):
                    if not any(j in alive[nxt] for j in self.edges[n][i]):
                        alive[n].discard(i)
                        changed = True
        return alive

    def nonempty(self) -> bool:
        return bool(self.alive[0])

    def phase(self, n: int) -> int:
        return n if n < self.start else self.start + (n - self.start) % self.period

    def lasso(self, rng: random.Random | None = None) -> ChainMorphism | None:
        """Walk surviving nodes from stage 0 until a periodic node repeats."""
        if not self.alive[0]:
            return None
        pick = (lambda xs: rng.choice(sorted(xs))) if rng else min
        n, i = 0, pick(self.alive[0])
        comps, seen = [], {}
        while True:
            ph = self.phase(n)
            if n >= self.start:
                if (ph, i) in seen:
                    first = seen[(ph, i)]
                    break
                seen[(ph, i)] = n
            comps.append(self.nodes[ph][i])
            i = pick([j for j in self.edges[ph][i] if j in self.alive[self.phase(n + 1)]])
            n += 1
        return ChainMorphism(self.X, self.Y, tuple(comps), first, n - first)


def extension_test(g: ChainMorphism, h: ChainMorphism, budget: int = DEFAULT_BUDGET) -> Certificate | Failure:
    """Exhaustively decide whether some t: X -> G has t o g = h."""
    if g.source != h.source:
        raise ShapeMismatch("g and h must share their source")
    X, G = g.target, h.target
    s, p = _layout([g.source, X, G], [g, h])
    graph = PhaseGraph(X, G, s, p, lambda n, t: t @ g[n] == h[n], budget)
    t = graph.lasso()
    if t is None:
        return Failure("no extension exists", {"stages_searched": s + p})
    assert (t @ g).equals(h)
    return Certificate("extension", {"t": t}, ("t o g == h", "naturality"))


def morphism_graph(X: ChainRep, Y: ChainRep, budget: int = DEFAULT_BUDGET) -> PhaseGraph:
    s, p = _layout([X, Y])
    return PhaseGraph(X, Y, s, p, lambda n, t: True, budget)


def random_chain_morphism(X: ChainRep, Y: ChainRep, rng: random.Random, budget: int = DEFAULT_BUDGET) -> ChainMorphism:
    return morphism_graph(X, Y, budget).lasso(rng)


# -- the ray criterion ----------------------------------------------------------

@dataclass(frozen=True)
class RayVerdict:
    """Stagewise criterion: every G_n injective, every G_n -> G_{n+1} onto with injective kernel."""

    injective: bool
    failing_index: int | None = None
    condition: str | None = None

    def __bool__(self) -> bool:
        return self.injective

    def to_json(self) -> dict:
        return {"injective": self.injective, "failing_index": self.failing_index, "condition": self.condition}


def ray_injectivity_test(G: ChainRep) -> RayVerdict:
    from ..ring.hom import is_injective_module

    if G.reversed:
        raise ShapeMismatch("the criterion is for the forward ray")
    for n in range(G.window):
        if not is_injective_module(G.stage(n)):
            return RayVerdict(False, n, f"stage {n} module is not injective")
        f = G.map(n)
        if not f.is_surjective():
            return RayVerdict(False, n, f"stage-{n} map not surjective")
        if not is_injective_module(kernel(f).domain):
            return RayVerdict(False, n, f"stage-{n} map has a non-injective kernel")
    return RayVerdict(True)


# -- splitting and envelopes ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RaySplit:
    """G = Ebar + G' with Ebar = t(G) torsion and G' the identity chain on colim G."""

    torsion: ChainRep
    free: ChainRep
    iso: ChainMorphism  # G -> Ebar + G'
    sum: ChainSum


def split_injective(G: ChainRep) -> RaySplit:
    from ..errors import NotInjective
    from ..rep.chain import colim_along_ray, constant_chain, torsion_subrep
    from .extend import extend_morphism

    verdict = ray_injectivity_test(G)
    if not verdict:
        raise NotInjective(f"not injective: {verdict.condition}")
    T, inc = torsion_subrep(G)
    retract = extend_morphism(inc, ChainMorphism.identity(T))
    col = colim_along_ray(G)
    Gp = constant_chain(col.module)
    s, p = _layout([G, T])
    p = math.lcm(p, G.tail.period * col.order)
    c = ChainMorphism.from_function(G, Gp, col.cocone, s, p)
    S = chain_direct_sum([T, Gp])
    iso = S.inclusions[0] @ retract + S.inclusions[1] @ c
    if not all(iso[n].is_iso() for n in range(iso.start + iso.period)):
        raise ArithmeticError("torsion retraction and cocone do not give an isomorphism")
    return RaySplit(T, Gp, iso, S)


@dataclass(frozen=True, eq=False)
class RayEnvelope:
    family: ChainRep  # E_0 + E_1 + ... -> E_1 + ... -> ...
    envelope: ChainRep  # E -> E/E_0 -> E/(E_0 + E_1) -> ...
    embedding: ChainMorphism
    verdict: RayVerdict
    essential: bool


def ray_envelope(Es: list[FinModule]) -> RayEnvelope:
    """Envelope of the chain of tails of a finite family of injective modules."""
    from ..ring.hom import extend_along, injective_hull
    from ..ring.module import quotient

    from ..errors import ValidationError
    from ..ring.hom import is_injective_module

    if not Es:
        raise ValidationError("need at least one module")
    if not all(is_injective_module(M) for M in Es):
        raise ValidationError("the family must consist of injective modules")
    ring = Es[0].ring
    N = len(Es)
    total, incs, projs = direct_sum(Es, ring)
    hull = injective_hull(total)
    E = hull.codomain
    fam_mods, fam_maps, emb, qs = [], [], [], []
    for n in range(N + 1):
        tail_mod, tail_incs, tail_projs = direct_sum(Es[n:], ring)
        fam_mods.append(tail_mod)
        head = [hull @ incs[i] for i in range(n)]
        cols = [h.matrix for h in head if h.domain.rank]
        q = quotient(E, np.hstack(cols) if cols else np.zeros((E.rank, 0), dtype=np.int64))
        qs.append(q)
        into = ModuleMap.zero(tail_mod, E)
        for k, i in enumerate(range(n, N)):
            into = into + hull @ incs[i] @ tail_projs[k]
        emb.append(q @ into)
    for n in range(N + 1):
        nxt = min(n + 1, N)
        drop = ModuleMap.zero(fam_mods[n], fam_mods[nxt])
        if n < N:
            _, nxt_incs, _ = direct_sum(Es[nxt:], ring)
            _, _, cur_projs = direct_sum(Es[n:], ring)
            for k in range(1, N - n):
                drop = drop + nxt_incs[k - 1] @ cur_projs[k]
        fam_maps.append(drop)
    env_maps = [extend_along(qs[n], qs[min(n + 1, N)]) for n in range(N + 1)]
    family = ChainRep(ring, tuple(fam_mods), tuple(fam_maps), TailSpec(ZERO, N, 1))
    envelope = ChainRep(ring, tuple(q.codomain for q in qs), tuple(env_maps), TailSpec(ZERO, N, 1))
    embedding = ChainMorphism(family, envelope, tuple(emb), N, 1)
    return RayEnvelope(family, envelope, embedding, ray_injectivity_test(envelope), essential_check(embedding))


# -- essentiality -----------------------------------------------------------------

def _cyclic_orbit_chain(X: ChainRep, n: int, x, s: int, p: int):
    """(stage, element) pairs X(n -> m) x for m >= n until the pattern repeats
    (phases fold modulo p past stage s)."""
    seen, m, y = set(), n, np.asarray(x)
    while True:
        key = (m if m < s else s + (m - s) % p, tuple(int(v) for v in y))
        if key in seen:
            return
        seen.add(key)
        yield m, y
        y = X.map(m)(y)
        m += 1


def _socle_elements(M: FinModule) -> list:
    """Nonzero x in M with pi x = 0."""
    from ..ring.module import elements_of, torsion_part

    return [np.array(x) for x in sorted(elements_of(torsion_part(M, 1))) if any(x)]


def essential_check(inc, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff every nonzero subobject of the target meets the image of ``inc``.

    A subobject meets S iff one of its cyclic subobjects does, and every
    cyclic subobject contains one generated by an element x with pi x = 0.
    For such x every nonzero multiple is a unit multiple, so the subobject
    generated by x meets S iff some nonzero image of x along the quiver lies
    in S.
    """
    from ..ring.module import elements_of

    count = 0

    def tick():
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetExceeded("too many elements for the essentiality check")

    if isinstance(inc, ChainMorphism):
        X = inc.target
        s, p = _layout([inc.source, X], [inc])
        images = {}

        def in_image(m, z):
            k = m if m < s else s + (m - s) % p
            if k not in images:
                images[k] = elements_of(inc[m])
            return tuple(int(v) for v in z) in images[k]

        for n in range(s + p):
            for x in _socle_elements(X.stage(n)):
                tick()
                if not any(any(y) and in_image(m, y) for m, y in _cyclic_orbit_chain(X, n, x, s, p)):
                    return False
        return True

    from ..quiver import paths

    X = inc.target
    Q = X.quiver
    images = {v: elements_of(inc[v]) for v in Q.vertices}
    for v in Q.vertices:
        for x in _socle_elements(X[v]):
            tick()
            hit = False
            for w in Q.vertices:
                for path in paths(Q, v, w):
                    y = X.path_map(path, v)(x)
                    if any(y) and tuple(int(t) for t in y) in images[w]:
                        hit = True
                        break
                if hit:
                    break
            if not hit:
                return False
    return True


# -- concrete non-extendable pairs ------------------------------------------------

def principal_chain(ring, n: int) -> ChainRep:
    """The projective P_n: zero before stage n, then R with identity maps."""
    R = FinModule.free(ring, 1)
    zero = FinModule.zero(ring)
    return chain(ring, [zero] * n, [None] * n, ISO, [R])


def ideal_chain(ring, n: int, j: int, l: int) -> tuple[ChainRep, ChainMorphism]:
    """The subobject of P_n equal to pi^j R at stage n and pi^l R afterwards (l <= j)."""
    k = ring.k
    zero = FinModule.zero(ring)
    at_n = FinModule.of(ring, [k - j] if j < k else [])
    after = FinModule.of(ring, [k - l] if l < k else [])
    mods = [zero] * n + [at_n]
    maps = [None] * n + [[[ring.pi_pow(j - l)]] if at_n.rank and after.rank else None]
    if after.is_zero:
        I = chain(ring, mods, maps, ZERO)
    else:
        I = chain(ring, mods, maps, ISO, [after])
    P = principal_chain(ring, n)
    s, p = _layout([I, P])

    def comp(m):
        src = I.stage(m)
        if m < n or src.is_zero:
            return ModuleMap.zero(src, P.stage(m))
        return ModuleMap(src, P.stage(m), [[ring.pi_pow(j if m == n else l)]])

    return I, ChainMorphism.from_function(I, P, comp, s, p)


def _forward_morphism(I: ChainRep, G: ChainRep, n: int, y, z) -> ChainMorphism:
    """I -> G sending the stage-n generator to y and the stage-(n+1) generator to z."""
    comps, seen = [], {}
    m = 0
    cur = None
    while True:
        src = I.stage(m)
        if m < n or src.is_zero:
            c = ModuleMap.zero(src, G.stage(m))
        elif m == n:
            c = ModuleMap(src, G.stage(m), np.asarray(y, dtype=np.int64).reshape(-1, 1))
        elif m == n + 1:
            c = ModuleMap(src, G.stage(m), np.asarray(z, dtype=np.int64).reshape(-1, 1))
        else:
            c = G.map(m - 1) @ cur
        if m > n + 1 and m >= max(I.tail.start, G.tail.start):
            key = (G.index(m), c.key())
            if key in seen:
                first = seen[key]
                return ChainMorphism(I, G, tuple(comps), first, m - first)
            seen[key] = m
        comps.append(c)
        cur = c
        m += 1


def nonextendable_pair(G: ChainRep) -> tuple[ChainMorphism, ChainMorphism] | None:
    """A subobject I of some P_n and h: I -> G with no extension to P_n, if one exists.

    Only subobjects pi^j at stage n, pi^l afterwards are searched; they see
    exactly the stagewise conditions, so a chain that fails the criterion
    always yields one.
    """
    ring = G.ring
    k = ring.k
    for n in range(G.window):
        Gn, Gn1, f = G.stage(n), G.stage(n + 1), G.map(n)
        xs = list(Gn.elements())
        for j in range(k + 1):
            for l in range(j + 1):
                pj, pl, pjl = ring.pi_pow(j), ring.pi_pow(l), ring.pi_pow(j - l)
                ys = [y for y in xs if not any(Gn.scale(ring.pi_pow(k - j), y))]
                zs = [z for z in Gn1.elements() if not any(Gn1.scale(ring.pi_pow(k - l), z))]
                reach = {(tuple(Gn.scale(pj, x)), tuple(Gn1.scale(pl, f(x)))) for x in xs}
                for y in ys:
                    fy = tuple(f(y))
                    for z in zs:
                        if tuple(Gn1.scale(pjl, z)) != fy:
                            continue
                        if (tuple(y), tuple(z)) in reach:
                            continue
                        I, g = ideal_chain(ring, n, j, l)
                        return g, _forward_morphism(I, G, n, y, z)
    return None
