"""Seeded random instances: modules, maps, representations, base changes."""
from __future__ import annotations

import itertools
import random

import numpy as np

from .quiver import Quiver
from .rep.chain import ISO, PERIODIC, ZERO, ChainRep, TailSpec, constant_chain
from .rep.finite import RepMorphism, Representation, make_representation, rep_direct_sum, transport
from .ring.base import BaseRing
from .ring.module import FinModule, ModuleMap


def modules_up_to(ring: BaseRing, max_card: int) -> list[FinModule]:
    """Every module (up to isomorphism) with at most ``max_card`` elements."""
    out = []
    q = ring.residue_size
    for r in range(0, 12):
        if q**r > max_card:
            break
        for exps in itertools.combinations_with_replacement(range(1, ring.k + 1), r):
            M = FinModule(ring, exps)
            if M.cardinality <= max_card:
                out.append(M)
    return out


def random_module(ring: BaseRing, rng: random.Random, max_card: int = 16) -> FinModule:
    return rng.choice(modules_up_to(ring, max_card))


def random_scalar(ring: BaseRing, rng: random.Random, e: int = None) -> int:
    e = ring.k if e is None else e
    return rng.choice(list(ring.residues(e)))


def random_map(M: FinModule, N: FinModule, rng: random.Random) -> ModuleMap:
    ring = M.ring
    mat = np.zeros((N.rank, M.rank), dtype=np.int64)
    for j, b in enumerate(N.exps):
        for i, a in enumerate(M.exps):
            shift = max(b - a, 0)
            mat[j, i] = ring.mul(random_scalar(ring, rng), ring.pi_pow(shift))
    return ModuleMap(M, N, mat)


def random_automorphism(M: FinModule, rng: random.Random, tries: int = 50) -> ModuleMap:
    for _ in range(tries):
        f = random_map(M, M, rng)
        if f.is_iso():
            return f
    return ModuleMap.identity(M)


def random_representation(Q: Quiver, ring: BaseRing, rng: random.Random, max_card: int = 16,
                          zero_bias: float = 0.0) -> Representation:
    mods = {}
    for v in Q.vertices:
        mods[v] = FinModule.zero(ring) if rng.random() < zero_bias else random_module(ring, rng, max_card)
    maps = {a.id: random_map(mods[a.src], mods[a.tgt], rng) for a in Q.arrows}
    return make_representation(Q, ring, mods, maps)


def scramble(X: Representation, rng: random.Random) -> tuple[Representation, RepMorphism]:
    """X moved along random vertexwise automorphisms, with the isomorphism."""
    return transport(X, {v: random_automorphism(X[v], rng) for v in X.quiver.vertices})


def random_injective(Q: Quiver, ring: BaseRing, rng: random.Random, max_card: int = 16, parts: int = 3):
    """A random direct sum of e_*^v(R) summands, scrambled; None if it gets too big."""
    from .adjoint import e_star_finite

    free = FinModule.free(ring, 1)
    reps = [e_star_finite(Q, rng.choice(Q.vertices), free).rep for _ in range(rng.randint(0, parts))]
    if not reps:
        return make_representation(Q, ring, {})
    S = rep_direct_sum(reps).rep
    if any(S[v].cardinality > max_card for v in Q.vertices):
        return None
    return scramble(S, rng)[0]


def perturb(X: Representation, rng: random.Random) -> Representation:
    """Replace one arrow map by a random one (keeps the vertex modules)."""
    if not X.quiver.arrows:
        return X
    a = rng.choice(X.quiver.arrows)
    maps = dict(X.maps)
    maps[a.id] = random_map(X[a.src], X[a.tgt], rng)
    return Representation(X.quiver, X.ring, dict(X.modules), maps)


def connected_supports(Q: Quiver) -> list[frozenset]:
    """Non-empty vertex sets that are connected in the underlying graph."""
    nbrs = {v: set() for v in Q.vertices}
    for a in Q.arrows:
        nbrs[a.src].add(a.tgt)
        nbrs[a.tgt].add(a.src)
    found = set()
    frontier = [frozenset([v]) for v in Q.vertices]
    while frontier:
        S = frontier.pop()
        if S in found:
            continue
        found.add(S)
        for u in set().union(*(nbrs[v] for v in S)) - S:
            frontier.append(S | {u})
    return sorted(found, key=lambda S: (len(S), sorted(map(str, S))))


def thin_module(Q: Quiver, ring: BaseRing, support: frozenset) -> Representation:
    """The field on ``support`` with identity maps on arrows inside it."""
    one = FinModule(ring, (1,))
    mods = {v: one if v in support else FinModule.zero(ring) for v in Q.vertices}
    maps = {a.id: ModuleMap.identity(one) if a.src in support and a.tgt in support else None for a in Q.arrows}
    return make_representation(Q, ring, mods, maps)


def thin_sums(Q: Quiver, ring: BaseRing, max_dim: int):
    """Every direct sum of thin modules with all vertex dimensions <= ``max_dim``.

    For a quiver whose underlying graph is a path (type A) over a field the
    thin modules on connected supports are exactly the indecomposables, so
    this lists every representation of bounded dimension up to isomorphism.
    """
    supports = connected_supports(Q)

    def rec(start, dims, chosen):
        yield list(chosen)
        for i in range(start, len(supports)):
            S = supports[i]
            if all(dims[v] < max_dim for v in S):
                for v in S:
                    dims[v] += 1
                chosen.append(S)
                yield from rec(i, dims, chosen)
                chosen.pop()
                for v in S:
                    dims[v] -= 1

    for chosen in rec(0, {v: 0 for v in Q.vertices}, []):
        if not chosen:
            yield make_representation(Q, ring, {})
        else:
            yield rep_direct_sum([thin_module(Q, ring, S) for S in chosen]).rep


# -- chains on the ray -------------------------------------------------------------

def random_chain(ring: BaseRing, rng: random.Random, max_card: int = 16, max_prefix: int = 2,
                 max_period: int = 2) -> ChainRep:
    """A random eventually periodic chain (zero, identity or periodic tail)."""
    s = rng.randint(0, max_prefix)
    kind = rng.choice([ZERO, ISO, PERIODIC])
    p = rng.randint(1, max_period) if kind == PERIODIC else 1
    if kind == ZERO:
        tail = [FinModule.zero(ring)]
    else:
        tail = [random_module(ring, rng, max_card) for _ in range(p)]
    mods = [random_module(ring, rng, max_card) for _ in range(s)] + tail
    L = len(mods)
    maps = []
    for i in range(L):
        j = i + 1 if i + 1 < L else s
        if kind == ISO and i >= s:
            maps.append(ModuleMap.identity(mods[i]))
        else:
            maps.append(random_map(mods[i], mods[j], rng))
    return ChainRep(ring, tuple(mods), tuple(maps), TailSpec(kind, s, p))


def scramble_chain(X: ChainRep, rng: random.Random) -> ChainRep:
    """X moved along random stagewise automorphisms of its window."""
    autos = [random_automorphism(M, rng) for M in X.modules]
    inv = [_inverse(a) for a in autos]
    L, s = X.window, X.tail.start
    maps = tuple(autos[i + 1 if i + 1 < L else s] @ X.maps[i] @ inv[i] for i in range(L))
    kind = X.tail.kind if X.tail.kind == ZERO else PERIODIC
    return ChainRep(X.ring, X.modules, maps, TailSpec(kind, s, X.tail.period))


def _inverse(a: ModuleMap) -> ModuleMap:
    from .ring.hom import extend_along

    return extend_along(a, ModuleMap.identity(a.domain))


def random_injective_chain(ring: BaseRing, rng: random.Random, max_card: int = 16) -> ChainRep:
    """An envelope of a random finite family plus an identity chain, scrambled."""
    from .injclass.ainf import chain_direct_sum, ray_envelope

    inj = [M for M in modules_up_to(ring, max_card) if all(e == ring.k for e in M.exps)]
    fam = [rng.choice(inj) for _ in range(rng.randint(1, 3))]
    parts = [ray_envelope(fam).envelope]
    free = rng.choice(inj)
    if not free.is_zero:
        parts.append(constant_chain(free))
    G = chain_direct_sum(parts).chain
    if any(G.stage(n).cardinality > max_card for n in range(G.window)):
        G = parts[0] if parts[0].stage(0).cardinality <= max_card else constant_chain(free)
    return scramble_chain(G, rng)


# -- random quivers ------------------------------------------------------------------

def random_tree(rng: random.Random, n: int, outward: bool = False) -> Quiver:
    """A random tree on vertices 0..n-1; arrows point away from 0 if ``outward``."""
    arrows = []
    for v in range(1, n):
        u = rng.randrange(v)
        src, tgt = (u, v) if outward or rng.random() < 0.5 else (v, u)
        arrows.append((f"e{v}", src, tgt))
    return Quiver.build(list(range(n)), arrows)


def random_acyclic_quiver(rng: random.Random, n: int, max_arrows: int = 6) -> Quiver:
    """Random arrows i -> j with i < j (parallel arrows allowed), relabelled at random."""
    label = list(range(n))
    rng.shuffle(label)
    arrows = []
    if n > 1:
        for t in range(rng.randint(0, max_arrows)):
            i, j = sorted(rng.sample(range(n), 2))
            arrows.append((f"x{t}", label[i], label[j]))
    return Quiver.build(list(range(n)), arrows)


def random_one_ray_forest(rng: random.Random, n: int):
    """An outward tree on n vertices with one ray glued at a random vertex."""
    from .quiver import BarrenForest, Ray

    core = random_tree(rng, n, outward=True)
    return BarrenForest(core, (Ray(rng.randrange(n), "w"),))
