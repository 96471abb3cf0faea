"""The acceptance suite: eleven seeded, exact checks of the main results.

Each criterion returns a ``CriterionResult``; ``run_all`` runs them in
order.  The pytest gate and the ``selftest`` subcommand both use this
module, so the numbers they report are the same.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from dataclasses import dataclass

from .generators import (
    perturb,
    random_acyclic_quiver,
    random_chain,
    random_injective,
    random_injective_chain,
    random_module,
    random_one_ray_forest,
    random_representation,
    random_tree,
    scramble,
    scramble_chain,
    thin_sums,
)
from .quiver import AInfBoth, AInfPlus, LOOP_NOTE, Quiver, a_n, classify_source_injective, loop_quiver, sample_barren_tree
from .ring.base import BaseRing
from .ring.module import FinModule

Z4 = BaseRing.zmod(2, 2)
F2 = BaseRing.gf(2)
F3 = BaseRing.gf(3)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    cases: int
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:>2}: {self.title} ({self.cases} cases, {self.seconds:.1f}s) {self.detail}"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed, "cases": self.cases,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def baer_quivers() -> list[Quiver]:
    """A2, A3, a root with two branches, and two arrows into one vertex."""
    return [
        a_n(2),
        a_n(3),
        Quiver.build([1, 2, 3], [("a", 1, 2), ("b", 1, 3)]),
        Quiver.build([1, 2, 3], [("a", 1, 3), ("b", 2, 3)]),
    ]


# -- 1: local criterion against the Baer oracle -----------------------------------

def criterion_baer(seed: int) -> tuple[bool, int, str]:
    from .injclass.baer import baer_oracle
    from .injclass.local import local_injectivity_test

    rng = random.Random(seed)
    cases = disagree = injective = 0
    # over F2 a module of size <= 16 has dimension <= 4; these type-A quivers
    # have thin indecomposables, so thin_sums lists every class exactly once
    for Q in baer_quivers():
        for X in thin_sums(Q, F2, 4):
            X = scramble(X, rng)[0]
            a = local_injectivity_test(X).is_injective
            disagree += a != bool(baer_oracle(X))
            injective += a
            cases += 1
    exhaustive = cases
    for i in range(500):
        Q = baer_quivers()[i % 4]
        kind = i % 3
        X = random_injective(Q, Z4, rng, max_card=16, parts=3) if kind < 2 else None
        if X is not None and kind == 1:
            X = perturb(X, rng)
        if X is None:
            X = random_representation(Q, Z4, rng, max_card=16, zero_bias=0.2)
        a = local_injectivity_test(X).is_injective
        disagree += a != bool(baer_oracle(X))
        injective += a
        cases += 1
    detail = f"{exhaustive} F2 classes + 500 Z/4 cases, {injective} injective, {disagree} disagreements"
    return disagree == 0, cases, detail


# -- 2: the adjunction --------------------------------------------------------------

def criterion_adjunction(seed: int) -> tuple[bool, int, str]:
    from .adjoint import verify_adjunction

    rng = random.Random(seed)
    fails = 0
    for i in range(100):
        ring = [Z4, F2, F3][i % 3]
        Q = rng.choice(baer_quivers())
        X = random_representation(Q, ring, rng, max_card=8 if ring is not F3 else 9)
        v = rng.choice(Q.vertices)
        M = random_module(ring, rng, max_card=8 if ring is not F3 else 9)
        cert = verify_adjunction(X, v, M)
        fails += not cert
    return fails == 0, 100, f"{fails} failures"


# -- 3: decomposition of injectives on trees -----------------------------------------

def _random_seeds(rng: random.Random, targets: list, ring: BaseRing, max_parts: int = 3) -> list:
    return [(rng.choice(targets), rng.randint(1, 2)) for _ in range(rng.randint(1, max_parts))]


def _generating_multiset(seeds) -> Counter:
    out = Counter()
    for t, d in seeds:
        out[t] += d
    return out


def criterion_decomposition(seed: int) -> tuple[bool, int, str]:
    from .adjoint import e_star
    from .injclass.decompose import decompose_injective_tree, rebuild
    from .rep.chain import chain_direct_sum
    from .rep.finite import rep_direct_sum
    from .rep.forest import forest_direct_sum

    rng = random.Random(seed)
    fails = 0
    for i in range(200):
        ring = F2 if i % 2 == 0 else F3
        shape = i % 4
        if shape < 2:
            Q = random_tree(rng, rng.randint(1, 8))
            targets = list(Q.vertices)
        elif shape == 2:
            Q = AInfPlus()
            targets = [0, 1, 2, 3, ("inf", "w")]
        else:
            Q = random_one_ray_forest(rng, rng.randint(1, 4))
            r = Q.rays[0]
            targets = list(Q.core.vertices) + [("ray", r.id, 1), ("ray", r.id, 2), ("inf", r.id)]
        seeds = _random_seeds(rng, targets, ring)
        parts = [e_star(Q, t, FinModule(ring, (1,) * d)) for t, d in seeds]
        if isinstance(Q, Quiver):
            X = scramble(rep_direct_sum(parts).rep, rng)[0]
        elif isinstance(Q, AInfPlus):
            X = scramble_chain(chain_direct_sum(parts).chain, rng)
        else:
            X = forest_direct_sum(parts).rep
        d = decompose_injective_tree(X)
        ok = Counter({t: m for t, m in d.multiset().items() if m}) == _generating_multiset(seeds)
        ok = ok and _is_iso(d.iso)
        rebuilt = rebuild(d.summands, Q, ring)
        ok = ok and _same_shape(rebuilt, d.rebuild)
        fails += not ok
    return fails == 0, 200, f"{fails} mismatches"


def _is_iso(phi) -> bool:
    if hasattr(phi, "is_iso"):
        return phi.is_iso()
    return all(phi[n].is_iso() for n in range(phi.check_depth() + 1))


def _same_shape(A, B) -> bool:
    from .rep.serialize import rep_to_json

    return rep_to_json(A) == rep_to_json(B)


# -- 4-6: the forward ray --------------------------------------------------------------

def ray_suite(seed: int) -> tuple[list, list]:
    """Seeded chains for the ray criteria: (accepted, rejected) by the stagewise test."""
    from .injclass.ainf import ray_injectivity_test
    from .rep.chain import constant_chain

    rng = random.Random(seed)
    candidates = [constant_chain(FinModule.free(Z4, 1)), constant_chain(FinModule.free(F2, 1))]
    candidates += [random_injective_chain([Z4, F2, F3][i % 3], rng) for i in range(6)]
    while len(candidates) < 18:
        G = random_chain([Z4, F2, F3][len(candidates) % 3], rng, max_card=9)
        if not G.is_zero:
            candidates.append(G)
    accepted, rejected = [], []
    for G in candidates:
        (accepted if ray_injectivity_test(G) else rejected).append(G)
    return accepted, rejected


def _random_pair(G, rng: random.Random):
    """A mono g: S -> X and a morphism h: S -> G."""
    from .injclass.ainf import ideal_chain, random_chain_morphism
    from .rep.chain import chain_kernel

    ring = G.ring
    if rng.random() < 0.2:
        j = rng.randint(0, ring.k)
        I, g = ideal_chain(ring, rng.randint(0, 2), j, rng.randint(0, j))
    else:
        X, Y = random_chain(ring, rng, max_card=9), random_chain(ring, rng, max_card=9)
        I, g = chain_kernel(random_chain_morphism(X, Y, rng))
    return g, random_chain_morphism(I, G, rng)


def criterion_ray(seed: int) -> tuple[bool, int, str]:
    from .injclass.ainf import extension_test, nonextendable_pair, ray_injectivity_test
    from .injclass.extend import extend_morphism
    from .rep.chain import constant_chain

    rng = random.Random(seed)
    accepted, rejected = ray_suite(seed)
    lemma = all(ray_injectivity_test(constant_chain(FinModule.free(R, 1))) for R in (Z4, F2, F3))
    bad_pairs = bad_rejects = pairs = 0
    for G in accepted:
        for _ in range(50):
            g, h = _random_pair(G, rng)
            pairs += 1
            brute = extension_test(g, h)
            t = extend_morphism(g, h)
            bad_pairs += not (brute and (t @ g).equals(h))
    for G in rejected:
        pair = nonextendable_pair(G)
        bad_rejects += pair is None or bool(extension_test(*pair))
    ok = lemma and bad_pairs == 0 and bad_rejects == 0 and accepted and rejected
    detail = (f"{len(accepted)} accepted x 50 pairs ({bad_pairs} failed), {len(rejected)} rejected "
              f"({bad_rejects} without a non-extendable pair), constant chains {'pass' if lemma else 'FAIL'}")
    return bool(ok), pairs + len(rejected), detail


def envelope_families():
    Es = [FinModule.zero(Z4), FinModule.free(Z4, 1), FinModule.free(Z4, 2)]
    return [list(f) for f in itertools.product(Es, repeat=4)]


def criterion_envelope(seed: int) -> tuple[bool, int, str]:
    from .injclass.ainf import ray_envelope

    fams = envelope_families()
    bad = 0
    for fam in fams:
        env = ray_envelope(fam)
        bad += not (env.verdict and env.essential)
    return bad == 0, len(fams), f"{bad} families fail injectivity or essentiality"


def criterion_torsion(seed: int) -> tuple[bool, int, str]:
    from .injclass.ainf import ray_envelope, ray_injectivity_test, split_injective

    accepted, _ = ray_suite(seed)
    accepted += [ray_envelope(f).envelope for f in envelope_families()]
    bad = sum(not ray_injectivity_test(split_injective(G).torsion) for G in accepted)
    return bad == 0, len(accepted), f"{bad} torsion parts not injective"


# -- 7-9: duality, dimensions, Gorenstein classes ------------------------------------------

def _left_rooted_case(i: int, rng: random.Random):
    """Random finite representation over an acyclic (hence left-rooted) quiver, a third of them flat."""
    from .homdim import dual_representation

    ring = Z4 if i % 2 == 0 else F2
    Q = random_acyclic_quiver(rng, rng.randint(1, 5), max_arrows=5)
    if i % 3 < 2:
        E = random_injective(Q.opposite(), ring, rng, max_card=16, parts=3)
        if E is not None:
            X = dual_representation(E)
            return perturb(X, rng) if i % 3 == 1 else X
    return random_representation(Q, ring, rng, max_card=8, zero_bias=0.3)


def criterion_duality(seed: int) -> tuple[bool, int, str]:
    from .homdim import is_flat_representation

    rng = random.Random(seed)
    bad = flat = 0
    for i in range(500):
        v = is_flat_representation(_left_rooted_case(i, rng))
        bad += not v.routes_agree
        flat += v.flat
    return bad == 0, 500, f"{flat} flat, {bad} disagreements with the dual injectivity test"


def stored_examples() -> dict:
    from .rep.finite import make_representation

    Q = a_n(2)
    a = Q.arrows[0].id
    return {
        "Z/2 -id-> Z/2": make_representation(Q, Z4, {1: [1], 2: [1]}, {a: [[1]]}),
        "Z/4 -2-> Z/4": make_representation(Q, Z4, {1: [2], 2: [2]}, {a: [[2]]}),
        "0 -> Z/4": make_representation(Q, Z4, {1: [], 2: [2]}),
    }


def _finite_sup_case(i: int, rng: random.Random):
    """Vertex modules of finite injective dimension: anything over a field, free over Z/4."""
    from .rep.finite import make_representation
    from .generators import random_map

    Q = random_acyclic_quiver(rng, rng.randint(1, 4), max_arrows=4)
    if i % 2:
        return random_representation(Q, rng.choice([F2, F3]), rng, max_card=9)
    mods = {v: FinModule.free(Z4, rng.randint(0, 2)) for v in Q.vertices}
    maps = {a.id: random_map(mods[a.src], mods[a.tgt], rng) for a in Q.arrows}
    return make_representation(Q, Z4, mods, maps)


def criterion_injdim(seed: int) -> tuple[bool, int, str]:
    from .homdim import injdim_representation

    rng = random.Random(seed)
    bad, hist = 0, Counter()
    for i in range(200):
        r = injdim_representation(_finite_sup_case(i, rng))
        ok = r.sup != math.inf and r.exact is not None and r.exact <= r.sup + 1 and r.bound == r.sup + 1
        bad += not ok
        hist[r.exact] += 1
    w = injdim_representation(stored_examples()["Z/4 -2-> Z/4"])
    witness = w.sup == 0 and w.exact == 1
    detail = f"exact values {dict(sorted(hist.items()))}, {bad} over the bound; witness sup={w.sup} exact={w.exact}"
    return bad == 0 and witness, 201, detail


def criterion_gorenstein(seed: int) -> tuple[bool, int, str]:
    from .homdim import gorenstein_flat_test, gorenstein_injective_test, gorenstein_projective_test, is_flat_representation
    from .injclass.local import local_injectivity_test

    expected = {
        # (GI, GP, GF, injective, flat)
        "Z/2 -id-> Z/2": (True, True, True, False, False),
        "Z/4 -2-> Z/4": (False, False, False, False, False),
        "0 -> Z/4": (False, True, True, False, True),
    }
    got, ok = {}, True
    for name, X in stored_examples().items():
        gi = gorenstein_injective_test(X, witness=True)
        row = (gi.holds, gorenstein_projective_test(X).holds, gorenstein_flat_test(X).holds,
               local_injectivity_test(X).is_injective, is_flat_representation(X).flat)
        got[name] = row
        ok = ok and row == expected[name] and (not gi.holds or bool(gi.witness))
    rng = random.Random(seed)
    bad = 0
    for i in range(200):
        bad += not gorenstein_flat_test(_left_rooted_case(i, rng)).routes_agree
    mism = [n for n in expected if got[n] != expected[n]]
    detail = f"stored examples {'match' if not mism else 'differ: ' + ', '.join(mism)}; {bad}/200 flat-route disagreements"
    return ok and bad == 0, 203, detail


# -- 10-11: finite extensions, classification -------------------------------------------------

def criterion_extend(seed: int) -> tuple[bool, int, str]:
    from .injclass.extend import extend_morphism
    from .rep.finite import HomReps, rep_kernel

    rng = random.Random(seed)
    Q = a_n(2)
    bad = 0
    done = 0
    while done < 100:
        ring = [Z4, F2, F3][done % 3]
        E = random_injective(Q, ring, rng, max_card=16, parts=3)
        if E is None:
            continue
        X = random_representation(Q, ring, rng, max_card=9)
        Y = random_representation(Q, ring, rng, max_card=9)
        homs = HomReps(X, Y).basis()
        eta = X.zero_to(Y)
        for b in homs:
            if rng.random() < 0.5:
                eta = eta + b
        S, g = rep_kernel(eta)
        h = S.zero_to(E)
        for b in HomReps(S, E).basis():
            if rng.random() < 0.5:
                h = h + b
        t = extend_morphism(g, h)
        natural = all(E.maps[a.id] @ t[a.src] == t[a.tgt] @ X.maps[a.id] for a in Q.arrows)
        bad += not (natural and t @ g == h)
        done += 1
    return bad == 0, 100, f"{bad} failures of t o g = h or naturality"


def criterion_classifier(seed: int) -> tuple[bool, int, str]:
    expect = [
        ("A2", a_n(2), "yes", "right-rooted"),
        ("finite tree", Quiver.build([1, 2, 3, 4], [("a", 1, 2), ("b", 3, 2), ("c", 2, 4)]), "yes", "right-rooted"),
        ("A-infinity-plus", AInfPlus(), "yes", "barren-forest"),
        ("barren tree", sample_barren_tree(), "yes", "barren-forest"),
        ("A-infinity-both", AInfBoth(), "yes", "a-inf-both"),
        ("loop", loop_quiver(), "unknown", None),
    ]
    wrong = []
    for name, Q, verdict, reason in expect:
        c = classify_source_injective(Q)
        if c.verdict != verdict or c.reason != reason:
            wrong.append(name)
    loop = classify_source_injective(loop_quiver())
    if loop.note != LOOP_NOTE:
        wrong.append("loop annotation")
    return not wrong, len(expect), "all as expected" if not wrong else "wrong: " + ", ".join(wrong)


# -- running -----------------------------------------------------------------------------

CRITERIA = [
    (1, "local criterion agrees with the Baer oracle", criterion_baer),
    (2, "adjunction bijection for e_*", criterion_adjunction),
    (3, "decomposition of injectives on trees", criterion_decomposition),
    (4, "ray criterion, both directions", criterion_ray),
    (5, "envelopes of finite families", criterion_envelope),
    (6, "torsion part of a ray injective", criterion_torsion),
    (7, "flat iff dual injective", criterion_duality),
    (8, "injective dimension bound", criterion_injdim),
    (9, "Gorenstein injective/projective/flat", criterion_gorenstein),
    (10, "extension formula on A2", criterion_extend),
    (11, "source-injective classifier", criterion_classifier),
]


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    for n, title, fn in CRITERIA:
        if n == number:
            t = time.perf_counter()
            passed, cases, detail = fn(seed)
            return CriterionResult(n, title, bool(passed), cases, detail, time.perf_counter() - t)
    raise KeyError(number)


def run_all(seed: int = 0, only=None) -> list[CriterionResult]:
    return [run_criterion(n, seed) for n, _, _ in CRITERIA if only is None or n in only]
