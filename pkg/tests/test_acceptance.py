"""Acceptance criteria, one test each, every comparison exact.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
repeated in the terminal summary.
"""
import itertools
import random
from fractions import Fraction as F

from gammasite import H, SM, norm_ball_HQ1, quotient, sphere
from gammasite.cinf_site import (
    build_cinf, enumerate_partitions, is_cover, partition_product, site_of, validate_multipartition,
    validate_partition,
)
from gammasite.families import diagonal_units
from gammasite.gamma_core import enumerate_algebra_morphisms, enumerate_nat_transformations
from gammasite.sheaves import (
    localok_check, norm_ball_sections, sheaf_check, sheaf_check_all, sheafify, quotient_checks,
    structure_presheaf,
)
from gammasite.structures import (
    FreeMonoidFragment, all_monoids, boolean, chain, gf4, group_with_zero, idempotent_monoid, nil_monoid,
    prime_field, product_semiring, zmod,
)
from gammasite.topos_points import enumerate_points, point_from_prime, prime_from_point
from gammasite.tropical import (
    CofiniteOpen, ConvexPLFunction, RationalSet, convexity_obstruction, phi, trop_add, trop_cover_check,
    trop_divides,
)
from gammasite.tv_check import build_counterexample, default_catalog, verify_not_faithful, verify_pushout

from acceptance_log import record
from oracles import (
    divides_by_difference, fraction_class_count, monoid_hom_count, plus_class_count, semiring_primes,
    tropical_witness_search, zariski_covers,
)

SEED = 20240601


def test_criterion_01_semiring_spectrum():
    corpus = [zmod(n) for n in range(2, 13)] + [boolean(), gf4(), chain(3)]
    bad = []
    pairs = 0
    for R in corpus:
        A = H(R)
        cat = build_cinf(A)
        primes = semiring_primes(R)
        pts = enumerate_points(A)
        if len(pts) != len(primes):
            bad.append(f"{R.label}: {len(pts)} points vs {len(primes)} primes")
        supports = set()
        for P in primes:
            lifted = frozenset(A.embed(r) for r in P)
            pt = point_from_prime(A, lifted)
            supports.add(pt.support)
            if prime_from_point(A, pt) != lifted:
                bad.append(f"{R.label}: round trip fails at {sorted(P)}")
        if supports != {p.support for p in pts}:
            bad.append(f"{R.label}: supports differ")
        for c in range(len(cat)):
            below = cat.below(c)
            for r in range(min(3, len(below)) + 1):
                for fam in itertools.combinations(below, r):
                    pairs += 1
                    want = zariski_covers(R, [cat.rep(f)[0] for f in fam], cat.rep(c)[0], primes)
                    if is_cover(A, fam, c).is_cover != want:
                        bad.append(f"{R.label}: cover {fam} -> {c}")
    record(1, "semiring spectrum vs prime ideals and Zariski covers", not bad,
           f"{len(corpus)} semirings, {pairs} (family, target) pairs, mismatches={bad[:3]}")


def test_criterion_02_monoid_chaotic_topology():
    bad, covers, parts = [], 0, 0
    for M in all_monoids(5):
        A = SM(M)
        cat = build_cinf(A)
        for c in range(len(cat)):
            below = cat.below(c)
            for r in range(len(below) + 1):
                for fam in itertools.combinations(below, r):
                    if is_cover(A, fam, c).is_cover:
                        covers += 1
                        if c not in fam and not (c == cat.zero and not fam):
                            bad.append(f"{M.names}: {fam} covers {c}")
            for n in range(1, 4):
                for w in enumerate_partitions(A, c, n, dedupe=False):
                    parts += 1
                    live = sum(1 for p in w.parts if p != cat.zero)
                    if live != (0 if c == cat.zero else 1):
                        bad.append(f"{M.names}: partition {w.xi} of {c} has {live} live parts")
    record(2, "monoid sites are chaotic", not bad,
           f"{len(all_monoids(5))} monoids, {covers} covers, {parts} partitions, violations={bad[:3]}")


def test_criterion_03_z6_walkthrough():
    A = H(zmod(6))
    cat = build_cinf(A)
    O = structure_presheaf(A)
    size = {cat.rep(c)[0]: len(O.section(c).level(1)) for c in range(len(cat))}
    r = sheaf_check(O, [cat.class_of((2,)), cat.class_of((3,))], cat.terminal, 1)
    ok = len(cat) == 4 and size == {2: 3, 3: 2, 1: 6, 0: 1} and r.ok and r.matching == 6
    record(3, "Z/6 walkthrough", ok,
           f"objects={len(cat)}, sizes(2,3,1,0)=({size[2]},{size[3]},{size[1]},{size[0]}), "
           f"matching={r.matching}, sheaf={r.ok}")


def test_criterion_04_ring_sheaf_property():
    bad = []
    for n in range(2, 13):
        O = structure_presheaf(H(zmod(n)))
        _, eta = sheafify(O)
        for c in range(len(O.cat)):
            for k in (1, 2, 3):
                if not (eta.injective_at(c, k) and eta.surjective_at(c, k)):
                    bad.append((n, c, k))
        bad += [(n, "cover", f) for f in sheaf_check_all(O, 3)]
    record(4, "eta bijective for H(Z/n), n <= 12, k <= 3", not bad, f"failures={bad[:3]}")


def test_criterion_05_quotient_counterexample():
    K = prime_field(3)
    base = product_semiring(K, K)
    Q = quotient(H(base), diagonal_units(K))
    cat, O = build_cinf(Q), structure_presheaf(Q)
    one = cat.terminal
    idem = [c for c in range(len(cat)) if c not in (one, cat.zero)]
    r = sheaf_check(O, idem, one, 1)
    P2, eta = sheafify(O)
    primes = semiring_primes(base)
    oracle = lambda s: zariski_covers(base, [cat.rep(d)[0] for d in s], cat.rep(one)[0], primes)
    plus_oracle = plus_class_count(O, one, 1, oracle)
    ok = (len(O.section(one).level(1)) == 5 and r.matching == 4 and not eta.injective_at(one, 1)
          and len(P2.section(one).level(1)) == 4 and plus_oracle == 4)
    record(5, "H(F3 x F3)/diagonal units is not a sheaf", ok,
           f"global={len(O.section(one).level(1))}, matching={r.matching}, "
           f"eta injective={eta.injective_at(one, 1)}, sheafified={len(P2.section(one).level(1))}, "
           f"colimit oracle={plus_oracle}")


def test_criterion_06_site_invariance_under_quotient():
    K3 = prime_field(3)
    pairs = [
        (H(zmod(5)), [(1,), (4,)]),
        (H(zmod(5)), [(u,) for u in zmod(5).units()]),
        (H(zmod(6)), [(1,), (5,)]),
        (H(zmod(7)), [(1,), (2,), (4,)]),
        (H(zmod(9)), [(1,), (8,)]),
        (H(zmod(10)), [(1,), (9,)]),
        (H(zmod(12)), [(1,), (5,), (7,), (11,)]),
        (H(gf4()), [(u,) for u in gf4().units()]),
        (H(product_semiring(K3, K3)), diagonal_units(K3)),
        (SM(group_with_zero(2)), [SM(group_with_zero(2)).embed(u) for u in group_with_zero(2).units()]),
    ]
    bad = []
    for A, G in pairs:
        rep = quotient_checks(A, G, check_sheaf=False)
        if not (rep.site_iso and rep.localization_bijective):
            bad.append(repr(A))
    record(6, "spectrum unchanged by unit quotients", not bad, f"{len(pairs)} pairs, failures={bad}")


def test_criterion_07_fields_mod_units_are_sheaves():
    bad = []
    for K in (prime_field(3), gf4(), prime_field(5)):
        Q = quotient(H(K), [(u,) for u in K.units()])
        fails = sheaf_check_all(structure_presheaf(Q))
        if fails:
            bad.append((K.label, fails[:2]))
    record(7, "H(K)/K^x is a sheaf for F3, F4, F5", not bad, f"failures={bad}")


def _random_rational(rng, lo=F(1, 100), hi=F(99, 100)):
    den = rng.randint(2, 60)
    num = rng.randint(1, den - 1)
    return min(max(F(num, den), lo), hi)


def _random_pl(rng):
    pts = sorted({_random_rational(rng) for _ in range(rng.randint(0, 3))})
    return ConvexPLFunction.make([(p, rng.randint(1, 3)) for p in pts], rng.randint(-3, 3),
                                 F(rng.randint(-8, 8), rng.randint(1, 6)))


def test_criterion_08_tropical_suite():
    rng = random.Random(SEED)
    triples = 0
    join_bad = []
    while triples < 100:
        x, y, z = sorted(_random_rational(rng) for _ in range(3))
        if not x < y < z:
            continue
        triples += 1
        if trop_add(phi(x, y), phi(y, z)) != phi(y, y):
            join_bad.append((x, y, z))
    div_bad = []
    for _ in range(500):
        f, g = _random_pl(rng), _random_pl(rng)
        if rng.random() < 0.3:
            f = ConvexPLFunction.make(f.breakpoints + g.breakpoints, f.left_slope, f.intercept)
        if trop_divides(g, f) != divides_by_difference(g, f):
            div_bad.append((f, g))
    universe = [F(1, 6), F(1, 3), F(1, 2), F(2, 3), F(5, 6)]
    subsets = [frozenset(s) for r in range(4) for s in itertools.combinations(universe, r)]
    cover_bad, instances = [], 0
    for Z in subsets:
        members = [R for R in subsets if Z <= R]
        for r in (1, 2):
            for fam in itertools.combinations(members, r):
                instances += 1
                got = trop_cover_check([CofiniteOpen(R) for R in fam], CofiniteOpen(Z))
                if got != tropical_witness_search(Z, fam, n_max=4):
                    cover_bad.append((Z, fam))
    v = convexity_obstruction(F(1, 4), F(1, 2), F(3, 4), RationalSet(frozenset({F(1, 4), F(3, 4)})))
    witness_ok = (v.label == "FAILS" and v.witness[0] == CofiniteOpen.minus(F(1, 2))
                  and set(v.witness[1]) == {CofiniteOpen.minus(F(1, 4), F(1, 2)),
                                            CofiniteOpen.minus(F(1, 2), F(3, 4))})
    ok = not join_bad and not div_bad and not cover_bad and witness_ok
    record(8, "tropical joins, divisibility, covers, convexity", ok,
           f"joins {triples} bad={len(join_bad)}; divisibility 500 bad={len(div_bad)}; "
           f"covers {instances} bad={len(cover_bad)}; obstruction={v.label}")


def test_criterion_09_localization():
    ring_pairs = [
        (zmod(6), [1, 2, 4]), (zmod(6), [1, 3]), (zmod(6), [1, 5]), (zmod(12), [1, 2, 4, 8]),
        (zmod(12), [1, 3, 9]), (zmod(10), [1, 5]), (zmod(8), [1, 3]), (zmod(9), [1, 3, 0]),
        (boolean(), [1]), (chain(3), [1, 2]),
    ]
    monoid_pairs = [
        (nil_monoid(), [1]), (idempotent_monoid(), [1, 2]), (group_with_zero(2), [1, 2]),
        (all_monoids(4)[5], None), (all_monoids(4)[-1], None),
    ]
    bad = []
    for R, S in ring_pairs:
        rep = localok_check(R, S)
        size = fraction_class_count(list(R.elements), lambda a, b: R.mul[a][b], S)
        if not rep.ok or any(rep.sizes[k] != (size ** k, size ** k) for k in (1, 2, 3)):
            bad.append((R.label, S, rep.sizes))
    for M, S in monoid_pairs:
        if S is None:
            u = next(x for x in M.elements if x not in (M.zero, M.one))
            S, p = {M.one}, u
            while p not in S:
                S.add(p)
                p = M.product(p, u)
            S = sorted(S)
        rep = localok_check(M, S)
        size = fraction_class_count(list(M.elements), M.product, S)
        if not rep.ok or rep.sizes[1] != (size, size):
            bad.append((M.names, S, rep.sizes))
    record(9, "localization commutes with H and S[-]", not bad,
           f"{len(ring_pairs)} semiring pairs, {len(monoid_pairs)} monoid pairs, failures={bad[:3]}")


def test_criterion_10_pushout_counterexample():
    details, ok = [], True
    for K in (prime_field(3), prime_field(5)):
        D = build_counterexample(K)
        catalog = default_catalog(D)
        push = verify_pushout(D, catalog)
        reports = [verify_not_faithful(D, u) for u in K.units() if u != K.one]
        good = (len(catalog) >= 10 and push.ok and all(r.differs_from_identity for r in reports)
                and all(all(r.base_change_identity.values()) for r in reports))
        ok &= good
        details.append(f"{K.label}: catalog={len(catalog)} unique={push.ok} "
                       f"V!=id={all(r.differs_from_identity for r in reports)} "
                       f"base change id={all(all(r.base_change_identity.values()) for r in reports)}")
    record(10, "pushout exists but base change is not faithful", ok, "; ".join(details))


def test_criterion_11_hom_counts():
    bad = []
    S = sphere()
    for X in (H(zmod(2)), H(zmod(6)), H(chain(3)), SM(nil_monoid()), SM(group_with_zero(2))):
        if len(enumerate_nat_transformations(S, X)) != len(X.level(1)):
            bad.append(("sphere", repr(X)))
    for R in (zmod(3), zmod(6), boolean()):
        if any(not t.is_trivial(3) for t in enumerate_nat_transformations(H(R), S)):
            bad.append(("to sphere", R.label))
    corpus = [(M, R) for M in all_monoids(4)[:5] for R in (zmod(4), zmod(6))]
    for M, R in corpus:
        if len(enumerate_algebra_morphisms(SM(M), H(R))) != monoid_hom_count(M, R):
            bad.append(("SM", M.names, R.label))
    for A in (H(zmod(4)), H(zmod(6)), H(chain(3))):
        if len(enumerate_algebra_morphisms(SM(FreeMonoidFragment(3)), A)) != len(A.level(1)):
            bad.append(("S[T]", repr(A)))
    record(11, "hom counts at truncation 3", not bad, f"{len(corpus)} monoid/semiring pairs, failures={bad}")


def test_criterion_12_norm_ball_site():
    B = norm_ball_HQ1()
    cat = build_cinf(B)
    chain_ok = len(cat) == 3 and cat.hom == ((True, True, True), (False, True, True), (False, False, True))
    res = is_cover(B, [1], 2)
    witness_ok = res.is_cover and validate_multipartition(cat, res.witness, [1], 2)
    rng = random.Random(SEED)
    Ou = norm_ball_sections(B, 1)
    samples = [F(rng.randint(-500, 500), rng.randint(1, 97)) for _ in range(100)]
    members_ok = all(Ou.contains((q,), 1) for q in samples)
    record(12, "norm-ball chain and sections", chain_ok and witness_ok and members_ok,
           f"chain={chain_ok}, witness={witness_ok}, O(u) contains 100/100 rationals={members_ok}")


def test_criterion_13_basis_axioms_and_products():
    rng = random.Random(SEED)
    algs = [H(R) for R in (zmod(6), zmod(12), zmod(8), chain(3), boolean(), gf4())]
    algs += [SM(M) for M in all_monoids(4)]
    bad, n = [], 0
    while n < 1000:
        A = rng.choice(algs)
        cat = build_cinf(A)
        c = rng.randrange(len(cat))
        below = cat.below(c)
        fam = sorted(rng.sample(below, rng.randint(0, min(3, len(below)))))
        d = rng.choice(below)
        n += 1
        if not is_cover(A, [c], c).is_cover:
            bad.append(("identity", A, c))
        if is_cover(A, fam, c).is_cover:
            if not is_cover(A, sorted({cat.pullback(f, d, c) for f in fam}), d).is_cover:
                bad.append(("pullback", A, fam, c, d))
            refined = set()
            for f in fam:
                covers = [g for g in cat.below(f) if is_cover(A, [g], f).is_cover]
                refined.update(rng.sample(covers, 1))
            if not is_cover(A, sorted(refined), c).is_cover:
                bad.append(("transitivity", A, fam, c))
        pool = [w for w in site_of(A).all_partitions() if w.arity <= 2]
        p, q = rng.choice(pool), rng.choice(pool)
        try:
            w = partition_product(cat, p, q)
            if not validate_partition(cat, w) or w.target != cat.product(p.target, q.target):
                bad.append(("product", A, p, q))
        except AssertionError:
            bad.append(("product", A, p, q))
    record(13, "basis axioms and partition products", not bad, f"{n} random instances, violations={len(bad)}")
