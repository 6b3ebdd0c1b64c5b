"""Localization of S-algebras, the structure presheaf on the C^inf site,
matching families, the plus construction and sheaf checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cinf_site import build_cinf, is_cover, site_of
from .families import H, SM, HAlgebra, QuotientAlgebra, SMAlgebra, quotient
from .gamma_core import (
    ENUMERABLE, WITNESS, PointedMap, SAlgebra, SAlgebraMorphism, generating_maps, require_enumerable,
)
from .site_cm import power_sequence
from .structures import (
    check_multiplicative_set, localize_monoid_map, localize_semiring_map,
)


# ------------------------------------------------------------ localization

def multiplicative_set_of(cat, c) -> list:
    """Level-1 elements g with a morphism c -> g^inf."""
    above = {d for d in range(len(cat)) if cat.hom[c][d]}
    return [g for g in cat.algebra.level(1) if cat.class_of(g) in above]


def _idempotent_power(x, product):
    for p in power_sequence(x, product):
        if product(p, p) == p:
            return p
    raise AssertionError("power sequence without idempotent")


class LocalizedAlgebra(SAlgebra):
    """M^-1 A for a finite multiplicative set M of level 1.

    Let e be the idempotent power of the product of all of M.  Then
    (s, x) ~ (t, y) iff e*t*x = e*s*y, e*s is invertible in e*A, and the class
    of (s, x) is represented by (e * s^-1) * x.  Level k is therefore e * A(k).
    """

    def __init__(self, A: SAlgebra, M):
        require_enumerable(A)
        self.base_algebra = A
        self.mset = check_multiplicative_set(A.mul1, M, A.one)
        self.truncation = A.truncation
        self.max_level = A.max_level
        total = A.one
        for s in self.mset:
            total = A.mul1(total, s)
        self.idempotent = _idempotent_power(total, A.mul1)
        self.one = self.idempotent
        e, lvl = self.idempotent, A.level(1)
        self._inverse = {}
        for s in self.mset:
            es = A.mul1(e, s)
            u = next((u for u in lvl if A.mul1(es, u) == e), None)
            if u is None:
                raise AssertionError(f"{A.format(s)} is not invertible after localization")
            self._inverse[s] = A.mul1(e, u)

    def key(self, s, x, k):
        """The element representing the fraction x / s."""
        return self.base_algebra.scalar(self._inverse[s], x, k)

    def inverse(self, s):
        return self._inverse[s]

    def _level(self, k):
        A, e = self.base_algebra, self.idempotent
        return dict.fromkeys(A.scalar(e, x, k) for x in A.level(k))

    def base(self, k):
        return self.base_algebra.base(k)

    def act(self, f, x):
        return self.base_algebra.act(f, x)

    def mul(self, x, k, y, m):
        return self.base_algebra.mul(x, k, y, m)

    def contains(self, x, k):
        A = self.base_algebra
        return A.contains(x, k) and A.scalar(self.idempotent, x, k) == x

    def format(self, x):
        return self.base_algebra.format(x)

    def __repr__(self):
        return f"{self.base_algebra!r}[1/{len(self.mset)}]"


def localize(A: SAlgebra, M) -> LocalizedAlgebra:
    return LocalizedAlgebra(A, M)


def localization_map(A: SAlgebra, L: LocalizedAlgebra) -> SAlgebraMorphism:
    """x -> x / 1."""
    return SAlgebraMorphism(A, L, lambda x, k: A.scalar(L.idempotent, x, k), name="loc")


def inclusion_map(small: LocalizedAlgebra, large: LocalizedAlgebra) -> SAlgebraMorphism:
    """N^-1 A -> M^-1 A for N inside M."""
    if not set(small.mset) <= set(large.mset):
        raise ValueError("multiplicative sets are not nested")
    A, e = large.base_algebra, large.idempotent
    return SAlgebraMorphism(small, large, lambda x, k: A.scalar(e, x, k), name="incl")


@dataclass
class IsoReport:
    bijective: bool
    multiplicative: bool
    natural: bool
    sizes: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.bijective and self.multiplicative and self.natural


def _check_levelwise_iso(L, T, rho, top) -> IsoReport:
    sizes, bij = {}, True
    for k in range(1, top + 1):
        image = [rho(y, k) for y in L.level(k)]
        sizes[k] = (len(L.level(k)), len(T.level(k)))
        bij &= len(set(image)) == len(image) and set(image) == set(T.level(k))
    mult = rho(L.one, 1) == T.one
    for k in range(1, top + 1):
        for m in range(1, top // k + 1):
            for x in L.level(k):
                rx = rho(x, k)
                for y in L.level(m):
                    if rho(L.mul(x, k, y, m), k * m) != T.mul(rx, k, rho(y, m), m):
                        mult = False
                        break
                if not mult:
                    break
    nat = all(rho(L.act(f, y), f.target) == T.act(f, rho(y, k))
              for k in range(1, top + 1) for f in generating_maps(k, top) for y in L.level(k))
    return IsoReport(bij, mult, nat, sizes)


def localok_check(base, M, top: int | None = None) -> IsoReport:
    """Compare M^-1 H(R) with H(M^-1 R), or M^-1 S(N) with S(M^-1 N)."""
    if hasattr(base, "add"):
        A = H(base)
        Lr, class_of = localize_semiring_map(base, M)
        T = H(Lr, A.truncation)
        loc = localize(A, [A.embed(m) for m in M])
        one = base.one
        rho = lambda y, k: tuple(class_of[(one, a)] for a in y)
    else:
        A = SM(base)
        Ln, class_of = localize_monoid_map(base, M)
        T = SM(Ln, A.truncation)
        loc = localize(A, [A.embed(m) for m in M])
        one = base.one

        def rho(y, k):
            u, i = y
            if i == 0:
                return T.base(k)
            v = class_of[(one, u)]
            return T.base(k) if v == Ln.zero else (v, i)
    top = A.truncation if top is None else top
    return _check_levelwise_iso(loc, T, rho, top)


# --------------------------------------------------------------- presheaves

class Presheaf:
    """Sections ``sections[c]`` (an S-algebra per object) and restrictions along
    d -> c given by ``restrict(c, d, x, k)``."""

    def __init__(self, cat, sections: dict, restrict, truncation=None, label="P"):
        self.cat = cat
        self.sections = sections
        self._restrict = restrict
        self.truncation = cat.algebra.truncation if truncation is None else truncation
        self.label = label

    def section(self, c):
        return self.sections[c]

    def restrict(self, c, d, x, k):
        if not self.cat.hom[d][c]:
            raise ValueError(f"no morphism {d} -> {c}")
        if c == d:
            return x
        return self._restrict(c, d, x, k)

    def check(self, top=None) -> list[str]:
        """Functoriality and algebra-morphism failures of the restrictions."""
        cat, out = self.cat, []
        top = self.truncation if top is None else top
        n = len(cat)
        for c in range(n):
            for d in range(n):
                if not cat.hom[d][c]:
                    continue
                P, Q = self.section(c), self.section(d)
                if self.restrict(c, d, P.one, 1) != Q.one:
                    out.append(f"restriction {c}->{d} not unital")
                for k in range(1, top + 1):
                    for x in P.level(k):
                        y = self.restrict(c, d, x, k)
                        if not Q.contains(y, k):
                            out.append(f"restriction {c}->{d} leaves the sections")
                            break
                        for e in range(n):
                            if cat.hom[e][d] and self.restrict(d, e, y, k) != self.restrict(c, e, x, k):
                                out.append(f"restrictions {c}->{d}->{e} do not compose")
                                break
        return out


def structure_presheaf(A: SAlgebra) -> Presheaf:
    memo = A.memo()
    if "structure_presheaf" in memo:
        return memo["structure_presheaf"]
    cat = build_cinf(A)
    sections = {c: localize(A, multiplicative_set_of(cat, c)) for c in range(len(cat))}

    def restrict(c, d, x, k):
        return A.scalar(sections[d].idempotent, x, k)

    P = Presheaf(cat, sections, restrict, label=f"O[{A!r}]")
    memo["structure_presheaf"] = P
    return P


class _OnePoint(SAlgebra):
    def __init__(self, truncation):
        self.truncation = truncation
        self.one = ()

    def _level(self, k):
        return [()]

    def base(self, k):
        return ()

    def act(self, f, x):
        return ()

    def mul(self, x, k, y, m):
        return ()


def constant_point_presheaf(cat) -> Presheaf:
    pt = _OnePoint(cat.algebra.truncation)
    return Presheaf(cat, {c: pt for c in range(len(cat))}, lambda c, d, x, k: (), label="pt")


# ---------------------------------------------------------- matching data

def sieve_maxima(cat, sieve) -> list[int]:
    s = sorted(sieve)
    return [a for a in s if not any(b != a and cat.hom[a][b] for b in s)]


def _match_tuples(P: Presheaf, sieve, k) -> list[tuple]:
    """Matching families on the sieve as value tuples over sorted(sieve)."""
    cat = P.cat
    objs = sorted(sieve)
    maxima = sieve_maxima(cat, sieve)
    meets = {(a, b): cat.product(a, b) for a in maxima for b in maxima}
    for (a, b), m in meets.items():
        if m not in sieve:
            raise AssertionError("sieve is not closed under pullback")
    out = []
    chosen = []

    def extend(i):
        if i == len(maxima):
            vals = []
            for d in objs:
                top = next(m for m in maxima if cat.hom[d][m])
                vals.append(P.restrict(top, d, chosen[maxima.index(top)], k))
            out.append(tuple(vals))
            return
        a = maxima[i]
        for x in P.section(a).level(k):
            ok = True
            for j in range(i):
                b, y = maxima[j], chosen[j]
                m = meets[(a, b)]
                if P.restrict(a, m, x, k) != P.restrict(b, m, y, k):
                    ok = False
                    break
            if ok:
                chosen.append(x)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return sorted(out)


@dataclass(frozen=True)
class MatchingFamily:
    objects: tuple
    values: tuple
    level: int

    def at(self, d):
        return self.values[self.objects.index(d)]


def generated_sieve(cat, family, c) -> frozenset:
    return cat.down_closure(family, c)


def matching_families(P: Presheaf, family, c, k: int) -> list[MatchingFamily]:
    sieve = generated_sieve(P.cat, family, c)
    objs = tuple(sorted(sieve))
    return [MatchingFamily(objs, v, k) for v in _match_tuples(P, sieve, k)]


def is_matching(P: Presheaf, mf: MatchingFamily) -> bool:
    cat = P.cat
    for a, x in zip(mf.objects, mf.values):
        if not P.section(a).contains(x, mf.level):
            return False
        for b, y in zip(mf.objects, mf.values):
            if cat.hom[b][a] and P.restrict(a, b, x, mf.level) != y:
                return False
    return True


@dataclass
class SheafCheck:
    sections: int
    matching: int
    injective: bool
    surjective: bool

    @property
    def ok(self):
        return self.injective and self.surjective


def sheaf_check(P: Presheaf, family, c, k: int) -> SheafCheck:
    sieve = generated_sieve(P.cat, family, c)
    objs = sorted(sieve)
    secs = P.section(c).level(k)
    images = {tuple(P.restrict(c, d, x, k) for d in objs) for x in secs}
    match = set(_match_tuples(P, sieve, k))
    return SheafCheck(len(secs), len(match), len(images) == len(secs), images == match)


def generating_covers(A, c, max_size: int = 3) -> list[tuple]:
    """Families of objects over c (up to ``max_size`` members) that cover c."""
    cat = build_cinf(A)
    below = cat.below(c)
    out = []
    for r in range(0, min(max_size, len(below)) + 1):
        for fam in itertools.combinations(below, r):
            if is_cover(A, fam, c).is_cover:
                out.append(fam)
    return out


def sheaf_check_all(P: Presheaf, top=None, max_size: int = 3) -> list[tuple]:
    """Failures (c, family, k) over every generating cover of every object."""
    A = P.cat.algebra
    top = P.truncation if top is None else top
    fails = []
    for c in range(len(P.cat)):
        for fam in generating_covers(A, c, max_size):
            for k in range(1, top + 1):
                if not sheaf_check(P, fam, c, k).ok:
                    fails.append((c, fam, k))
    return fails


# ------------------------------------------------------- plus construction

class MatchAlgebra(SAlgebra):
    """Matching families on a fixed sieve, a subalgebra of the product of the
    section algebras."""

    def __init__(self, P: Presheaf, sieve):
        self.presheaf = P
        self.objects = tuple(sorted(sieve))
        self.truncation = P.truncation
        self.one = tuple(P.section(d).one for d in self.objects)

    def _level(self, k):
        return _match_tuples(self.presheaf, self.objects, k)

    def base(self, k):
        return tuple(self.presheaf.section(d).base(k) for d in self.objects)

    def act(self, f, x):
        P = self.presheaf
        return tuple(P.section(d).act(f, v) for d, v in zip(self.objects, x))

    def mul(self, x, k, y, m):
        P = self.presheaf
        return tuple(P.section(d).mul(a, k, b, m) for d, a, b in zip(self.objects, x, y))

    def contains(self, x, k):
        return len(x) == len(self.objects) and is_matching(self.presheaf, MatchingFamily(self.objects, x, k))

    def format(self, x):
        P = self.presheaf
        return "{" + ", ".join(f"{d}:{P.section(d).format(v)}" for d, v in zip(self.objects, x)) + "}"


class PresheafMorphism:
    def __init__(self, source: Presheaf, target: Presheaf, fn, object_map=None, label=""):
        self.source = source
        self.target = target
        self.fn = fn
        self.object_map = object_map or {c: c for c in range(len(source.cat))}
        self.label = label

    def __call__(self, c, x, k):
        return self.fn(c, x, k)

    def naturality_failures(self, top=None) -> list:
        P, Q, om = self.source, self.target, self.object_map
        top = P.truncation if top is None else top
        out = []
        for c in range(len(P.cat)):
            for d in range(len(P.cat)):
                if not P.cat.hom[d][c]:
                    continue
                for k in range(1, top + 1):
                    for x in P.section(c).level(k):
                        if self(d, P.restrict(c, d, x, k), k) != Q.restrict(om[c], om[d], self(c, x, k), k):
                            out.append((c, d, k))
                            break
        return out

    def injective_at(self, c, k) -> bool:
        secs = self.source.section(c).level(k)
        return len({self(c, x, k) for x in secs}) == len(secs)

    def surjective_at(self, c, k) -> bool:
        secs = self.source.section(c).level(k)
        return {self(c, x, k) for x in secs} == set(self.target.section(self.object_map[c]).level(k))


def minimal_covering_sieve(A, c) -> frozenset:
    """Smallest covering sieve of c; covering sieves are closed under
    intersection, so the colimit over all of them is taken at this one."""
    memo = A.memo()
    key = ("rmin", c)
    if key not in memo:
        site = site_of(A)
        cat = site.cat
        below = cat.below(c)
        covering = []
        for r in range(len(below) + 1):
            for subset in itertools.combinations(below, r):
                s = frozenset(subset)
                if cat.down_closure(s, c) == s and is_cover(A, sieve_maxima(cat, s), c).is_cover:
                    covering.append(s)
        least = frozenset.intersection(*covering)
        if least not in covering:
            raise AssertionError("covering sieves are not closed under intersection")
        memo[key] = least
    return memo[key]


def plus_construction(P: Presheaf) -> tuple[Presheaf, PresheafMorphism]:
    """P+ with its canonical map from P."""
    cat, A = P.cat, P.cat.algebra
    sieves = {c: minimal_covering_sieve(A, c) for c in range(len(cat))}
    sections = {c: MatchAlgebra(P, sieves[c]) for c in range(len(cat))}

    def restrict(c, d, x, k):
        src = sections[c].objects
        return tuple(x[src.index(e)] for e in sections[d].objects)

    plus = Presheaf(cat, sections, restrict, P.truncation, label=P.label + "+")

    def eta(c, x, k):
        return tuple(P.restrict(c, e, x, k) for e in sections[c].objects)

    return plus, PresheafMorphism(P, plus, eta, label="eta")


def sheafify(P: Presheaf) -> tuple[Presheaf, PresheafMorphism]:
    plus, eta1 = plus_construction(P)
    plus2, eta2 = plus_construction(plus)
    eta = PresheafMorphism(P, plus2, lambda c, x, k: eta2(c, eta1(c, x, k), k), label="eta2")
    return plus2, eta


# ------------------------------------------------------ quotient phenomena

@dataclass
class QuotientReport:
    objects: tuple
    hom_equal: bool
    covers_equal: bool
    localization_bijective: bool
    presheaf_is_sheaf: bool | None
    sheaf_failures: list = field(default_factory=list)

    @property
    def site_iso(self):
        return self.objects[0] == self.objects[1] and self.hom_equal and self.covers_equal


def _cover_table(A, max_size=3):
    cat = build_cinf(A)
    out = {}
    for c in range(len(cat)):
        below = cat.below(c)
        for r in range(min(max_size, len(below)) + 1):
            for fam in itertools.combinations(below, r):
                out[(c, fam)] = is_cover(A, fam, c).is_cover
    return out


def quotient_checks(A: SAlgebra, G, top=None, check_sheaf: bool = True) -> QuotientReport:
    from .cinf_site import site_morphism

    Q = quotient(A, G)
    ca, cq = build_cinf(A), build_cinf(Q)
    top = A.truncation if top is None else top
    rep = site_morphism(Q.quotient_map)
    om = rep.object_map
    hom_equal = rep.bijective and len(ca) == len(cq) and all(
        ca.hom[a][b] == cq.hom[om[a]][om[b]] for a in range(len(ca)) for b in range(len(ca)))
    ta, tq = _cover_table(A), _cover_table(Q)
    covers_equal = hom_equal and all(
        tq.get((om[c], tuple(sorted(om[x] for x in fam)))) == v for (c, fam), v in ta.items())
    loc_ok = True
    OA, OQ = structure_presheaf(A), structure_presheaf(Q)
    for c in range(len(ca)):
        LA, LQ = OA.section(c), OQ.section(om[c])
        eA = LA.idempotent
        for k in range(1, top + 1):
            # (M^-1 A)/G -> (M/G)^-1 (A/G): orbit of y -> class of q(y)
            orbits = {min(A.scalar(A.mul1(eA, g), y, k) for g in Q.group) for y in LA.level(k)}
            images = {}
            for o in orbits:
                images.setdefault(LQ.base_algebra.scalar(LQ.idempotent, Q.canon(o, k), k), []).append(o)
            if len(images) != len(orbits) or set(images) != set(LQ.level(k)):
                loc_ok = False
    is_sheaf, fails = None, []
    if check_sheaf:
        fails = sheaf_check_all(OQ, top)
        is_sheaf = not fails
    return QuotientReport((len(ca), len(cq)), hom_equal, covers_equal, loc_ok, is_sheaf, fails)


# ---------------------------------------------------------- functoriality

@dataclass
class FunctorialityReport:
    rho: PresheafMorphism
    squares_commute: bool
    surjective: dict
    plus_defined: bool
    eta_commutes: bool


def presheaf_morphism_from(phi: SAlgebraMorphism, top=None) -> FunctorialityReport:
    from .cinf_site import site_morphism

    A, B = phi.source, phi.target
    OA, OB = structure_presheaf(A), structure_presheaf(B)
    om = site_morphism(phi).object_map
    top = A.truncation if top is None else top

    def rho(c, y, k):
        return B.scalar(OB.section(om[c]).idempotent, phi(y, k), k)

    R = PresheafMorphism(OA, OB, rho, om, label="rho")
    squares = not R.naturality_failures(top)
    surj = {c: all(R.surjective_at(c, k) for k in range(1, top + 1)) for c in range(len(OA.cat))}
    PA, etaA = plus_construction(OA)
    PB, etaB = plus_construction(OB)
    cb = OB.cat
    plus_ok, eta_ok = True, True
    for c in range(len(OA.cat)):
        src = PA.section(c).objects
        dst = PB.section(om[c]).objects
        for k in range(1, top + 1):
            for x in PA.section(c).level(k):
                img = []
                for e2 in dst:
                    vals = {OB.restrict(om[e], e2, rho(e, v, k), k)
                            for e, v in zip(src, x) if cb.hom[e2][om[e]]}
                    if len(vals) != 1:
                        plus_ok = False
                        break
                    img.append(vals.pop())
                if not plus_ok:
                    break
                if tuple(img) not in set(PB.section(om[c]).level(k)):
                    plus_ok = False
            for y in OA.section(c).level(k):
                lhs = tuple(OB.restrict(om[e], e2, rho(e, OA.restrict(c, e, y, k), k), k)
                            for e2 in dst for e in [next(e for e in src if cb.hom[e2][om[e]])])
                if lhs != etaB(om[c], rho(c, y, k), k):
                    eta_ok = False
    return FunctorialityReport(R, squares, surj, plus_ok, eta_ok)


def H_map(R, S, table, truncation=None) -> SAlgebraMorphism:
    """H(R) -> H(S) induced by a semiring homomorphism given as a list."""
    A, B = H(R), H(S)
    if truncation is not None:
        A.truncation = B.truncation = truncation
    return SAlgebraMorphism(A, B, lambda x, k: tuple(table[a] for a in x), name="H(f)")


# ----------------------------------------------------- norm-ball sections

class NormBallSections(SAlgebra):
    """Sections of the structure presheaf of the norm ball at a declared object,
    membership only: q is a section iff q = x / s for some s in M(c) and x in
    the ball."""

    tier = WITNESS

    def __init__(self, ball, obj: int):
        self.ball = ball
        self.cat = build_cinf(ball)
        self.obj = obj
        self.truncation = ball.truncation
        self.one = ball.one

    def in_mset(self, s) -> bool:
        return self.ball.contains(s, 1) and self.cat.hom[self.obj][self.cat.class_of(s)]

    def fraction(self, q, k):
        """A pair (s, x) with x = s*q in the ball and s in M(c), or None."""
        if not isinstance(q, tuple) or len(q) != k or not all(isinstance(v, (int, Fraction)) for v in q):
            return None
        norm = sum(abs(Fraction(v)) for v in q)
        for s in (Fraction(1), Fraction(-1), 1 / (norm + 1), Fraction(0)):
            s = (Fraction(s),)
            if not self.in_mset(s):
                continue
            x = tuple(s[0] * v for v in q)
            if self.ball.contains(x, k):
                return s, x
        return None

    def contains(self, q, k):
        return self.fraction(q, k) is not None

    def base(self, k):
        return self.ball.base(k)

    def act(self, f, x):
        return self.ball.act(f, x)

    def mul(self, x, k, y, m):
        return self.ball.mul(x, k, y, m)


def norm_ball_sections(ball, obj: int) -> NormBallSections:
    return NormBallSections(ball, obj)
