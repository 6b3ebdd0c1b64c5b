"""Convex piecewise-linear functions on (0, 1) with integer slopes and rational
corners, under pointwise max and sum, and the combinatorics of their
cofinite open sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .gamma_core import DEFAULT_TRUNCATION, WITNESS, SAlgebra

LOW, HIGH = Fraction(0), Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ConvexPLFunction:
    """x -> left_slope*x + intercept + sum m*(x - p)^+ over breakpoints (p, m).

    ``bottom`` is the constant minus infinity, the zero of the semiring.
    """

    breakpoints: tuple = ()
    left_slope: int = 0
    intercept: Fraction = Fraction(0)
    bottom: bool = False

    def __post_init__(self):
        if self.bottom:
            return
        pts = [p for p, _ in self.breakpoints]
        if any(not LOW < p < HIGH for p in pts):
            raise ValueError("breakpoints must lie in the open unit interval")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not isinstance(m, int) or m < 1 for _, m in self.breakpoints):
            raise ValueError("multiplicities must be positive integers")

    @classmethod
    def make(cls, breakpoints=(), left_slope=0, intercept=0):
        merged = {}
        for p, m in breakpoints:
            p = _frac(p)
            merged[p] = merged.get(p, 0) + m
        bps = tuple((p, m) for p, m in sorted(merged.items()) if m)
        return cls(bps, int(left_slope), _frac(intercept))

    @classmethod
    def affine(cls, slope, intercept):
        return cls((), int(slope), _frac(intercept))

    def __call__(self, x):
        if self.bottom:
            return None
        x = _frac(x)
        v = self.left_slope * x + self.intercept
        for p, m in self.breakpoints:
            if x > p:
                v += m * (x - p)
        return v

    def slope_at(self, x) -> int:
        """Slope just to the right of x."""
        return self.left_slope + sum(m for p, m in self.breakpoints if p <= x)

    @property
    def zero_set(self) -> frozenset:
        return frozenset(p for p, _ in self.breakpoints)

    @property
    def multiplicity(self) -> dict:
        return dict(self.breakpoints)

    def is_unit(self) -> bool:
        return not self.bottom and not self.breakpoints

    def __repr__(self):
        if self.bottom:
            return "PL(-inf)"
        bps = ",".join(f"{p}^{m}" for p, m in self.breakpoints)
        return f"PL(s={self.left_slope},c={self.intercept},[{bps}])"


BOTTOM = ConvexPLFunction(bottom=True)
ZERO_FUNCTION = ConvexPLFunction()


def trop_mul(f: ConvexPLFunction, g: ConvexPLFunction) -> ConvexPLFunction:
    if f.bottom or g.bottom:
        return BOTTOM
    return ConvexPLFunction.make(f.breakpoints + g.breakpoints, f.left_slope + g.left_slope,
                                 f.intercept + g.intercept)


def _crossing(f, g, lo, hi):
    """Where the affine pieces of f and g on (lo, hi) meet strictly inside it."""
    mid = (lo + hi) / 2
    sf, sg = f.slope_at(mid), g.slope_at(mid)
    if sf == sg:
        return None
    x = mid - (f(mid) - g(mid)) / (sf - sg)
    return x if lo < x < hi else None


def trop_add(f: ConvexPLFunction, g: ConvexPLFunction) -> ConvexPLFunction:
    """Exact upper envelope."""
    if f.bottom:
        return g
    if g.bottom:
        return f
    cuts = sorted(f.zero_set | g.zero_set)
    bounds = [LOW] + cuts + [HIGH]
    points = set(cuts)
    for lo, hi in zip(bounds, bounds[1:]):
        x = _crossing(f, g, lo, hi)
        if x is not None:
            points.add(x)
    points = sorted(points)
    bounds = [LOW] + points + [HIGH]
    slopes = []
    for lo, hi in zip(bounds, bounds[1:]):
        mid = (lo + hi) / 2
        top = f if f(mid) >= g(mid) else g
        slopes.append(top.slope_at(mid))
    mid = (bounds[0] + bounds[1]) / 2
    first = f if f(mid) >= g(mid) else g
    intercept = first(mid) - slopes[0] * mid
    bps = [(p, b - a) for p, a, b in zip(points, slopes, slopes[1:]) if b != a]
    if any(m < 0 for _, m in bps):
        raise AssertionError("upper envelope lost convexity")
    return ConvexPLFunction.make(bps, slopes[0], intercept)


def phi(a, b) -> ConvexPLFunction:
    """Zero on [a, b], slope -1 to the left and 1 to the right."""
    a, b = _frac(a), _frac(b)
    if a > b:
        raise ValueError("phi needs a <= b")
    return ConvexPLFunction.make([(a, 1), (b, 1)], -1, a)


def abs_at(p) -> ConvexPLFunction:
    """x -> |x - p|."""
    p = _frac(p)
    return ConvexPLFunction.make([(p, 2)], -1, p)


def distance_sum(points) -> ConvexPLFunction:
    out = ZERO_FUNCTION
    for p in sorted(points):
        out = trop_mul(out, abs_at(p))
    return out


def trop_divides(g: ConvexPLFunction, f: ConvexPLFunction, power: bool = False) -> bool:
    """Whether f = g*h for some h (or some power of f, with ``power``)."""
    if f.bottom:
        return True
    if g.bottom:
        raise ValueError("the bottom element divides nothing but itself")
    if power:
        return g.zero_set <= f.zero_set
    nf = f.multiplicity
    return all(nf.get(p, 0) >= m for p, m in g.breakpoints)


# -------------------------------------------------------------- open sets

@dataclass(frozen=True)
class CofiniteOpen:
    removed: frozenset = frozenset()
    is_empty: bool = False

    def __post_init__(self):
        if not self.is_empty and any(not LOW < p < HIGH for p in self.removed):
            raise ValueError("removed points must lie in the open unit interval")

    @classmethod
    def minus(cls, *points):
        return cls(frozenset(_frac(p) for p in points))

    def contains_point(self, x) -> bool:
        return not self.is_empty and LOW < x < HIGH and x not in self.removed

    def subset_of(self, other: "CofiniteOpen") -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.removed <= self.removed

    def components(self) -> list[tuple]:
        if self.is_empty:
            return []
        b = [LOW] + sorted(self.removed) + [HIGH]
        return list(zip(b, b[1:]))

    def __repr__(self):
        if self.is_empty:
            return "Open(empty)"
        return "I\\{" + ",".join(str(p) for p in sorted(self.removed)) + "}"


EMPTY_OPEN = CofiniteOpen(frozenset(), True)
WHOLE = CofiniteOpen()


def open_of(f: ConvexPLFunction) -> CofiniteOpen:
    return EMPTY_OPEN if f.bottom else CofiniteOpen(f.zero_set)


def _avoids(member: CofiniteOpen, lo, hi) -> bool:
    return not member.is_empty and not any(lo < p < hi for p in member.removed)


def trop_cover_check(family, target: CofiniteOpen) -> bool:
    """Every component of the target lies inside a single member."""
    for m in family:
        if not m.subset_of(target):
            raise ValueError(f"{m!r} is not contained in {target!r}")
    return all(any(_avoids(m, lo, hi) for m in family) for lo, hi in target.components())


def _affine_piece(f: ConvexPLFunction, x) -> ConvexPLFunction:
    s = f.slope_at(x)
    return ConvexPLFunction.affine(s, f(x) - s * x)


def _minus_affine(f: ConvexPLFunction, a: ConvexPLFunction) -> ConvexPLFunction:
    return ConvexPLFunction(f.breakpoints, f.left_slope - a.left_slope, f.intercept - a.intercept)


@dataclass(frozen=True)
class TropicalPartition:
    parts: tuple
    members: tuple
    scale: int
    total: ConvexPLFunction


def validate_tropical_partition(w: TropicalPartition, family, target: CofiniteOpen) -> bool:
    """Sup of the parts has the target's corner set, and each part maps into
    its assigned member and into the target."""
    total = BOTTOM
    for g in w.parts:
        total = trop_add(total, g)
    if total != w.total or open_of(total) != target:
        return False
    for g, j in zip(w.parts, w.members):
        if not open_of(g).subset_of(family[j]) or not open_of(g).subset_of(target):
            return False
    return True


def cover_witness(family, target: CofiniteOpen, n_max: int = 16, assignments=None):
    """Search for a one-step partition of the target function with parts in the
    sieve of the family, built as n*h = sup_C (h_{j(C),C} + n*L_C)."""
    family = list(family)
    h = distance_sum(target.removed)
    comps = target.components()
    member_fns = [None if m.is_empty else distance_sum(m.removed) for m in family]
    if assignments is None:
        assignments = itertools.product(range(len(family)), repeat=len(comps))
    for choice in assignments:
        if any(member_fns[j] is None for j in choice):
            continue
        bases = []
        for (lo, hi), j in zip(comps, choice):
            mid = (lo + hi) / 2
            hj = member_fns[j]
            bases.append((_minus_affine(hj, _affine_piece(hj, mid)), _affine_piece(h, mid)))
        for n in range(1, n_max + 1):
            scaled = ConvexPLFunction.affine
            parts = tuple(trop_mul(b, scaled(n * L.left_slope, n * L.intercept)) for b, L in bases)
            total = BOTTOM
            for g in parts:
                total = trop_add(total, g)
            w = TropicalPartition(parts, tuple(choice), n, total)
            if validate_tropical_partition(w, family, target):
                return w
    return None


# ------------------------------------------------------------ the algebra

class HConv(SAlgebra):
    """H of the tropical function semiring; witness tier."""

    tier = WITNESS

    def __init__(self, truncation=DEFAULT_TRUNCATION):
        self.truncation = truncation
        self.one = (ZERO_FUNCTION,)

    def base(self, k):
        return (BOTTOM,) * k

    def contains(self, x, k):
        return isinstance(x, tuple) and len(x) == k and all(isinstance(f, ConvexPLFunction) for f in x)

    def act(self, f, x):
        out = [BOTTOM] * f.target
        for i, a in enumerate(x, 1):
            t = f.table[i]
            if t:
                out[t - 1] = trop_add(out[t - 1], a)
        return tuple(out)

    def mul(self, x, k, y, m):
        return tuple(trop_mul(a, b) for a in x for b in y)

    def divides(self, r, s) -> bool:
        return trop_divides(s[0], r[0])

    def divides_power(self, b, a) -> bool:
        return trop_divides(a[0], b[0], power=True)

    def format(self, x):
        return "(" + ",".join(repr(f) for f in x) + ")"

    def __repr__(self):
        return "H(Conv)"


# ----------------------------------------------------- point obstructions

@dataclass(frozen=True)
class RationalSet:
    """A finite union of points and closed intervals in (0, 1)."""
    points: frozenset = frozenset()
    intervals: tuple = ()

    def __contains__(self, x):
        return x in self.points or any(lo <= x <= hi for lo, hi in self.intervals)

    def inside(self, U: CofiniteOpen) -> bool:
        if U.is_empty:
            return False
        if any(not U.contains_point(p) for p in self.points):
            return False
        return not any(lo <= p <= hi for lo, hi in self.intervals for p in U.removed)

    @property
    def landmarks(self) -> set:
        out = set(self.points)
        for lo, hi in self.intervals:
            out |= {lo, hi}
        return {p for p in out if LOW < p < HIGH}


@dataclass(frozen=True)
class ContinuityVerdict:
    continuous: bool
    witness: tuple | None
    covers_checked: int

    @property
    def label(self) -> str:
        return "CONTINUOUS" if self.continuous else "FAILS"


def convexity_obstruction(x, y, z, E: RationalSet, max_family: int = 2) -> ContinuityVerdict:
    """Continuity of the two-valued functor U -> [E inside U] on the covers of
    the finite fragment spanned by x, y, z and the landmarks of E."""
    x, y, z = _frac(x), _frac(y), _frac(z)
    if not LOW < x < y < z < HIGH:
        raise ValueError("need 0 < x < y < z < 1")
    checked = 0
    target = CofiniteOpen.minus(y)
    special = [CofiniteOpen.minus(x, y), CofiniteOpen.minus(y, z)]
    if trop_cover_check(special, target):
        checked += 1
        if E.inside(target) and not any(E.inside(m) for m in special):
            return ContinuityVerdict(False, (target, tuple(special)), checked)
    universe = sorted({x, y, z} | E.landmarks)
    opens = [CofiniteOpen(frozenset(s)) for r in range(len(universe) + 1)
             for s in itertools.combinations(universe, r)]
    for U in opens:
        if not E.inside(U):
            continue
        subs = [V for V in opens if V.subset_of(U)]
        for r in range(1, max_family + 1):
            for fam in itertools.combinations(subs, r):
                if not trop_cover_check(list(fam), U):
                    continue
                checked += 1
                if not any(E.inside(V) for V in fam):
                    return ContinuityVerdict(False, (U, fam), checked)
    return ContinuityVerdict(True, None, checked)
