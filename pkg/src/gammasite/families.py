"""Concrete S-algebras: H of a semiring, S of a pointed monoid, quotients by unit
subgroups, finite products, and the rational norm ball."""
from __future__ import annotations

import itertools
from fractions import Fraction

from .gamma_core import (
    DEFAULT_TRUNCATION, WITNESS, GammaSet, PointedMap, SAlgebra, SAlgebraMorphism,
    require_enumerable, smash_index,
)
from .structures import FiniteSemiring, two_element_monoid


class HGammaSet(GammaSet):
    """H of a commutative monoid written additively: level k is A^k."""

    def __init__(self, add, zero, names=None, label="A", truncation=DEFAULT_TRUNCATION):
        self.add = add
        self.zero = zero
        self.names = tuple(names) if names else tuple(str(i) for i in range(len(add)))
        self.label = label
        self.truncation = truncation

    def _level(self, k):
        return itertools.product(range(len(self.add)), repeat=k)

    def base(self, k):
        return (self.zero,) * k

    def act(self, f, x):
        out = [self.zero] * f.target
        add, table = self.add, f.table
        for i, a in enumerate(x, 1):
            t = table[i]
            if t:
                out[t - 1] = add[out[t - 1]][a]
        return tuple(out)

    def contains(self, x, k):
        return isinstance(x, tuple) and len(x) == k and all(isinstance(a, int) and 0 <= a < len(self.add) for a in x)

    def format(self, x):
        return "(" + ",".join(self.names[a] for a in x) + ")"

    def __repr__(self):
        return f"H({self.label})"


class HAlgebra(HGammaSet, SAlgebra):
    def __init__(self, R: FiniteSemiring, truncation=DEFAULT_TRUNCATION):
        super().__init__(R.add, R.zero, R.names, R.label, truncation)
        self.semiring = R
        self.one = (R.one,)

    def mul(self, x, k, y, m):
        mul = self.semiring.mul
        return tuple(mul[a][b] for a in x for b in y)

    def scalar(self, u, x, k):
        row = self.semiring.mul[u[0]]
        return tuple(row[b] for b in x)

    def embed(self, r: int):
        return (r,)

    def to_structure(self, x) -> int:
        return x[0]


def H(R: FiniteSemiring, truncation=DEFAULT_TRUNCATION) -> HAlgebra:
    return HAlgebra(R, truncation)


def H_module(R: FiniteSemiring, truncation=DEFAULT_TRUNCATION) -> HGammaSet:
    """The Gamma-set of the additive monoid of R, without product."""
    return HGammaSet(R.add, R.zero, R.names, f"{R.label},+", truncation)


class SMAlgebra(SAlgebra):
    """S of a pointed monoid: level k is {*} together with pairs (u, i), u != 0."""

    def __init__(self, M, truncation=DEFAULT_TRUNCATION):
        self.monoid = M
        self.truncation = truncation
        self._base = (M.zero, 0)
        self.one = (M.one, 1) if M.one != M.zero else self._base
        self.label = getattr(M, "label", "") or ",".join(M.names)

    def _level(self, k):
        nonzero = [u for u in self.monoid.elements if u != self.monoid.zero]
        return [self._base] + [(u, i) for i in range(1, k + 1) for u in nonzero]

    def base(self, k):
        return self._base

    def act(self, f, x):
        u, i = x
        if i == 0:
            return self._base
        j = f.table[i]
        return (u, j) if j else self._base

    def mul(self, x, k, y, m):
        (u, i), (v, j) = x, y
        if i == 0 or j == 0:
            return self._base
        p = self.monoid.product(u, v)
        if p is None:
            return None
        if p == self.monoid.zero:
            return self._base
        return (p, smash_index(i, j, k, m))

    def contains(self, x, k):
        if x == self._base:
            return True
        u, i = x
        return 1 <= i <= k and u in self.monoid.elements and u != self.monoid.zero

    def embed(self, u: int):
        return self._base if u == self.monoid.zero else (u, 1)

    def to_structure(self, x) -> int:
        return x[0]

    def format(self, x):
        if x[1] == 0:
            return "*"
        return f"({self.monoid.name(x[0])},{x[1]})"

    def __repr__(self):
        return f"S[{self.label}]"


def SM(M, truncation=DEFAULT_TRUNCATION) -> SMAlgebra:
    return SMAlgebra(M, truncation)


def sphere(truncation=DEFAULT_TRUNCATION) -> SMAlgebra:
    return SMAlgebra(two_element_monoid(), truncation)


def check_unit_subgroup(A: SAlgebra, G) -> list:
    require_enumerable(A)
    G = list(dict.fromkeys(G))
    lvl = A.level_index(1)
    for g in G:
        if g not in lvl:
            raise ValueError(f"{g!r} is not an element of level 1")
    gs = set(G)
    if A.one not in gs:
        raise ValueError("unit subgroup must contain 1")
    for g in G:
        for h in G:
            if A.mul1(g, h) not in gs:
                raise ValueError(f"unit subgroup not closed: {A.format(g)} * {A.format(h)}")
        if not any(A.mul1(g, h) == A.one for h in G):
            raise ValueError(f"{A.format(g)} has no inverse in the subgroup")
    return sorted(G)


def unit_group(A: SAlgebra) -> list:
    require_enumerable(A)
    lv = A.level(1)
    return [u for u in lv if any(A.mul1(u, v) == A.one for v in lv)]


class QuotientAlgebra(SAlgebra):
    """Orbits of a unit subgroup G acting by scalar multiplication.

    Orbits are represented by their smallest member.
    """

    def __init__(self, A: SAlgebra, G):
        self.base_algebra = A
        self.group = check_unit_subgroup(A, G)
        self.truncation = A.truncation
        self.max_level = A.max_level
        self._canon = {}
        self.one = self.canon(A.one, 1)
        self.quotient_map = SAlgebraMorphism(A, self, self.canon, name="q")

    def canon(self, x, k):
        key = (x, k)
        r = self._canon.get(key)
        if r is None:
            A = self.base_algebra
            r = min(A.scalar(g, x, k) for g in self.group)
            self._canon[key] = r
        return r

    def _level(self, k):
        return dict.fromkeys(self.canon(x, k) for x in self.base_algebra.level(k))

    def base(self, k):
        return self.base_algebra.base(k)

    def act(self, f, x):
        return self.canon(self.base_algebra.act(f, x), f.target)

    def mul(self, x, k, y, m):
        z = self.base_algebra.mul(x, k, y, m)
        return None if z is None else self.canon(z, k * m)

    def contains(self, x, k):
        return self.base_algebra.contains(x, k) and self.canon(x, k) == x

    def orbit(self, x, k):
        A = self.base_algebra
        return sorted({A.scalar(g, x, k) for g in self.group})

    def format(self, x):
        return "[" + self.base_algebra.format(x) + "]"

    def __repr__(self):
        return f"{self.base_algebra!r}/G{len(self.group)}"


def quotient(A: SAlgebra, G) -> QuotientAlgebra:
    return QuotientAlgebra(A, G)


class ProductAlgebra(SAlgebra):
    def __init__(self, factors):
        self.factors = tuple(factors)
        require_enumerable(*self.factors)
        truncs = {A.truncation for A in self.factors}
        if len(truncs) > 1:
            raise ValueError("factors have different truncations")
        self.truncation = truncs.pop() if truncs else DEFAULT_TRUNCATION
        levels = [A.max_level for A in self.factors if A.max_level is not None]
        self.max_level = min(levels) if levels else None
        self.one = tuple(A.one for A in self.factors)

    def _level(self, k):
        return itertools.product(*(A.level(k) for A in self.factors))

    def base(self, k):
        return tuple(A.base(k) for A in self.factors)

    def act(self, f, x):
        return tuple(A.act(f, a) for A, a in zip(self.factors, x))

    def mul(self, x, k, y, m):
        out = tuple(A.mul(a, k, b, m) for A, a, b in zip(self.factors, x, y))
        return None if any(c is None for c in out) else out

    def contains(self, x, k):
        return len(x) == len(self.factors) and all(A.contains(a, k) for A, a in zip(self.factors, x))

    def format(self, x):
        return "<" + ", ".join(A.format(a) for A, a in zip(self.factors, x)) + ">"

    def __repr__(self):
        return "x".join(repr(A) for A in self.factors) or "Point"


def product(As) -> ProductAlgebra:
    return ProductAlgebra(As)


class NormBallAlgebra(SAlgebra):
    """Rational tuples with sum of absolute values at most 1.

    Witness tier: membership, product, action and the registered partition
    (1/2, 1/2) are available, enumeration is not.
    """

    tier = WITNESS

    def __init__(self, truncation=DEFAULT_TRUNCATION):
        self.truncation = truncation
        self.one = (Fraction(1),)
        self.declared_objects = [(Fraction(0),), (Fraction(1, 2),), (Fraction(1),)]
        self.partition_witnesses = [((Fraction(1, 2), Fraction(1, 2)), 2)]

    def base(self, k):
        return (Fraction(0),) * k

    def contains(self, x, k):
        if not isinstance(x, tuple) or len(x) != k:
            return False
        if not all(isinstance(q, (int, Fraction)) for q in x):
            return False
        return sum(abs(Fraction(q)) for q in x) <= 1

    def act(self, f, x):
        out = [Fraction(0)] * f.target
        for i, q in enumerate(x, 1):
            t = f.table[i]
            if t:
                out[t - 1] += q
        return tuple(out)

    def mul(self, x, k, y, m):
        return tuple(a * b for a in x for b in y)

    def divides(self, r, s) -> bool:
        """r lies in s times level 1."""
        return abs(r[0]) <= abs(s[0])

    def divides_power(self, b, a) -> bool:
        """Some positive power of b lies in a times level 1."""
        b, a = abs(b[0]), abs(a[0])
        if b <= a or b == 0:
            return True
        if a == 0:
            return False
        return b < 1

    def format(self, x):
        return "(" + ",".join(str(q) for q in x) + ")"

    def __repr__(self):
        return "|HQ|_1"


def norm_ball_HQ1(truncation=DEFAULT_TRUNCATION) -> NormBallAlgebra:
    return NormBallAlgebra(truncation)


def pair_index(K: FiniteSemiring, a: int, b: int) -> int:
    """Index of (a, b) in ``product_semiring(K, K)``."""
    return a * K.size + b


def diagonal_units(K: FiniteSemiring) -> list:
    """Level-1 elements (g, g) of H(K x K) for g a unit of K."""
    return [(pair_index(K, g, g),) for g in K.units()]
