"""Two-valued points of the spectrum: up-closed, product-closed, continuous sets
of objects, cross-checked against prime ideals where those are available."""
from __future__ import annotations

from dataclasses import dataclass

from .cinf_site import DEFAULT_N_MAX, build_cinf, site_of
from .families import HAlgebra, SMAlgebra
from .structures import prime_ideals_monoid, prime_ideals_semiring

MAX_OBJECTS = 20


@dataclass(frozen=True)
class TwoValuedFunctor:
    """Objects sent to the one-point set; the rest go to the empty set."""
    support: frozenset
    prime: frozenset | None = None
    certified: bool = False

    def value(self, c) -> bool:
        return c in self.support


def is_flat(cat, N) -> bool:
    if not N:
        return False
    for c in N:
        if any(cat.hom[c][d] and d not in N for d in range(len(cat))):
            return False
    return all(cat.product(a, b) in N for a in N for b in N)


def is_continuous(site, N) -> bool:
    for c in N:
        for w in site.partitions(c):
            if not any(p in N for p in w.parts):
                return False
    return True


def _up_sets(cat):
    """All up-closed subsets, deciding objects from the top of the order down."""
    n = len(cat)
    height = {i: sum(cat.hom[i][j] for j in range(n)) for i in range(n)}
    order = sorted(range(n), key=lambda i: (height[i], i))
    out = []

    def extend(pos, chosen):
        if pos == n:
            out.append(frozenset(chosen))
            return
        c = order[pos]
        extend(pos + 1, chosen)
        if all(d in chosen for d in range(n) if d != c and cat.hom[c][d]):
            chosen.add(c)
            extend(pos + 1, chosen)
            chosen.discard(c)

    extend(0, set())
    return out


def _prime_ideals(A):
    """Prime ideals as sets of level-1 elements, when a classical oracle exists."""
    if isinstance(A, HAlgebra):
        return [frozenset(A.embed(r) for r in p) for p in prime_ideals_semiring(A.semiring)]
    if isinstance(A, SMAlgebra):
        return [frozenset(A.embed(u) for u in p) for p in prime_ideals_monoid(A.monoid)]
    return None


def support_of_prime(cat, prime) -> frozenset:
    return frozenset(cat.class_of(f) for f in cat.algebra.level(1) if f not in prime)


def prime_of_support(cat, support) -> frozenset:
    return frozenset(f for f in cat.algebra.level(1) if cat.class_of(f) not in support)


def enumerate_points(A, n_max: int = DEFAULT_N_MAX) -> list[TwoValuedFunctor]:
    cat = build_cinf(A)
    if len(cat) > MAX_OBJECTS:
        raise ValueError(f"{len(cat)} objects exceed the cap of {MAX_OBJECTS}")
    site = site_of(A, n_max)
    found = [N for N in _up_sets(cat) if is_flat(cat, N) and is_continuous(site, N)]
    found.sort(key=lambda N: (len(N), sorted(N)))
    primes = _prime_ideals(A)
    if primes is None:
        return [TwoValuedFunctor(N) for N in found]
    by_support = {support_of_prime(cat, p): p for p in primes}
    if set(by_support) != set(found) or len(by_support) != len(primes):
        raise AssertionError(f"points {sorted(map(sorted, found))} disagree with "
                             f"prime supports {sorted(map(sorted, by_support))}")
    return [TwoValuedFunctor(N, by_support[N], True) for N in found]


def _check_prime(A, prime):
    primes = _prime_ideals(A)
    if primes is not None:
        if prime not in primes:
            raise ValueError("not a prime ideal")
        return
    lvl = A.level(1)
    if A.one in prime or A.base(1) not in prime:
        raise ValueError("not a proper ideal")
    for f in prime:
        if any(A.mul1(f, u) not in prime for u in lvl):
            raise ValueError("not an ideal")
    outside = [f for f in lvl if f not in prime]
    if any(A.mul1(a, b) in prime for a in outside for b in outside):
        raise ValueError("complement is not multiplicative")


def point_from_prime(A, prime) -> TwoValuedFunctor:
    prime = frozenset(prime)
    _check_prime(A, prime)
    cat = build_cinf(A)
    return TwoValuedFunctor(support_of_prime(cat, prime), prime, True)


def prime_from_point(A, point: TwoValuedFunctor) -> frozenset:
    return prime_of_support(build_cinf(A), point.support)
