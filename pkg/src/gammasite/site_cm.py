"""The divisibility category of a pointed monoid, sieves as ideals, and power
divisibility."""
from __future__ import annotations

from dataclasses import dataclass


class MonoidView:
    """Level 1 of an S-algebra seen as a pointed monoid.

    Witness-tier algebras keep their own divisibility oracles; enumerable ones
    get ideals computed from the multiplication.
    """

    def __init__(self, A):
        self.algebra = A
        self.zero = A.base(1)
        self.one = A.one
        self.enumerable = A.tier == "enumerable"
        self._ideals = {}

    @property
    def elements(self):
        return self.algebra.level(1)

    def product(self, a, b):
        return self.algebra.mul1(a, b)

    def principal_ideal(self, a) -> frozenset:
        r = self._ideals.get(a)
        if r is None:
            r = frozenset(self.product(a, u) for u in self.elements)
            self._ideals[a] = r
        return r

    def divides(self, a, x) -> bool:
        """x lies in a times the monoid."""
        if not self.enumerable:
            return self.algebra.divides(x, a)
        return x in self.principal_ideal(a)

    def divides_power(self, b, a) -> bool:
        if not self.enumerable:
            return self.algebra.divides_power(b, a)
        return divides_power(b, a, self)


def power_sequence(b, product):
    """Distinct positive powers b, b^2, ... up to the first repetition.

    Floyd's tortoise and hare locates the cycle, so no bound on the monoid
    exponent is needed.
    """
    step = lambda x: product(x, b)
    tortoise, hare = step(b), step(step(b))
    while tortoise != hare:
        tortoise, hare = step(tortoise), step(step(hare))
    mu, tortoise = 0, b
    while tortoise != hare:
        tortoise, hare = step(tortoise), step(hare)
        mu += 1
    lam, hare = 1, step(tortoise)
    while tortoise != hare:
        hare = step(hare)
        lam += 1
    out = [b]
    for _ in range(mu + lam - 1):
        out.append(product(out[-1], b))
    return out


def divides_power(b, a, M) -> bool:
    """Some positive power of b lies in a*M."""
    if hasattr(M, "algebra") and not M.enumerable:
        return M.divides_power(b, a)
    ideal = M.principal_ideal(a) if hasattr(M, "principal_ideal") else {M.product(a, u) for u in M.elements}
    return any(p in ideal for p in power_sequence(b, M.product))


def hom_exists_F(b, c, M) -> bool:
    """Whether some power of c is divisible by b."""
    return divides_power(c, b, M)


@dataclass(frozen=True)
class Morphism:
    """u: r(source) -> r(target) with source = u * target."""
    source: int
    target: int
    label: int


class CMCat:
    def __init__(self, M):
        self.monoid = M

    def hom(self, f, g) -> list[Morphism]:
        M = self.monoid
        return [Morphism(f, g, u) for u in M.elements if M.product(u, g) == f]

    def compose(self, second: Morphism, first: Morphism) -> Morphism:
        if first.target != second.source:
            raise ValueError("morphisms are not composable")
        return Morphism(first.source, second.target, self.monoid.product(first.label, second.label))

    def identity(self, f) -> Morphism:
        return Morphism(f, f, self.monoid.one)


def is_ideal(M, I) -> bool:
    I = set(I)
    return all(M.product(a, r) in I for a in I for r in M.elements)


def sieve_from_ideal(M, I, f) -> frozenset[Morphism]:
    """The sieve on r(f) made of the morphisms u: r(uf) -> r(f) with u in I."""
    if not is_ideal(M, I):
        raise ValueError("not an ideal")
    return frozenset(Morphism(M.product(u, f), f, u) for u in I)


def ideal_from_sieve(M, sieve) -> frozenset:
    return frozenset(m.label for m in sieve)


def is_sieve(M, sieve, f) -> bool:
    """Closed under precomposition with any morphism into a member's domain."""
    S = set(sieve)
    for m in S:
        if m.target != f:
            return False
        for v in M.elements:
            if Morphism(M.product(v, m.source), f, M.product(v, m.label)) not in S:
                return False
    return True
