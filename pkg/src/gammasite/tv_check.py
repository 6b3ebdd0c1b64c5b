"""The pushout square H(K^2) -> H(K^2)/K^x and H(K^2) -> H(K) over a finite
field K, its apex H(K)/K^x, and the failure of faithfulness of base change."""
from __future__ import annotations

from dataclasses import dataclass, field

from .families import H, SM, diagonal_units, pair_index, quotient
from .gamma_core import SAlgebraMorphism, enumerate_algebra_morphisms, validate_morphism, validate_salgebra
from .structures import (
    FiniteSemiring, all_monoids, boolean, chain, gf4, prime_field, product_semiring, zmod,
)


@dataclass
class PushoutDiagram:
    field: FiniteSemiring
    j: int
    A: object
    A_prime: object
    B: object
    apex: object
    rho: SAlgebraMorphism
    proj: SAlgebraMorphism
    pi: SAlgebraMorphism
    rho_j: SAlgebraMorphism


def _is_field(K: FiniteSemiring) -> bool:
    return len(K.units()) == K.size - 1 and all(K.add[K.one][x] != K.one or x == K.zero for x in K.elements)


def build_counterexample(K: FiniteSemiring, j: int = 1, validate: bool = True,
                         validate_top: int | None = None) -> PushoutDiagram:
    """The square for the j-th projection.

    Axiom validation runs up to ``validate_top``; by default the full
    truncation over F3 and level 2 over larger fields, where level-3
    associativity alone costs tens of millions of products.
    """
    if K.size < 3:
        raise ValueError("the field must have at least 3 elements; over F2 the unit group is trivial")
    if not _is_field(K) or K.has_zero_divisors():
        raise ValueError(f"{K.label} is not a field")
    if j not in (1, 2):
        raise ValueError("j is 1 or 2")
    KK = product_semiring(K, K)
    A = H(KK)
    A_prime = quotient(A, diagonal_units(K))
    B = H(K)
    apex = quotient(B, [(u,) for u in K.units()])
    n = K.size
    coord = (lambda p: p // n) if j == 1 else (lambda p: p % n)
    proj = SAlgebraMorphism(A, B, lambda x, k: tuple(coord(p) for p in x), name=f"Hp{j}")
    pi = SAlgebraMorphism(A_prime, apex, lambda x, k: apex.canon(proj(x, k), k), name=f"pi{j}")
    D = PushoutDiagram(K, j, A, A_prime, B, apex, A_prime.quotient_map, proj, pi, apex.quotient_map)
    if validate:
        if validate_top is None:
            validate_top = A.truncation if K.size <= 3 else 2
        for X in (A, A_prime, B, apex):
            bad = validate_salgebra(X, validate_top)
            if bad:
                raise AssertionError(f"{X!r} fails {bad[0].axiom}")
        for f in (D.rho, D.proj, D.pi, D.rho_j):
            bad = validate_morphism(f, validate_top)
            if bad:
                raise AssertionError(f"{f.name} fails {bad[0].axiom}")
        if not square_commutes(D):
            raise AssertionError("pushout square does not commute")
    return D


def square_commutes(D: PushoutDiagram, top: int | None = None) -> bool:
    top = D.A.truncation if top is None else top
    return all(D.pi(D.rho(x, k), k) == D.rho_j(D.proj(x, k), k)
               for k in range(1, top + 1) for x in D.A.level(k))


def _agree(f, g, X, top) -> bool:
    return all(f(x, k) == g(x, k) for k in range(1, top + 1) for x in X.level(k))


@dataclass
class CatalogEntry:
    label: str
    commuting_pairs: int
    factorizations: list

    @property
    def unique(self) -> bool:
        return all(n == 1 for n in self.factorizations)


@dataclass
class PushoutReport:
    entries: list = field(default_factory=list)
    status: str = "catalog-verified"

    @property
    def ok(self) -> bool:
        return bool(self.entries) and all(e.unique for e in self.entries)


def verify_pushout(D: PushoutDiagram, catalog, top: int | None = None) -> PushoutReport:
    """For every test algebra X and every commuting pair (alpha, beta) out of the
    square, count the maps gamma from the apex factoring both."""
    top = D.A.truncation if top is None else top
    report = PushoutReport()
    for label, X in catalog:
        alphas = enumerate_algebra_morphisms(D.A_prime, X, top)
        betas = enumerate_algebra_morphisms(D.B, X, top)
        gammas = enumerate_algebra_morphisms(D.apex, X, top)
        counts = []
        for a in alphas:
            a_rho = D.rho.then(a)
            for b in betas:
                if not _agree(a_rho, D.proj.then(b), D.A, top):
                    continue
                counts.append(sum(1 for g in gammas
                                  if _agree(D.pi.then(g), a, D.A_prime, top)
                                  and _agree(D.rho_j.then(g), b, D.B, top)))
        report.entries.append(CatalogEntry(label, len(counts), counts))
    return report


def default_catalog(D: PushoutDiagram | None = None, max_semiring: int = 9, max_monoid: int = 4) -> list:
    semirings = [zmod(n) for n in range(2, max_semiring + 1)]
    semirings += [boolean(), chain(3), gf4(), prime_field(5), prime_field(7),
                  product_semiring(prime_field(2), prime_field(2)), product_semiring(prime_field(3), prime_field(3))]
    semirings = [R for R in semirings if R.size <= max_semiring]
    out = [(f"H({R.label})", H(R)) for R in semirings]
    out += [(f"S[{M.label or ','.join(M.names)}]", SM(M)) for M in all_monoids(max_monoid)]
    for K in (prime_field(3), gf4(), prime_field(5)):
        out.append((f"H({K.label})/{K.label}^x", quotient(H(K), [(u,) for u in K.units()])))
    if D is not None:
        out.append(("apex", D.apex))
    return out


@dataclass
class NotFaithfulReport:
    u: int
    moves_level1: list
    differs_from_identity: bool
    order: int
    power_is_identity: bool
    base_change_identity: dict


def verify_not_faithful(D: PushoutDiagram, u: int, top: int | None = None) -> NotFaithfulReport:
    """Multiplication by rho((1, u)) on A' is not the identity, yet it becomes
    the identity after base change along either projection."""
    K = D.field
    if u == K.one:
        raise ValueError("u must differ from 1")
    if u not in K.units():
        raise ValueError("u must be a unit")
    top = D.A.truncation if top is None else top
    Ap = D.A_prime
    v = Ap.canon((pair_index(K, K.one, u),), 1)
    V = lambda x, k: Ap.scalar(v, x, k)
    moved = [(x, V(x, 1)) for x in Ap.level(1) if V(x, 1) != x]
    order, p = 1, u
    while p != K.one:
        p, order = K.mul[p][u], order + 1

    def power(x, k):
        for _ in range(order):
            x = V(x, k)
        return x

    power_id = all(power(x, k) == x for k in range(1, top + 1) for x in Ap.level(k))
    induced = {}
    for j in (1, 2):
        Dj = D if D.j == j else build_counterexample(K, j, validate=False)
        ok = True
        for k in range(1, top + 1):
            image = {}
            for x in Ap.level(k):
                y = Dj.pi(x, k)
                image.setdefault(y, set()).add(Dj.pi(V(x, k), k))
            ok &= all(len(s) == 1 and s == {y} for y, s in image.items())
        induced[j] = ok
    return NotFaithfulReport(u, moved, bool(moved), order, power_id, induced)
