"""Finite pointed monoids and commutative semirings given by operation tables.

Elements are dense integer indices ``0..n-1`` with display names attached.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache


class StructureError(ValueError):
    """An operation table violates an axiom.  ``axiom`` and ``cell`` locate it."""

    def __init__(self, axiom: str, cell: tuple, message: str = ""):
        self.axiom = axiom
        self.cell = cell
        super().__init__(message or f"{axiom} fails at {cell}")


def _check_table(table, n, label):
    if len(table) != n or any(len(row) != n for row in table):
        raise StructureError("shape", (label,), f"{label} table must be {n}x{n}")
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            if not (isinstance(v, int) and 0 <= v < n):
                raise StructureError("closure", (label, i, j), f"{label}[{i}][{j}] = {v!r} is not an element")


def _check_commutative_monoid(table, unit, n, label):
    for a in range(n):
        if table[unit][a] != a:
            raise StructureError(f"{label} identity", (unit, a))
    for a in range(n):
        for b in range(a + 1, n):
            if table[a][b] != table[b][a]:
                raise StructureError(f"{label} commutativity", (a, b))
    for a in range(n):
        row = table[a]
        for b in range(n):
            ab = row[b]
            for c in range(n):
                if table[ab][c] != row[table[b][c]]:
                    raise StructureError(f"{label} associativity", (a, b, c))


def _freeze(table):
    return tuple(tuple(int(v) for v in row) for row in table)


@dataclass(frozen=True)
class FiniteMonoid:
    """Commutative monoid with unit ``one`` and absorbing ``zero``."""

    names: tuple[str, ...]
    zero: int
    one: int
    table: tuple[tuple[int, ...], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "table", _freeze(self.table))
        n = len(self.names)
        if len(set(self.names)) != n:
            raise StructureError("names", (), "element names must be unique")
        _check_table(self.table, n, "mul")
        _check_commutative_monoid(self.table, self.one, n, "mul")
        for a in range(n):
            if self.table[self.zero][a] != self.zero:
                raise StructureError("mul absorbing zero", (self.zero, a))

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def product(self, a: int, b: int) -> int:
        return self.table[a][b]

    def name(self, a: int) -> str:
        return self.names[a]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def units(self) -> list[int]:
        return [a for a in self.elements if any(self.table[a][b] == self.one for b in self.elements)]

    def __repr__(self):
        return f"FiniteMonoid({self.label or ','.join(self.names)})"


@dataclass(frozen=True)
class FiniteSemiring:
    """Commutative semiring: additive monoid with ``zero``, multiplicative with ``one``."""

    names: tuple[str, ...]
    zero: int
    one: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "add", _freeze(self.add))
        object.__setattr__(self, "mul", _freeze(self.mul))
        n = len(self.names)
        if len(set(self.names)) != n:
            raise StructureError("names", (), "element names must be unique")
        _check_table(self.add, n, "add")
        _check_table(self.mul, n, "mul")
        _check_commutative_monoid(self.add, self.zero, n, "add")
        _check_commutative_monoid(self.mul, self.one, n, "mul")
        for a in range(n):
            if self.mul[self.zero][a] != self.zero:
                raise StructureError("mul absorbing zero", (self.zero, a))
        add, mul = self.add, self.mul
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                        raise StructureError("distributivity", (a, b, c))

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def name(self, a: int) -> str:
        return self.names[a]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def units(self) -> list[int]:
        return [a for a in self.elements if self.one in self.mul[a]]

    def has_zero_divisors(self) -> bool:
        z = self.zero
        return any(self.mul[a][b] == z for a in self.elements for b in self.elements if a != z and b != z)

    def multiplicative_monoid(self) -> FiniteMonoid:
        return FiniteMonoid(self.names, self.zero, self.one, self.mul, label=f"({self.label},*)")

    def __repr__(self):
        return f"FiniteSemiring({self.label or ','.join(self.names)})"


# ---------------------------------------------------------------- builders

def zmod(n: int) -> FiniteSemiring:
    if n < 1:
        raise ValueError("n must be positive")
    r = range(n)
    return FiniteSemiring(
        [str(a) for a in r], 0, 1 % n,
        [[(a + b) % n for b in r] for a in r],
        [[(a * b) % n for b in r] for a in r],
        label=f"Z/{n}",
    )


def prime_field(p: int) -> FiniteSemiring:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    f = zmod(p)
    return FiniteSemiring(f.names, f.zero, f.one, f.add, f.mul, label=f"F{p}")


def gf4() -> FiniteSemiring:
    # elements 0, 1, w, w+1 with w^2 = w + 1; encoded as bit pairs
    def mul(a, b):
        r = 0
        for i in range(2):
            if b >> i & 1:
                r ^= a << i
        if r & 4:
            r ^= 0b111
        return r

    r = range(4)
    return FiniteSemiring(
        ["0", "1", "w", "w+1"], 0, 1,
        [[a ^ b for b in r] for a in r],
        [[mul(a, b) for b in r] for a in r],
        label="F4",
    )


def finite_field(q: int) -> FiniteSemiring:
    if q == 4:
        return gf4()
    return prime_field(q)


def boolean() -> FiniteSemiring:
    return FiniteSemiring(["0", "1"], 0, 1, [[0, 1], [1, 1]], [[0, 0], [0, 1]], label="B")


def chain(n: int = 3) -> FiniteSemiring:
    """Totally ordered chain 0 < ... < n-1 with max as addition and min as product."""
    names = ["0"] + [f"c{i}" for i in range(1, n - 1)] + ["1"] if n > 2 else ["0", "1"]
    r = range(n)
    return FiniteSemiring(names, 0, n - 1, [[max(a, b) for b in r] for a in r],
                          [[min(a, b) for b in r] for a in r], label=f"Chain{n}")


def product_semiring(R: FiniteSemiring, S: FiniteSemiring) -> FiniteSemiring:
    pairs = list(itertools.product(R.elements, S.elements))
    idx = {p: i for i, p in enumerate(pairs)}
    names = [f"({R.name(a)},{S.name(b)})" for a, b in pairs]
    add = [[idx[(R.add[a][c], S.add[b][d])] for c, d in pairs] for a, b in pairs]
    mul = [[idx[(R.mul[a][c], S.mul[b][d])] for c, d in pairs] for a, b in pairs]
    return FiniteSemiring(names, idx[(R.zero, S.zero)], idx[(R.one, S.one)], add, mul,
                          label=f"{R.label}x{S.label}")


def monoid_from_products(names, products: dict, label="") -> FiniteMonoid:
    """Build a monoid from ``names`` (first two are 0 and 1) and products of the others."""
    n = len(names)
    ix = {s: i for i, s in enumerate(names)}
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        table[1][a] = table[a][1] = a
    for (a, b), c in products.items():
        table[ix[a]][ix[b]] = table[ix[b]][ix[a]] = ix[c]
    return FiniteMonoid(names, 0, 1, table, label=label)


def nil_monoid() -> FiniteMonoid:
    """{0, 1, x} with x^2 = 0."""
    return monoid_from_products(["0", "1", "x"], {("x", "x"): "0"}, label="M3")


def idempotent_monoid() -> FiniteMonoid:
    """{0, 1, e} with e^2 = e."""
    return monoid_from_products(["0", "1", "e"], {("e", "e"): "e"}, label="{0,1,e}")


def group_with_zero(n: int) -> FiniteMonoid:
    """{0} together with the cyclic group of order n."""
    names = ["0", "1"] + [f"g{i}" for i in range(2, n + 1)]
    # element index i >= 1 stands for g^(i-1)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            table[a][b] = 1 + ((a - 1) + (b - 1)) % n
    return FiniteMonoid(names, 0, 1, table, label=f"0+C{n}")


def two_element_monoid() -> FiniteMonoid:
    return FiniteMonoid(["0", "1"], 0, 1, [[0, 0], [0, 1]], label="{0,1}")


@lru_cache(maxsize=None)
def all_monoids(max_size: int = 5) -> tuple[FiniteMonoid, ...]:
    """All commutative pointed monoids with at most ``max_size`` elements, up to isomorphism."""
    found = []
    for n in range(2, max_size + 1):
        extra = list(range(2, n))
        cells = [(a, b) for i, a in enumerate(extra) for b in extra[i:]]
        relabels = []
        for p in itertools.permutations(extra):
            full = [0, 1] + list(p)
            relabels.append(full)
        seen = set()
        for values in itertools.product(range(n), repeat=len(cells)):
            table = [[0] * n for _ in range(n)]
            for a in range(n):
                table[1][a] = table[a][1] = a
            for (a, b), v in zip(cells, values):
                table[a][b] = table[b][a] = v
            if not _associative(table, n):
                continue
            keys = []
            for full in relabels:
                moved = [[0] * n for _ in range(n)]
                for a in range(n):
                    for b in range(n):
                        moved[full[a]][full[b]] = full[table[a][b]]
                keys.append(tuple(moved[a][b] for a, b in cells))
            key = min(keys)
            if key in seen:
                continue
            seen.add(key)
            names = ["0", "1"] + [chr(ord("a") + i) for i in range(n - 2)]
            found.append(FiniteMonoid(names, 0, 1, table, label=f"M{n}.{len(found)}"))
    return tuple(found)


def _associative(t, n):
    for a in range(2, n):
        for b in range(2, n):
            ab = t[a][b]
            for c in range(2, n):
                if t[ab][c] != t[a][t[b][c]]:
                    return False
    return True


class FreeMonoidFragment:
    """Pointed free monoid on one generator, truncated to {0, 1, T, ..., T^top}.

    Products whose exponent exceeds ``top`` are undefined (``None``).
    """

    def __init__(self, top: int):
        self.top = top
        self.names = ("0",) + tuple("1" if e == 0 else f"T^{e}" for e in range(top + 1))
        self.zero = 0
        self.one = 1
        self.label = f"S[T]<={top}"

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def product(self, a: int, b: int):
        if a == 0 or b == 0:
            return 0
        e = (a - 1) + (b - 1)
        return e + 1 if e <= self.top else None

    def name(self, a: int) -> str:
        return self.names[a]

    def __repr__(self):
        return f"FreeMonoidFragment({self.top})"


# ---------------------------------------------------------- prime ideals

PRIME_SEARCH_CAP = 16


def prime_ideals_semiring(R: FiniteSemiring) -> list[frozenset]:
    n = R.size
    if n > PRIME_SEARCH_CAP:
        raise ValueError(f"prime ideal search capped at {PRIME_SEARCH_CAP} elements, got {n}")
    add, mul = R.add, R.mul
    out = []
    for mask in range(1 << n):
        if not mask >> R.zero & 1 or mask >> R.one & 1:
            continue
        inside = [a for a in range(n) if mask >> a & 1]
        outside = [a for a in range(n) if not mask >> a & 1]
        if any(not mask >> add[a][b] & 1 for a in inside for b in inside):
            continue
        if any(not mask >> mul[a][r] & 1 for a in inside for r in range(n)):
            continue
        if any(mask >> mul[a][b] & 1 for a in outside for b in outside):
            continue
        out.append(frozenset(inside))
    return sorted(out, key=lambda s: sorted(s))


def monoid_ideals(M) -> list[frozenset]:
    """All ideals of M containing 0 (including M itself)."""
    n = M.size
    out = []
    for mask in range(1 << n):
        if not mask >> M.zero & 1:
            continue
        inside = [a for a in range(n) if mask >> a & 1]
        if all(mask >> M.product(a, r) & 1 for a in inside for r in range(n)):
            out.append(frozenset(inside))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def prime_ideals_monoid(M: FiniteMonoid) -> list[frozenset]:
    out = []
    for ideal in monoid_ideals(M):
        if M.one in ideal:
            continue
        rest = [a for a in M.elements if a not in ideal]
        if all(M.product(a, b) not in ideal for a in rest for b in rest):
            out.append(ideal)
    return sorted(out, key=lambda s: sorted(s))


# ------------------------------------------------ monoid homs and fractions

def monoid_homs(M, target_elements, target_zero, target_one, target_product) -> list[dict]:
    """All pointed unital multiplicative maps from M into a target monoid.

    ``M`` may have partially defined products (``None``); those are skipped.
    """
    free = [a for a in M.elements if a not in (M.zero, M.one)]
    target_elements = list(target_elements)
    out = []

    def consistent(psi):
        for a, pa in psi.items():
            for b, pb in psi.items():
                c = M.product(a, b)
                if c is not None and c in psi and psi[c] != target_product(pa, pb):
                    return False
        return True

    def extend(i, psi):
        if i == len(free):
            out.append(dict(psi))
            return
        for y in target_elements:
            psi[free[i]] = y
            if consistent(psi):
                extend(i + 1, psi)
            del psi[free[i]]

    start = {M.zero: target_zero, M.one: target_one}
    if M.zero == M.one:
        start = {M.zero: target_zero}
    if consistent(start):
        extend(0, start)
    return out


def hom_MR(M: FiniteMonoid, R: FiniteSemiring) -> list[dict]:
    """Monoid homomorphisms M -> (R, *) sending 0 to 0 and 1 to 1."""
    return monoid_homs(M, R.elements, R.zero, R.one, lambda a, b: R.mul[a][b])


def check_multiplicative_set(mul, S, one) -> list[int]:
    S = sorted(set(S))
    if one not in S:
        raise ValueError("multiplicative set must contain 1")
    ss = set(S)
    for a in S:
        for b in S:
            if mul(a, b) not in ss:
                raise ValueError(f"multiplicative set not closed: {a}*{b}")
    return S


def fraction_classes(mul, S, elements):
    """Classes of pairs (s, x) under (s,x) ~ (t,y) iff u*t*x = u*s*y for some u in S.

    Returns ``(class_of, reps)`` where ``class_of`` maps every pair to a class
    index and ``reps`` lists one pair per class, in first-seen order.
    """
    pairs = [(s, x) for s in S for x in elements]
    parent = list(range(len(pairs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (s, x) in enumerate(pairs):
        for j in range(i + 1, len(pairs)):
            t, y = pairs[j]
            if any(mul(u, mul(t, x)) == mul(u, mul(s, y)) for u in S):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    roots = {}
    class_of = {}
    reps = []
    for i, p in enumerate(pairs):
        r = find(i)
        if r not in roots:
            roots[r] = len(reps)
            reps.append(pairs[r])
        class_of[p] = roots[r]
    return class_of, reps


def localize_semiring_map(R: FiniteSemiring, S) -> tuple[FiniteSemiring, dict]:
    mul = lambda a, b: R.mul[a][b]
    S = check_multiplicative_set(mul, S, R.one)
    class_of, reps = fraction_classes(mul, S, list(R.elements))
    n = len(reps)
    add_t = [[0] * n for _ in range(n)]
    mul_t = [[0] * n for _ in range(n)]
    for i, (s, x) in enumerate(reps):
        for j, (t, y) in enumerate(reps):
            st = R.mul[s][t]
            add_t[i][j] = class_of[(st, R.add[R.mul[t][x]][R.mul[s][y]])]
            mul_t[i][j] = class_of[(st, R.mul[x][y])]
    names = [R.name(x) if s == R.one else f"{R.name(x)}/{R.name(s)}" for s, x in reps]
    L = FiniteSemiring(names, class_of[(R.one, R.zero)], class_of[(R.one, R.one)], add_t, mul_t,
                       label=f"{R.label}[1/{{{','.join(R.name(s) for s in S)}}}]")
    return L, class_of


def localize_semiring(R: FiniteSemiring, S) -> FiniteSemiring:
    return localize_semiring_map(R, S)[0]


def localize_monoid_map(N: FiniteMonoid, S) -> tuple[FiniteMonoid, dict]:
    S = check_multiplicative_set(N.product, S, N.one)
    class_of, reps = fraction_classes(N.product, S, list(N.elements))
    n = len(reps)
    table = [[class_of[(N.product(s, t), N.product(x, y))] for t, y in reps] for s, x in reps]
    names = [N.name(x) if s == N.one else f"{N.name(x)}/{N.name(s)}" for s, x in reps]
    L = FiniteMonoid(names, class_of[(N.one, N.zero)], class_of[(N.one, N.one)], table,
                     label=f"{N.label}[1/S]")
    return L, class_of


def localize_monoid(N: FiniteMonoid, S) -> FiniteMonoid:
    return localize_monoid_map(N, S)[0]
