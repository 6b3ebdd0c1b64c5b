"""Truncated Gamma-sets, S-algebras and their morphisms.

Level ``k`` stands for the pointed set {0, 1, ..., k} with base point 0.  A
Gamma-set assigns a pointed set to every level up to its truncation and a
base-point preserving function to every pointed map between levels.  An
S-algebra adds a unit at level 1 and a product from levels (k, m) to level k*m,
where the pair (i, j) is sent to ``smash_index(i, j, k, m)``.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

ENUMERABLE = "enumerable"
WITNESS = "witness"
DEFAULT_TRUNCATION = 3


class TierError(ValueError):
    """Raised when an operation needs enumeration but gets a witness-tier value."""


def smash_index(i: int, j: int, k: int, m: int) -> int:
    if not (0 <= i <= k and 0 <= j <= m):
        raise ValueError(f"index out of range: ({i}, {j}) for levels ({k}, {m})")
    if i == 0 or j == 0:
        return 0
    return (i - 1) * m + j


@dataclass(frozen=True)
class PointedMap:
    source: int
    target: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.source + 1:
            raise ValueError("table length must be source + 1")
        if self.table[0] != 0:
            raise ValueError("pointed maps send 0 to 0")
        if any(not 0 <= v <= self.target for v in self.table):
            raise ValueError("table value outside target")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def then(self, g: "PointedMap") -> "PointedMap":
        """The composite ``g . self``."""
        if g.source != self.target:
            raise ValueError("maps are not composable")
        return PointedMap(self.source, g.target, tuple(g.table[v] for v in self.table))

    def smash(self, g: "PointedMap") -> "PointedMap":
        k, m, k2, m2 = self.source, g.source, self.target, g.target
        table = [0] * (k * m + 1)
        for i in range(1, k + 1):
            for j in range(1, m + 1):
                table[smash_index(i, j, k, m)] = smash_index(self.table[i], g.table[j], k2, m2)
        return PointedMap(k * m, k2 * m2, tuple(table))

    @staticmethod
    def identity(k: int) -> "PointedMap":
        return PointedMap(k, k, tuple(range(k + 1)))

    @staticmethod
    def delta(n: int, j: int) -> "PointedMap":
        """n -> 1 sending j to 1 and everything else to 0."""
        return PointedMap(n, 1, tuple(1 if i == j else 0 for i in range(n + 1)))

    @staticmethod
    def sigma(n: int) -> "PointedMap":
        """n -> 1 sending every non-base point to 1."""
        return PointedMap(n, 1, (0,) + (1,) * n)

    @staticmethod
    def point(k: int, j: int) -> "PointedMap":
        """1 -> k sending 1 to j."""
        return PointedMap(1, k, (0, j))

    @staticmethod
    def transposition(k: int, m: int) -> "PointedMap":
        """(m*k) -> (k*m) swapping the smash factors."""
        table = [0] * (k * m + 1)
        for i in range(1, k + 1):
            for j in range(1, m + 1):
                table[smash_index(j, i, m, k)] = smash_index(i, j, k, m)
        return PointedMap(m * k, k * m, tuple(table))


@lru_cache(maxsize=None)
def all_maps(k: int, m: int) -> tuple[PointedMap, ...]:
    return tuple(PointedMap(k, m, (0,) + t) for t in itertools.product(range(m + 1), repeat=k))


@lru_cache(maxsize=None)
def generating_maps(k: int, top: int) -> tuple[PointedMap, ...]:
    """Maps out of level k that generate, under composition, every map between levels <= top.

    Adjacent transpositions, merging the last two points, killing the last
    point, and including k into k+1.
    """
    out = []
    for i in range(1, k):
        t = list(range(k + 1))
        t[i], t[i + 1] = t[i + 1], t[i]
        out.append(PointedMap(k, k, t))
    if k >= 2:
        out.append(PointedMap(k, k - 1, tuple(range(k)) + (k - 1,)))
    if k >= 1:
        out.append(PointedMap(k, k - 1, tuple(range(k)) + (0,)))
    if k + 1 <= top:
        out.append(PointedMap(k, k + 1, tuple(range(k + 1))))
    return tuple(out)


def maps_between_levels(k: int, top: int, exhaustive: bool):
    if exhaustive:
        return [f for m in range(top + 1) for f in all_maps(k, m)]
    return generating_maps(k, top)


class GammaSet:
    tier = ENUMERABLE
    truncation = DEFAULT_TRUNCATION
    # formula-based families can evaluate levels above the truncation
    max_level: int | None = None

    def _level(self, k: int):
        raise TierError(f"{self!r} is not enumerable")

    def level(self, k: int) -> tuple:
        if self.tier != ENUMERABLE:
            raise TierError(f"{self!r} is witness-tier; its levels are not enumerable")
        if self.max_level is not None and k > self.max_level:
            raise ValueError(f"level {k} exceeds the materialized levels of {self!r}")
        cache = self.__dict__.setdefault("_levels", {})
        if k not in cache:
            cache[k] = tuple(self._level(k))
        return cache[k]

    def level_index(self, k: int) -> dict:
        cache = self.__dict__.setdefault("_level_index", {})
        if k not in cache:
            cache[k] = {x: i for i, x in enumerate(self.level(k))}
        return cache[k]

    def base(self, k: int):
        raise NotImplementedError

    def act(self, f: PointedMap, x):
        raise NotImplementedError

    def contains(self, x, k: int) -> bool:
        return x in self.level_index(k)

    def format(self, x) -> str:
        return str(x)

    def memo(self) -> dict:
        return self.__dict__.setdefault("_memo", {})


class SAlgebra(GammaSet):
    one = None

    def mul(self, x, k: int, y, m: int):
        raise NotImplementedError

    def scalar(self, u, x, k: int):
        return self.mul(u, 1, x, k)

    def mul1(self, a, b):
        """Product on level 1, the multiplicative monoid of the algebra."""
        return self.mul(a, 1, b, 1)


def require_enumerable(*values):
    for v in values:
        if getattr(v, "tier", ENUMERABLE) != ENUMERABLE:
            raise TierError(f"{v!r} is witness-tier; this operation needs enumeration")


class SAlgebraMorphism:
    """Levelwise map between S-algebras (or Gamma-sets) given by ``fn(x, k)``."""

    def __init__(self, source, target, fn, name: str = "", max_level: int | None = None):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name
        self.max_level = max_level

    def __call__(self, x, k: int):
        return self.fn(x, k)

    def __repr__(self):
        return f"SAlgebraMorphism({self.name or '?'}: {self.source!r} -> {self.target!r})"

    @classmethod
    def from_tables(cls, source, target, tables: dict, name: str = "") -> "SAlgebraMorphism":
        return cls(source, target, lambda x, k: tables[k][x], name=name, max_level=max(tables))

    @classmethod
    def identity(cls, A) -> "SAlgebraMorphism":
        return cls(A, A, lambda x, k: x, name="id")

    def then(self, other: "SAlgebraMorphism") -> "SAlgebraMorphism":
        levels = [v for v in (self.max_level, other.max_level) if v is not None]
        return SAlgebraMorphism(self.source, other.target, lambda x, k: other(self(x, k), k),
                                name=f"{other.name}.{self.name}", max_level=min(levels) if levels else None)

    def tables(self, top: int) -> dict:
        return {k: {x: self(x, k) for x in self.source.level(k)} for k in range(top + 1)}

    def equals(self, other: "SAlgebraMorphism", top: int) -> bool:
        return all(self(x, k) == other(x, k) for k in range(top + 1) for x in self.source.level(k))

    def is_trivial(self, top: int) -> bool:
        return all(self(x, k) == self.target.base(k) for k in range(top + 1) for x in self.source.level(k))


class Violation(NamedTuple):
    axiom: str
    instance: str


class _Report:
    def __init__(self):
        self.first = {}

    def add(self, axiom, instance):
        if axiom not in self.first:
            self.first[axiom] = Violation(axiom, instance)

    def has(self, axiom):
        return axiom in self.first

    def result(self):
        return list(self.first.values())


def validate_gamma_set(X: GammaSet, top: int | None = None, exhaustive: bool = False) -> list[Violation]:
    """Functoriality and base point checks for an enumerable Gamma-set.

    By default composition is checked against a generating family of maps,
    which is equivalent to checking every composable pair.
    """
    require_enumerable(X)
    top = X.truncation if top is None else top
    rep = _Report()
    _check_functor(X, top, exhaustive, rep)
    return rep.result()


def _check_functor(X, top, exhaustive, rep):
    levels = {k: X.level(k) for k in range(top + 1)}
    for k in range(top + 1):
        if X.base(k) not in X.level_index(k):
            rep.add("base point", f"base point of level {k} is not an element")
        ident = PointedMap.identity(k)
        for x in levels[k]:
            if X.act(ident, x) != x:
                rep.add("identity", f"A(id_{k})({X.format(x)}) != {X.format(x)}")
                break
        for m in range(top + 1):
            for f in all_maps(k, m):
                if X.act(f, X.base(k)) != X.base(m):
                    rep.add("base point", f"A({f.table}) moves the base point of level {k}")
                for x in levels[k]:
                    y = X.act(f, x)
                    if y not in X.level_index(m):
                        rep.add("closure", f"A({f.table})({X.format(x)}) = {y!r} is not in level {m}")
                    elif not exhaustive:
                        for g in generating_maps(m, top):
                            if X.act(g, y) != X.act(f.then(g), x):
                                rep.add("composition", f"A({g.table}) A({f.table}) != A({f.then(g).table}) "
                                                       f"at {X.format(x)}")
                if exhaustive:
                    for l in range(top + 1):
                        for g in all_maps(m, l):
                            gf = f.then(g)
                            for x in levels[k]:
                                if X.act(g, X.act(f, x)) != X.act(gf, x):
                                    rep.add("composition", f"A({g.table}) A({f.table}) != A({gf.table}) "
                                                           f"at {X.format(x)}")
                                    break


def validate_salgebra(A: SAlgebra, top: int | None = None, exhaustive: bool = False) -> list[Violation]:
    """First failing instance per axiom; empty when ``A`` is an S-algebra up to ``top``.

    Naturality of the product is checked in each smash factor separately
    against generating maps unless ``exhaustive`` is set, in which case every
    pair of maps (f, g) is tried.
    """
    require_enumerable(A)
    top = A.truncation if top is None else top
    rep = _Report()
    _check_functor(A, top, exhaustive, rep)
    if rep.has("closure"):
        return rep.result()
    fmt = A.format
    one = A.one
    if one not in A.level_index(1):
        rep.add("unit", "unit is not an element of level 1")
        return rep.result()
    pairs = [(k, m) for k in range(1, top + 1) for m in range(1, top + 1) if k * m <= top]
    for k, m in pairs:
        for x in A.level(k):
            for y in A.level(m):
                z = A.mul(x, k, y, m)
                if z not in A.level_index(k * m):
                    rep.add("closure", f"m({fmt(x)}, {fmt(y)}) = {z!r} is not in level {k * m}")
                    continue
                if A.act(PointedMap.transposition(k, m), A.mul(y, m, x, k)) != z:
                    rep.add("commutativity", f"m({fmt(x)}, {fmt(y)}) != tau m({fmt(y)}, {fmt(x)}) "
                                             f"at levels ({k}, {m})")
    if rep.has("closure"):
        return rep.result()
    for k in range(1, top + 1):
        for y in A.level(k):
            if A.mul(one, 1, y, k) != y:
                rep.add("unit", f"m(1, {fmt(y)}) != {fmt(y)} at level {k}")
            if A.mul(A.base(1), 1, y, k) != A.base(k):
                rep.add("base point", f"m(*, {fmt(y)}) is not the base point at level {k}")
    for k, m in pairs:
        for l in range(1, top + 1):
            if k * m * l > top:
                continue
            for x in A.level(k):
                for y in A.level(m):
                    xy = A.mul(x, k, y, m)
                    for z in A.level(l):
                        if A.mul(xy, k * m, z, l) != A.mul(x, k, A.mul(y, m, z, l), m * l):
                            rep.add("associativity", f"({fmt(x)} {fmt(y)}) {fmt(z)} at levels ({k}, {m}, {l})")
    _check_product_naturality(A, top, exhaustive, pairs, rep)
    return rep.result()


def _check_product_naturality(A, top, exhaustive, pairs, rep):
    fmt = A.format
    if exhaustive:
        for k, m in pairs:
            for k2, m2 in [(a, b) for a in range(top + 1) for b in range(top + 1) if a * b <= top]:
                for f in all_maps(k, k2):
                    for g in all_maps(m, m2):
                        fg = f.smash(g)
                        for x in A.level(k):
                            fx = A.act(f, x)
                            for y in A.level(m):
                                if A.mul(fx, k2, A.act(g, y), m2) != A.act(fg, A.mul(x, k, y, m)):
                                    rep.add("product naturality",
                                            f"square for f={f.table}, g={g.table} at ({fmt(x)}, {fmt(y)})")
        return
    for k, m in pairs:
        idm, idk = PointedMap.identity(m), PointedMap.identity(k)
        for f in generating_maps(k, top):
            if f.target * m > top:
                continue
            fm = f.smash(idm)
            for x in A.level(k):
                fx = A.act(f, x)
                for y in A.level(m):
                    if A.mul(fx, f.target, y, m) != A.act(fm, A.mul(x, k, y, m)):
                        rep.add("product naturality",
                                f"square for f={f.table}, g=id_{m} at ({fmt(x)}, {fmt(y)})")
        for g in generating_maps(m, top):
            if k * g.target > top:
                continue
            kg = idk.smash(g)
            for y in A.level(m):
                gy = A.act(g, y)
                for x in A.level(k):
                    if A.mul(x, k, gy, g.target) != A.act(kg, A.mul(x, k, y, m)):
                        rep.add("product naturality",
                                f"square for f=id_{k}, g={g.table} at ({fmt(x)}, {fmt(y)})")
                        if k == 1:
                            rep.add("scalar covariance",
                                    f"A({g.table})({fmt(x)} . {fmt(y)}) != {fmt(x)} . A({g.table})({fmt(y)})")


def validate_morphism(phi: SAlgebraMorphism, top: int | None = None, multiplicative: bool = True,
                      exhaustive: bool = False) -> list[Violation]:
    A, B = phi.source, phi.target
    require_enumerable(A)
    if top is None:
        top = min(A.truncation, B.truncation)
        if phi.max_level is not None:
            top = min(top, phi.max_level)
    rep = _Report()
    for k in range(top + 1):
        if phi(A.base(k), k) != B.base(k):
            rep.add("base point", f"level {k} base point not preserved")
        for x in A.level(k):
            y = phi(x, k)
            if not B.contains(y, k):
                rep.add("closure", f"phi({A.format(x)}) = {y!r} is not in level {k} of the target")
                continue
            for f in maps_between_levels(k, top, exhaustive):
                if phi(A.act(f, x), f.target) != B.act(f, y):
                    rep.add("naturality", f"f={f.table} at {A.format(x)}")
    if multiplicative and not rep.has("closure"):
        if phi(A.one, 1) != B.one:
            rep.add("unit", "phi(1) != 1")
        for k in range(1, top + 1):
            for m in range(1, top + 1):
                if k * m > top:
                    continue
                for x in A.level(k):
                    px = phi(x, k)
                    for y in A.level(m):
                        z = A.mul(x, k, y, m)
                        if z is None:
                            continue
                        if phi(z, k * m) != B.mul(px, k, phi(y, m), m):
                            rep.add("multiplicativity", f"({A.format(x)}, {A.format(y)}) at levels ({k}, {m})")
    return rep.result()


# ------------------------------------------------------------ enumeration

def _search(X, Y, top, multiplicative):
    variables = [(k, x) for k in range(1, top + 1) for x in X.level(k)]
    gens = {k: generating_maps(k, top) for k in range(top + 1)}
    down = {k: [f for m in range(1, k) for f in all_maps(k, m)] for k in range(top + 1)}
    signatures = {}
    for k in range(2, top + 1):
        table = defaultdict(list)
        for y in Y.level(k):
            table[tuple(Y.act(f, y) for f in down[k])].append(y)
        signatures[k] = table
    asg = {}
    by_level = {k: [] for k in range(top + 1)}
    trail = []
    partner_levels = {k: [m for m in range(1, top + 1) if k * m <= top] for k in range(top + 1)}

    def assign(k, x, y):
        queue = [(k, x, y)]
        while queue:
            k, x, y = queue.pop()
            key = (k, x)
            if key in asg:
                if asg[key] != y:
                    return False
                continue
            asg[key] = y
            by_level[k].append(x)
            trail.append(key)
            for f in gens[k]:
                queue.append((f.target, X.act(f, x), Y.act(f, y)))
            if multiplicative and k >= 1:
                for m in partner_levels[k]:
                    for z in by_level[m]:
                        w = asg[(m, z)]
                        xz = X.mul(x, k, z, m)
                        if xz is not None:
                            queue.append((k * m, xz, Y.mul(y, k, w, m)))
                        zx = X.mul(z, m, x, k)
                        if zx is not None:
                            queue.append((m * k, zx, Y.mul(w, m, y, k)))
        return True

    def undo(mark):
        while len(trail) > mark:
            key = trail.pop()
            del asg[key]
            by_level[key[0]].pop()

    def candidates(pos):
        k, x = variables[pos]
        if k == 1:
            return Y.level(1)
        sig = tuple(asg[(f.target, X.act(f, x))] for f in down[k])
        return signatures[k].get(sig, ())

    results = []
    ok = all(assign(k, X.base(k), Y.base(k)) for k in range(top + 1))
    if ok and multiplicative:
        ok = assign(1, X.one, Y.one)
    if not ok:
        return results
    stack = []

    def advance():
        while stack:
            p, it, mark = stack[-1]
            undo(mark)
            k, x = variables[p]
            for y in it:
                if assign(k, x, y):
                    return p + 1
                undo(mark)
            stack.pop()
        return None

    pos = 0
    n = len(variables)
    while pos is not None:
        while pos < n and variables[pos] in asg:
            pos += 1
        if pos == n:
            results.append({k: {x: asg[(k, x)] for x in X.level(k)} for k in range(top + 1)})
            pos = advance()
            continue
        stack.append((pos, iter(candidates(pos)), len(trail)))
        pos = advance()
    return results


def _common_truncation(X, Y, top):
    require_enumerable(X, Y)
    if top is None:
        if X.truncation != Y.truncation:
            raise ValueError("Gamma-sets have different truncations")
        top = X.truncation
    return top


def enumerate_nat_transformations(X: GammaSet, Y: GammaSet, top: int | None = None) -> list[SAlgebraMorphism]:
    """Every family of levelwise pointed maps commuting with all actions up to ``top``.

    Exhaustive backtracking: level-1 values are free, higher levels are
    filtered by their images at lower levels and forced by propagation.
    """
    top = _common_truncation(X, Y, top)
    return [SAlgebraMorphism.from_tables(X, Y, t, name=f"t{i}") for i, t in enumerate(_search(X, Y, top, False))]


def enumerate_algebra_morphisms(A: SAlgebra, B: SAlgebra, top: int | None = None) -> list[SAlgebraMorphism]:
    """Natural transformations that are also unital and multiplicative."""
    top = _common_truncation(A, B, top)
    return [SAlgebraMorphism.from_tables(A, B, t, name=f"m{i}") for i, t in enumerate(_search(A, B, top, True))]


# ------------------------------------------------------------ tabulation

class TableAlgebra(SAlgebra):
    """An S-algebra copied into integer-indexed tables up to its truncation.

    Useful for fault injection and for freezing a formula-based algebra.
    """

    def __init__(self, levels, acts, muls, one, truncation, label="table"):
        self._lv = levels
        self._acts = acts
        self._muls = muls
        self.one = one
        self.truncation = truncation
        self.max_level = truncation
        self.label = label

    def _level(self, k):
        return range(self._lv[k])

    def base(self, k):
        return 0

    def act(self, f, x):
        return self._acts[f][x]

    def mul(self, x, k, y, m):
        return self._muls[(k, m)][x][y]

    def __repr__(self):
        return f"TableAlgebra({self.label})"

    def with_mul_entry(self, k, m, x, y, value) -> "TableAlgebra":
        muls = dict(self._muls)
        rows = [list(r) for r in muls[(k, m)]]
        rows[x][y] = value
        muls[(k, m)] = rows
        return TableAlgebra(self._lv, self._acts, muls, self.one, self.truncation, label=self.label + "*")


def tabulate(A: SAlgebra, top: int | None = None) -> TableAlgebra:
    require_enumerable(A)
    top = A.truncation if top is None else top
    elems = {k: A.level(k) for k in range(top + 1)}
    ix = {k: A.level_index(k) for k in range(top + 1)}
    # put the base point first so that index 0 is always the base point
    order = {}
    for k in range(top + 1):
        b = A.base(k)
        order[k] = [b] + [x for x in elems[k] if x != b]
        ix[k] = {x: i for i, x in enumerate(order[k])}
    acts = {}
    for k in range(top + 1):
        for m in range(top + 1):
            for f in all_maps(k, m):
                acts[f] = tuple(ix[m][A.act(f, x)] for x in order[k])
    muls = {}
    for k in range(top + 1):
        for m in range(top + 1):
            if k * m <= top:
                muls[(k, m)] = [[ix[k * m][A.mul(x, k, y, m)] for y in order[m]] for x in order[k]]
    sizes = {k: len(order[k]) for k in order}
    return TableAlgebra(sizes, acts, muls, ix[1][A.one], top, label=repr(A))
