"""The category of objects b^inf of an S-algebra, partitions of unity read off
level-n elements, multi-partitions on rooted trees, and covering decisions."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .families import HAlgebra, SMAlgebra
from .gamma_core import ENUMERABLE, PointedMap, SAlgebraMorphism, TierError
from .site_cm import MonoidView, power_sequence

DEFAULT_N_MAX = 4
DEFAULT_H_MAX = 3


@dataclass(frozen=True)
class CInfObject:
    index: int
    rep: object
    members: frozenset | None = None


class CInfCategory:
    """Objects are classes of level-1 elements under mutual power divisibility.

    ``hom[a][b]`` is true when there is a (necessarily unique) morphism a -> b,
    that is when some power of rep(a) lies in rep(b) times level 1.
    """

    def __init__(self, algebra, objects, hom, class_index=None):
        self.algebra = algebra
        self.objects = tuple(objects)
        self.hom = tuple(tuple(row) for row in hom)
        self._class_index = class_index
        self.monoid = MonoidView(algebra)
        self.terminal = self.class_of(algebra.one)
        self.zero = self.class_of(algebra.base(1))

    def __len__(self):
        return len(self.objects)

    def class_of(self, x) -> int:
        if self._class_index is not None:
            return self._class_index[x]
        M = self.monoid
        for o in self.objects:
            if M.divides_power(x, o.rep) and M.divides_power(o.rep, x):
                return o.index
        raise KeyError(f"{x!r} is not in any declared object")

    def rep(self, i):
        return self.objects[i].rep

    def label(self, i) -> str:
        return self.algebra.format(self.objects[i].rep)

    def hom_exists(self, a, b) -> bool:
        return self.hom[a][b]

    def below(self, c) -> list[int]:
        return [d for d in range(len(self.objects)) if self.hom[d][c]]

    def above(self, c) -> list[int]:
        return [d for d in range(len(self.objects)) if self.hom[c][d]]

    def product(self, a, b) -> int:
        return self.class_of(self.algebra.mul1(self.rep(a), self.rep(b)))

    def pullback(self, a, b, c=None) -> int:
        """Pullback of a -> c and b -> c, the object (ab)^inf."""
        if c is not None and not (self.hom[a][c] and self.hom[b][c]):
            raise ValueError("pullback needs morphisms a -> c and b -> c")
        return self.product(a, b)

    def down_closure(self, family, c=None) -> frozenset:
        """Objects with a morphism into some member of ``family`` (and into c)."""
        fam = list(family)
        out = {d for d in range(len(self.objects)) if any(self.hom[d][x] for x in fam)}
        if c is not None:
            out = {d for d in out if self.hom[d][c]}
        return frozenset(out)


def build_cinf(A) -> CInfCategory:
    memo = A.memo()
    if "cinf" in memo:
        return memo["cinf"]
    M = MonoidView(A)
    if A.tier == ENUMERABLE:
        reps, members, index = [], [], {}
        for x in A.level(1):
            for i, r in enumerate(reps):
                if M.divides_power(x, r) and M.divides_power(r, x):
                    members[i].append(x)
                    index[x] = i
                    break
            else:
                index[x] = len(reps)
                reps.append(x)
                members.append([x])
        objects = [CInfObject(i, r, frozenset(ms)) for i, (r, ms) in enumerate(zip(reps, members))]
    else:
        declared = getattr(A, "declared_objects", None)
        if not declared:
            raise TierError("witness-tier algebra without declared objects")
        objects, index = [], None
        for r in declared:
            if any(M.divides_power(r, o.rep) and M.divides_power(o.rep, r) for o in objects):
                raise ValueError("declared objects are not pairwise distinct")
            objects.append(CInfObject(len(objects), r))
    hom = [[M.divides_power(a.rep, b.rep) for b in objects] for a in objects]
    cat = CInfCategory(A, objects, hom, index)
    memo["cinf"] = cat
    return cat


# --------------------------------------------------------------- partitions

@dataclass(frozen=True)
class PartitionWitness:
    arity: int
    xi: object
    target: int
    parts: tuple[int, ...]

    @property
    def part_multiset(self):
        return tuple(sorted(self.parts))


def witness_from_xi(cat: CInfCategory, xi, n: int) -> PartitionWitness | None:
    """Read off target and parts of a level-n element; None if some part has no
    morphism to the target."""
    if n == 0:
        return PartitionWitness(0, xi, cat.zero, ())
    A = cat.algebra
    t = cat.class_of(A.act(PointedMap.sigma(n), xi))
    parts = tuple(cat.class_of(A.act(PointedMap.delta(n, j), xi)) for j in range(1, n + 1))
    if not all(cat.hom[p][t] for p in parts):
        return None
    return PartitionWitness(n, xi, t, parts)


def validate_partition(cat: CInfCategory, w: PartitionWitness) -> bool:
    A = cat.algebra
    if w.arity == 0:
        return w.target == cat.zero and w.parts == ()
    if not A.contains(w.xi, w.arity):
        return False
    again = witness_from_xi(cat, w.xi, w.arity)
    return again is not None and again.target == w.target and again.parts == w.parts


def _partition_table(cat: CInfCategory, n: int) -> dict:
    """target -> {part multiset: first witness} for arity n."""
    memo = cat.algebra.memo()
    key = ("partitions", n)
    if key in memo:
        return memo[key]
    A = cat.algebra
    table = {}
    if A.tier == ENUMERABLE:
        sig = PointedMap.sigma(n)
        deltas = [PointedMap.delta(n, j) for j in range(1, n + 1)]
        class_of, hom = cat.class_of, cat.hom
        for xi in A.level(n):
            t = class_of(A.act(sig, xi))
            parts = tuple(class_of(A.act(d, xi)) for d in deltas)
            if all(hom[p][t] for p in parts):
                bucket = table.setdefault(t, {})
                ms = tuple(sorted(parts))
                if ms not in bucket:
                    bucket[ms] = PartitionWitness(n, xi, t, parts)
    else:
        candidates = [(o.rep, 1) for o in cat.objects] if n == 1 else []
        candidates += [(xi, m) for xi, m in getattr(A, "partition_witnesses", []) if m == n]
        for xi, m in candidates:
            w = witness_from_xi(cat, xi, m)
            if w is not None and A.contains(xi, m):
                table.setdefault(w.target, {}).setdefault(w.part_multiset, w)
    memo[key] = table
    return table


def enumerate_partitions(A, f: int, n: int, dedupe: bool = True, n_cap: int = DEFAULT_N_MAX) -> list[PartitionWitness]:
    """Partitions of the object ``f`` carried by level-n elements."""
    if A.tier != ENUMERABLE:
        raise TierError("witness-tier algebras only have registered partitions")
    if n < 1 or n > n_cap:
        raise ValueError(f"arity {n} outside 1..{n_cap}")
    cat = build_cinf(A)
    if dedupe:
        return list(_partition_table(cat, n).get(f, {}).values())
    out = []
    for xi in A.level(n):
        w = witness_from_xi(cat, xi, n)
        if w is not None and w.target == f:
            out.append(w)
    return out


def empty_partition(cat: CInfCategory) -> PartitionWitness:
    """The base point of level 0 sums to zero: 0^inf is covered by nothing."""
    return PartitionWitness(0, cat.algebra.base(0), cat.zero, ())


def trivial_partition(cat: CInfCategory, f: int) -> PartitionWitness:
    return PartitionWitness(1, cat.rep(f), f, (f,))


def partition_product(cat: CInfCategory, p: PartitionWitness, q: PartitionWitness) -> PartitionWitness:
    """The partition of the product target carried by m(xi, eta)."""
    A = cat.algebra
    n = p.arity * q.arity
    if n == 0:
        return empty_partition(cat)
    if A.max_level is not None and n > A.max_level:
        raise ValueError(f"product arity {n} exceeds the materialized levels")
    zeta = A.mul(p.xi, p.arity, q.xi, q.arity)
    w = witness_from_xi(cat, zeta, n)
    expected = [0] * n
    for i, a in enumerate(p.parts, 1):
        for j, b in enumerate(q.parts, 1):
            expected[(i - 1) * q.arity + j - 1] = cat.product(a, b)
    if w is None or w.parts != tuple(expected) or w.target != cat.product(p.target, q.target):
        raise AssertionError("product of partitions is not the expected partition")
    return w


# --------------------------------------------------------- multi-partitions

@dataclass(frozen=True)
class RootedTree:
    """Vertex 0 is the root; ``parent[v]`` is None only for the root."""
    parent: tuple

    def __post_init__(self):
        if not self.parent or self.parent[0] is not None:
            raise ValueError("vertex 0 must be the root")
        for v, p in enumerate(self.parent[1:], 1):
            if p is None or not 0 <= p < v:
                raise ValueError("parents must precede children")

    @property
    def vertices(self) -> range:
        return range(len(self.parent))

    def children(self, v) -> list[int]:
        return [u for u in self.vertices if self.parent[u] == v]

    def external(self) -> list[int]:
        return [v for v in self.vertices if not self.children(v)]

    def depth(self, v) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    @property
    def height(self) -> int:
        return max(self.depth(v) for v in self.vertices)


@dataclass(frozen=True)
class MultiPartition:
    tree: RootedTree
    assignment: tuple
    witnesses: tuple = field(default=())  # pairs (vertex, PartitionWitness)

    @property
    def root_object(self) -> int:
        return self.assignment[0]

    def witness(self, v):
        for u, w in self.witnesses:
            if u == v:
                return w
        return None

    def external(self) -> list[int]:
        """Vertices without a partition; a vertex carrying the empty partition
        has no successors but is not external."""
        inner = {v for v, _ in self.witnesses}
        return [v for v in self.tree.vertices if v not in inner]

    def leaves(self) -> list[int]:
        return [self.assignment[v] for v in self.external()]


def validate_multipartition(cat: CInfCategory, mp: MultiPartition, family=None, target=None) -> bool:
    tree = mp.tree
    if target is not None and mp.root_object != target:
        return False
    for v in tree.vertices:
        kids = tree.children(v)
        w = mp.witness(v)
        if w is None:
            if kids:
                return False
            continue
        if w.target != mp.assignment[v]:
            return False
        if tuple(mp.assignment[u] for u in kids) != w.parts:
            return False
        if not validate_partition(cat, w):
            return False
    if family is not None:
        sieve = cat.down_closure(family)
        if not all(e in sieve for e in mp.leaves()):
            return False
    return True


def _tree_from_choices(root, choice) -> MultiPartition:
    parent, assignment, witnesses = [None], [root], []
    stack = [0]
    while stack:
        v = stack.pop(0)
        w = choice.get(assignment[v])
        if w is None:
            continue
        witnesses.append((v, w))
        for p in w.parts:
            parent.append(v)
            assignment.append(p)
            stack.append(len(assignment) - 1)
    return MultiPartition(RootedTree(tuple(parent)), tuple(assignment), tuple(witnesses))


def graft(cat: CInfCategory, mp: MultiPartition, covers: dict) -> MultiPartition:
    """Compose a multi-partition with multi-partitions of the objects it lands in.

    ``covers`` maps objects x to multi-partitions rooted at x.  Every leaf e of
    ``mp`` with a morphism into such an x gets the multi-partition of x
    multiplied by the trivial partition of e attached below it.
    """
    parent = list(mp.tree.parent)
    assignment = list(mp.assignment)
    witnesses = list(mp.witnesses)
    for leaf in mp.external():
        e = assignment[leaf]
        x = next((x for x in sorted(covers) if cat.hom[e][x]), None)
        if x is None:
            raise ValueError(f"leaf object {e} lies under none of the covered objects")
        sub = covers[x]
        triv = trivial_partition(cat, e)
        new_index = {0: leaf}
        for v in sub.tree.vertices:
            if v:
                parent.append(new_index[sub.tree.parent[v]])
                assignment.append(cat.product(e, sub.assignment[v]))
                new_index[v] = len(assignment) - 1
        for v, w in sub.witnesses:
            witnesses.append((new_index[v], partition_product(cat, triv, w)))
    return MultiPartition(RootedTree(tuple(parent)), tuple(assignment), tuple(witnesses))


# ------------------------------------------------------------------- covers

class Verdict(enum.Enum):
    COVER = "COVER"
    NOT_COVER = "NOT_COVER"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class CoverResult:
    verdict: Verdict
    witness: MultiPartition | None = None
    detail: str = ""

    @property
    def is_cover(self) -> bool:
        return self.verdict is Verdict.COVER


class StrategyError(ValueError):
    pass


SEMIRING, MONOID, TROPICAL, GENERIC = "semiring", "monoid", "tropical", "generic"


class Site:
    """Covering data of an algebra, found by searching partitions up to arity
    ``n_max`` and multi-partitions up to height ``h_max``."""

    def __init__(self, A, n_max=DEFAULT_N_MAX, h_max=DEFAULT_H_MAX):
        self.algebra = A
        self.cat = build_cinf(A)
        self.n_max = n_max
        self.h_max = h_max
        self._sieves = {}

    def partitions(self, target: int) -> list[PartitionWitness]:
        out = [empty_partition(self.cat)] if target == self.cat.zero else []
        for n in range(1, self.n_max + 1):
            if self.algebra.max_level is not None and n > self.algebra.max_level:
                break
            out.extend(_partition_table(self.cat, n).get(target, {}).values())
        return out

    def all_partitions(self) -> list[PartitionWitness]:
        return [w for t in range(len(self.cat)) for w in self.partitions(t)]

    def search(self, sieve, c) -> MultiPartition | None:
        """Multi-partition of c with leaves in ``sieve`` and height <= h_max."""
        below = self.cat.below(c)
        reached = {d: None for d in below if d in sieve}
        for _ in range(self.h_max):
            if c in reached:
                break
            new = {}
            for d in below:
                if d in reached:
                    continue
                for w in self.partitions(d):
                    if all(p in reached for p in w.parts):
                        new[d] = w
                        break
            if not new:
                break
            reached.update(new)
        if c not in reached:
            return None
        return _tree_from_choices(c, {d: w for d, w in reached.items() if w is not None})

    def generic_cover(self, family, c) -> CoverResult:
        fam = list(family)
        mp = self.search(self.cat.down_closure(fam, c), c)
        if mp is None:
            return CoverResult(Verdict.UNKNOWN, None, f"no multi-partition with arity <= {self.n_max}, "
                                                      f"height <= {self.h_max}")
        return CoverResult(Verdict.COVER, mp)

    def covering_sieves(self, c) -> list[frozenset]:
        """Down-closed subsets of the objects over c that contain a cover of c."""
        if c in self._sieves:
            return self._sieves[c]
        below = self.cat.below(c)
        out = []
        for r in range(len(below) + 1):
            for subset in itertools.combinations(below, r):
                s = frozenset(subset)
                if self.cat.down_closure(s, c) != s:
                    continue
                if self.search(s, c) is not None:
                    out.append(s)
        self._sieves[c] = out
        return out

    def minimal_covering_sieve(self, c) -> frozenset:
        sieves = self.covering_sieves(c)
        least = frozenset.intersection(*sieves)
        if least not in sieves:
            raise AssertionError("covering sieves are not closed under intersection")
        return least

    def covering_families(self, c, max_size: int | None = None) -> list[tuple]:
        below = self.cat.below(c)
        top = len(below) if max_size is None else min(max_size, len(below))
        out = []
        for r in range(top + 1):
            for fam in itertools.combinations(below, r):
                if self.generic_cover(fam, c).is_cover:
                    out.append(fam)
        return out


def site_of(A, n_max=DEFAULT_N_MAX, h_max=DEFAULT_H_MAX) -> Site:
    memo = A.memo()
    key = ("site", n_max, h_max)
    if key not in memo:
        memo[key] = Site(A, n_max, h_max)
    return memo[key]


def object_of(A, x) -> int:
    return build_cinf(A).class_of(x)


def _semiring_cover(A: HAlgebra, cat, family, c) -> CoverResult:
    R = A.semiring
    gens = [A.to_structure(cat.rep(x)) for x in family]
    n = len(gens)
    zero_coeffs = (R.zero,) * n
    coeffs = {R.zero: zero_coeffs}
    order = [R.zero]
    for i, g in enumerate(gens):
        for r in R.elements:
            e = R.mul[r][g]
            if e not in coeffs:
                coeffs[e] = zero_coeffs[:i] + (r,) + zero_coeffs[i + 1:]
                order.append(e)
    i = 0
    while i < len(order):
        e = order[i]
        for f in list(order[: i + 1]):
            s = R.add[e][f]
            if s not in coeffs:
                coeffs[s] = tuple(R.add[a][b] for a, b in zip(coeffs[e], coeffs[f]))
                order.append(s)
        i += 1
    cr = A.to_structure(cat.rep(c))
    for p in power_sequence(cr, lambda a, b: R.mul[a][b]):
        if p in coeffs:
            a = coeffs[p]
            xi = tuple(R.mul[R.mul[a[j]][gens[j]]][cr] for j in range(n))
            w = witness_from_xi(cat, xi, n) if n else empty_partition(cat)
            if w is None or w.target != c:
                raise AssertionError("ideal decomposition does not give a partition")
            mp = MultiPartition(RootedTree((None,) + (0,) * n), (c,) + w.parts, ((0, w),))
            return CoverResult(Verdict.COVER, mp, "ideal generated by the family contains a power of the target")
    return CoverResult(Verdict.NOT_COVER, None, "no power of the target lies in the ideal of the family")


def _monoid_cover(cat, family, c) -> CoverResult:
    if c == cat.zero and not family:
        return CoverResult(Verdict.COVER, MultiPartition(RootedTree((None,)), (c,), ((0, empty_partition(cat)),)),
                           "the empty partition covers 0^inf")
    for x in family:
        if cat.hom[c][x]:
            return CoverResult(Verdict.COVER, MultiPartition(RootedTree((None,)), (c,)),
                               "family contains an isomorphism onto the target")
    return CoverResult(Verdict.NOT_COVER, None, "no member is isomorphic to the target")


def is_cover(A, family, c, strategy: str = "auto", n_max=DEFAULT_N_MAX, h_max=DEFAULT_H_MAX) -> CoverResult:
    from . import tropical

    if isinstance(A, tropical.HConv) or strategy == TROPICAL:
        if not isinstance(A, tropical.HConv):
            raise StrategyError(f"tropical strategy needs the tropical algebra; use {_exact_for(A)}")
        ok = tropical.trop_cover_check(list(family), c)
        return CoverResult(Verdict.COVER if ok else Verdict.NOT_COVER)
    cat = build_cinf(A)
    family = list(dict.fromkeys(family))
    for x in family:
        if not cat.hom[x][c]:
            raise ValueError(f"family member {cat.label(x)} has no morphism to {cat.label(c)}")
    if strategy == "auto":
        strategy = SEMIRING if isinstance(A, HAlgebra) else MONOID if isinstance(A, SMAlgebra) else GENERIC
    if strategy == SEMIRING:
        if not isinstance(A, HAlgebra):
            raise StrategyError(f"semiring strategy needs H of a semiring; available: {_exact_for(A)}")
        return _semiring_cover(A, cat, family, c)
    if strategy == MONOID:
        if not isinstance(A, SMAlgebra):
            raise StrategyError(f"monoid strategy needs S of a monoid; available: {_exact_for(A)}")
        return _monoid_cover(cat, family, c)
    if strategy == GENERIC:
        return site_of(A, n_max, h_max).generic_cover(family, c)
    raise StrategyError(f"unknown strategy {strategy!r}")


def _exact_for(A) -> str:
    if isinstance(A, HAlgebra):
        return "semiring, generic"
    if isinstance(A, SMAlgebra):
        return "monoid, generic"
    return "generic"


# ----------------------------------------------------------- site morphisms

@dataclass
class SiteMorphismReport:
    object_map: dict
    failures: list = field(default_factory=list)
    partitions_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def bijective(self) -> bool:
        return len(set(self.object_map.values())) == len(self.object_map)


def site_morphism(phi: SAlgebraMorphism, n_max=DEFAULT_N_MAX) -> SiteMorphismReport:
    A, B = phi.source, phi.target
    ca, cb = build_cinf(A), build_cinf(B)
    omap = {o.index: cb.class_of(phi(o.rep, 1)) for o in ca.objects}
    rep = SiteMorphismReport(omap)
    for o in ca.objects:
        for x in o.members or ():
            if cb.class_of(phi(x, 1)) != omap[o.index]:
                rep.failures.append(f"object map not well defined on {A.format(x)}")
    for a in range(len(ca)):
        for b in range(len(ca)):
            if ca.hom[a][b] and not cb.hom[omap[a]][omap[b]]:
                rep.failures.append(f"morphism {ca.label(a)} -> {ca.label(b)} not preserved")
            if omap[ca.product(a, b)] != cb.product(omap[a], omap[b]):
                rep.failures.append(f"product {ca.label(a)}*{ca.label(b)} not preserved")
    if omap[ca.terminal] != cb.terminal:
        rep.failures.append("terminal object not preserved")
    top = n_max if phi.max_level is None else min(n_max, phi.max_level)
    site = site_of(A, top)
    for w in site.all_partitions():
        if w.arity == 0:
            continue
        image = witness_from_xi(cb, phi(w.xi, w.arity), w.arity)
        rep.partitions_checked += 1
        if image is None or image.target != omap[w.target] or image.parts != tuple(omap[p] for p in w.parts):
            rep.failures.append(f"partition {A.format(w.xi)} not carried to a partition")
    return rep
