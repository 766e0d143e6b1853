"""Concrete vertex groups: finite groups given by multiplication tables and Z.

Elements of a table group are the indices ``0 .. order - 1`` with the identity
at index 0.  Elements of the infinite cyclic group are Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from typing import Callable, Hashable, NamedTuple, Sequence, Union

from .errors import GuardExceeded

MAX_SUBGROUP_ORDER = 256
MAX_ENDOMORPHISM_ORDER = 16


@dataclass(frozen=True)
class FiniteGroupTable:
    product: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.product)
        m = len(rows)
        if m == 0:
            raise ValueError("a group table needs at least one element")
        if any(len(r) != m for r in rows):
            raise ValueError("group table must be square")
        object.__setattr__(self, "product", rows)

    @property
    def order(self) -> int:
        return len(self.product)

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_finite(self) -> bool:
        return True

    def mul(self, a: int, b: int) -> int:
        return self.product[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            row = self.product[a]
            for b in range(self.order):
                if row[b] == 0:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = self.product[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.product[x][a]
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroupTable(order={self.order})"


@dataclass(frozen=True)
class InfiniteCyclic:
    """The group Z, written additively; the generator is 1."""

    @property
    def order(self) -> None:
        return None

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_finite(self) -> bool:
        return False

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a

    def power(self, a: int, k: int) -> int:
        return a * k


VertexGroup = Union[FiniteGroupTable, InfiniteCyclic]


@dataclass(frozen=True)
class AllFinite:
    def admits(self, order: int) -> bool:
        return True

    def __str__(self):
        return "all"


@dataclass(frozen=True)
class PFinite:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def admits(self, order: int) -> bool:
        return is_power_of(order, self.p)

    def __str__(self):
        return f"p={self.p}"


ClassTag = Union[AllFinite, PFinite]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def is_power_of(n: int, p: int) -> bool:
    """True for n = p^k with k >= 0."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


class ValidityReport(NamedTuple):
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self):
        return self.ok


def validate_table(t: FiniteGroupTable) -> ValidityReport:
    m = t.order
    rows = t.product
    bad: list[str] = []
    full = set(range(m))
    for a in range(m):
        if any(not 0 <= x < m for x in rows[a]):
            bad.append(f"row {a} has entries out of range")
    if bad:
        return ValidityReport(False, tuple(bad))
    if list(rows[0]) != list(range(m)):
        bad.append("row 0 is not the identity map")
    if [rows[a][0] for a in range(m)] != list(range(m)):
        bad.append("column 0 is not the identity map")
    for a in range(m):
        if set(rows[a]) != full:
            bad.append(f"row {a} is not a permutation")
        if {rows[b][a] for b in range(m)} != full:
            bad.append(f"column {a} is not a permutation")
    if bad:
        return ValidityReport(False, tuple(bad))
    for a in range(m):
        ra = rows[a]
        for b in range(m):
            ab = ra[b]
            rab = rows[ab]
            rb = rows[b]
            for c in range(m):
                if rab[c] != ra[rb[c]]:
                    bad.append(f"associativity fails at ({a},{b},{c})")
                    return ValidityReport(False, tuple(bad))
    return ValidityReport(True, ())


def _check_element(t: FiniteGroupTable, *xs: int) -> None:
    for x in xs:
        if not 0 <= x < t.order:
            raise ValueError(f"element {x} out of range for a group of order {t.order}")


# --- constructing tables -------------------------------------------------


def from_elements(elements: Sequence[Hashable], mul: Callable) -> FiniteGroupTable:
    """Tabulate a group given as a list of elements whose first entry is the identity."""
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("elements must be distinct")
    rows = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroupTable(tuple(map(tuple, rows)))


def generate(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> FiniteGroupTable:
    """Close ``gens`` under ``mul`` (breadth first) and tabulate the result."""
    elements = [identity]
    seen = {identity}
    i = 0
    while i < len(elements):
        x = elements[i]
        for s in gens:
            y = mul(x, s)
            if y not in seen:
                seen.add(y)
                elements.append(y)
        i += 1
    return from_elements(elements, mul)


def cyclic(n: int) -> FiniteGroupTable:
    return FiniteGroupTable(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def direct_product(a: FiniteGroupTable, b: FiniteGroupTable) -> FiniteGroupTable:
    """A x B with (x, y) stored at index x * |B| + y."""
    nb = b.order
    rows = []
    for x1 in range(a.order):
        for y1 in range(nb):
            rows.append(tuple(a.mul(x1, x2) * nb + b.mul(y1, y2)
                              for x2 in range(a.order) for y2 in range(nb)))
    return FiniteGroupTable(tuple(rows))


def _perm_mul(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def symmetric(n: int) -> FiniteGroupTable:
    ident = tuple(range(n))
    elements = [ident] + [p for p in permutations(range(n)) if p != ident]
    return from_elements(elements, _perm_mul)


def metacyclic(m: int, n: int, r: int) -> FiniteGroupTable:
    """C_m semidirect C_n where the generator of C_n acts by x -> r x."""
    if pow(r, n, m) != 1 % m:
        raise ValueError("r must have multiplicative order dividing n")

    def mul(x, y):
        return ((x[0] + pow(r, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return generate([(1, 0), (0, 1)], mul, (0, 0))


def dihedral(n: int) -> FiniteGroupTable:
    """Dihedral group of order 2n."""
    return metacyclic(n, 2, n - 1)


def quaternion() -> FiniteGroupTable:
    # unit quaternions as (w, x, y, z) integer tuples
    def mul(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    return generate([(0, 1, 0, 0), (0, 0, 1, 0)], mul, (1, 0, 0, 0))


def alternating4() -> FiniteGroupTable:
    return generate([(1, 2, 0, 3), (1, 0, 3, 2)], _perm_mul, (0, 1, 2, 3))


def groups_of_order(n: int) -> list[tuple[str, FiniteGroupTable]]:
    """One table per isomorphism type, for 1 <= n <= 12."""
    c = cyclic
    dp = direct_product
    catalog = {
        1: [("C1", c(1))],
        2: [("C2", c(2))],
        3: [("C3", c(3))],
        4: [("C4", c(4)), ("C2xC2", dp(c(2), c(2)))],
        5: [("C5", c(5))],
        6: [("C6", c(6)), ("S3", symmetric(3))],
        7: [("C7", c(7))],
        8: [("C8", c(8)), ("C4xC2", dp(c(4), c(2))), ("C2xC2xC2", dp(dp(c(2), c(2)), c(2))),
            ("D4", dihedral(4)), ("Q8", quaternion())],
        9: [("C9", c(9)), ("C3xC3", dp(c(3), c(3)))],
        10: [("C10", c(10)), ("D5", dihedral(5))],
        11: [("C11", c(11))],
        12: [("C12", c(12)), ("C6xC2", dp(c(6), c(2))), ("A4", alternating4()),
             ("D6", dihedral(6)), ("Dic3", metacyclic(3, 4, 2))],
    }
    if n not in catalog:
        raise ValueError("catalog covers orders 1..12")
    return catalog[n]


# --- subgroups -----------------------------------------------------------


@dataclass(frozen=True)
class SubgroupHandle:
    parent: FiniteGroupTable
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", mem)
        s = set(mem)
        if 0 not in s:
            raise ValueError("subgroup must contain the identity")
        t = self.parent
        for a in mem:
            if t.inv(a) not in s:
                raise ValueError("subset not closed under inverses")
            for b in mem:
                if t.mul(a, b) not in s:
                    raise ValueError("subset not closed under products")

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    def is_normal(self) -> bool:
        t = self.parent
        s = self.member_set
        return all(t.mul(t.mul(g, h), t.inv(g)) in s for g in range(t.order) for h in self.members)

    def __repr__(self):
        return f"SubgroupHandle(order={self.order}, members={list(self.members)})"


def _closure(t: FiniteGroupTable, gens) -> frozenset[int]:
    out = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = t.mul(x, s)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def subgroup_generated(t: FiniteGroupTable, gens) -> SubgroupHandle:
    gens = list(gens)
    _check_element(t, *gens)
    return SubgroupHandle(t, tuple(_closure(t, gens)))


def whole_group(t: FiniteGroupTable) -> SubgroupHandle:
    return SubgroupHandle(t, tuple(range(t.order)))


def trivial_subgroup(t: FiniteGroupTable) -> SubgroupHandle:
    return SubgroupHandle(t, (0,))


def conjugacy_class(t: FiniteGroupTable, a: int) -> frozenset[int]:
    return frozenset(t.mul(t.mul(g, a), t.inv(g)) for g in range(t.order))


def vertex_conjugate(t: FiniteGroupTable, a: int, b: int) -> int | None:
    """Least c with c a c^-1 = b, or None."""
    _check_element(t, a, b)
    for c in range(t.order):
        if t.mul(t.mul(c, a), t.inv(c)) == b:
            return c
    return None


def vertex_centralizer(t: FiniteGroupTable, a: int) -> SubgroupHandle:
    _check_element(t, a)
    return SubgroupHandle(t, tuple(c for c in range(t.order) if t.mul(c, a) == t.mul(a, c)))


def normal_subgroups(t: FiniteGroupTable) -> list[SubgroupHandle]:
    """Every normal subgroup, as joins of normal closures of single elements."""
    if t.order > MAX_SUBGROUP_ORDER:
        raise GuardExceeded(f"subgroup enumeration limited to order {MAX_SUBGROUP_ORDER}")
    closures = set()
    for a in range(t.order):
        closures.add(_closure(t, conjugacy_class(t, a)))
    closures = sorted(closures, key=lambda s: (len(s), sorted(s)))
    found = {frozenset([0])}
    frontier = list(found)
    while frontier:
        nxt = []
        for n in frontier:
            for c in closures:
                if c <= n:
                    continue
                j = _closure(t, n | c)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return [SubgroupHandle(t, tuple(s)) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


def normal_subgroups_of_index_at_most(t: FiniteGroupTable, k: int,
                                      c: ClassTag = AllFinite()) -> list[SubgroupHandle]:
    return [n for n in normal_subgroups(t) if n.index <= k and c.admits(n.index)]


def intersect(subgroups: Sequence[SubgroupHandle]) -> SubgroupHandle:
    if not subgroups:
        raise ValueError("empty intersection")
    t = subgroups[0].parent
    common = set(range(t.order))
    for s in subgroups:
        common &= s.member_set
    return SubgroupHandle(t, tuple(common))


def fully_characteristic_core(t: FiniteGroupTable, k: int, c: ClassTag = AllFinite()) -> SubgroupHandle:
    """Intersection of all co-C normal subgroups of index at most k."""
    if k < 1:
        raise ValueError("index bound must be at least 1")
    return intersect(normal_subgroups_of_index_at_most(t, k, c))


# --- homomorphisms -------------------------------------------------------


class Endomorphism(NamedTuple):
    images: tuple[int, ...]
    automorphism: bool


@lru_cache(maxsize=None)
def minimal_generating_set(t: FiniteGroupTable) -> tuple[int, ...]:
    """A smallest generating set, lexicographically least among those."""
    m = t.order
    if m == 1:
        return ()
    for size in range(1, m):
        for gens in combinations(range(1, m), size):
            if len(_closure(t, gens)) == m:
                return gens
    raise AssertionError("unreachable: the whole group generates itself")


def _extend(source: FiniteGroupTable, target: FiniteGroupTable, gens: Sequence[int],
            images: Sequence[int]) -> tuple[int, ...] | None:
    """Extend generator images along the Cayley graph; None if inconsistent."""
    f = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for s, fs in zip(gens, images):
                y = source.mul(x, s)
                fy = target.mul(fx, fs)
                old = f.get(y)
                if old is None:
                    f[y] = fy
                    nxt.append(y)
                elif old != fy:
                    return None
        frontier = nxt
    return tuple(f[x] for x in range(source.order))


def is_homomorphism(source: FiniteGroupTable, target: FiniteGroupTable, f: Sequence[int]) -> bool:
    if len(f) != source.order:
        return False
    return all(f[source.mul(x, y)] == target.mul(f[x], f[y])
               for x in range(source.order) for y in range(source.order))


def enumerate_homomorphisms(source: FiniteGroupTable, target: FiniteGroupTable) -> list[tuple[int, ...]]:
    if source.order > MAX_ENDOMORPHISM_ORDER or target.order > MAX_ENDOMORPHISM_ORDER:
        raise GuardExceeded(f"homomorphism enumeration limited to order {MAX_ENDOMORPHISM_ORDER}")
    gens = minimal_generating_set(source)
    out = set()
    # a generator of order k must land on an element whose order divides k
    choices = [[y for y in range(target.order)
                if source.element_order(s) % target.element_order(y) == 0] for s in gens]
    for images in product(*choices):
        f = _extend(source, target, gens, images)
        if f is not None:
            out.add(f)
    return sorted(out)


def enumerate_endomorphisms(t: FiniteGroupTable) -> list[Endomorphism]:
    return [Endomorphism(f, len(set(f)) == t.order) for f in enumerate_homomorphisms(t, t)]


def automorphisms(t: FiniteGroupTable) -> list[tuple[int, ...]]:
    return [e.images for e in enumerate_endomorphisms(t) if e.automorphism]


def quotient(t: FiniteGroupTable, n: SubgroupHandle) -> tuple[FiniteGroupTable, tuple[int, ...]]:
    """Coset table of t/n (cosets ordered by least representative) and the projection."""
    if n.parent != t:
        raise ValueError("subgroup belongs to a different table")
    if not n.is_normal():
        raise ValueError("quotient needs a normal subgroup")
    proj = [-1] * t.order
    reps = []
    for x in range(t.order):
        if proj[x] == -1:
            idx = len(reps)
            reps.append(x)
            for h in n.members:
                proj[t.mul(x, h)] = idx
    rows = tuple(tuple(proj[t.mul(a, b)] for b in reps) for a in reps)
    return FiniteGroupTable(rows), tuple(proj)


def kp_subgroup(t: FiniteGroupTable, p: int) -> SubgroupHandle:
    """Subgroup generated by all commutators and all p-th powers."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    gens = set()
    for a in range(t.order):
        gens.add(t.power(a, p))
        for b in range(t.order):
            gens.add(t.mul(t.mul(a, b), t.mul(t.inv(a), t.inv(b))))
    return SubgroupHandle(t, tuple(_closure(t, gens)))


def aut_p(t: FiniteGroupTable, p: int) -> list[tuple[int, ...]]:
    """Automorphisms acting trivially on t / K_p."""
    if t.order > MAX_ENDOMORPHISM_ORDER:
        raise GuardExceeded(f"automorphism enumeration limited to order {MAX_ENDOMORPHISM_ORDER}")
    k = kp_subgroup(t, p)
    return [a for a in automorphisms(t)
            if all(t.mul(a[g], t.inv(g)) in k for g in range(t.order))]


def decompose_direct_endomorphism(a: FiniteGroupTable, b: FiniteGroupTable, f: Sequence[int]):
    """Split an endomorphism of a x b (indexed as in direct_product) into (alpha, gamma, delta, beta).

    f(x, y) = (alpha(x) delta(y), gamma(x) beta(y)).
    """
    ab = direct_product(a, b)
    f = tuple(f)
    if not is_homomorphism(ab, ab, f):
        raise ValueError("map is not an endomorphism of the direct product")
    nb = b.order
    split = [divmod(f[i], nb) for i in range(ab.order)]
    alpha = tuple(split[x * nb][0] for x in range(a.order))
    gamma = tuple(split[x * nb][1] for x in range(a.order))
    delta = tuple(split[y][0] for y in range(nb))
    beta = tuple(split[y][1] for y in range(nb))
    return alpha, gamma, delta, beta
