"""Words over a graph product and their reduced, canonical normal forms.

A syllable is a pair ``(vertex, element)`` with a nontrivial element of that
vertex group: a nonzero table index, or a nonzero integer exponent for a Z
vertex.  Words and normal forms are tuples of syllables.  The normal form of an
element is the lexicographically least of its reduced expressions, so equality
of group elements is tuple equality.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GuardExceeded
from .graph import SimplicialGraph
from .vertex_groups import FiniteGroupTable, InfiniteCyclic, VertexGroup, validate_table

Syllable = tuple[int, int]
Word = Sequence[Syllable]
NormalForm = tuple[Syllable, ...]

IDENTITY: NormalForm = ()

MAX_SHUFFLE_LENGTH = 10
MAX_CLOSURE_SIZE = 10 ** 5


@dataclass(frozen=True)
class Presentation:
    graph: SimplicialGraph
    groups: tuple[VertexGroup, ...]

    def __post_init__(self):
        groups = tuple(self.groups)
        object.__setattr__(self, "groups", groups)
        if len(groups) != self.graph.vertex_count:
            raise ValueError(f"{len(groups)} vertex groups for {self.graph.vertex_count} vertices")
        for v, g in enumerate(groups):
            if isinstance(g, FiniteGroupTable):
                if g.order < 2:
                    raise ValueError(f"vertex group {v} is trivial")
                report = _valid(g)
                if not report.ok:
                    raise ValueError(f"vertex group {v}: {report.violations[0]}")
            elif not isinstance(g, InfiniteCyclic):
                raise TypeError(f"unsupported vertex group {g!r}")

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @cached_property
    def blocking_masks(self) -> tuple[int, ...]:
        """For each vertex v: the vertices whose syllables cannot pass a v-syllable (v included)."""
        full = self.graph.full_mask
        return tuple(full & ~n for n in self.graph.neighbour_masks)

    @cached_property
    def neighbour_masks(self) -> tuple[int, ...]:
        return self.graph.neighbour_masks

    @property
    def has_infinite_vertex(self) -> bool:
        return any(isinstance(g, InfiniteCyclic) for g in self.groups)

    def check_syllable(self, s: Syllable) -> None:
        v, e = s
        if not 0 <= v < self.vertex_count:
            raise ValueError(f"syllable {v}:{e} names a vertex out of range")
        g = self.groups[v]
        if isinstance(g, FiniteGroupTable):
            if not 0 < e < g.order:
                raise ValueError(f"syllable {v}:{e} is not a nontrivial element of a group of order {g.order}")
        elif e == 0:
            raise ValueError(f"syllable {v}:0 is trivial")


_valid_cache: dict[FiniteGroupTable, object] = {}


def _valid(t: FiniteGroupTable):
    r = _valid_cache.get(t)
    if r is None:
        r = _valid_cache[t] = validate_table(t)
    return r


def vertex_syllables(p: Presentation, v: int, exp_bound: int = 1) -> list[Syllable]:
    """Nontrivial syllables at v in canonical order (Z exponents limited to |e| <= exp_bound)."""
    g = p.groups[v]
    if isinstance(g, FiniteGroupTable):
        return [(v, e) for e in range(1, g.order)]
    return [(v, e) for e in range(-exp_bound, exp_bound + 1) if e != 0]


def all_syllables(p: Presentation, exp_bound: int = 1) -> list[Syllable]:
    out = []
    for v in range(p.vertex_count):
        out.extend(vertex_syllables(p, v, exp_bound))
    return out


def generator_syllables(p: Presentation, v: int) -> list[Syllable]:
    """Every nontrivial element of a table vertex, or the generator of a Z vertex."""
    g = p.groups[v]
    if isinstance(g, FiniteGroupTable):
        return [(v, e) for e in range(1, g.order)]
    return [(v, 1)]


def _insert(p: Presentation, acc: list[Syllable], s: Syllable) -> None:
    """Right-multiply the reduced word ``acc`` by one syllable, in place."""
    v, e = s
    nbr = p.neighbour_masks[v]
    for i in range(len(acc) - 1, -1, -1):
        u, f = acc[i]
        if u == v:
            m = p.groups[v].mul(f, e)
            if m == 0:
                del acc[i]
            else:
                acc[i] = (v, m)
            return
        if not nbr >> u & 1:
            break
    acc.append(s)


def canonical(p: Presentation, reduced: Sequence[Syllable]) -> NormalForm:
    """Lex-least shuffle of a reduced word: repeatedly take the least syllable that can move first."""
    rest = list(reduced)
    blocking = p.blocking_masks
    out = []
    while rest:
        blocked = 0
        best = -1
        for i, s in enumerate(rest):
            if not blocked >> s[0] & 1:
                if best < 0 or s < rest[best]:
                    best = i
            blocked |= blocking[s[0]]
        out.append(rest.pop(best))
    return tuple(out)


def reduce(p: Presentation, w: Iterable[Syllable]) -> NormalForm:
    acc: list[Syllable] = []
    for s in w:
        s = (int(s[0]), int(s[1]))
        p.check_syllable(s)
        _insert(p, acc, s)
    return canonical(p, acc)


def _reduce_trusted(p: Presentation, start: Sequence[Syllable], rest: Iterable[Syllable]) -> NormalForm:
    acc = list(start)
    for s in rest:
        _insert(p, acc, s)
    return canonical(p, acc)


def invert(p: Presentation, g: Sequence[Syllable]) -> NormalForm:
    inv = [(v, p.groups[v].inv(e)) for v, e in reversed(g)]
    return canonical(p, inv)


def multiply(p: Presentation, *elements: Sequence[Syllable]) -> NormalForm:
    """Product of reduced words."""
    if not elements:
        return IDENTITY
    acc = list(elements[0])
    for h in elements[1:]:
        for s in h:
            _insert(p, acc, s)
    return canonical(p, acc)


def conjugate(p: Presentation, w: Sequence[Syllable], g: Sequence[Syllable]) -> NormalForm:
    """w g w^-1."""
    return multiply(p, w, g, invert(p, w))


def power(p: Presentation, g: Sequence[Syllable], k: int) -> NormalForm:
    if k < 0:
        g, k = invert(p, g), -k
    out: NormalForm = IDENTITY
    base = tuple(g)
    while k:
        if k & 1:
            out = multiply(p, out, base)
        base = multiply(p, base, base)
        k >>= 1
    return out


def support(g: Sequence[Syllable]) -> frozenset[int]:
    return frozenset(v for v, _ in g)


def length(g: Sequence[Syllable]) -> int:
    return len(g)


def _first_mask(p: Presentation, g: Sequence[Syllable]) -> int:
    blocking = p.blocking_masks
    blocked = 0
    first = 0
    for v, _ in g:
        if not blocked >> v & 1:
            first |= 1 << v
        blocked |= blocking[v]
    return first


def first_vertices(p: Presentation, g: Sequence[Syllable]) -> frozenset[int]:
    """Vertices that can carry the first syllable of a reduced expression of g."""
    m = _first_mask(p, g)
    return frozenset(v for v in range(p.vertex_count) if m >> v & 1)


def last_vertices(p: Presentation, g: Sequence[Syllable]) -> frozenset[int]:
    m = _first_mask(p, list(reversed(g)))
    return frozenset(v for v in range(p.vertex_count) if m >> v & 1)


def is_reduced(p: Presentation, w: Sequence[Syllable]) -> bool:
    return len(_reduce_trusted(p, (), w)) == len(w)


def retract(p: Presentation, x: Iterable[int], g: Sequence[Syllable]) -> NormalForm:
    """Image of g under the retraction onto the full subgroup on x."""
    keep = frozenset(x)
    return _reduce_trusted(p, (), [s for s in g if s[0] in keep])


def shuffle_closure(p: Presentation, g: Sequence[Syllable],
                    max_size: int = MAX_CLOSURE_SIZE) -> set[NormalForm]:
    """Every arrangement reachable from g by swapping adjacent syllables of adjacent vertices."""
    g = tuple(g)
    if len(g) > MAX_SHUFFLE_LENGTH:
        raise GuardExceeded(f"shuffle closure limited to length {MAX_SHUFFLE_LENGTH}")
    adj = p.graph.adjacent
    seen = {g}
    queue = deque([g])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a[0] != b[0] and adj(a[0], b[0]):
                nw = w[:i] + (b, a) + w[i + 2:]
                if nw not in seen:
                    seen.add(nw)
                    if len(seen) > max_size:
                        raise GuardExceeded(f"shuffle closure exceeded {max_size} words")
                    queue.append(nw)
    return seen


def parse_word(p: Presentation | None, text: str) -> tuple[Syllable, ...]:
    """Parse space separated ``v:e`` tokens; validates against p when given."""
    out = []
    for tok in text.split():
        try:
            v, e = tok.split(":")
            s = (int(v), int(e))
        except ValueError:
            raise ValueError(f"bad syllable token {tok!r}") from None
        if p is not None:
            p.check_syllable(s)
        out.append(s)
    return tuple(out)


def format_word(g: Sequence[Syllable]) -> str:
    return " ".join(f"{v}:{e}" for v, e in g)
