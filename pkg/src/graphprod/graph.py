"""Finite simplicial graphs and the combinatorics of stars, cones and components.

Vertices are the integers ``0 .. vertex_count - 1``.  Internally vertex sets are
also handled as bitmasks, which keeps the exhaustive searches cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import GuardExceeded

MAX_CONELESS_SEARCH = 24


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _members(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@dataclass(frozen=True)
class SimplicialGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        normal = set()
        for e in self.edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            for x in (u, v):
                if not 0 <= x < self.vertex_count:
                    raise ValueError(f"edge endpoint {x} out of range")
            normal.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normal))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]] = ()) -> SimplicialGraph:
        pairs = [tuple(e) for e in edges]
        seen = set()
        for u, v in pairs:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {u}-{v}")
            seen.add(key)
        return cls(n, frozenset(pairs))

    @classmethod
    def path(cls, n: int) -> SimplicialGraph:
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> SimplicialGraph:
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> SimplicialGraph:
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def edgeless(cls, n: int) -> SimplicialGraph:
        return cls(n)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @cached_property
    def neighbour_masks(self) -> tuple[int, ...]:
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def star_masks(self) -> tuple[int, ...]:
        return tuple(m | (1 << v) for v, m in enumerate(self.neighbour_masks))

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.neighbour_masks[u] >> v & 1)

    def induced(self, vertices: Iterable[int]) -> tuple[SimplicialGraph, list[int]]:
        """Full subgraph on ``vertices``; returns it with the old labels in new order."""
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return SimplicialGraph(len(labels), frozenset(edges)), labels

    def complement(self) -> SimplicialGraph:
        all_pairs = set(combinations(range(self.vertex_count), 2))
        return SimplicialGraph(self.vertex_count, frozenset(all_pairs - self.edges))


def _check_vertex(g: SimplicialGraph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise ValueError(f"vertex {v} out of range for a graph on {g.vertex_count} vertices")


def link(g: SimplicialGraph, v: int) -> frozenset[int]:
    _check_vertex(g, v)
    return _members(g.neighbour_masks[v])


def star(g: SimplicialGraph, v: int) -> frozenset[int]:
    _check_vertex(g, v)
    return _members(g.star_masks[v])


def star_mask_of(g: SimplicialGraph, mask: int) -> int:
    """Intersection of the stars of the vertices in ``mask`` (all vertices if empty)."""
    out = g.full_mask
    v = 0
    while mask:
        if mask & 1:
            out &= g.star_masks[v]
        mask >>= 1
        v += 1
    return out


def star_set(g: SimplicialGraph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    if not s:
        raise ValueError("star_set needs a nonempty vertex set")
    for v in s:
        _check_vertex(g, v)
    return _members(star_mask_of(g, _mask(s)))


def central_vertices(g: SimplicialGraph) -> frozenset[int]:
    full = g.full_mask
    return frozenset(v for v in g.vertices if g.star_masks[v] == full)


def is_coneless(g: SimplicialGraph, u: Iterable[int]) -> bool:
    u = frozenset(u)
    if not u:
        raise ValueError("is_coneless needs a nonempty vertex set")
    for v in u:
        _check_vertex(g, v)
    return star_mask_of(g, _mask(u)) == 0


def minimal_coneless_subsets(g: SimplicialGraph) -> list[frozenset[int]]:
    """All inclusion-minimal coneless vertex sets, sorted lexicographically.

    Level-wise search: a set of size k is only examined if it extends a
    non-coneless set of size k - 1, and kept only if every (k-1)-subset is
    non-coneless.
    """
    n = g.vertex_count
    if n > MAX_CONELESS_SEARCH:
        raise GuardExceeded(f"coneless search limited to {MAX_CONELESS_SEARCH} vertices, got {n}")
    stars = g.star_masks
    found: set[int] = set()
    # mask -> intersection of stars, for non-coneless sets of the current size
    level = {1 << v: stars[v] for v in range(n)}
    found.update(m for m, s in level.items() if s == 0)
    level = {m: s for m, s in level.items() if s != 0}
    while level:
        nxt: dict[int, int] = {}
        for m, s in level.items():
            top = m.bit_length()
            for v in range(top, n):
                cand = m | (1 << v)
                if cand in nxt:
                    continue
                inter = s & stars[v]
                if inter == 0:
                    # minimal iff all maximal proper subsets are non-coneless
                    rest = cand
                    ok = True
                    while rest:
                        low = rest & -rest
                        rest ^= low
                        if (cand ^ low) not in level:
                            ok = False
                            break
                    if ok:
                        found.add(cand)
                    nxt[cand] = 0
                else:
                    nxt[cand] = inter
        level = {m: s for m, s in nxt.items() if s != 0}
    out = [_members(m) for m in found]
    out.sort(key=lambda s: sorted(s))
    return out


def irreducible_components(g: SimplicialGraph) -> list[frozenset[int]]:
    """Vertex sets of the connected components of the complement graph."""
    n = g.vertex_count
    full = g.full_mask
    seen = 0
    comps = []
    for v in range(n):
        if seen >> v & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            u = low.bit_length() - 1
            new = (full & ~g.star_masks[u]) & ~comp
            comp |= new
            frontier |= new
        seen |= comp
        comps.append(_members(comp))
    comps.sort(key=lambda s: sorted(s))
    return comps


def format_vertex_set(s: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"
