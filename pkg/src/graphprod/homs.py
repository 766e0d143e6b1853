"""Homomorphisms between graph products given by their values on vertex groups.

A family stores, for each source vertex, the image of every nontrivial element
(table vertex) or of the generator 1 (Z vertex).  By the universal property of
graph products such data extends to a unique homomorphism once the vertex
relations and the edge commutations are respected; ``validate_family`` checks
exactly that.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .conjugacy import are_conjugate, cyclic_reduction
from .errors import PreconditionError, VerificationError
from .graph import minimal_coneless_subsets
from .vertex_groups import FiniteGroupTable, ValidityReport
from .words import (
    IDENTITY,
    NormalForm,
    Presentation,
    Syllable,
    _first_mask,
    _reduce_trusted,
    all_syllables,
    canonical,
    conjugate,
    generator_syllables,
    invert,
    multiply,
    power,
    reduce,
)

DEFAULT_EXP_BOUND = 8


@dataclass(frozen=True)
class VertexMapFamily:
    source: Presentation
    target: Presentation
    maps: Mapping[int, Mapping[int, NormalForm]] = field(hash=False)

    def __post_init__(self):
        maps = {}
        for v in range(self.source.vertex_count):
            if v not in self.maps:
                raise ValueError(f"no images given for vertex {v}")
            given = dict(self.maps[v])
            needed = [e for _, e in generator_syllables(self.source, v)]
            missing = [e for e in needed if e not in given]
            if missing:
                raise ValueError(f"vertex {v}: no image for element(s) {missing}")
            extra = set(given) - set(needed)
            if extra:
                raise ValueError(f"vertex {v}: unexpected element(s) {sorted(extra)}")
            maps[v] = {e: reduce(self.target, given[e]) for e in needed}
        object.__setattr__(self, "maps", maps)

    def image_of(self, s: Syllable) -> NormalForm:
        v, e = s
        g = self.source.groups[v]
        if isinstance(g, FiniteGroupTable):
            return self.maps[v][e]
        return power(self.target, self.maps[v][1], e)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target


def validate_family(f: VertexMapFamily) -> ValidityReport:
    src, tgt = f.source, f.target
    bad = []
    for v in range(src.vertex_count):
        g = src.groups[v]
        if isinstance(g, FiniteGroupTable):
            broken = _broken_relation(tgt, g, f.maps[v])
            if broken:
                bad.append(f"vertex {v}: image of {broken[0]}*{broken[1]} is not the product of images")
    for u, v in sorted(src.graph.edges):
        for su in generator_syllables(src, u):
            for sv in generator_syllables(src, v):
                x, y = f.image_of(su), f.image_of(sv)
                if multiply(tgt, x, y) != multiply(tgt, y, x):
                    bad.append(f"edge {u}-{v}: images of {su} and {sv} do not commute")
    return ValidityReport(not bad, tuple(bad))


def _broken_relation(tgt: Presentation, g: FiniteGroupTable, images):
    img = dict(images)
    img[0] = IDENTITY
    for a in range(1, g.order):
        for b in range(1, g.order):
            if multiply(tgt, img[a], img[b]) != img[g.mul(a, b)]:
                return a, b
    return None


def _require_valid(f: VertexMapFamily) -> None:
    r = validate_family(f)
    if not r.ok:
        raise ValueError(f"invalid vertex map family: {r.violations[0]}")


def apply(f: VertexMapFamily, g: Sequence[Syllable]) -> NormalForm:
    acc: list[Syllable] = []
    for s in g:
        acc = list(_reduce_trusted(f.target, acc, f.image_of(s)))
    return canonical(f.target, acc)


def identity_family(p: Presentation) -> VertexMapFamily:
    return family_from_function(p, p, lambda s: (s,))


def family_from_function(source: Presentation, target: Presentation, fn) -> VertexMapFamily:
    """Build a family by evaluating ``fn(syllable) -> word`` on the vertex generators."""
    return VertexMapFamily(source, target, {
        v: {s[1]: fn(s) for s in generator_syllables(source, v)} for v in range(source.vertex_count)})


def compose(f: VertexMapFamily, g: VertexMapFamily) -> VertexMapFamily:
    """f after g."""
    if g.target != f.source:
        raise ValueError("cannot compose: target of g is not the source of f")
    return family_from_function(g.source, f.target, lambda s: apply(f, g.image_of(s)))


def inner(p: Presentation, w: Sequence[Syllable]) -> VertexMapFamily:
    """Conjugation g -> w g w^-1."""
    w = tuple(w)
    winv = invert(p, w)
    return family_from_function(p, p, lambda s: multiply(p, w, (s,), winv))


def same_on_generators(f: VertexMapFamily, g: VertexMapFamily) -> bool:
    return all(f.image_of(s) == g.image_of(s)
               for v in range(f.source.vertex_count) for s in generator_syllables(f.source, v))


def minimal_conjugator_to_vertex(p: Presentation, x: NormalForm, v: int):
    """(w, b) with x = w b w^-1, b a syllable at v and |w| minimal; None if x is not conjugate into G_v.

    After cyclic reduction the conjugator is shortened by peeling off trailing
    syllables from star(v), which normalise G_v and are absorbed into b.
    """
    x = tuple(x)
    if not x:
        return None
    cr = cyclic_reduction(p, x)
    if len(cr.core) != 1 or cr.core[0][0] != v:
        return None
    b = cr.core
    w = cr.conjugator
    star = p.graph.star_masks[v]
    while True:
        last = _first_mask(p, w[::-1]) & star
        if not last:
            break
        u = (last & -last).bit_length() - 1
        i = max(k for k, s in enumerate(w) if s[0] == u)
        t = w[i]
        w = canonical(p, w[:i] + w[i + 1:])
        b = conjugate(p, (t,), b)
    if len(b) != 1 or b[0][0] != v or conjugate(p, w, b) != x:
        raise VerificationError("minimal conjugator does not reproduce x")
    return w, b[0]


def stabilized_vertices(f: VertexMapFamily) -> frozenset[int]:
    """Vertices v whose every generator image is supported in {v}."""
    if not f.is_endomorphism:
        raise ValueError("stabilized vertices are defined for endomorphisms")
    _require_valid(f)
    return _stabilized(f)


def _stabilized(f: VertexMapFamily) -> frozenset[int]:
    out = []
    for v in range(f.source.vertex_count):
        if all(all(u == v for u, _ in img) for img in f.maps[v].values()):
            out.append(v)
    return frozenset(out)


def elements_up_to_length2(p: Presentation, exp_bound: int) -> list[NormalForm]:
    """All g with 1 <= |g| <= 2 (Z exponents bounded), by length then canonical order."""
    letters = all_syllables(p, exp_bound)
    ones = [(s,) for s in letters]
    twos = set()
    for a in letters:
        for b in letters:
            if a[0] != b[0]:
                twos.add(canonical(p, (a, b)))
    return ones + sorted(twos)


class PointwiseCheck(NamedTuple):
    witness: NormalForm | None
    bounded: bool


def _failures(f: VertexMapFamily, exp_bound: int):
    for g in elements_up_to_length2(f.source, exp_bound):
        if not are_conjugate(f.target, apply(f, g), g):
            yield g


def pointwise_inner_up_to_length2(f: VertexMapFamily, exp_bound: int = DEFAULT_EXP_BOUND) -> PointwiseCheck:
    """Least g with |g| <= 2 whose image is not conjugate to g.

    ``bounded`` is set when a Z vertex makes the check finite only up to the
    exponent bound.
    """
    if not f.is_endomorphism:
        raise ValueError("pointwise inner check needs an endomorphism")
    _require_valid(f)
    witness = next(_failures(f, exp_bound), None)
    return PointwiseCheck(witness, f.source.has_infinite_vertex)


@dataclass(frozen=True)
class InnerDecision:
    verdict: str  # "inner", "not_inner" or "bounded_only"
    conjugator: NormalForm | None = None
    witness: NormalForm | None = None

    @property
    def is_inner(self) -> bool:
        return self.verdict == "inner"


def _not_inner(f: VertexMapFamily, g: NormalForm) -> InnerDecision:
    if are_conjugate(f.target, apply(f, g), g):
        raise VerificationError(f"claimed witness {g} maps to a conjugate")
    return InnerDecision("not_inner", witness=g)


def decide_inner(f: VertexMapFamily, exp_bound: int = DEFAULT_EXP_BOUND) -> InnerDecision:
    """Decide whether an endomorphism is an inner automorphism.

    Requires a coneless vertex set (no central vertex).  After the |g| <= 2
    check, the map is corrected by inner automorphisms until every vertex of a
    minimal coneless set U is stabilised; the corrected map must then be the
    identity and the accumulated conjugator realises f.
    """
    if not f.is_endomorphism:
        raise ValueError("decide_inner needs an endomorphism")
    _require_valid(f)
    p = f.source
    cones = minimal_coneless_subsets(p.graph)
    if not cones:
        raise PreconditionError("graph has a central vertex, so no coneless vertex set exists")
    u_set = cones[0]
    check = pointwise_inner_up_to_length2(f, exp_bound)
    if check.witness is not None:
        return _not_inner(f, check.witness)

    psi = f
    acc: NormalForm = IDENTITY  # f = inner(acc) o psi
    stable = _stabilized(psi) & u_set
    while stable != u_set:
        v = min(u_set - stable)
        b = generator_syllables(p, v)[0]
        found = minimal_conjugator_to_vertex(p, psi.image_of(b), v)
        if found is None:
            return _give_up(f, f"image of {b} is not conjugate into its vertex group")
        w, _ = found
        winv = invert(p, w)
        prev = psi
        psi = family_from_function(p, p, lambda s: multiply(p, winv, prev.image_of(s), w))
        acc = multiply(p, acc, w)
        new_stable = _stabilized(psi) & u_set
        if not (stable < new_stable):
            return _give_up(f, f"stabilised part of {sorted(u_set)} did not grow")
        stable = new_stable

    for v in range(p.vertex_count):
        for s in generator_syllables(p, v):
            if psi.image_of(s) != (s,):
                if not are_conjugate(p, f.image_of(s), (s,)):
                    return _not_inner(f, (s,))
                return _give_up(f, f"corrected map moves {s}")
    if not same_on_generators(inner(p, acc), f):
        raise VerificationError("accumulated conjugator does not realise the map")
    return InnerDecision("inner", conjugator=acc)


def _give_up(f: VertexMapFamily, why: str) -> InnerDecision:
    # Only reachable when the |g| <= 2 check was bounded; with finite vertex
    # groups a pointwise inner map always stabilizes, so this means a bug.
    if f.source.has_infinite_vertex:
        return InnerDecision("bounded_only")
    raise PreconditionError(f"inner decision made no progress: {why}")
