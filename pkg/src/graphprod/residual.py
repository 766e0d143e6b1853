"""Finite vertex quotients that separate elements and conjugacy classes.

A quotient family replaces every vertex group by a finite quotient: table
groups are kept (or divided by a normal subgroup), Z vertices are reduced
modulo n.  The induced map onto the graph product of the quotients is where
separation witnesses live; every witness can be re-verified from scratch.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

from .conjugacy import are_conjugate, cyclic_reduction, is_cyclically_reduced
from .errors import GuardExceeded, PreconditionError, VerificationError
from .graph import central_vertices
from .homs import (
    DEFAULT_EXP_BOUND,
    InnerDecision,
    VertexMapFamily,
    apply,
    decide_inner,
    elements_up_to_length2,
    validate_family,
)
from .vertex_groups import (
    AllFinite,
    ClassTag,
    FiniteGroupTable,
    InfiniteCyclic,
    PFinite,
    SubgroupHandle,
    ValidityReport,
    automorphisms,
    cyclic,
    quotient,
)
from .words import NormalForm, Presentation, support

log = logging.getLogger(__name__)

MODULUS_CAP = 2 ** 20


@dataclass(frozen=True)
class Identity:
    """Keep a finite vertex group as it is."""


@dataclass(frozen=True)
class TableQuotient:
    kernel: SubgroupHandle


@dataclass(frozen=True)
class Modulus:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("modulus must be at least 2")


VertexQuotient = Union[Identity, TableQuotient, Modulus]


@dataclass(frozen=True)
class QuotientFamily:
    source: Presentation
    quotients: tuple[VertexQuotient, ...]
    cls: ClassTag = AllFinite()
    moduli_tried: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "quotients", tuple(self.quotients))
        if len(self.quotients) != self.source.vertex_count:
            raise ValueError("one quotient per vertex is required")
        for v, (g, q) in enumerate(zip(self.source.groups, self.quotients)):
            order = _quotient_order(v, g, q)
            if order < 2:
                raise ValueError(f"vertex {v}: quotient is trivial")
            if not self.cls.admits(order):
                raise ValueError(f"vertex {v}: quotient of order {order} is not in class {self.cls}")

    def quotient_orders(self) -> tuple[int, ...]:
        return tuple(_quotient_order(v, g, q)
                     for v, (g, q) in enumerate(zip(self.source.groups, self.quotients)))


def _quotient_order(v, g, q) -> int:
    if isinstance(g, InfiniteCyclic):
        if not isinstance(q, Modulus):
            raise ValueError(f"vertex {v}: Z needs a modulus to become finite")
        return q.n
    if isinstance(q, Identity):
        return g.order
    if isinstance(q, TableQuotient):
        if q.kernel.parent != g:
            raise ValueError(f"vertex {v}: kernel belongs to a different table")
        if not q.kernel.is_normal():
            raise ValueError(f"vertex {v}: kernel is not normal")
        return q.kernel.index
    raise ValueError(f"vertex {v}: a modulus only applies to Z vertices")


def induced_quotient_presentation(q: QuotientFamily) -> tuple[Presentation, VertexMapFamily]:
    src = q.source
    groups = []
    maps = {}
    for v, (g, vq) in enumerate(zip(src.groups, q.quotients)):
        if isinstance(vq, Modulus):
            groups.append(cyclic(vq.n))
            maps[v] = {1: ((v, 1),)}
        elif isinstance(vq, TableQuotient):
            table, proj = quotient(g, vq.kernel)
            groups.append(table)
            maps[v] = {e: (((v, proj[e]),) if proj[e] else ()) for e in range(1, g.order)}
        else:
            groups.append(g)
            maps[v] = {e: ((v, e),) for e in range(1, g.order)}
    target = Presentation(src.graph, tuple(groups))
    fam = VertexMapFamily(src, target, maps)
    report = validate_family(fam)
    if not report.ok:
        raise VerificationError(f"induced quotient map is not a homomorphism: {report.violations[0]}")
    return target, fam


def _base_quotients(p: Presentation, c: ClassTag) -> list:
    out = []
    for v, g in enumerate(p.groups):
        if isinstance(g, FiniteGroupTable):
            if not c.admits(g.order):
                raise PreconditionError(
                    f"vertex {v} has order {g.order}, not a group in class {c}")
            out.append(Identity())
        else:
            out.append(None)
    return out


def _first_modulus(words, c: ClassTag) -> int:
    biggest = 0
    for w in words:
        for _, e in w:
            biggest = max(biggest, abs(e))
    need = 2 * biggest + 1
    if isinstance(c, PFinite):
        n = c.p
        while n < need:
            n *= c.p
        return n
    return max(2, need)


def _next_modulus(n: int, c: ClassTag) -> int:
    return n * c.p if isinstance(c, PFinite) else 2 * n


def _family(p: Presentation, base, n: int, c: ClassTag, tried) -> QuotientFamily:
    quots = tuple(q if q is not None else Modulus(n) for q in base)
    # the escalation log only means something when a modulus is in use
    logged = tuple(tried) if any(q is None for q in base) else ()
    return QuotientFamily(p, quots, c, logged)


def _separating_clauses(p, target, fam, f, g) -> bool:
    ff, gg = apply(fam, f), apply(fam, g)
    return (len(ff) == len(f) and len(gg) == len(g)
            and support(ff) == support(f) and support(gg) == support(g)
            and is_cyclically_reduced(target, ff) and is_cyclically_reduced(target, gg)
            and ff != gg)


def separating_quotient(p: Presentation, f: NormalForm, g: NormalForm,
                        c: ClassTag = AllFinite()) -> QuotientFamily:
    """Finite vertex quotients keeping lengths, supports and cyclic reducedness of f, g apart.

    Z vertices are reduced modulo the least admissible n above twice the
    largest exponent, escalated until the four clauses verify.
    """
    f, g = tuple(f), tuple(g)
    if f == g:
        raise ValueError("separating quotient needs distinct elements")
    if not (is_cyclically_reduced(p, f) and is_cyclically_reduced(p, g)):
        raise ValueError("separating quotient needs cyclically reduced elements")
    base = _base_quotients(p, c)
    n = _first_modulus((f, g), c)
    tried = []
    while n <= MODULUS_CAP:
        tried.append(n)
        fam_q = _family(p, base, n, c, tried)
        target, fam = induced_quotient_presentation(fam_q)
        if _separating_clauses(p, target, fam, f, g):
            return fam_q
        if all(q is not None for q in base):
            break
        log.debug("modulus %d does not separate, escalating", n)
        n = _next_modulus(n, c)
    raise GuardExceeded(f"no separating modulus up to {MODULUS_CAP}")


@dataclass(frozen=True)
class SeparationWitness:
    family: QuotientFamily
    source_x: NormalForm
    source_y: NormalForm
    image_x: NormalForm
    image_y: NormalForm
    kind: str  # "NonConjugacy" or "Inequality"


@dataclass(frozen=True)
class AlreadyConjugate:
    conjugator: NormalForm


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


def _witness(q: QuotientFamily, x, y, kind) -> SeparationWitness:
    _, fam = induced_quotient_presentation(q)
    return SeparationWitness(q, tuple(x), tuple(y), apply(fam, x), apply(fam, y), kind)


def inequality_witness(p: Presentation, f: NormalForm, g: NormalForm,
                       c: ClassTag = AllFinite()) -> SeparationWitness:
    return _witness(separating_quotient(p, f, g, c), f, g, "Inequality")


def separate_conjugacy(p: Presentation, f: NormalForm, g: NormalForm, c: ClassTag = AllFinite()):
    """Find finite vertex quotients in which the images of f and g are not conjugate.

    Returns a SeparationWitness, AlreadyConjugate, or Unknown when escalation
    reaches the modulus cap.
    """
    f, g = tuple(f), tuple(g)
    ans = are_conjugate(p, f, g)
    if ans.conjugate:
        return AlreadyConjugate(ans.conjugator)
    f0 = cyclic_reduction(p, f).core
    g0 = cyclic_reduction(p, g).core
    base = _base_quotients(p, c)
    # the same modulus keeps every cyclic permutation of f0 apart from g0:
    # they all use the syllables of f0
    n = _first_modulus((f0, g0), c)
    tried = []
    while n <= MODULUS_CAP:
        tried.append(n)
        q = _family(p, base, n, c, tried)
        target, fam = induced_quotient_presentation(q)
        if not are_conjugate(target, apply(fam, f), apply(fam, g)):
            return SeparationWitness(q, f, g, apply(fam, f), apply(fam, g), "NonConjugacy")
        if all(b is not None for b in base):
            break
        n = _next_modulus(n, c)
    return Unknown(f"images stay conjugate for moduli {tried}")


def verify_witness(w: SeparationWitness) -> ValidityReport:
    """Recheck a witness from its family and source pair; nothing is trusted."""
    bad = []
    q = w.family
    try:
        orders = q.quotient_orders()
        target, fam = induced_quotient_presentation(q)
    except (ValueError, VerificationError) as exc:
        return ValidityReport(False, (f"quotient family invalid: {exc}",))
    for v, order in enumerate(orders):
        if not q.cls.admits(order):
            bad.append(f"vertex {v}: quotient order {order} outside class {q.cls}")
    ix, iy = apply(fam, w.source_x), apply(fam, w.source_y)
    if ix != tuple(w.image_x):
        bad.append("image of x does not match")
    if iy != tuple(w.image_y):
        bad.append("image of y does not match")
    if w.kind == "NonConjugacy":
        if are_conjugate(target, ix, iy):
            bad.append("images are conjugate in the quotient")
    elif w.kind == "Inequality":
        if not _separating_clauses(q.source, target, fam, w.source_x, w.source_y):
            bad.append("separating clauses fail")
    else:
        bad.append(f"unknown witness kind {w.kind!r}")
    return ValidityReport(not bad, tuple(bad))


@dataclass(frozen=True)
class AutomorphismWitness:
    element: NormalForm
    separation: Union[SeparationWitness, Unknown]


def _search_order(f: VertexMapFamily, exp_bound: int):
    """Candidates g in the order: length 1 with wrong core length or support,
    other length 1, length 2 with non-adjacent vertices, the remaining length 2."""
    p = f.source
    elems = elements_up_to_length2(p, exp_bound)
    ones = [g for g in elems if len(g) == 1]
    twos = [g for g in elems if len(g) == 2]

    def off_vertex(g):
        core = cyclic_reduction(p, apply(f, g)).core
        return len(core) != 1 or core[0][0] != g[0][0]

    wrong = [g for g in ones if off_vertex(g)]
    rest = [g for g in ones if not off_vertex(g)]
    free = [g for g in twos if not p.graph.adjacent(g[0][0], g[1][0])]
    comm = [g for g in twos if p.graph.adjacent(g[0][0], g[1][0])]
    return wrong + rest + free + comm


def cd_witness_for_automorphism(f: VertexMapFamily, c: ClassTag = AllFinite(),
                                exp_bound: int = DEFAULT_EXP_BOUND) -> Union[AutomorphismWitness, InnerDecision]:
    """An element g with f(g) not conjugate to g plus a finite-quotient witness for the pair,
    or the inner-automorphism verdict when no such g of length <= 2 exists."""
    if not f.is_endomorphism:
        raise ValueError("automorphism witness needs an endomorphism")
    p = f.source
    if central_vertices(p.graph):
        raise PreconditionError("graph has central vertices; split off the direct factors first")
    report = validate_family(f)
    if not report.ok:
        raise ValueError(f"invalid vertex map family: {report.violations[0]}")
    for g in _search_order(f, exp_bound):
        image = apply(f, g)
        if not are_conjugate(p, image, g):
            return AutomorphismWitness(g, separate_conjugacy(p, image, g, c))
    return decide_inner(f, exp_bound)


def grossman_core(t: FiniteGroupTable, n: SubgroupHandle) -> SubgroupHandle:
    """Intersection of the preimages of n under all automorphisms of t."""
    if n.parent != t or not n.is_normal():
        raise ValueError("grossman_core needs a normal subgroup of t")
    auts = automorphisms(t)
    members = [x for x in range(t.order) if all(a[x] in n for a in auts)]
    k = SubgroupHandle(t, tuple(members))
    for a in auts:
        if any(a[x] not in k for x in k.members):
            raise VerificationError("core is not characteristic")
    return k
