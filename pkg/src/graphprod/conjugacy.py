"""Cyclic reduction, P-S decomposition and the conjugacy problem."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import GuardExceeded, VerificationError
from .graph import star_mask_of
from .vertex_groups import FiniteGroupTable, vertex_centralizer, vertex_conjugate
from .words import (
    IDENTITY,
    NormalForm,
    Presentation,
    Syllable,
    _first_mask,
    _insert,
    _reduce_trusted,
    all_syllables,
    canonical,
    conjugate,
    generator_syllables,
    invert,
    multiply,
)

MAX_ROTATION_LENGTH = 12
MAX_ROTATION_CLOSURE = 10 ** 5
MAX_ORACLE_SEARCH = 10 ** 7


@dataclass(frozen=True)
class PSDecomposition:
    p_part: NormalForm
    s_part: NormalForm
    s_vertices: frozenset[int]


@dataclass(frozen=True)
class CyclicReduction:
    core: NormalForm
    conjugator: NormalForm


@dataclass(frozen=True)
class ConjugacyAnswer:
    conjugate: bool
    conjugator: NormalForm | None = None

    def __bool__(self):
        return self.conjugate


def _support_mask(g: Sequence[Syllable]) -> int:
    m = 0
    for v, _ in g:
        m |= 1 << v
    return m


def _stem_mask(p: Presentation, g: Sequence[Syllable]) -> int:
    supp = _support_mask(g)
    if not supp:
        return 0
    return supp & star_mask_of(p.graph, supp)


def _mask_set(p: Presentation, m: int) -> frozenset[int]:
    return frozenset(v for v in range(p.vertex_count) if m >> v & 1)


def stem_vertices(p: Presentation, g: Sequence[Syllable]) -> frozenset[int]:
    """supp(g) intersected with the common star of supp(g)."""
    return _mask_set(p, _stem_mask(p, g))


def ps_decomposition(p: Presentation, g: NormalForm) -> PSDecomposition:
    s_mask = _stem_mask(p, g)
    p_part = canonical(p, [s for s in g if not s_mask >> s[0] & 1])
    s_part = canonical(p, [s for s in g if s_mask >> s[0] & 1])
    return PSDecomposition(p_part, s_part, _mask_set(p, s_mask))


def _cyclic_defect_mask(p: Presentation, g: Sequence[Syllable]) -> int:
    first = _first_mask(p, g)
    last = _first_mask(p, g[::-1])
    return first & last & ~_stem_mask(p, g)


def is_cyclically_reduced(p: Presentation, g: NormalForm) -> bool:
    """(FL(g) & LL(g)) minus S(g) is empty."""
    return _cyclic_defect_mask(p, g) == 0


def is_cyclically_reduced_by_p_part(p: Presentation, g: NormalForm) -> bool:
    """FL(p(g)) & LL(p(g)) is empty."""
    pp = ps_decomposition(p, g).p_part
    return _first_mask(p, pp) & _first_mask(p, pp[::-1]) == 0


def is_cyclically_reduced_by_rotation(p: Presentation, g: Sequence[Syllable]) -> bool:
    """Every cyclic permutation of the given reduced expression is reduced."""
    n = len(g)
    g = tuple(g)
    for j in range(1, n):
        if len(_reduce_trusted(p, (), g[j:] + g[:j])) != n:
            return False
    return True


def cyclic_reduction(p: Presentation, g: NormalForm) -> CyclicReduction:
    """g = conjugator * core * conjugator^-1 with core cyclically reduced.

    Each step moves the first syllable of the least vertex in
    (FL & LL) minus S to the front and conjugates it to the back.
    """
    core = tuple(g)
    conj: list[Syllable] = []
    while True:
        bad = _cyclic_defect_mask(p, core)
        if not bad:
            break
        v = (bad & -bad).bit_length() - 1
        i = next(k for k, s in enumerate(core) if s[0] == v)
        t = core[i]
        new_core = _reduce_trusted(p, core[:i] + core[i + 1:], [t])
        if len(new_core) >= len(core):
            raise VerificationError("cyclic reduction failed to shorten the word")
        core = new_core
        _insert(p, conj, t)
    return CyclicReduction(core, canonical(p, conj))


def _rotations(p: Presentation, h: NormalForm):
    """Single-syllable rotations of h: (rotated canonical form, syllable moved)."""
    first = _first_mask(p, h)
    seen = 0
    for i, s in enumerate(h):
        v = s[0]
        if first >> v & 1 and not seen >> v & 1:
            seen |= 1 << v
            yield _reduce_trusted(p, h[:i] + h[i + 1:], [s]), s


def _rotation_closure(p: Presentation, g: NormalForm) -> dict[NormalForm, NormalForm]:
    """Map each cyclic permutation r of g to some c with r = c g c^-1."""
    if len(g) > MAX_ROTATION_LENGTH:
        raise GuardExceeded(f"cyclic permutations limited to length {MAX_ROTATION_LENGTH}")
    if not is_cyclically_reduced(p, g):
        raise ValueError("cyclic permutations need a cyclically reduced element")
    found = {g: IDENTITY}
    queue = deque([g])
    while queue:
        h = queue.popleft()
        c = found[h]
        for r, s in _rotations(p, h):
            if len(r) != len(h):
                raise VerificationError("rotation of a cyclically reduced word shortened it")
            if r not in found:
                # r = s^-1 h s
                found[r] = multiply(p, ((s[0], p.groups[s[0]].inv(s[1])),), c)
                if len(found) > MAX_ROTATION_CLOSURE:
                    raise GuardExceeded(f"more than {MAX_ROTATION_CLOSURE} cyclic permutations")
                queue.append(r)
    return found


def cyclic_permutations(p: Presentation, g: NormalForm) -> set[NormalForm]:
    return set(_rotation_closure(p, g))


def _stem_conjugator(p: Presentation, sx: NormalForm, sy: NormalForm) -> NormalForm | None:
    """Per-vertex conjugator c with c sx c^-1 = sy, or None (stems live in a direct product)."""
    ex = dict(sx)
    ey = dict(sy)
    if ex.keys() != ey.keys():
        return None
    out = []
    for v in sorted(ex):
        g = p.groups[v]
        if isinstance(g, FiniteGroupTable):
            c = vertex_conjugate(g, ex[v], ey[v])
            if c is None:
                return None
            if c:
                out.append((v, c))
        elif ex[v] != ey[v]:
            return None
    return canonical(p, out)


def are_conjugate(p: Presentation, x: NormalForm, y: NormalForm) -> ConjugacyAnswer:
    """Decide conjugacy; a positive answer carries w with w x w^-1 = y (verified)."""
    x, y = tuple(x), tuple(y)
    if x == y:
        return ConjugacyAnswer(True, IDENTITY)
    rx = cyclic_reduction(p, x)
    ry = cyclic_reduction(p, y)
    x0, y0 = rx.core, ry.core
    if len(x0) != len(y0) or _support_mask(x0) != _support_mask(y0):
        return ConjugacyAnswer(False)
    dx = ps_decomposition(p, x0)
    dy = ps_decomposition(p, y0)
    stem = _stem_conjugator(p, dx.s_part, dy.s_part)
    if stem is None:
        return ConjugacyAnswer(False)
    if dx.p_part == dy.p_part:
        rotation = IDENTITY
    else:
        rotation = _rotation_closure(p, dx.p_part).get(dy.p_part)
        if rotation is None:
            return ConjugacyAnswer(False)
    w = multiply(p, ry.conjugator, rotation, stem, invert(p, rx.conjugator))
    if conjugate(p, w, x) != y:
        raise VerificationError(f"assembled conjugator {w} does not conjugate {x} to {y}")
    return ConjugacyAnswer(True, w)


# --- brute force ---------------------------------------------------------


@lru_cache(maxsize=64)
def _spheres(p: Presentation, exp_bound: int, radius: int) -> tuple[tuple[NormalForm, ...], ...]:
    """Reduced elements of each length up to radius, in canonical order."""
    letters = all_syllables(p, exp_bound)
    # bound the search by the number of candidate words before enumerating any
    if sum(len(letters) ** k for k in range(radius + 1)) > MAX_ORACLE_SEARCH:
        raise GuardExceeded(f"oracle search space exceeds {MAX_ORACLE_SEARCH}")
    spheres = [(IDENTITY,)]
    for k in range(1, radius + 1):
        nxt = set()
        for w in spheres[-1]:
            for s in letters:
                r = _reduce_trusted(p, w, [s])
                if len(r) == k:
                    nxt.add(r)
        spheres.append(tuple(sorted(nxt)))
    return tuple(spheres)


def conjugacy_oracle(p: Presentation, x: NormalForm, y: NormalForm, max_len: int,
                     exp_bound: int = 3) -> NormalForm | None:
    """Least w (by length, then canonical order) with |w| <= max_len and w x w^-1 = y.

    Meet in the middle: a conjugator of length L is a reduced product w1 w2
    with |w1| = ceil(L/2), |w2| = floor(L/2), and then w2 x w2^-1 = w1^-1 y w1.
    Z syllables range over exponents |e| <= exp_bound.  None means no
    conjugator exists within the bound, not that the pair is non-conjugate.
    """
    x, y = tuple(x), tuple(y)
    spheres = _spheres(p, exp_bound, (max_len + 1) // 2)
    left: dict[int, dict[NormalForm, list[NormalForm]]] = {}
    right: dict[int, dict[NormalForm, list[NormalForm]]] = {}

    def table(cache, k, target, flip):
        if k not in cache:
            d: dict[NormalForm, list[NormalForm]] = {}
            for w in spheres[k]:
                key = conjugate(p, invert(p, w), target) if flip else conjugate(p, w, target)
                d.setdefault(key, []).append(w)
            cache[k] = d
        return cache[k]

    for total in range(max_len + 1):
        k1 = (total + 1) // 2
        k2 = total // 2
        inner = table(left, k2, x, False)
        outer = table(right, k1, y, True)
        best = None
        for key, w2s in inner.items():
            w1s = outer.get(key)
            if not w1s:
                continue
            for w1 in w1s:
                for w2 in w2s:
                    w = multiply(p, w1, w2)
                    if len(w) == total and (best is None or w < best):
                        best = w
        if best is not None:
            if conjugate(p, best, x) != y:
                raise VerificationError("oracle candidate does not conjugate")
            return best
    return None


def centralizer_generators(p: Presentation, a: Syllable) -> list[NormalForm]:
    """Generators of the centralizer of a single syllable at v: C_{G_v}(a) and G_link(v)."""
    p.check_syllable(a)
    v, e = a
    g = p.groups[v]
    out: list[NormalForm] = []
    if isinstance(g, FiniteGroupTable):
        out.extend(((v, c),) for c in vertex_centralizer(g, e).members if c)
    else:
        out.append(((v, 1),))
    for u in range(p.vertex_count):
        if p.graph.adjacent(u, v):
            out.extend((s,) for s in generator_syllables(p, u))
    for c in out:
        if multiply(p, c, (a,)) != multiply(p, (a,), c):
            raise VerificationError(f"{c} does not commute with {a}")
    return out
