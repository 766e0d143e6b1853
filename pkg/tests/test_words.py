import random

import pytest
from hypothesis import given, settings, strategies as st

from graphprod.errors import GuardExceeded
from graphprod.graph import SimplicialGraph
from graphprod.vertex_groups import InfiniteCyclic, cyclic, symmetric
from graphprod.words import (
    Presentation,
    canonical,
    first_vertices,
    format_word,
    invert,
    is_reduced,
    last_vertices,
    length,
    multiply,
    parse_word,
    power,
    reduce,
    retract,
    shuffle_closure,
    support,
)
from oracles import naive_closure, naive_equal, naive_reduce, random_presentation, random_word, scramble

C2 = cyclic(2)
FREE = Presentation(SimplicialGraph.edgeless(2), (C2, C2))
DIRECT = Presentation(SimplicialGraph.complete(2), (C2, C2))
A, B = (0, 1), (1, 1)


def test_reduce_examples():
    assert reduce(FREE, [A, A, B]) == (B,)
    assert reduce(DIRECT, [B, A]) == (A, B)
    assert reduce(FREE, []) == ()


def test_reduce_rejects_bad_syllables():
    with pytest.raises(ValueError):
        reduce(FREE, [(0, 2)])
    with pytest.raises(ValueError):
        reduce(FREE, [(2, 1)])
    with pytest.raises(ValueError):
        reduce(FREE, [(0, 0)])


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(SimplicialGraph.edgeless(2), (C2,))
    with pytest.raises(ValueError):
        Presentation(SimplicialGraph.edgeless(1), (cyclic(1),))


def test_multiply_invert_examples():
    s3 = symmetric(3)
    p = Presentation(SimplicialGraph.edgeless(1), (s3,))
    for e in range(1, 6):
        assert invert(p, ((0, e),)) == ((0, s3.inv(e)),)
    assert multiply(FREE, (A, B), (B, A)) == ()
    assert multiply(FREE, (A, B), ()) == (A, B)


def test_support_length_examples():
    assert (support(()), length(())) == (frozenset(), 0)
    assert (support((A, B)), length((A, B))) == ({0, 1}, 2)
    assert (support((A, B, A)), length((A, B, A))) == ({0, 1}, 3)


def test_first_last_examples():
    assert first_vertices(FREE, (A, B)) == {0} and last_vertices(FREE, (A, B)) == {1}
    assert first_vertices(DIRECT, (A, B)) == {0, 1} == last_vertices(DIRECT, (A, B))
    assert first_vertices(FREE, ()) == frozenset() == last_vertices(FREE, ())


def test_retract_examples():
    g = (A, B, A)
    assert retract(FREE, {0}, g) == ()
    assert retract(FREE, {0, 1}, g) == g
    assert retract(FREE, set(), g) == ()


def test_shuffle_closure_examples():
    assert shuffle_closure(DIRECT, (A, B)) == {(A, B), (B, A)}
    assert shuffle_closure(FREE, (A, B)) == {(A, B)}
    path = Presentation(SimplicialGraph.path(3), (C2, C2, C2))
    a, b, c = (0, 1), (1, 1), (2, 1)
    # a and c do not commute, b commutes with both
    assert shuffle_closure(path, (a, b, c)) == {(a, b, c), (b, a, c), (a, c, b)}


def test_shuffle_closure_guard():
    z = Presentation(SimplicialGraph.edgeless(2), (InfiniteCyclic(), InfiniteCyclic()))
    with pytest.raises(GuardExceeded):
        shuffle_closure(z, tuple((k % 2, 1) for k in range(11)))


def test_z_merging():
    z = Presentation(SimplicialGraph.edgeless(2), (InfiniteCyclic(), InfiniteCyclic()))
    assert reduce(z, [(0, 2), (0, -2), (1, 1)]) == ((1, 1),)
    assert power(z, ((0, 1), (1, 1)), -2) == ((1, -1), (0, -1), (1, -1), (0, -1))


def test_word_text_round_trip():
    z = Presentation(SimplicialGraph.edgeless(2), (InfiniteCyclic(), C2))
    w = parse_word(z, "0:-3 1:1 0:2")
    assert w == ((0, -3), (1, 1), (0, 2))
    assert format_word(w) == "0:-3 1:1 0:2"
    assert parse_word(z, "") == ()
    with pytest.raises(ValueError):
        parse_word(z, "0:1 1")
    with pytest.raises(ValueError):
        parse_word(z, "1:2")


def test_equality_three_ways_against_naive_oracle():
    rng = random.Random(11)
    for _ in range(1200):
        p = random_presentation(rng)
        u = random_word(rng, p)
        v = scramble(rng, p, u) if rng.random() < 0.5 else random_word(rng, p)
        same = reduce(p, u) == reduce(p, v)
        assert same == naive_equal(p, u, v)
        assert same == (multiply(p, reduce(p, u), invert(p, reduce(p, v))) == ())


def test_reduce_against_naive_shuffle_class():
    rng = random.Random(5)
    for _ in range(500):
        p = random_presentation(rng)
        w = random_word(rng, p)
        r = reduce(p, w)
        cls = naive_closure(p, naive_reduce(p, w))
        assert r in cls
        assert r == min(cls)
        assert shuffle_closure(p, r) == cls


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = random.Random(seed)
    p = random_presentation(rng)
    return p, [random_word(rng, p, 6) for _ in range(3)]


@settings(max_examples=200, deadline=None)
@given(instances())
def test_group_laws(inst):
    p, (u, v, w) = inst
    g, h, k = (reduce(p, x) for x in (u, v, w))
    assert reduce(p, g) == g
    assert len(g) <= len(u)
    assert is_reduced(p, g)
    assert multiply(p, g, invert(p, g)) == ()
    assert multiply(p, multiply(p, g, h), k) == multiply(p, g, multiply(p, h, k))
    assert multiply(p, g, ()) == g == multiply(p, (), g)
    assert invert(p, multiply(p, g, h)) == multiply(p, invert(p, h), invert(p, g))


@settings(max_examples=150, deadline=None)
@given(instances())
def test_shuffle_invariants(inst):
    p, (u, _, _) = inst
    g = reduce(p, u)
    fl, ll = first_vertices(p, g), last_vertices(p, g)
    assert ll == first_vertices(p, invert(p, g))
    for e in shuffle_closure(p, g):
        assert support(e) == support(g) and len(e) == len(g)
        assert canonical(p, e) == g
        assert first_vertices(p, e) == fl and last_vertices(p, e) == ll
    # FL from the definition: some expression starts at v
    assert fl == {e[0][0] for e in shuffle_closure(p, g) if e}


@settings(max_examples=150, deadline=None)
@given(instances(), st.sets(st.integers(0, 4)), st.sets(st.integers(0, 4)))
def test_retraction_laws(inst, x, y):
    p, (u, v, _) = inst
    g, h = reduce(p, u), reduce(p, v)
    assert retract(p, x, multiply(p, g, h)) == multiply(p, retract(p, x, g), retract(p, x, h))
    assert retract(p, x, retract(p, y, g)) == retract(p, x & y, g)
    assert retract(p, x, retract(p, x, g)) == retract(p, x, g)
