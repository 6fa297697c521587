import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_type_index, realized_types, two_adic_class
from scottkit.core import automorphism_group, make_graph
from scottkit.embed_order import (
    AtomicPattern,
    FamilyMap,
    OrderElement,
    atomic_type_index,
    atomic_type_of,
    block_size,
    class_members,
    class_of,
    class_rank,
    count_types,
    dense_pick,
    discrete_block,
    enumerate_fragment,
    enumerate_rationals,
    f_map,
    family_extension,
    first_in_class,
    fragment_size,
    g_decode,
    member,
    order_images_isomorphic,
    order_same_orbit,
)
from scottkit.errors import BudgetExceeded, DecodeError, FamilyViolation, NotAMember, ShapeError
from scottkit.harness import graph_family

P3 = make_graph(range(3), [(0, 1), (1, 2)])
ONE = make_graph([0], [])


def test_partition_section_and_totality():
    for a in range(11):
        assert class_of(first_in_class(a)) == a
    qs = list(itertools.islice(enumerate_rationals(), 1000))
    assert len(set(qs)) == 1000
    for q in qs:
        assert class_of(q) == two_adic_class(q)


def test_enumeration_starts_as_expected():
    assert list(itertools.islice(enumerate_rationals(), 7)) == [0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2)]
    for a in range(5):
        assert next(class_members(a)) == first_in_class(a)
        assert class_rank(first_in_class(a)) == 0
        head = list(itertools.islice(class_members(a), 30))
        ordered = [q for q in itertools.islice(enumerate_rationals(), 5000) if class_of(q) == a]
        assert head == ordered[:30]


def test_dense_pick_examples():
    x = dense_pick(3, (0, 1))
    assert 0 < x < 1 and class_of(x) == 3
    x = dense_pick(0, (0, 1))
    assert 0 < x < 1 and class_of(x) == 0
    lo, hi = Fraction(5), Fraction(5) + Fraction(1, 100)
    x = dense_pick(1, (lo, hi))
    assert lo < x < hi and class_of(x) == 1
    picks = [dense_pick(2, (Fraction(i, 4), Fraction(i + 1, 4))) for i in range(8)]
    assert len(set(picks)) == 8
    with pytest.raises(ShapeError):
        dense_pick(0, (1, 1))
    with pytest.raises(BudgetExceeded):
        dense_pick(8, (0, Fraction(1, 10**9)), step_cap=3)


def test_dense_pick_unbounded_sides():
    assert dense_pick(2, (None, None)) == first_in_class(2)
    assert dense_pick(1, (None, Fraction(-7))) < -7
    assert dense_pick(1, (Fraction(7), None)) > 7


def test_type_index_examples():
    assert atomic_type_index(AtomicPattern(1, (), ())) == 0
    two = [atomic_type_index(AtomicPattern(2, e, a)) for e, a in [((1,), (0,)), ((0,), (0,)), ((0,), (1,))]]
    assert sorted(two) == [1, 2, 3]
    assert [count_types(n) for n in range(1, 5)] == [1, 3, 15, 127]
    assert min(atomic_type_index(t) for t in _all(3)) > max(atomic_type_index(t) for t in _all(2))


def _all(n):
    return [AtomicPattern(n, e, a) for e, a in realized_types(n)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_type_index_matches_naive_enumeration(n):
    for t in _all(n):
        assert atomic_type_index(t) == naive_type_index(t.eq, t.adj, n)


def test_inconsistent_pattern_rejected():
    assert not AtomicPattern(2, (1,), (1,)).is_consistent()
    assert not AtomicPattern(3, (1, 1, 0), (0, 0, 0)).is_consistent()


def test_membership_examples():
    x = f_map(ONE, (0,))
    assert member(ONE, x) and x.n == 1 and x.tail == 0
    assert not member(ONE, OrderElement((Fraction(0), Fraction(0)), 0))
    m = block_size(ONE, (0,))
    assert not member(ONE, OrderElement(x.body, m))
    assert member(ONE, OrderElement(x.body, m - 1))


def test_fragment_examples():
    frag = enumerate_fragment(ONE, 1, 0)
    assert frag == [OrderElement(f_map(ONE, (0,)).body, k) for k in range(block_size(ONE, (0,)))]
    assert enumerate_fragment(make_graph([], []), 2, 1) == []
    small, big = set(enumerate_fragment(P3, 1, 0)), set(enumerate_fragment(P3, 2, 1))
    assert small <= big
    assert len(enumerate_fragment(P3, 2, 0)) <= fragment_size(P3, 2, 0)


def test_decode_examples():
    for G in [P3] + graph_family(4):
        for n in (1, 2):
            for a in itertools.product(G.universe, repeat=n):
                assert g_decode(G, f_map(G, a)) == a
                assert f_map(G, a) == f_map(G, a)
    with pytest.raises(DecodeError):
        g_decode(P3, OrderElement(f_map(P3, (0,)).body, 1))
    with pytest.raises(DecodeError):
        g_decode(P3, OrderElement((Fraction(1, 8), Fraction(1, 2)), 0))


def test_discrete_blocks():
    for G in (P3, make_graph(range(3), [(0, 1)])):
        frag = enumerate_fragment(G, 2, 1)
        counts = {}
        for x in frag:
            counts[x.body] = counts.get(x.body, 0) + 1
        for x in frag:
            pos, size = discrete_block(G, x)
            assert size == counts[x.body] and pos == x.tail
    x = f_map(P3, (0, 1))
    assert discrete_block(P3, x)[1] == discrete_block(P3, OrderElement(x.body, 1))[1]
    assert f_map(P3, (0, 1)).body != f_map(P3, (0, 2)).body
    with pytest.raises(NotAMember):
        discrete_block(P3, OrderElement(x.body, 99))


elements = st.builds(
    OrderElement,
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=8), min_size=0, max_size=4).map(tuple),
    st.integers(0, 3))


@settings(max_examples=300)
@given(elements, elements, elements)
def test_lexicographic_order_is_total(x, y, z):
    assert sum([x < y, x == y, y < x]) == 1
    if x < y and y < z:
        assert x < z


def test_family_map_rejects_bad_pairs():
    fm = FamilyMap(P3, P3, {0: 2, 1: 1, 2: 0})
    x, y = f_map(P3, (0,)), f_map(P3, (2,))
    fm.add(x, y)
    with pytest.raises(FamilyViolation):
        fm.add(f_map(P3, (1,)), f_map(P3, (0,)))
    with pytest.raises(FamilyViolation):
        fm.add(x, f_map(P3, (1,)))
    assert fm.check()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_family_extends_every_automorphism(n):
    for G in graph_family(n):
        frag = enumerate_fragment(G, 2, 0)
        for sigma in automorphism_group(G):
            fm = family_extension(G, G, sigma, None, frag, frag)
            assert fm.check()
            assert all(fm.pairs[x] in set(frag) or member(G, fm.pairs[x]) for x in frag)


def test_order_image_verdicts():
    fam = graph_family(3)
    for G, H in itertools.combinations_with_replacement(fam, 2):
        assert order_images_isomorphic(G, H) == (G == H)
    assert order_same_orbit(P3, f_map(P3, (0,)), f_map(P3, (2,)))
    assert not order_same_orbit(P3, f_map(P3, (0,)), f_map(P3, (1,)))
