import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import BINARY, binary_structures, brute_isomorphic, naive_scott_rank
from scottkit.backforth import BfTable, bf_equiv, bf_fixpoint, scott_rank, scott_rank_tuple, scott_report
from scottkit.config import get_budgets
from scottkit.core import FiniteStructure, isomorphic, linear_order, make_graph
from scottkit.errors import BudgetExceeded, ShapeError

C3 = make_graph(range(3), [(0, 1), (1, 2), (0, 2)])
L2 = linear_order(2)
ONE = make_graph([0], [])


def test_equiv_examples():
    assert bf_equiv(L2, (0,), L2, (1,), 0)
    assert not bf_equiv(L2, (0,), L2, (1,), 1)
    for a, b, alpha in itertools.product(range(3), range(3), range(4)):
        assert bf_equiv(C3, (a,), C3, (b,), alpha)
    for t in itertools.product(range(2), repeat=2):
        for alpha in range(3):
            assert bf_equiv(L2, t, L2, t, alpha)


def test_equiv_rejects_length_mismatch():
    with pytest.raises(ShapeError):
        bf_equiv(L2, (0,), L2, (0, 1), 1)


def test_rank_examples():
    assert scott_rank_tuple(ONE, (0,)) == 0
    assert scott_rank_tuple(L2, (0,)) == 1
    assert scott_rank_tuple(C3, (1,)) == 0
    assert scott_rank(ONE) == 1
    assert scott_rank(L2) == 2
    for n in range(1, 5):
        assert scott_rank(make_graph(range(n), [])) == 1


def test_report_structure_rank_is_one_above_max():
    for A in binary_structures(3):
        rep = scott_report(A)
        assert rep.structure_rank == 1 + max(rep.tuple_ranks.values())


def test_fixpoint_examples():
    fp = bf_fixpoint(C3, C3, 1)
    assert fp.stabilized_at == 0 and len(fp.levels[0].classes) == 1
    fp = bf_fixpoint(L2, L2, 1)
    assert fp.stabilized_at == 1 and len(fp.levels[-1].classes) == 2
    P4 = make_graph(range(4), [(0, 1), (1, 2), (2, 3)])
    K13 = make_graph(range(4), [(0, 1), (0, 2), (0, 3)])
    fp = bf_fixpoint(P4, K13, 0)
    (cells,) = [lvl.classes for lvl in fp.levels[-1:]]
    assert len(cells) == 2


def _pairs(A, B, length):
    return [(a, b) for a in itertools.product(A.universe, repeat=length)
            for b in itertools.product(B.universe, repeat=length)]


@pytest.mark.parametrize("n", [2, 3])
def test_refinement_and_monotonicity(n):
    S = binary_structures(n)
    for A, B in itertools.islice(itertools.product(S, repeat=2), 400):
        table = BfTable([A, B])
        for a, b in _pairs(A, B, 2):
            seq = [table.key(0, a, k) == table.key(1, b, k) for k in range(table.stable + 2)]
            assert all(x >= y for x, y in zip(seq, seq[1:]))  # once false, stays false


def test_level_zero_is_atomic_type():
    S = binary_structures(2)
    for A, B in itertools.product(S, repeat=2):
        for a, b in _pairs(A, B, 2):
            same = all(((a[i], a[j]) in A.relations["R"]) == ((b[i], b[j]) in B.relations["R"])
                       and (a[i] == a[j]) == (b[i] == b[j]) for i in range(2) for j in range(2))
            assert bf_equiv(A, a, B, b, 0) == same


def test_limit_equals_pointed_isomorphism():
    """At the fixpoint ≡ coincides with pointed isomorphism (≤ 4 elements, length ≤ 2)."""
    S = binary_structures(3) + binary_structures(4)[::60]
    for A in S:
        for B in [A, S[(S.index(A) + 1) % len(S)]]:
            if len(A) != len(B):
                continue
            table = BfTable([A, B])
            for length in (1, 2):
                for a, b in _pairs(A, B, length):
                    iso = isomorphic(A, B, list(zip(a, b))) is not None
                    assert (table.key(0, a, table.stable) == table.key(1, b, table.stable)) == iso


def test_rank_stable_beyond_universe_size():
    """Tuples longer than |A| repeat entries and never exceed the injective maximum."""
    for A in binary_structures(2) + binary_structures(3)[::7]:
        rep = scott_report(A)
        top = max(rep.tuple_ranks.values())
        for t in itertools.product(A.universe, repeat=len(A) + 1):
            assert scott_rank_tuple(A, t) <= top


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_scott_rank_matches_naive_recursion(n):
    for A in binary_structures(n):
        assert scott_rank(A) == naive_scott_rank(A)


def test_budget():
    with pytest.raises(BudgetExceeded):
        scott_rank(linear_order(6), get_budgets(bf_tuples=100))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.data())
def test_equivalence_is_invariant_under_relabelling(n, data):
    cells = list(itertools.product(range(n), repeat=2))
    R = data.draw(st.sets(st.sampled_from(cells)))
    A = FiniteStructure(BINARY, tuple(range(n)), {"R": R})
    perm = data.draw(st.permutations(range(n)))
    B = A.relabel(dict(enumerate(perm)))
    a = tuple(data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2)))
    assert bf_equiv(A, a, B, tuple(perm[x] for x in a), 3)
    assert scott_rank(A) == scott_rank(B)
