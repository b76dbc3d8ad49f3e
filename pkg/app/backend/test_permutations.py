import math
from itertools import permutations as all_orders

import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import DegreeError, PermutationError
from permutations import (
    Domain,
    Permutation,
    act,
    compose,
    covers,
    group,
    identity,
    inverse,
    inversions,
    rank,
    restrict,
    reversal,
    reverse,
    unrank,
)


def orders(n):
    return st.permutations(list(range(1, n + 1))).map(lambda slots: Permutation(tuple(slots)))


def domains(n):
    return st.sets(st.integers(0, math.factorial(n) - 1), min_size=1, max_size=12).map(
        lambda ranks: Domain.from_ranks(n, ranks))


def test_identity_and_reversal_ranks():
    assert rank(identity(4)) == 0
    assert rank(reversal(4)) == 23


def test_rank_is_a_bijection():
    seen = set()
    for slots in all_orders(range(1, 5)):
        p = Permutation(slots)
        assert unrank(rank(p), 4) == p
        seen.add(rank(p))
    assert seen == set(range(24))
    assert len({rank(Permutation(s)) for s in all_orders(range(1, 6))}) == 120


def test_ranks_follow_slot_order():
    table = group(4)
    for r, slots in enumerate(table.perms):
        assert rank(Permutation(tuple(x + 1 for x in slots))) == r


def test_reverse():
    assert reverse(Permutation((1, 2, 3, 4, 5))) == Permutation((5, 4, 3, 2, 1))
    assert reverse(reversal(4)) == identity(4)


def test_reverse_complements_inversions():
    full = (1 << 6) - 1
    for slots in all_orders(range(1, 5)):
        p = Permutation(slots)
        assert inversions(reverse(p)).bits == full ^ inversions(p).bits


def test_inversion_sets():
    assert len(inversions(identity(4))) == 0
    assert len(inversions(reversal(4))) == 6
    assert inversions(Permutation((2, 1, 3))).pairs == [(1, 2)]
    # pairs of alternatives, not of positions: 2 3 1 inverts positions (1,3) and (2,3)
    assert inversions(Permutation((2, 3, 1))).pairs == [(1, 2), (1, 3)]


def test_covers():
    assert covers(Permutation((1, 2, 3)), Permutation((2, 1, 3)))
    assert not covers(Permutation((1, 2, 3)), Permutation((3, 2, 1)))


def test_permutohedron_of_degree_four():
    perms = [Permutation(s) for s in all_orders(range(1, 5))]
    edges = sum(covers(lo, hi) for lo in perms for hi in perms)
    assert edges == 36


def test_restrict():
    assert restrict(Permutation((4, 1, 3, 2, 5)), {1, 2, 4}) == (4, 1, 2)
    p = Permutation((3, 1, 2))
    assert restrict(p, {1, 2, 3}) == p.slots
    with pytest.raises(PermutationError):
        restrict(p, set())


def test_invalid_permutations():
    with pytest.raises(PermutationError):
        Permutation((1, 1, 2))
    with pytest.raises(PermutationError):
        unrank(24, 4)
    with pytest.raises(DegreeError):
        group(9)


def test_multiplication_table_matches_multiply():
    table = group(4)
    for a in range(table.order):
        for g in (0, 5, 17, 23):
            assert int(table.multiplication[a, g]) == table.multiply(a, g)


@given(domains(4))
def test_act_by_identity(d):
    assert act(d, identity(4)) == d


@given(domains(4), orders(4), orders(4))
def test_act_is_a_right_action(d, g, h):
    assert act(act(d, g), h) == act(d, compose(g, h))


@given(domains(5))
def test_unitarizing_relabelling(d):
    for g in d:
        assert act(d, inverse(g)).unitary


def test_domain_set_operations():
    a = Domain.from_ranks(3, [0, 1, 2])
    b = Domain.from_ranks(3, [2, 3])
    assert (a & b).ranks() == [2]
    assert len(a | b) == 4
    assert Domain.from_ranks(3, [0]) < a
    assert Permutation((1, 2, 3)) in a
    with pytest.raises(DegreeError):
        a & Domain.full(4)
