import pytest
from hypothesis import given
from hypothesis import strategies as st

from classify import arrow_sp, peak_pit, reducible, sp_on_tree
from errors import DegreeError
from laws import Law, closure_of_laws, is_cd, triples
from oracle import is_maximal
from permutations import Domain, Permutation
from schemes import (
    alternating,
    alternating_size,
    black_single_peaked,
    is_single_peaked_order,
    maximum_size_bound,
    replacement,
)


def domain_of(*orders):
    return Domain.from_permutations([tuple(int(c) for c in o) for o in orders])


@pytest.mark.parametrize("n,size", [(3, 4), (4, 9), (5, 20), (6, 45), (7, 100)])
def test_alternating_sizes(n, size):
    assert len(alternating(n)) == size
    assert alternating_size(n) == size


@pytest.mark.parametrize("n,bound", [(4, 9), (5, 20), (6, 45), (7, 100)])
def test_maximum_size_bound(n, bound):
    assert maximum_size_bound(n) == bound


def test_alternating_on_three_is_a_principal_set():
    assert alternating(3) == closure_of_laws([Law(triples(3)[0], 2, 1)], 3)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_alternating_is_a_maximal_peak_pit_domain(n):
    a = alternating(n)
    assert a.unitary and is_cd(a)
    assert is_maximal(a)
    assert peak_pit(a)


@pytest.mark.slow
def test_alternating_seven_is_maximal():
    assert is_maximal(alternating(7))


def test_alternating_arguments():
    with pytest.raises(ValueError):
        alternating(4, "C")
    with pytest.raises(DegreeError):
        alternating(2)
    with pytest.raises(DegreeError):
        alternating_size(2)


def test_replacement_of_two_pairs():
    pair = Domain.full(2)
    result = replacement(pair, pair)
    assert result == domain_of("123", "132", "231", "321")
    assert result == closure_of_laws([Law(triples(3)[0], 1, 2)], 3)


def test_replacement_of_two_degree_three_domains():
    result = replacement(alternating(3), alternating(3))
    assert result.degree == 5
    assert len(result) == 16
    assert is_cd(result)
    assert reducible(result)


@given(st.sets(st.integers(0, 5), min_size=1), st.sets(st.integers(0, 5), min_size=1))
def test_replacement_size(outer, inner):
    result = replacement(Domain.from_ranks(3, outer), Domain.from_ranks(3, inner))
    assert len(result) == len(outer) * len(inner)


def test_replacement_degree_limit():
    with pytest.raises(DegreeError):
        replacement(alternating(5), alternating(5))


def test_black_single_peaked():
    assert black_single_peaked(3) == domain_of("123", "213", "231", "321")
    assert len(black_single_peaked(4)) == 8
    six = black_single_peaked(6)
    assert len(six) == 32
    assert all(is_single_peaked_order(p) for p in six)
    assert arrow_sp(six) and peak_pit(six)
    assert sp_on_tree(six)
    with pytest.raises(DegreeError):
        black_single_peaked(1)


def test_single_peaked_orders():
    assert is_single_peaked_order(Permutation((3, 2, 4, 1, 5)))
    assert not is_single_peaked_order(Permutation((1, 3, 2)))
