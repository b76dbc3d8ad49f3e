from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from canon import dual
from errors import EmptyDomainError
from laws import (
    ALL_FORMS,
    SEARCH_FORMS,
    Law,
    closure_of_laws,
    closure_of_set,
    is_cd,
    is_cd_latin,
    law_from_form,
    law_order,
    principal_set,
    restriction_size,
    satisfied_laws,
    triples,
)
from permutations import Domain, identity
from schemes import alternating


def domain_of(*orders):
    return Domain.from_permutations([tuple(int(c) for c in o) for o in orders])


def test_law_order():
    assert len(law_order(4)) == 24
    assert len(law_order(7)) == 210
    first = law_order(5)[0]
    assert (first.triple.alternatives, first.x, first.i) == ((1, 2, 3), 1, 2)
    assert [str(law).split("@")[0] for law in law_order(3)] == ["1N2", "1N3", "2N1", "2N3", "3N1", "3N2"]


def test_principal_sets_hold_two_thirds():
    for t in triples(4):
        for form in ALL_FORMS:
            assert len(principal_set(law_from_form(t, form), 4)) == 16


def test_middle_law_on_three():
    t = triples(3)[0]
    assert principal_set(Law(t, 2, 2), 3) == domain_of("132", "213", "231", "312")


def test_identity_compatible_laws_keep_identity():
    for t in triples(5):
        for form in SEARCH_FORMS:
            assert identity(5) in principal_set(law_from_form(t, form), 5)


def test_satisfied_laws():
    full = Domain.full(4)
    assert all(satisfied_laws(full, t) == [] for t in triples(4))
    single = Domain.from_ranks(3, [0])
    assert len(satisfied_laws(single, triples(3)[0])) == 6
    with pytest.raises(EmptyDomainError):
        satisfied_laws(Domain(3, 0), triples(3)[0])


def test_alternating_scheme_has_one_law_on_the_first_triple():
    laws = satisfied_laws(alternating(5), triples(5)[0])
    assert [(law.x, law.i) for law in laws] == [(2, 1)]


def test_closure_of_laws():
    assert len(closure_of_laws([], 4)) == 24
    even, odd = (1, 1), (1, 3)
    laws = [law_from_form(t, even if t.b % 2 == 0 else odd) for t in triples(4)]
    assert len(closure_of_laws(laws, 4)) == 9
    t = triples(3)[0]
    assert closure_of_laws([law_from_form(t, form) for form in SEARCH_FORMS], 3) == Domain.from_ranks(3, [0])


def test_closure_of_identity():
    single = Domain.from_ranks(3, [0])
    assert closure_of_set(single) == single


def test_maximal_domains_are_closed(degree4_forms):
    for ranks in degree4_forms:
        d = Domain.from_ranks(4, ranks)
        assert closure_of_set(d) == d


@given(st.sets(st.integers(0, 119), min_size=1, max_size=30))
def test_closure_is_idempotent(ranks):
    d = Domain.from_ranks(5, ranks)
    closed = closure_of_set(d)
    assert d <= closed
    assert closure_of_set(closed) == closed


def test_condorcet_cycle():
    assert not is_cd(domain_of("123", "231", "312"))
    assert is_cd(domain_of("2413"))


def test_sen_and_ward_forms_agree_on_all_subsets_of_three():
    order_ranks = range(6)
    for k in range(1, 7):
        for subset in combinations(order_ranks, k):
            d = Domain.from_ranks(3, subset)
            assert is_cd(d) == is_cd_latin(d)


@given(st.sets(st.integers(0, 119), min_size=1, max_size=15))
def test_sen_and_ward_forms_agree(ranks):
    d = Domain.from_ranks(5, ranks)
    assert is_cd(d) == is_cd_latin(d)


def test_restriction_size():
    assert restriction_size(alternating(4), triples(4)[0]) == 4
    assert restriction_size(Domain.full(4), triples(4)[2]) == 6


def test_dual_reflects_positions(degree4_forms):
    for ranks in degree4_forms:
        d = Domain.from_ranks(4, ranks)
        reversed_domain = dual(d)
        for t in triples(4):
            for law in satisfied_laws(d, t, all_forms=True):
                assert Law(t, law.x, 4 - law.i) in satisfied_laws(reversed_domain, t, all_forms=True)


def test_profile_matches_restrictions():
    d = Domain.from_ranks(4, [0, 7, 13, 22])
    for t in triples(4):
        alts = set(t.alternatives)
        restricted = {tuple(x for x in p.slots if x in alts) for p in d}
        assert restriction_size(d, t) == len(restricted)
