"""
Constructions of known Condorcet domains: the alternating scheme, the
replacement scheme and the single-peaked domain on the axis 1 < 2 < ... < n.
"""
import logging
import math
from itertools import product
from typing import List, Literal, Tuple

from errors import DegreeError
from laws import closure_of_laws, law_from_form, triples
from permutations import Domain, Permutation, group

logger = logging.getLogger("condorcet")

Variant = Literal["A", "B"]

# (role, position) of the middle alternative b
_B_FIRST = (1, 1)
_B_LAST = (1, 3)


def alternating(n: int, variant: Variant = "A") -> Domain:
    """
    Variant A applies bN1 on every triple a<b<c with b even and bN3 with b odd;
    variant B swaps the two.
    """
    if n < 3:
        raise DegreeError(f"alternating scheme needs degree >= 3, got {n}")
    if variant not in ("A", "B"):
        raise ValueError(f"unknown alternating variant {variant!r}")
    even, odd = (_B_FIRST, _B_LAST) if variant == "A" else (_B_LAST, _B_FIRST)
    laws = [law_from_form(t, even if t.b % 2 == 0 else odd) for t in triples(n)]
    return closure_of_laws(laws, n)


def alternating_size(n: int) -> int:
    """Closed-form size of the alternating scheme"""
    if n < 3:
        raise DegreeError(f"alternating scheme needs degree >= 3, got {n}")
    if n % 2:
        return 2 ** (n - 3) * (n + 3) - math.comb(n - 1, (n - 1) // 2) * (n - 1) // 2
    # n - 3/2 is a half-integer: work in doubled units
    return (2 ** (n - 2) * (n + 3) - math.comb(n - 2, n // 2 - 1) * (2 * n - 3)) // 2


def maximum_size_bound(n: int) -> int:
    """ceil(4 * 5^((n-3)/2)): the largest domain size for degrees 4..7"""
    return math.ceil(4 * 5 ** ((n - 3) / 2) - 1e-9)


def replacement(outer: Domain, inner: Domain) -> Domain:
    """
    Replace the last alternative k+1 of every order of outer (degree k+1) by
    every order of inner (degree l) shifted to k+1..k+l. The result has
    degree k+l and |outer| * |inner| orders.
    """
    k = outer.degree - 1
    l = inner.degree
    if k < 1 or l < 1:
        raise DegreeError(f"replacement needs outer degree >= 2 and inner degree >= 1, got {outer.degree}, {l}")
    if k + l > 8:
        raise DegreeError(f"replacement would produce degree {k + l}")
    blocks = [tuple(x + k for x in q.slots) for q in inner]
    orders: List[Tuple[int, ...]] = []
    for p, block in product(outer, blocks):
        slots: List[int] = []
        for x in p.slots:
            slots.extend(block if x == k + 1 else (x,))
        orders.append(tuple(slots))
    return Domain.from_permutations(orders, degree=k + l)


def black_single_peaked(n: int) -> Domain:
    """Orders whose every top-k prefix is an interval of 1..n, grown outward from each peak"""
    if n < 2:
        raise DegreeError(f"single-peaked domain needs degree >= 2, got {n}")
    table = group(n)
    ranks = []
    # state: (lowest, highest, slots so far), 1-based
    frontier = [(p, p, (p,)) for p in range(1, n + 1)]
    while frontier:
        lo, hi, slots = frontier.pop()
        if len(slots) == n:
            ranks.append(table.rank_of(tuple(x - 1 for x in slots)))
            continue
        if lo > 1:
            frontier.append((lo - 1, hi, slots + (lo - 1,)))
        if hi < n:
            frontier.append((lo, hi + 1, slots + (hi + 1,)))
    return Domain.from_ranks(n, ranks)


def is_single_peaked_order(p: Permutation) -> bool:
    top_lo = top_hi = p.slots[0]
    for j, x in enumerate(p.slots[1:], start=2):
        top_lo, top_hi = min(top_lo, x), max(top_hi, x)
        if top_hi - top_lo + 1 != j:
            return False
    return True
