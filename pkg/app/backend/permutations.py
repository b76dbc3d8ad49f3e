"""
Permutation arithmetic for linear orders on the alternatives 1..n.

A permutation is stored as its slot sequence: slots[j] is the alternative in
position j+1, position 1 being the most preferred. Ranks are lexicographic on
slot sequences, so the identity has rank 0 and the reversal u has rank n!-1.
Domains are sets of ranks held as Python integers used as n!-bit bitsets.

The right action of a permutation g on an order a relabels every alternative
x as g(x); in product notation a*g, with (g*h)(x) = h(g(x)), so that
act(act(d, g), h) == act(d, g*h).
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from errors import DegreeError, PermutationError

logger = logging.getLogger("condorcet")

MAX_TABLE_DEGREE = 8


@dataclass(frozen=True)
class Permutation:
    """A linear order; slots hold 1-based alternatives, most preferred first"""
    slots: Tuple[int, ...]

    def __post_init__(self):
        slots = tuple(int(x) for x in self.slots)
        n = len(slots)
        if n < 1 or sorted(slots) != list(range(1, n + 1)):
            raise PermutationError(f"not a permutation of 1..{n}: {self.slots}")
        object.__setattr__(self, "slots", slots)

    @property
    def degree(self) -> int:
        return len(self.slots)

    def __iter__(self) -> Iterator[int]:
        return iter(self.slots)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.slots)

    def position(self, alternative: int) -> int:
        """1-based position of an alternative"""
        return self.slots.index(alternative) + 1


@dataclass(frozen=True)
class InversionSet:
    """
    Pairs of alternatives (a, b), a < b, with b ranked above a, held as a
    C(n,2)-bit set. Adjacent swaps change exactly one such pair, which makes
    inclusion of these sets the weak Bruhat order on orders.
    """
    degree: int
    bits: int

    def __len__(self) -> int:
        return self.bits.bit_count()

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        table = group(self.degree)
        return [(a + 1, b + 1) for k, (a, b) in enumerate(table.pairs) if self.bits >> k & 1]

    def __le__(self, other: "InversionSet") -> bool:
        return self.degree == other.degree and self.bits & ~other.bits == 0

    def __lt__(self, other: "InversionSet") -> bool:
        return self <= other and self.bits != other.bits


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of set bits, ascending"""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class SymmetricGroup:
    """Lookup tables for all permutations of one degree, built once and shared read-only"""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_TABLE_DEGREE:
            raise DegreeError(f"degree {n} outside 1..{MAX_TABLE_DEGREE}")
        self.n = n
        self.order = math.factorial(n)
        self.perms: List[Tuple[int, ...]] = list(permutations(range(n)))
        self.index: Dict[Tuple[int, ...], int] = {p: r for r, p in enumerate(self.perms)}
        self.positions: List[Tuple[int, ...]] = [
            tuple(sorted(range(n), key=p.__getitem__)) for p in self.perms
        ]
        self.inverse: List[int] = [self.index[pos] for pos in self.positions]
        self.reverse: List[int] = [self.index[p[::-1]] for p in self.perms]
        self.pairs: List[Tuple[int, int]] = list(combinations(range(n), 2))
        self.full = (1 << self.order) - 1
        self.identity = 0
        self.reversal = self.order - 1
        logger.debug(f"Built symmetric group tables for degree {n} ({self.order} orders)")

    def rank_of(self, slots0: Sequence[int]) -> int:
        return self.index[tuple(slots0)]

    def multiply(self, a: int, g: int) -> int:
        """Rank of a*g: the order a with every alternative x relabelled g(x)"""
        gs = self.perms[g]
        return self.index[tuple(gs[x] for x in self.perms[a])]

    @cached_property
    def inversion_bits(self) -> List[int]:
        bits = []
        for pos in self.positions:
            value = 0
            for k, (a, b) in enumerate(self.pairs):
                if pos[b] < pos[a]:
                    value |= 1 << k
            bits.append(value)
        return bits

    @cached_property
    def neighbours(self) -> List[Tuple[int, ...]]:
        """Ranks reachable by one adjacent swap, per rank"""
        result = []
        for p in self.perms:
            adjacent = []
            for j in range(self.n - 1):
                q = list(p)
                q[j], q[j + 1] = q[j + 1], q[j]
                adjacent.append(self.index[tuple(q)])
            result.append(tuple(adjacent))
        return result

    @cached_property
    def multiplication(self) -> np.ndarray:
        """table[a, g] = rank(a*g); uint16 is enough up to degree 8"""
        n = self.n
        slots = np.array(self.perms, dtype=np.int64).reshape(self.order, n)
        weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        keys = slots @ weights
        table = np.empty((self.order, self.order), dtype=np.uint16)
        for g in range(self.order):
            relabelled = slots[g][slots]
            table[:, g] = np.searchsorted(keys, relabelled @ weights)
        logger.debug(f"Built multiplication table for degree {n}")
        return table

    def mask(self, ranks: Iterable[int]) -> int:
        bits = 0
        for r in ranks:
            bits |= 1 << r
        return bits


@lru_cache(maxsize=None)
def group(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)


@dataclass(frozen=True)
class Domain:
    """A set of orders of one degree held as an n!-bit set over ranks"""
    degree: int
    bits: int

    @classmethod
    def from_permutations(cls, perms: Iterable[Union[Permutation, Sequence[int]]], degree: int = 0) -> "Domain":
        ranks = []
        for p in perms:
            p = p if isinstance(p, Permutation) else Permutation(tuple(p))
            if degree and p.degree != degree:
                raise DegreeError(f"order {p} does not have degree {degree}")
            degree = p.degree
            ranks.append(rank(p))
        if not degree:
            raise DegreeError("cannot infer the degree of an empty domain")
        return cls(degree, group(degree).mask(ranks))

    @classmethod
    def from_ranks(cls, degree: int, ranks: Iterable[int]) -> "Domain":
        return cls(degree, group(degree).mask(ranks))

    @classmethod
    def full(cls, degree: int) -> "Domain":
        return cls(degree, group(degree).full)

    @property
    def unitary(self) -> bool:
        return bool(self.bits & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, item: Union[Permutation, int]) -> bool:
        r = rank(item) if isinstance(item, Permutation) else item
        return bool(self.bits >> r & 1)

    def __iter__(self) -> Iterator[Permutation]:
        table = group(self.degree)
        for r in iter_bits(self.bits):
            yield Permutation(tuple(x + 1 for x in table.perms[r]))

    def ranks(self) -> List[int]:
        return list(iter_bits(self.bits))

    def __and__(self, other: "Domain") -> "Domain":
        _same_degree(self, other)
        return Domain(self.degree, self.bits & other.bits)

    def __or__(self, other: "Domain") -> "Domain":
        _same_degree(self, other)
        return Domain(self.degree, self.bits | other.bits)

    def __le__(self, other: "Domain") -> bool:
        _same_degree(self, other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Domain") -> bool:
        return self <= other and self.bits != other.bits


def _same_degree(a: Domain, b: Domain) -> None:
    if a.degree != b.degree:
        raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def reversal(n: int) -> Permutation:
    """The reverse order u: n first, 1 last"""
    return Permutation(tuple(range(n, 0, -1)))


def rank(p: Permutation) -> int:
    """Lexicographic rank via the Lehmer code; identity is 0"""
    slots = p.slots
    n = len(slots)
    result = 0
    for j, x in enumerate(slots):
        smaller_later = sum(1 for y in slots[j + 1:] if y < x)
        result += smaller_later * math.factorial(n - 1 - j)
    return result


def unrank(r: int, n: int) -> Permutation:
    if n < 1:
        raise DegreeError(f"degree must be positive, got {n}")
    if not 0 <= r < math.factorial(n):
        raise PermutationError(f"rank {r} outside 0..{math.factorial(n) - 1}")
    remaining = list(range(1, n + 1))
    slots = []
    for j in range(n - 1, -1, -1):
        digit, r = divmod(r, math.factorial(j))
        slots.append(remaining.pop(digit))
    return Permutation(tuple(slots))


def reverse(p: Permutation) -> Permutation:
    return Permutation(p.slots[::-1])


def compose(g: Permutation, h: Permutation) -> Permutation:
    """The product g*h: first g, then h, as relabellings of alternatives"""
    if g.degree != h.degree:
        raise DegreeError(f"degree mismatch: {g.degree} vs {h.degree}")
    return Permutation(tuple(h.slots[x - 1] for x in g.slots))


def inverse(g: Permutation) -> Permutation:
    slots = [0] * g.degree
    for j, x in enumerate(g.slots):
        slots[x - 1] = j + 1
    return Permutation(tuple(slots))


def inversions(p: Permutation) -> InversionSet:
    table = group(p.degree)
    return InversionSet(p.degree, table.inversion_bits[rank(p)])


def covers(lo: Permutation, hi: Permutation) -> bool:
    """hi covers lo in the weak Bruhat order"""
    if lo.degree != hi.degree:
        raise DegreeError(f"degree mismatch: {lo.degree} vs {hi.degree}")
    a, b = inversions(lo), inversions(hi)
    return a < b and len(b) == len(a) + 1


def restrict(p: Permutation, alts: Iterable[int]) -> Tuple[int, ...]:
    alts = set(alts)
    if not alts:
        raise PermutationError("cannot restrict to an empty set of alternatives")
    if not alts <= set(p.slots):
        raise PermutationError(f"alternatives {sorted(alts)} not all in 1..{p.degree}")
    return tuple(x for x in p.slots if x in alts)


def act(d: Domain, g: Permutation) -> Domain:
    """Relabel every order of d by g (right action)"""
    if d.degree != g.degree:
        raise DegreeError(f"degree mismatch: domain {d.degree} vs permutation {g.degree}")
    table = group(d.degree)
    gr = rank(g)
    bits = 0
    for r in iter_bits(d.bits):
        bits |= 1 << table.multiply(r, gr)
    return Domain(d.degree, bits)
