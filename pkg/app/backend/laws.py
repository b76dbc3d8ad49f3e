"""
Never conditions (laws), principal closed permutation sets and the Galois closures.

On a triple a<b<c the six restricted orders are numbered lexicographically
(abc, acb, bac, bca, cab, cba). A law xNi forbids the two orders that put x in
position i. A domain's profile on a triple is the 6-bit set of restricted
orders that occur in it; a law is satisfied iff profile & forbidden == 0.
"""
import logging
import operator
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from errors import DegreeError, EmptyDomainError
from permutations import Domain, group, iter_bits

logger = logging.getLogger("condorcet")

PATTERNS: List[Tuple[int, ...]] = list(permutations(range(3)))

# (role, position) pairs; role 0/1/2 = a/b/c of the triple, position 1..3
SEARCH_FORMS: List[Tuple[int, int]] = [(0, 2), (0, 3), (1, 1), (1, 3), (2, 1), (2, 2)]
ALL_FORMS: List[Tuple[int, int]] = [(role, i) for role in range(3) for i in (1, 2, 3)]

FORBIDDEN: Dict[Tuple[int, int], int] = {
    (role, i): sum(1 << k for k, pattern in enumerate(PATTERNS) if pattern[i - 1] == role)
    for role, i in ALL_FORMS
}
SEARCH_FORBIDDEN: List[int] = [FORBIDDEN[form] for form in SEARCH_FORMS]

# profile -> satisfied forms, precomputed for all 64 profiles
SATISFIED_SEARCH: List[Tuple[int, ...]] = [
    tuple(k for k, forb in enumerate(SEARCH_FORBIDDEN) if profile & forb == 0) for profile in range(64)
]
SATISFIED_ALL: List[Tuple[Tuple[int, int], ...]] = [
    tuple(form for form in ALL_FORMS if profile & FORBIDDEN[form] == 0) for profile in range(64)
]
# profile -> restricted orders allowed by at least one satisfied search law
ALLOWED_BY_SATISFIED: List[int] = [
    reduce(operator.or_, (63 & ~SEARCH_FORBIDDEN[k] for k in SATISFIED_SEARCH[profile]), 0)
    for profile in range(64)
]

LAW_ORDER_NAMES = ["aN2", "aN3", "bN1", "bN3", "cN1", "cN2"]


@dataclass(frozen=True)
class Triple:
    a: int
    b: int
    c: int
    index: int

    @property
    def alternatives(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class Law:
    """x never in position i when an order is restricted to the triple"""
    triple: Triple
    x: int
    i: int

    def __post_init__(self):
        if self.x not in self.triple.alternatives or self.i not in (1, 2, 3):
            raise ValueError(f"invalid law {self.x}N{self.i} on {self.triple}")

    @property
    def form(self) -> Tuple[int, int]:
        return (self.triple.alternatives.index(self.x), self.i)

    @property
    def ordinal(self) -> Optional[int]:
        """Position in the within-triple search order, None for aN1, bN2, cN3"""
        try:
            return SEARCH_FORMS.index(self.form)
        except ValueError:
            return None

    @property
    def forbidden(self) -> int:
        return FORBIDDEN[self.form]

    def __str__(self) -> str:
        return f"{self.x}N{self.i}@{self.triple}"


@lru_cache(maxsize=None)
def triples(n: int) -> Tuple[Triple, ...]:
    return tuple(Triple(a, b, c, k) for k, (a, b, c) in enumerate(combinations(range(1, n + 1), 3)))


def law_from_ordinal(triple: Triple, ordinal: int) -> Law:
    role, i = SEARCH_FORMS[ordinal]
    return Law(triple, triple.alternatives[role], i)


def law_from_form(triple: Triple, form: Tuple[int, int]) -> Law:
    role, i = form
    return Law(triple, triple.alternatives[role], i)


def law_order(n: int) -> List[Law]:
    """Triples lexicographic; within a triple aN2, aN3, bN1, bN3, cN1, cN2"""
    if n < 3:
        raise DegreeError(f"laws need degree >= 3, got {n}")
    return [law_from_ordinal(t, k) for t in triples(n) for k in range(len(SEARCH_FORMS))]


def flags_to_bits(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


class LawTable:
    """
    Restricted-order sets and principal closed sets for every triple of one
    degree, computed once as bitsets and shared read-only.
    """

    def __init__(self, n: int):
        if n < 3:
            raise DegreeError(f"laws need degree >= 3, got {n}")
        self.n = n
        self.group = group(n)
        self.triples = triples(n)
        positions = np.array(self.group.positions, dtype=np.int8).reshape(self.group.order, n)
        pattern_index = {pattern: k for k, pattern in enumerate(PATTERNS)}
        self.pattern_sets: List[Tuple[int, ...]] = []
        for t in self.triples:
            cols = positions[:, [t.a - 1, t.b - 1, t.c - 1]]
            roles = np.argsort(cols, axis=1)
            codes = np.array([pattern_index[tuple(row)] for row in roles.tolist()])
            self.pattern_sets.append(tuple(flags_to_bits(codes == k) for k in range(len(PATTERNS))))
        self._unions: Dict[Tuple[int, int], int] = {}
        self.principal: List[Dict[Tuple[int, int], int]] = [
            {form: self.union_set(t.index, 63 & ~FORBIDDEN[form]) for form in ALL_FORMS}
            for t in self.triples
        ]
        self.search_principal: List[Tuple[int, ...]] = [
            tuple(self.principal[t.index][form] for form in SEARCH_FORMS) for t in self.triples
        ]
        logger.debug(f"Precomputed {len(self.triples) * len(ALL_FORMS)} principal sets for degree {n}")

    def union_set(self, t: int, allowed: int) -> int:
        """Orders whose restriction to triple t is one of the allowed patterns"""
        key = (t, allowed)
        bits = self._unions.get(key)
        if bits is None:
            bits = 0
            for k in iter_bits(allowed):
                bits |= self.pattern_sets[t][k]
            self._unions[key] = bits
        return bits

    def profile(self, bits: int, t: int) -> int:
        result = 0
        for k, pattern_bits in enumerate(self.pattern_sets[t]):
            if bits & pattern_bits:
                result |= 1 << k
        return result


@lru_cache(maxsize=None)
def law_table(n: int) -> LawTable:
    return LawTable(n)


def principal_set(law: Law, n: int) -> Domain:
    table = law_table(n)
    return Domain(n, table.principal[law.triple.index][law.form])


def _require_nonempty(d: Domain) -> None:
    if not d.bits:
        raise EmptyDomainError("domain is empty")


def satisfied_laws(d: Domain, t: Triple, all_forms: Optional[bool] = None) -> List[Law]:
    """
    Laws on triple t satisfied by d. Unitary domains only test the six
    identity-compatible laws unless all_forms is requested.
    """
    _require_nonempty(d)
    profile = law_table(d.degree).profile(d.bits, t.index)
    if all_forms is None:
        all_forms = not d.unitary
    if all_forms:
        return [law_from_form(t, form) for form in SATISFIED_ALL[profile]]
    return [law_from_ordinal(t, k) for k in SATISFIED_SEARCH[profile]]


def restriction_size(d: Domain, t: Triple) -> int:
    """Number of distinct orders d induces on the triple"""
    return law_table(d.degree).profile(d.bits, t.index).bit_count()


def closure_of_laws(laws: Iterable[Law], n: int) -> Domain:
    table = law_table(n)
    bits = table.group.full
    for law in laws:
        bits &= table.principal[law.triple.index][law.form]
    return Domain(n, bits)


def closure_of_set(d: Domain) -> Domain:
    """All orders obeying every law (any of the nine forms) that d obeys"""
    _require_nonempty(d)
    table = law_table(d.degree)
    bits = table.group.full
    for t in table.triples:
        for form in SATISFIED_ALL[table.profile(d.bits, t.index)]:
            bits &= table.principal[t.index][form]
    return Domain(d.degree, bits)


def is_cd(d: Domain) -> bool:
    """Sen form: every triple satisfies at least one of the nine laws"""
    _require_nonempty(d)
    table = law_table(d.degree)
    return all(SATISFIED_ALL[table.profile(d.bits, t.index)] for t in table.triples)


def is_cd_latin(d: Domain) -> bool:
    """Ward form: no three orders restrict to a 3x3 Latin square on any triple"""
    _require_nonempty(d)
    for t in triples(d.degree):
        alts = set(t.alternatives)
        restricted = {tuple(x for x in p.slots if x in alts) for p in d}
        for rows in combinations(restricted, 3):
            if all(len({row[j] for row in rows}) == 3 for j in range(3)):
                return False
    return True
