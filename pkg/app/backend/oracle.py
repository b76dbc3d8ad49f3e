"""
Brute-force cross-checks that share no code with the tree search.

The Latin-square form of the Condorcet condition makes a domain an
independent set of a 3-uniform hypergraph on the orders: three orders form an
edge when, restricted to some three alternatives, they read as a 3x3 Latin
square. Maximal unitary Condorcet domains are then the maximal independent
sets containing the identity, enumerated here by include/exclude backtracking
in the manner of Bron-Kerbosch: R holds included orders, P undecided
ones, X excluded ones that still have to be blocked by two members of R.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterator, List, Set, Tuple

from canon import canonical_ranks
from errors import DegreeError
from laws import is_cd
from permutations import Domain, group, iter_bits

logger = logging.getLogger("condorcet.oracle")

MAX_ORACLE_DEGREE = 4


@lru_cache(maxsize=None)
def latin_edges(n: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Per order r, the pairs (x, y) such that {r, x, y} is a Latin-square triple of orders"""
    table = group(n)
    edges: List[Set[Tuple[int, int]]] = [set() for _ in range(table.order)]
    for alts in combinations(range(n), 3):
        alt_set = set(alts)
        by_pattern: Dict[Tuple[int, ...], List[int]] = {}
        for r, p in enumerate(table.perms):
            by_pattern.setdefault(tuple(x for x in p if x in alt_set), []).append(r)
        a, b, c = alts
        for cycle in (((a, b, c), (b, c, a), (c, a, b)), ((a, c, b), (c, b, a), (b, a, c))):
            for r0, r1, r2 in product(*(by_pattern[pattern] for pattern in cycle)):
                edges[r0].add((min(r1, r2), max(r1, r2)))
                edges[r1].add((min(r0, r2), max(r0, r2)))
                edges[r2].add((min(r0, r1), max(r0, r1)))
    return tuple(tuple(sorted(e)) for e in edges)


@dataclass
class _Search:
    n: int
    edges: Tuple[Tuple[Tuple[int, int], ...], ...]
    found: List[int] = field(default_factory=list)

    def blocked(self, v: int, included: int) -> bool:
        return any(included >> x & 1 and included >> y & 1 for x, y in self.edges[v])

    def blockable(self, v: int, allowed: int) -> bool:
        return any(allowed >> x & 1 and allowed >> y & 1 for x, y in self.edges[v])

    def run(self, r: int, p: List[int], x: List[int]) -> None:
        # excluded orders need two included orders to block them; give up once impossible
        allowed = r
        for v in p:
            allowed |= 1 << v
        if any(not self.blockable(v, allowed) for v in x):
            return
        if not p:
            if all(self.blocked(v, r) for v in x):
                self.found.append(r)
            return
        v, rest = p[0], p[1:]
        if self.blocked(v, r):
            self.run(r, rest, x)
            return
        self.run(r | 1 << v, rest, x)
        self.run(r, rest, x + [v])


def maximal_unitary_domains(n: int) -> Iterator[Domain]:
    """Every maximal Latin-square-free set of orders containing the identity"""
    if not 3 <= n <= MAX_ORACLE_DEGREE:
        raise DegreeError(f"oracle enumeration supports degrees 3..{MAX_ORACLE_DEGREE}, got {n}")
    table = group(n)
    search = _Search(n, latin_edges(n))
    search.run(1 << table.identity, list(range(1, table.order)), [])
    logger.info(f"🧮 Oracle found {len(search.found)} maximal unitary domains of degree {n}")
    for bits in search.found:
        yield Domain(n, bits)


def oracle_forms(n: int) -> Set[Tuple[int, ...]]:
    return {canonical_ranks(n, d.bits) for d in maximal_unitary_domains(n)}


def is_maximal(d: Domain) -> bool:
    """d is a Condorcet domain and no single order can be added to it"""
    if not is_cd(d):
        return False
    full = group(d.degree).full
    for r in iter_bits(full & ~d.bits):
        if is_cd(Domain(d.degree, d.bits | 1 << r)):
            return False
    return True


@dataclass
class FormComparison:
    expected: Set[Tuple[int, ...]]
    actual: Set[Tuple[int, ...]]

    @property
    def missing(self) -> List[Tuple[int, ...]]:
        return sorted(self.expected - self.actual)

    @property
    def extra(self) -> List[Tuple[int, ...]]:
        return sorted(self.actual - self.expected)

    @property
    def ok(self) -> bool:
        return self.expected == self.actual
