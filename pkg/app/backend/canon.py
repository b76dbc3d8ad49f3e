"""
Isomorphism classes of domains.

Two domains are isomorphic when one is a relabelling of the other. Every
domain A has |A| unitary relabellings act(A, g^-1), g in A; the canonical
form is the largest of them, comparing sorted rank sequences
lexicographically. All candidates are produced at once from the
multiplication table: column j of table[A, A^-1] is act(A, A[j]^-1).
"""
import heapq
import logging
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np

from errors import DegreeError, EmptyDomainError, NonUnitaryError
from laws import law_table
from permutations import Domain, act, group, inverse, iter_bits, reversal

logger = logging.getLogger("condorcet.canon")

Ranks = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class CanonicalForm:
    degree: int
    ranks: Ranks

    def __len__(self) -> int:
        return len(self.ranks)

    def to_domain(self) -> Domain:
        return Domain.from_ranks(self.degree, self.ranks)


@dataclass(frozen=True)
class ClassKey:
    canonical: CanonicalForm
    flip_canonical: CanonicalForm
    reflexive: bool


def _require(d: Domain) -> np.ndarray:
    if not d.bits:
        raise EmptyDomainError("domain is empty")
    return np.fromiter(iter_bits(d.bits), dtype=np.int64)


def _candidates(n: int, ranks: np.ndarray) -> np.ndarray:
    """Columns are the sorted unitary relabellings act(A, g^-1), one per g in A"""
    table = group(n)
    inverses = np.asarray(table.inverse, dtype=np.int64)[ranks]
    return np.sort(table.multiplication[np.ix_(ranks, inverses)], axis=0)


def _lexmax_column(columns: np.ndarray) -> int:
    alive = np.arange(columns.shape[1])
    for row in columns:
        values = row[alive]
        alive = alive[values == values.max()]
        if len(alive) == 1:
            break
    return int(alive[0])


def canonical_ranks(n: int, bits: int) -> Ranks:
    """Canonical form of a raw bitset, as a tuple of ranks; used by search workers"""
    columns = _candidates(n, np.fromiter(iter_bits(bits), dtype=np.int64))
    return tuple(int(r) for r in columns[:, _lexmax_column(columns)])


def canonical_form(d: Domain) -> CanonicalForm:
    columns = _candidates(d.degree, _require(d))
    return CanonicalForm(d.degree, tuple(int(r) for r in columns[:, _lexmax_column(columns)]))


def candidate_count(d: Domain) -> int:
    """Number of distinct unitary relabellings of d, which equals |d| / |core|"""
    columns = _candidates(d.degree, _require(d))
    return int(np.unique(columns.T, axis=0).shape[0])


def unitarize(d: Domain) -> Domain:
    """act(d, g^-1) for the lowest-ranked g in d; d itself when already unitary"""
    _require(d)
    if d.unitary:
        return d
    g = next(iter(d))
    return act(d, inverse(g))


def restriction_profile(d: Domain) -> Tuple[int, ...]:
    """Sorted sizes of the restrictions to every triple, a relabelling invariant"""
    table = law_table(d.degree)
    return tuple(sorted(table.profile(d.bits, t.index).bit_count() for t in table.triples))


def isomorphic(a: Domain, b: Domain) -> bool:
    if a.degree != b.degree:
        raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")
    _require(a)
    _require(b)
    if len(a) != len(b) or restriction_profile(a) != restriction_profile(b):
        return False
    target = np.fromiter(iter_bits(unitarize(b).bits), dtype=np.int64)
    columns = _candidates(a.degree, np.fromiter(iter_bits(a.bits), dtype=np.int64))
    return bool((columns == target[:, None]).all(axis=0).any())


def dual(d: Domain) -> Domain:
    table = group(d.degree)
    bits = 0
    for r in iter_bits(d.bits):
        bits |= 1 << table.reverse[r]
    return Domain(d.degree, bits)


def conjugate(d: Domain) -> Domain:
    """A^u = uAu: reverse every order, then relabel x -> n+1-x"""
    return act(dual(d), reversal(d.degree))


def core(d: Domain) -> Domain:
    """Orders g of d with act(d, g) == d; a subgroup of the symmetric group"""
    ranks = _require(d)
    if not d.unitary:
        raise NonUnitaryError("core is defined for unitary domains only")
    table = group(d.degree)
    moved = np.sort(table.multiplication[np.ix_(ranks, ranks)], axis=0)
    fixed = (moved == ranks[:, None]).all(axis=0)
    return Domain.from_ranks(d.degree, (int(r) for r in ranks[fixed]))


def class_key(d: Domain) -> ClassKey:
    canonical = canonical_form(d)
    twin = canonical_form(conjugate(d))
    return ClassKey(canonical, max(canonical, twin), canonical == twin)


def key_from_ranks(n: int, ranks: Ranks) -> ClassKey:
    return class_key(Domain.from_ranks(n, ranks))


def dedup(leaves: Iterable[Domain]) -> Set[ClassKey]:
    """One ClassKey per isomorphism class among the leaves"""
    degree: Optional[int] = None
    seen_bits: Set[int] = set()
    forms: Set[Ranks] = set()
    for leaf in leaves:
        if degree is None:
            degree = leaf.degree
        elif leaf.degree != degree:
            raise DegreeError(f"mixed degrees in leaf stream: {degree} and {leaf.degree}")
        if leaf.bits in seen_bits:
            continue
        seen_bits.add(leaf.bits)
        forms.add(canonical_ranks(leaf.degree, leaf.bits))
    if degree is None:
        return set()
    logger.info(f"🔎 {len(seen_bits)} distinct leaves reduced to {len(forms)} classes")
    return {key_from_ranks(degree, ranks) for ranks in forms}


def flip_classes(keys: Iterable[ClassKey]) -> Dict[CanonicalForm, List[ClassKey]]:
    """Isomorphism classes grouped by flip class; twinned classes share a group"""
    groups: Dict[CanonicalForm, List[ClassKey]] = {}
    for key in sorted(keys, key=lambda k: k.canonical):
        groups.setdefault(key.flip_canonical, []).append(key)
    return groups


class SortedRunDedup:
    """
    Duplicate removal for canonical forms that may not fit in memory.
    Forms are buffered up to memory_limit, spilled as sorted runs to a
    temporary directory and merged back in ascending order.
    """

    def __init__(self, memory_limit: int, workdir: Optional[Path] = None):
        self.memory_limit = memory_limit
        self._buffer: Set[Ranks] = set()
        self._tmp = tempfile.TemporaryDirectory(dir=workdir)
        self._runs: List[Path] = []

    def add(self, ranks: Ranks) -> None:
        self._buffer.add(ranks)
        if len(self._buffer) >= self.memory_limit:
            self._spill()

    def update(self, forms: Iterable[Ranks]) -> None:
        for ranks in forms:
            self.add(ranks)

    def _spill(self) -> None:
        path = Path(self._tmp.name) / f"run{len(self._runs):05d}.txt"
        with open(path, "w", encoding="utf-8") as f:
            for ranks in sorted(self._buffer):
                f.write(" ".join(map(str, ranks)) + "\n")
        logger.debug(f"Spilled {len(self._buffer)} forms to {path}")
        self._runs.append(path)
        self._buffer.clear()

    @staticmethod
    def _read_run(path: Path) -> Iterator[Ranks]:
        with open(path, encoding="utf-8") as f:
            for line in f:
                yield tuple(int(r) for r in line.split())

    def __iter__(self) -> Iterator[Ranks]:
        if not self._runs:
            yield from sorted(self._buffer)
            return
        streams = [self._read_run(p) for p in self._runs] + [iter(sorted(self._buffer))]
        previous = None
        for ranks in heapq.merge(*streams):
            if ranks != previous:
                yield ranks
                previous = ranks

    def close(self) -> None:
        self._tmp.cleanup()

    def __enter__(self) -> "SortedRunDedup":
        return self

    def __exit__(self, *exc) -> None:
        self.close()