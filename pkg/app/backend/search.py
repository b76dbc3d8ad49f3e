"""
Reduced Condorcet tree search.

Depth t of the tree corresponds to triple t in lexicographic order. A node
holds the closed set obtained by intersecting the principal sets of the laws
applied on triples 0..t-1. From a node:

* if its set already satisfies a law on triple t, only that (minimum) law is
  applied and the step is marked forced;
* otherwise all six identity-compatible laws are tried, and a child survives
  when no earlier non-forced triple now satisfies a law preceding the one
  applied there. With the prune off, a child must also be maximal among sets
  satisfying some law on every triple below its depth (the t-MUCD test);
  with the prune on that test runs on leaves only.

Leaves at depth C(n,3) are maximal unitary Condorcet domains. The same
domain may be emitted more than once; isomorphism reduction happens in canon.
"""
import logging
import os
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, fields
from functools import partial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar

from errors import DegreeError, LawError
from laws import (
    ALLOWED_BY_SATISFIED,
    SATISFIED_SEARCH,
    Law,
    LawTable,
    law_from_ordinal,
    law_table,
)
from permutations import Domain
from settings import LAW_ORDER_ID

logger = logging.getLogger("condorcet.search")

# (depth, bits, applied ordinals, forced mask)
RawNode = Tuple[int, int, Tuple[int, ...], int]
R = TypeVar("R")


@dataclass(frozen=True)
class SearchNode:
    degree: int
    depth: int
    current: Domain
    applied: Tuple[int, ...] = ()
    forced_mask: int = 0

    @classmethod
    def root(cls, n: int) -> "SearchNode":
        return cls(n, 0, Domain.full(n))

    @property
    def raw(self) -> RawNode:
        return (self.depth, self.current.bits, self.applied, self.forced_mask)

    def is_forced(self, s: int) -> bool:
        return bool(self.forced_mask >> s & 1)

    def applied_laws(self) -> List[Law]:
        table = law_table(self.degree)
        return [law_from_ordinal(table.triples[s], k) for s, k in enumerate(self.applied)]


@dataclass
class SearchCounters:
    visited: int = 0
    forced: int = 0
    pruned: int = 0
    cut: int = 0
    leaves: int = 0

    def __iadd__(self, other: "SearchCounters") -> "SearchCounters":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class ReducedTreeSearch:
    """
    Search engine for one degree. prune, force and maximality switch off the
    three reductions; leaves are always checked for maximality. The t-MUCD cut
    below the last level only runs when the precedence prune is off: a class
    whose enclosing t-MUCD lies on a pruned path is otherwise lost.
    """
    n: int
    prune: bool = True
    force: bool = True
    maximality: bool = True
    counters: SearchCounters = field(default_factory=SearchCounters)

    def __post_init__(self):
        if self.n < 3:
            raise DegreeError(f"search needs degree >= 3, got {self.n}")
        self.table: LawTable = law_table(self.n)
        self.depth_limit = len(self.table.triples)
        self.interior_cut = self.maximality and not self.prune

    # single-node operations

    def descend(self, node: SearchNode, law: Law) -> SearchNode:
        if law.triple.index != node.depth:
            raise LawError(f"law {law} is for triple {law.triple.index}, node is at depth {node.depth}")
        if law.ordinal is None:
            raise LawError(f"law {law} is not compatible with the identity order")
        bits = node.current.bits & self.table.search_principal[node.depth][law.ordinal]
        return SearchNode(self.n, node.depth + 1, Domain(self.n, bits),
                          node.applied + (law.ordinal,), node.forced_mask)

    def forced_law(self, node: SearchNode) -> Optional[Law]:
        if node.depth >= self.depth_limit:
            return None
        satisfied = SATISFIED_SEARCH[self.table.profile(node.current.bits, node.depth)]
        if not satisfied:
            return None
        return law_from_ordinal(self.table.triples[node.depth], satisfied[0])

    def force_step(self, node: SearchNode) -> Optional[SearchNode]:
        """The single forced child, with its forced bit set, or None"""
        law = self.forced_law(node)
        if law is None:
            return None
        child = self.descend(node, law)
        return SearchNode(self.n, child.depth, child.current, child.applied,
                          child.forced_mask | 1 << node.depth)

    def prune_by_precedence(self, node: SearchNode) -> bool:
        return self._precedes(node.current.bits, node.applied, node.forced_mask)

    def is_t_mucd(self, node: SearchNode) -> bool:
        return self._maximal(node.current.bits, node.depth)

    # raw-node internals used by the traversal

    def _precedes(self, bits: int, applied: Tuple[int, ...], forced_mask: int) -> bool:
        profile = self.table.profile
        for s, ordinal in enumerate(applied):
            if ordinal == 0 or forced_mask >> s & 1:
                continue
            satisfied = SATISFIED_SEARCH[profile(bits, s)]
            if satisfied and satisfied[0] < ordinal:
                return True
        return False

    def _maximal(self, bits: int, depth: int) -> bool:
        table = self.table
        bound = table.group.full
        for s in range(depth):
            bound &= table.union_set(s, ALLOWED_BY_SATISFIED[table.profile(bits, s)])
            if bound == bits:
                break
        return bound == bits

    def _expand(self, raw: RawNode) -> List[RawNode]:
        depth, bits, applied, forced_mask = raw
        table = self.table
        if self.force:
            satisfied = SATISFIED_SEARCH[table.profile(bits, depth)]
            if satisfied:
                self.counters.forced += 1
                # the parent's maximality carries over when the interior cut ran
                if not self.interior_cut and depth + 1 == self.depth_limit and not self._maximal(bits, depth + 1):
                    self.counters.cut += 1
                    return []
                return [(depth + 1, bits, applied + (satisfied[0],), forced_mask | 1 << depth)]
        last = depth + 1 == self.depth_limit
        children = []
        for ordinal, principal in enumerate(table.search_principal[depth]):
            child_bits = bits & principal
            child_applied = applied + (ordinal,)
            if self.prune and self._precedes(child_bits, child_applied, forced_mask):
                self.counters.pruned += 1
                continue
            if (self.interior_cut or last) and not self._maximal(child_bits, depth + 1):
                self.counters.cut += 1
                continue
            children.append((depth + 1, child_bits, child_applied, forced_mask))
        return children

    def walk(self, start: Optional[SearchNode] = None) -> Iterator[Domain]:
        """Depth-first traversal from start (default: root), children in law order"""
        start = start or SearchNode.root(self.n)
        if start.degree != self.n:
            raise DegreeError(f"node of degree {start.degree} given to a degree-{self.n} search")
        stack: List[RawNode] = [start.raw]
        while stack:
            raw = stack.pop()
            self.counters.visited += 1
            if raw[0] == self.depth_limit:
                self.counters.leaves += 1
                yield Domain(self.n, raw[1])
                continue
            stack.extend(reversed(self._expand(raw)))

    def level(self, depth: int) -> List[SearchNode]:
        """All surviving nodes at the given depth, in law order"""
        if not 0 <= depth < self.depth_limit:
            raise ValueError(f"frontier depth must be in 0..{self.depth_limit - 1}, got {depth}")
        frontier: List[RawNode] = [SearchNode.root(self.n).raw]
        for _ in range(depth):
            next_level: List[RawNode] = []
            for raw in frontier:
                self.counters.visited += 1
                next_level.extend(self._expand(raw))
            frontier = next_level
        return [SearchNode(self.n, d, Domain(self.n, bits), applied, mask)
                for d, bits, applied, mask in frontier]


@dataclass(frozen=True)
class Frontier:
    degree: int
    depth: int
    nodes: Tuple[SearchNode, ...]
    law_order: str

    def __len__(self) -> int:
        return len(self.nodes)


def split_frontier(n: int, depth: int, prune: bool = True) -> Frontier:
    engine = ReducedTreeSearch(n, prune=prune)
    nodes = tuple(engine.level(depth))
    logger.info(f"🌳 Frontier at depth {depth} for degree {n}: {len(nodes)} nodes")
    return Frontier(n, depth, nodes, LAW_ORDER_ID)


def resume(node: SearchNode, prune: bool = True) -> Iterator[Domain]:
    yield from ReducedTreeSearch(node.degree, prune=prune).walk(node)


def default_frontier_depth(n: int, workers: int, factor: int = 8) -> int:
    """Smallest depth whose level holds at least factor*workers nodes"""
    engine = ReducedTreeSearch(n)
    target = factor * workers
    level = [SearchNode.root(n).raw]
    depth = 0
    while len(level) < target and depth < engine.depth_limit - 1:
        level = [child for raw in level for child in engine._expand(raw)]
        depth += 1
    return depth


def search_subtree(node: SearchNode, prune: bool = True) -> Tuple[List[int], SearchCounters]:
    """Worker entry point: leaves of one subtree as raw bitsets, plus counters"""
    engine = ReducedTreeSearch(node.degree, prune=prune)
    leaves = [d.bits for d in engine.walk(node)]
    return leaves, engine.counters


def run_subtrees(nodes: Sequence[SearchNode], worker: Callable[[SearchNode], Tuple[R, SearchCounters]],
                 workers: int = 1) -> Iterator[Tuple[int, R, SearchCounters]]:
    """
    Yield (index, result, counters) for each frontier node as its subtree
    finishes: in frontier order with one worker, in completion order from a
    process pool otherwise. Unstarted subtrees are cancelled when the
    consumer stops early.
    """
    if workers <= 1:
        for index, node in enumerate(nodes):
            result, counters = worker(node)
            yield index, result, counters
        return
    with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or workers)) as pool:
        pending: Dict[Future, int] = {pool.submit(worker, node): index for index, node in enumerate(nodes)}
        try:
            while pending:
                done, _ = wait(pending, return_when=FIRST_COMPLETED)
                for future in done:
                    index = pending.pop(future)
                    result, counters = future.result()
                    yield index, result, counters
        finally:
            for future in pending:
                future.cancel()


def enumerate_mucds(n: int, frontier_depth: Optional[int] = None, workers: int = 1,
                    prune: bool = True, counters: Optional[SearchCounters] = None) -> Iterator[Domain]:
    """
    Every MUCD of degree n at least once. With one worker and no frontier the
    tree is walked directly; otherwise the frontier subtrees go through
    run_subtrees.
    """
    counters = counters if counters is not None else SearchCounters()
    if workers <= 1 and not frontier_depth:
        engine = ReducedTreeSearch(n, prune=prune)
        yield from engine.walk()
        counters += engine.counters
        return

    depth = frontier_depth if frontier_depth is not None else default_frontier_depth(n, workers)
    frontier = split_frontier(n, depth, prune=prune)
    for _, leaves, subtree_counters in run_subtrees(frontier.nodes, partial(search_subtree, prune=prune), workers):
        counters += subtree_counters
        yield from (Domain(n, bits) for bits in leaves)
