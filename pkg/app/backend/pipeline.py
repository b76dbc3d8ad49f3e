"""
End-to-end runs: search, canonicalize, deduplicate, and compare with the oracle.

Workers search frontier subtrees and return the sorted canonical forms they
found; the parent merges them through a sorted-run deduplicator, so output is
identical for any number of workers.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Iterable, List, Optional, Tuple

from rich.progress import Progress

from canon import SortedRunDedup, canonical_ranks, key_from_ranks
from errors import DegreeError, SearchAborted
from frontier import Checkpoint
from oracle import MAX_ORACLE_DEGREE, FormComparison, oracle_forms
from search import (
    Frontier,
    ReducedTreeSearch,
    SearchCounters,
    SearchNode,
    default_frontier_depth,
    run_subtrees,
    split_frontier,
)
from settings import Settings, load_settings
from telemetry import trace_phase

logger = logging.getLogger("condorcet")

Ranks = Tuple[int, ...]


@dataclass
class EnumerationResult:
    degree: int
    forms: List[Ranks]
    counters: SearchCounters
    frontier_depth: int
    jobs: int
    flip_count: Optional[int] = None
    reflexive_count: Optional[int] = None
    durations: Dict[str, float] = field(default_factory=dict)

    @property
    def class_count(self) -> int:
        return len(self.forms)

    @property
    def max_size(self) -> int:
        return max((len(f) for f in self.forms), default=0)

    def summary(self) -> str:
        flips = f", {self.flip_count} flip classes" if self.flip_count is not None else ""
        return f"{self.class_count} classes{flips}, max size {self.max_size}"


def search_and_canonicalize(node: SearchNode, prune: bool = True) -> Tuple[List[Ranks], SearchCounters]:
    """Worker: search one subtree and return its distinct canonical forms, sorted"""
    engine = ReducedTreeSearch(node.degree, prune=prune)
    seen = set()
    forms = set()
    for leaf in engine.walk(node):
        if leaf.bits in seen:
            continue
        seen.add(leaf.bits)
        forms.add(canonical_ranks(node.degree, leaf.bits))
    return sorted(forms), engine.counters


def _flip_chunk(n: int, chunk: List[Ranks]) -> List[Tuple[Ranks, bool]]:
    keys = [key_from_ranks(n, ranks) for ranks in chunk]
    return [(key.flip_canonical.ranks, key.reflexive) for key in keys]


def flip_summary(n: int, forms: List[Ranks], jobs: int = 1, chunk: int = 512) -> Tuple[int, int]:
    """(flip class count, reflexive class count)"""
    chunks = [forms[i:i + chunk] for i in range(0, len(forms), chunk)]
    flips = set()
    reflexive = 0
    if jobs <= 1 or len(chunks) <= 1:
        results = (_flip_chunk(n, c) for c in chunks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_flip_chunk, [n] * len(chunks), chunks)
    try:
        for part in results:
            for flip, is_reflexive in part:
                flips.add(flip)
                reflexive += is_reflexive
    finally:
        if pool is not None:
            pool.shutdown()
    return len(flips), reflexive


def _add_flips(result: EnumerationResult, with_flips: Optional[bool]) -> None:
    """Flip and reflexive class counts; on by default up to degree 6"""
    if with_flips is None:
        with_flips = result.degree <= 6
    if not with_flips:
        return
    start = time.perf_counter()
    with trace_phase("flip", degree=result.degree) as phase:
        result.flip_count, result.reflexive_count = flip_summary(result.degree, result.forms, result.jobs)
        phase.update(flip_classes=result.flip_count, reflexive=result.reflexive_count)
    result.durations["flip"] = time.perf_counter() - start


def _check_degree(n: int, settings: Settings) -> None:
    if not 3 <= n <= settings.max_degree:
        raise DegreeError(f"degree must be in 3..{settings.max_degree}, got {n}")


def _run_subtrees(nodes: List[SearchNode], jobs: int, prune: bool, progress: bool):
    """Yield (index, forms, counters) per subtree as they complete"""
    worker = partial(search_and_canonicalize, prune=prune)
    with Progress(disable=not progress, transient=True) as bar:
        task = bar.add_task("Searching subtrees", total=len(nodes))
        for index, forms, counters in run_subtrees(nodes, worker, jobs):
            bar.advance(task)
            yield index, forms, counters


def enumerate_classes(n: int, frontier_depth: Optional[int] = None, jobs: Optional[int] = None,
                      prune: bool = True, with_flips: Optional[bool] = None,
                      settings: Optional[Settings] = None, progress: bool = False) -> EnumerationResult:
    """All isomorphism classes of maximal unitary Condorcet domains of degree n, sorted"""
    settings = settings or load_settings()
    _check_degree(n, settings)
    jobs = jobs or settings.jobs
    if frontier_depth is None:
        frontier_depth = default_frontier_depth(n, jobs, settings.frontier_factor) if jobs > 1 else 0
    durations: Dict[str, float] = {}
    counters = SearchCounters()
    logger.info(f"🚀 Enumerating degree {n} with {jobs} job(s), frontier depth {frontier_depth}")

    start = time.perf_counter()
    with trace_phase("search", degree=n, jobs=jobs, frontier_depth=frontier_depth) as phase:
        frontier = split_frontier(n, frontier_depth, prune=prune)
        done = set()
        with SortedRunDedup(settings.dedup_memory_limit) as dedup:
            try:
                for index, forms, subtree_counters in _run_subtrees(list(frontier.nodes), jobs, prune, progress):
                    dedup.update(forms)
                    counters += subtree_counters
                    done.add(index)
            except (MemoryError, KeyboardInterrupt) as e:
                checkpoint = _checkpoint_abort(frontier, done, dedup, settings)
                raise SearchAborted(f"search of degree {n} stopped ({type(e).__name__}); checkpoint written "
                                    f"to {checkpoint.root}, rerun with --i-have-time to resume",
                                    str(checkpoint.root)) from e
            forms = list(dedup)
        phase.update(counters.as_dict(), classes=len(forms))
    durations["search"] = time.perf_counter() - start

    result = EnumerationResult(n, forms, counters, frontier_depth, jobs, durations=durations)
    _add_flips(result, with_flips)
    logger.info(f"✅ Degree {n}: {result.summary()}")
    return result


def _checkpoint_abort(frontier: Frontier, done: Iterable[int], found: Iterable[Ranks],
                      settings: Settings) -> Checkpoint:
    """
    Record an interrupted run as a checkpoint that enumerate_checkpointed can
    resume. The forms found so far are stored under the first finished
    subtree; the other finished subtrees get empty records.
    """
    checkpoint = Checkpoint(settings.checkpoint_dir, frontier.degree)
    checkpoint.start(frontier)
    finished = sorted(done)
    if finished:
        checkpoint.mark_done(finished[0], found)
        for index in finished[1:]:
            checkpoint.mark_done(index, [])
    logger.error(f"❌ Search aborted with {len(frontier.nodes) - len(finished)} subtrees left")
    return checkpoint


def enumerate_checkpointed(n: int, checkpoint_dir: Optional[str] = None, frontier_depth: Optional[int] = None,
                           jobs: Optional[int] = None, prune: bool = True, max_subtrees: Optional[int] = None,
                           with_flips: Optional[bool] = None,
                           settings: Optional[Settings] = None, progress: bool = False) -> Optional[EnumerationResult]:
    """
    Resumable enumeration. Each finished subtree is recorded in the checkpoint
    directory; a rerun with the same directory skips it. Returns None when
    max_subtrees stopped the run before every subtree finished.
    """
    settings = settings or load_settings()
    _check_degree(n, settings)
    jobs = jobs or settings.jobs
    checkpoint = Checkpoint(checkpoint_dir or settings.checkpoint_dir, n)
    if checkpoint.exists():
        frontier = checkpoint.load_frontier()
        logger.info(f"📂 Resuming degree {n} from {checkpoint.root}")
    else:
        depth = frontier_depth if frontier_depth is not None else default_frontier_depth(
            n, max(jobs, 1), settings.frontier_factor)
        frontier = split_frontier(n, depth, prune=prune)
        checkpoint.start(frontier)

    completed = checkpoint.completed()
    pending = [i for i in range(len(frontier.nodes)) if i not in completed]
    if max_subtrees is not None:
        pending = pending[:max_subtrees]
    logger.info(f"🌳 {len(completed)} of {len(frontier.nodes)} subtrees already done, {len(pending)} to run")

    counters = SearchCounters()
    start = time.perf_counter()
    with trace_phase("search", degree=n, jobs=jobs, frontier_depth=frontier.depth, resumed=bool(completed)):
        nodes = [frontier.nodes[i] for i in pending]
        for position, forms, subtree_counters in _run_subtrees(nodes, jobs, prune, progress):
            checkpoint.mark_done(pending[position], forms)
            counters += subtree_counters

    if len(checkpoint.completed()) < len(frontier.nodes):
        logger.warning(f"⚠️ Checkpoint {checkpoint.root} incomplete; rerun to resume")
        return None

    with SortedRunDedup(settings.dedup_memory_limit) as dedup:
        dedup.update(checkpoint.iter_forms())
        forms = list(dedup)
    result = EnumerationResult(n, forms, counters, frontier.depth, jobs,
                               durations={"search": time.perf_counter() - start})
    _add_flips(result, with_flips)
    logger.info(f"✅ Degree {n}: {result.summary()}")
    return result


def verify_degree(n: int, jobs: int = 1, prune: bool = True) -> FormComparison:
    """Tree-search classes against the brute-force oracle"""
    if not 3 <= n <= MAX_ORACLE_DEGREE:
        raise DegreeError(f"verification supports degrees 3..{MAX_ORACLE_DEGREE}, got {n}")
    with trace_phase("verify", degree=n) as phase:
        search_forms = set(enumerate_classes(n, jobs=jobs, prune=prune, with_flips=False).forms)
        expected = oracle_forms(n)
        comparison = FormComparison(expected=expected, actual=search_forms)
        phase.update(expected=len(expected), actual=len(search_forms), ok=comparison.ok)
    if comparison.ok:
        logger.info(f"✅ Degree {n} verified: {len(expected)} = {len(search_forms)}")
    else:
        logger.error(f"❌ Degree {n} mismatch: {len(comparison.missing)} missing, {len(comparison.extra)} extra")
    return comparison
