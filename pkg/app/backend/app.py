"""
Command line for enumerating and classifying maximal unitary Condorcet domains.

    enumerate --degree N [--frontier-depth D] [--jobs J] --out PATH
    classify  --in PATH --out PREFIX
    verify    --degree N
    scheme    (alternating|black) --degree N | scheme replacement --left PATH --right PATH
    canon     --in PATH --out PATH
    stats     --in PATH

Exit codes: 0 success, 1 invariant or verification failure, 2 usage error.
"""
import argparse
import logging
import sys
import time
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from canon import SortedRunDedup, canonical_ranks
from class_files import read_class_file, write_class_file
from classify import (
    DegreeReport,
    check_invariants,
    classify_all,
    classify_domain,
    maximum_summary,
    size_histogram,
    size_moments,
)
from errors import CondorcetError, InvariantViolation, SearchAborted
from oracle import is_maximal
from permutations import Domain
from pipeline import EnumerationResult, enumerate_checkpointed, enumerate_classes, verify_degree
from run_manifest import RunManifest, manifest_path
from schemes import alternating, black_single_peaked, replacement
from settings import Settings, load_settings
from telemetry import get_run_stats

logger = logging.getLogger("condorcet")
console = Console()

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
MAXIMALITY_CHECK_DEGREE = 6


def configure_logging(level: str) -> None:
    logging.basicConfig(level=logging.WARNING, format="%(message)s", datefmt="[%X]",
                        handlers=[RichHandler(rich_tracebacks=True)])
    for name in ("condorcet", "telemetry", "run_manifest"):
        logging.getLogger(name).setLevel(level)


def _maximum_report(n: int, forms: List[tuple]) -> str:
    summary = maximum_summary(n, forms)
    return (f"max size {summary['max_size']} ({summary['max_classes']} classes, "
            f"{'all' if summary['alternating'] else 'not all'} flip-isomorphic to the alternating scheme)")


def cmd_enumerate(args: argparse.Namespace, settings: Settings) -> int:
    n = args.degree
    if n >= 7 and not args.i_have_time:
        logger.error(f"❌ Degree {n} runs for a very long time; pass --i-have-time to start it")
        return EXIT_USAGE
    manifest = RunManifest(manifest_path(args.out))
    manifest.start("enumerate", degree=n, frontier_depth=args.frontier_depth,
                   jobs=args.jobs or settings.jobs, prune=not args.no_prune)
    start = time.perf_counter()
    result: Optional[EnumerationResult]
    if args.i_have_time:
        result = enumerate_checkpointed(n, args.checkpoint, args.frontier_depth, args.jobs,
                                        prune=not args.no_prune, max_subtrees=args.max_subtrees,
                                        settings=settings, progress=console.is_terminal)
        if result is None:
            manifest.log_results(status="incomplete")
            manifest.finish()
            console.print("Checkpoint incomplete; rerun the same command to resume.")
            return EXIT_OK
    else:
        result = enumerate_classes(n, args.frontier_depth, args.jobs, prune=not args.no_prune,
                                   settings=settings, progress=console.is_terminal)
    manifest.log_phase("search", time.perf_counter() - start, result.counters.as_dict())

    write_class_file(args.out, n, result.forms)
    manifest.log_results(classes=result.class_count, flip_classes=result.flip_count,
                         reflexive_classes=result.reflexive_count, max_size=result.max_size,
                         durations=result.durations)
    manifest.finish()

    console.print(f"{result.summary()}")
    console.print(_maximum_report(n, result.forms))
    counters = ", ".join(f"{key} {value}" for key, value in result.counters.as_dict().items())
    console.print(f"nodes: {counters}")
    return EXIT_OK


def _print_report(report: DegreeReport) -> None:
    table = Table(title=f"Degree {report.degree}: {len(report.records)} classes, {report.flip_count} flip classes")
    frame = report.table()
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*(str(v) for v in row))
    console.print(table)


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    classes = read_class_file(args.input)
    report = classify_all(classes.degree, classes.forms, workers=args.jobs or settings.jobs)
    report.to_csv(args.out)
    _print_report(report)
    try:
        check_invariants(report.records)
    except InvariantViolation as e:
        logger.error(f"❌ {e}")
        for detail in e.details[:20]:
            logger.error(f"   size {detail['size']}: {detail['failure']}")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    comparison = verify_degree(args.degree, jobs=args.jobs or 1)
    console.print(f"oracle {len(comparison.expected)} classes, search {len(comparison.actual)} classes")
    if comparison.ok:
        console.print("pass")
        return EXIT_OK
    for ranks in comparison.missing:
        console.print(f"missing from search: {' '.join(map(str, ranks))}")
    for ranks in comparison.extra:
        console.print(f"not found by oracle: {' '.join(map(str, ranks))}")
    console.print("fail")
    return EXIT_FAILURE


def cmd_scheme(args: argparse.Namespace, settings: Settings) -> int:
    if args.kind == "replacement":
        if not args.left or not args.right:
            logger.error("❌ replacement needs --left and --right class files")
            return EXIT_USAGE
        left, right = read_class_file(args.left), read_class_file(args.right)
        domain = replacement(next(left.domains()), next(right.domains()))
    elif args.degree is None:
        logger.error(f"❌ {args.kind} needs --degree")
        return EXIT_USAGE
    elif args.kind == "alternating":
        domain = alternating(args.degree, args.variant)
    else:
        domain = black_single_peaked(args.degree)

    n = domain.degree
    console.print(f"{args.kind} scheme of degree {n}: size {len(domain)}")
    if 3 <= n <= MAXIMALITY_CHECK_DEGREE:
        console.print(f"maximal: {is_maximal(domain)}")
    if 3 <= n <= settings.max_degree:
        record = classify_domain(domain)
        flags = [name for name in ("connected", "peak_pit", "normal", "symmetric", "self_dual", "copious",
                                   "ample", "fixing", "reducible", "arrow_sp", "usp", "sp_tree", "sp_star")
                 if getattr(record, name)]
        console.print(f"properties: {', '.join(flags) or 'none'}")
    if args.out:
        write_class_file(args.out, n, [tuple(domain.ranks())], {"scheme": args.kind})
    return EXIT_OK


def cmd_canon(args: argparse.Namespace, settings: Settings) -> int:
    classes = read_class_file(args.input)
    with SortedRunDedup(settings.dedup_memory_limit) as dedup:
        for ranks in classes.forms:
            dedup.add(canonical_ranks(classes.degree, Domain.from_ranks(classes.degree, ranks).bits))
        forms = list(dedup)
    write_class_file(args.out, classes.degree, forms)
    console.print(f"{len(classes.forms)} domains, {len(forms)} classes")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, settings: Settings) -> int:
    classes = read_class_file(args.input)
    sizes = [len(f) for f in classes.forms]
    histogram = size_histogram(classes.degree, sizes)

    table = Table(title=f"Degree {classes.degree}: {len(sizes)} classes by size")
    table.add_column("Size", justify="right")
    table.add_column("Classes", justify="right")
    for row in histogram.itertuples(index=False):
        table.add_row(str(row.Size), str(row.Classes))
    console.print(table)
    moments = size_moments(sizes)
    console.print(", ".join(f"{key} {value:.4f}" for key, value in moments.items()))
    if classes.degree >= 3 and sizes:
        console.print(_maximum_report(classes.degree, classes.forms))
    if args.out:
        histogram.to_csv(args.out, index=False)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="condorcet", description="Maximal unitary Condorcet domains")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="Enumerate isomorphism classes of one degree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--frontier-depth", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", required=True, help="Class file to write")
    p.add_argument("--no-prune", action="store_true", help="Disable the precedence prune")
    p.add_argument("--i-have-time", action="store_true", help="Allow degree 7; checkpointed and resumable")
    p.add_argument("--checkpoint", help="Checkpoint directory for --i-have-time runs")
    p.add_argument("--max-subtrees", type=int, help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("classify", help="Property tables for a class file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="Prefix for the CSV reports")
    p.add_argument("--jobs", type=int)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", help="Compare the search with the brute-force oracle")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("scheme", help="Build a known domain")
    p.add_argument("kind", choices=["alternating", "black", "replacement"])
    p.add_argument("--degree", type=int)
    p.add_argument("--variant", choices=["A", "B"], default="A")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_scheme)

    p = sub.add_parser("canon", help="Canonicalise, deduplicate and sort a domain file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_canon)

    p = sub.add_parser("stats", help="Size histogram and moments of a class file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="CSV file for the histogram")
    p.set_defaults(handler=cmd_stats)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
    except ValueError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging("DEBUG" if args.verbose else settings.log_level)
    try:
        code = args.handler(args, settings)
    except InvariantViolation as e:
        logger.error(f"❌ {e}")
        return EXIT_FAILURE
    except SearchAborted as e:
        logger.error(f"❌ {e}")
        return EXIT_FAILURE
    except (CondorcetError, ValueError, OSError) as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_USAGE
    logger.debug(f"Run stats: {get_run_stats()['stats']}")
    return code


if __name__ == "__main__":
    sys.exit(main())
