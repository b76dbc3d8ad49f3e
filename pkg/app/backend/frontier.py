"""
Frontier files and checkpoint directories for long searches.

A frontier file holds the nodes of one tree level so that subtrees can be
searched later, elsewhere, or after an interruption:

    # degree=6 law_order=lex-aN2aN3bN1bN3cN1cN2 depth=4
    4 0 3 1 0 0100
    ...
    # sha256=<hex digest of the node lines>

Each node line is the depth, the applied law ordinals and the forced bits
(one character per triple, lowest first, "-" at depth 0). The node's
current set is rebuilt from the applied laws.
"""
import hashlib
import logging
import re
from pathlib import Path
from typing import Iterable, Iterator, List, Set, Tuple, Union

from errors import FrontierFileError
from laws import law_table
from permutations import Domain
from search import Frontier, SearchNode
from settings import LAW_ORDER_ID

logger = logging.getLogger("condorcet.frontier")

_HEADER = re.compile(r"^# degree=(\d+) law_order=(\S+)(?: depth=(\d+))?$")
_CHECKSUM = re.compile(r"^# sha256=([0-9a-f]{64})$")

PathLike = Union[str, Path]


def _node_line(node: SearchNode) -> str:
    forced = "".join("1" if node.is_forced(s) else "0" for s in range(node.depth)) or "-"
    return " ".join([str(node.depth), *(str(k) for k in node.applied), forced])


def _digest(lines: Iterable[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def rebuild_node(n: int, applied: Tuple[int, ...], forced_mask: int) -> SearchNode:
    table = law_table(n)
    if len(applied) > len(table.triples):
        raise FrontierFileError(f"{len(applied)} laws given for {len(table.triples)} triples")
    bits = table.group.full
    for s, ordinal in enumerate(applied):
        if not 0 <= ordinal < len(table.search_principal[s]):
            raise FrontierFileError(f"law ordinal {ordinal} out of range at triple {s}")
        bits &= table.search_principal[s][ordinal]
    return SearchNode(n, len(applied), Domain(n, bits), applied, forced_mask)


def write_frontier(frontier: Frontier, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [_node_line(node) for node in frontier.nodes]
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# degree={frontier.degree} law_order={frontier.law_order} depth={frontier.depth}\n")
        for line in lines:
            f.write(line + "\n")
        f.write(f"# sha256={_digest(lines)}\n")
    logger.info(f"💾 Wrote {len(lines)} frontier nodes to {path}")
    return path


def read_frontier(path: PathLike) -> Frontier:
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise FrontierFileError(f"cannot read frontier file {path}: {e}") from e
    if len(raw) < 2:
        raise FrontierFileError(f"{path}: truncated frontier file")

    header = _HEADER.match(raw[0])
    if not header:
        raise FrontierFileError(f"{path}: bad header {raw[0]!r}")
    n, law_order = int(header.group(1)), header.group(2)
    depth = int(header.group(3)) if header.group(3) is not None else None
    if law_order != LAW_ORDER_ID:
        raise FrontierFileError(f"{path}: law order {law_order} does not match {LAW_ORDER_ID}")

    checksum = _CHECKSUM.match(raw[-1])
    if not checksum:
        raise FrontierFileError(f"{path}: missing checksum line")
    body = raw[1:-1]
    if _digest(body) != checksum.group(1):
        raise FrontierFileError(f"{path}: checksum mismatch")

    nodes: List[SearchNode] = []
    for lineno, line in enumerate(body, start=2):
        parts = line.split()
        if len(parts) < 2:
            raise FrontierFileError(f"{path}, line {lineno}: expected depth, laws and forced bits")
        try:
            node_depth = int(parts[0])
            applied = tuple(int(k) for k in parts[1:-1])
        except ValueError as e:
            raise FrontierFileError(f"{path}, line {lineno}: {e}") from e
        if depth is None:
            depth = node_depth
        forced = "" if parts[-1] == "-" else parts[-1]
        if node_depth != depth or len(applied) != depth or len(forced) != depth or set(forced) - {"0", "1"}:
            raise FrontierFileError(f"{path}, line {lineno}: node does not match depth {depth}")
        forced_mask = sum(1 << s for s, flag in enumerate(forced) if flag == "1")
        nodes.append(rebuild_node(n, applied, forced_mask))

    logger.info(f"📂 Read {len(nodes)} frontier nodes of degree {n} from {path}")
    return Frontier(n, depth or 0, tuple(nodes), law_order)


class Checkpoint:
    """
    Directory layout for a resumable search:
        frontier.txt          the split frontier
        done/<index>.txt      canonical forms found below frontier node <index>
    A subtree file is written to a temporary name and renamed once complete.
    """

    def __init__(self, root: PathLike, n: int):
        self.root = Path(root) / f"degree{n}"
        self.n = n
        self.done_dir = self.root / "done"
        self.frontier_path = self.root / "frontier.txt"

    def exists(self) -> bool:
        return self.frontier_path.exists()

    def start(self, frontier: Frontier) -> None:
        """Write the frontier and drop subtree records left by an earlier frontier"""
        self.done_dir.mkdir(parents=True, exist_ok=True)
        for stale in self.done_dir.iterdir():
            stale.unlink()
        write_frontier(frontier, self.frontier_path)

    def load_frontier(self) -> Frontier:
        frontier = read_frontier(self.frontier_path)
        if frontier.degree != self.n:
            raise FrontierFileError(f"checkpoint {self.root} is for degree {frontier.degree}, not {self.n}")
        return frontier

    def completed(self) -> Set[int]:
        if not self.done_dir.exists():
            return set()
        return {int(p.stem) for p in self.done_dir.glob("*.txt") if p.stem.isdigit()}

    def mark_done(self, index: int, forms: Iterable[Tuple[int, ...]]) -> None:
        self.done_dir.mkdir(parents=True, exist_ok=True)
        tmp = self.done_dir / f"{index}.part"
        with open(tmp, "w", encoding="utf-8") as f:
            for form in forms:
                f.write(" ".join(str(r) for r in form) + "\n")
        tmp.replace(self.done_dir / f"{index}.txt")

    def iter_forms(self) -> Iterator[Tuple[int, ...]]:
        """Canonical forms from every completed subtree, possibly repeated across subtrees"""
        for index in sorted(self.completed()):
            path = self.done_dir / f"{index}.txt"
            with open(path, encoding="utf-8") as f:
                for lineno, line in enumerate(f, start=1):
                    try:
                        yield tuple(int(r) for r in line.split())
                    except ValueError as e:
                        raise FrontierFileError(f"{path}, line {lineno}: {e}") from e
