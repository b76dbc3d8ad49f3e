"""
Class list files.

Text form, one block per class in canonical-form order, orders 1-based:

    # degree=4 classes=31
    # law_order=lex-aN2aN3bN1bN3cN1cN2
    # comparator=lexmax-sorted-ranks
    1 2 3 4
    1 2 4 3
    ...

    1 2 3 4
    ...

A binary sidecar (<path>.bin) holds the same classes as length-prefixed
little-endian uint16 rank arrays after a small header.
"""
import logging
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from errors import ClassFileError
from permutations import Domain, Permutation, group, rank
from settings import COMPARATOR_ID, LAW_ORDER_ID

logger = logging.getLogger("condorcet")

Ranks = Tuple[int, ...]
PathLike = Union[str, Path]

_HEADER = re.compile(r"^# degree=(\d+) classes=(\d+)$")
_META = re.compile(r"^# (\w+)=(\S*)$")
_MAGIC = b"CDCL"


@dataclass
class ClassFile:
    degree: int
    forms: List[Ranks]
    metadata: Dict[str, str] = field(default_factory=dict)

    def domains(self) -> Iterator[Domain]:
        for ranks in self.forms:
            yield Domain.from_ranks(self.degree, ranks)

    def __len__(self) -> int:
        return len(self.forms)


def write_class_file(path: PathLike, degree: int, forms: Iterable[Ranks],
                     metadata: Optional[Dict[str, str]] = None, sidecar: Optional[bool] = None) -> Path:
    """Write forms in the order given; callers pass them sorted"""
    path = Path(path)
    forms = list(forms)
    table = group(degree)
    meta = {"law_order": LAW_ORDER_ID, "comparator": COMPARATOR_ID}
    meta.update(metadata or {})
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"# degree={degree} classes={len(forms)}\n")
            for key, value in meta.items():
                f.write(f"# {key}={value}\n")
            for index, ranks in enumerate(forms):
                if index:
                    f.write("\n")
                for r in ranks:
                    f.write(" ".join(str(x + 1) for x in table.perms[r]) + "\n")
    except OSError as e:
        raise ClassFileError(f"cannot write class file: {e}", path=str(path)) from e
    if sidecar is None:
        sidecar = degree >= 6
    if sidecar:
        write_sidecar(sidecar_path(path), degree, forms)
    logger.info(f"💾 Wrote {len(forms)} classes of degree {degree} to {path}")
    return path


def _parse_order(line: str, degree: int, path: str, lineno: int, block: int) -> int:
    try:
        p = Permutation(tuple(int(x) for x in line.split()))
    except ValueError as e:
        raise ClassFileError(f"not a permutation: {line!r}", path, lineno, block) from e
    if p.degree != degree:
        raise ClassFileError(f"order has degree {p.degree}, expected {degree}", path, lineno, block)
    return rank(p)


def read_class_file(path: PathLike) -> ClassFile:
    path = Path(path)
    where = str(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ClassFileError(f"cannot read class file: {e}", path=where) from e
    if not lines:
        raise ClassFileError("empty file", path=where)

    header = _HEADER.match(lines[0])
    if not header:
        raise ClassFileError(f"bad header {lines[0]!r}", where, 1)
    degree, declared = int(header.group(1)), int(header.group(2))
    if not 1 <= degree <= 8:
        raise ClassFileError(f"degree {degree} out of range", where, 1)

    metadata: Dict[str, str] = {}
    forms: List[Ranks] = []
    current: List[int] = []

    def close_block(lineno: int) -> None:
        if not current:
            return
        if len(set(current)) != len(current):
            raise ClassFileError("repeated order in class", where, lineno, len(forms) + 1)
        forms.append(tuple(sorted(current)))
        current.clear()

    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if stripped.startswith("#"):
            meta = _META.match(stripped)
            if not meta:
                raise ClassFileError(f"bad metadata line {stripped!r}", where, lineno)
            metadata[meta.group(1)] = meta.group(2)
        elif not stripped:
            close_block(lineno)
        else:
            current.append(_parse_order(stripped, degree, where, lineno, len(forms) + 1))
    close_block(len(lines))

    if not forms:
        raise ClassFileError("no classes in file", path=where)
    if len(forms) != declared:
        raise ClassFileError(f"header declares {declared} classes, found {len(forms)}", path=where)
    logger.debug(f"Read {len(forms)} classes of degree {degree} from {path}")
    return ClassFile(degree, forms, metadata)


def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".bin")


def write_sidecar(path: PathLike, degree: int, forms: List[Ranks]) -> Path:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(_MAGIC + struct.pack("<BI", degree, len(forms)))
        for ranks in forms:
            f.write(struct.pack("<H", len(ranks)))
            f.write(np.asarray(ranks, dtype="<u2").tobytes())
    logger.debug(f"Wrote binary sidecar {path}")
    return path


def read_sidecar(path: PathLike) -> ClassFile:
    path = Path(path)
    where = str(path)
    data = path.read_bytes()
    if data[:4] != _MAGIC or len(data) < 9:
        raise ClassFileError("not a class sidecar file", path=where)
    degree, count = struct.unpack_from("<BI", data, 4)
    offset = 9
    forms: List[Ranks] = []
    for block in range(1, count + 1):
        if offset + 2 > len(data):
            raise ClassFileError("truncated sidecar", path=where, block=block)
        (length,) = struct.unpack_from("<H", data, offset)
        offset += 2
        end = offset + 2 * length
        if end > len(data):
            raise ClassFileError("truncated sidecar", path=where, block=block)
        forms.append(tuple(int(r) for r in np.frombuffer(data[offset:end], dtype="<u2")))
        offset = end
    return ClassFile(degree, forms)
