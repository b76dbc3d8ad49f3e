"""
Structural properties of Condorcet domains and per-degree reports.

Every classifier works on bitsets against masks precomputed once per degree
(orders with a before b, orders with x at position p, orders in which a set
of alternatives is consecutive, ...). Classifiers that mention laws consider
all nine forms.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from networkx.utils import UnionFind
from pydantic import BaseModel

from canon import CanonicalForm, ClassKey, class_key, core, dual, flip_classes, key_from_ranks
from errors import DegreeError, EmptyDomainError, InvariantViolation
from laws import FORBIDDEN, SATISFIED_ALL, flags_to_bits, law_table
from permutations import Domain, act, group, inverse, iter_bits, unrank
from schemes import alternating
from telemetry import trace_phase
from trees import requirement_bit, tree_requirements

logger = logging.getLogger("condorcet.classify")

FLAG_COLUMNS = [
    ("Connected", "connected"),
    ("Normal", "normal"),
    ("SelfDual", "self_dual"),
    ("Symmetric", "symmetric"),
    ("NonAmple", "non_ample"),
    ("Reducible", "reducible"),
    ("Copious", "copious"),
    ("USP", "usp"),
    ("NUSPD", "nuspd"),
    ("SPT", "sp_tree"),
    ("Star", "sp_star"),
    ("Fixing", "fixing"),
    ("ArrowSP", "arrow_sp"),
    ("PeakPit", "peak_pit"),
]


class ClassRecord(BaseModel):
    degree: int
    canonical: Tuple[int, ...]
    flip_canonical: Tuple[int, ...]
    reflexive: bool
    size: int
    core_order: int
    dual_intersection: int
    restriction_sizes: Tuple[int, ...]
    connected: bool
    peak_pit: bool
    normal: bool
    symmetric: bool
    self_dual: bool
    copious: bool
    ample: bool
    fixing: bool
    reducible: bool
    arrow_sp: bool
    usp: bool
    nuspd: bool
    sp_tree: bool
    sp_star: bool
    boolean_intersection: Optional[bool] = None

    @property
    def class_key(self) -> ClassKey:
        return ClassKey(CanonicalForm(self.degree, self.canonical),
                        CanonicalForm(self.degree, self.flip_canonical), self.reflexive)


class ClassifierTables:
    """Per-degree masks shared by all classifiers"""

    def __init__(self, n: int):
        if n < 3:
            raise DegreeError(f"classification needs degree >= 3, got {n}")
        self.n = n
        self.group = group(n)
        self.laws = law_table(n)
        slots = np.array(self.group.perms, dtype=np.int8).reshape(self.group.order, n)
        positions = np.array(self.group.positions, dtype=np.int8).reshape(self.group.order, n)

        self.before = [flags_to_bits(positions[:, a] < positions[:, b]) for a, b in self.group.pairs]
        self.at_position = [[flags_to_bits(slots[:, p] == x) for p in range(n)] for x in range(n)]
        self.first = [flags_to_bits(slots[:, 0] == a) for a in range(n)]
        self.first_second = {
            (a, b): flags_to_bits((slots[:, 0] == a) & (slots[:, 1] == b))
            for a in range(n) for b in range(n) if a != b
        }
        self.consecutive: List[int] = []
        for k in range(2, n):
            for subset in combinations(range(n), k):
                cols = positions[:, list(subset)]
                self.consecutive.append(flags_to_bits(cols.max(axis=1) - cols.min(axis=1) == k - 1))
        self.pair_full = (1 << len(self.group.pairs)) - 1
        self.trees = tree_requirements(n)
        logger.debug(f"Classifier tables ready for degree {n}")


@lru_cache(maxsize=None)
def tables(n: int) -> ClassifierTables:
    return ClassifierTables(n)


def _require(d: Domain) -> ClassifierTables:
    if not d.bits:
        raise EmptyDomainError("domain is empty")
    return tables(d.degree)


def _profiles(d: Domain) -> List[int]:
    table = law_table(d.degree)
    return [table.profile(d.bits, t.index) for t in table.triples]


def connected(d: Domain) -> bool:
    """Weak connectivity of d in the permutohedron (adjacent-swap neighbours)"""
    t = _require(d)
    members = d.ranks()
    uf = UnionFind(members)
    for r in members:
        for s in t.group.neighbours[r]:
            if d.bits >> s & 1:
                uf.union(r, s)
    return len(list(uf.to_sets())) == 1


def _every_triple_has(d: Domain, positions: Sequence[int]) -> bool:
    _require(d)
    return all(any(i in positions for _, i in SATISFIED_ALL[p]) for p in _profiles(d))


def peak_pit(d: Domain) -> bool:
    return _every_triple_has(d, (1, 3))


def arrow_sp(d: Domain) -> bool:
    return _every_triple_has(d, (3,))


def dual_intersection(d: Domain) -> int:
    _require(d)
    return (d.bits & dual(d).bits).bit_count()


def normal(d: Domain) -> bool:
    return dual_intersection(d) > 0


def symmetric(d: Domain) -> bool:
    _require(d)
    return dual(d).bits == d.bits


def self_dual(d: Domain) -> bool:
    _require(d)
    return class_key(d).reflexive


def restriction_sizes(d: Domain) -> Tuple[int, ...]:
    _require(d)
    return tuple(sorted({p.bit_count() for p in _profiles(d)}))


def copious(d: Domain) -> bool:
    _require(d)
    return all(p.bit_count() == 4 for p in _profiles(d))


def ample(d: Domain) -> bool:
    t = _require(d)
    return all(d.bits & mask and d.bits & ~mask for mask in t.before)


def fixing(d: Domain) -> bool:
    t = _require(d)
    return any(d.bits & mask == d.bits for row in t.at_position for mask in row)


def reducible(d: Domain) -> bool:
    t = _require(d)
    return any(d.bits & mask == d.bits for mask in t.consecutive)


def usp(d: Domain) -> bool:
    """Some a is ranked first in d, and every order ranking a first ranks one fixed b second"""
    t = _require(d)
    for a in range(d.degree):
        firsts = d.bits & t.first[a]
        if not firsts:
            continue
        if any(firsts & ~t.first_second[(a, b)] == 0 for b in range(d.degree) if b != a):
            return True
    return False


def nuspd(d: Domain) -> bool:
    return not usp(d) and not usp(dual(d))


def n3_mask(d: Domain) -> int:
    """One bit per (triple, role) whose never-last law d satisfies"""
    mask = 0
    for index, profile in enumerate(_profiles(d)):
        for role in range(3):
            if profile & FORBIDDEN[(role, 3)] == 0:
                mask |= requirement_bit(index, role)
    return mask


def sp_on_tree(d: Domain) -> bool:
    t = _require(d)
    return t.trees.satisfied_by(n3_mask(d))


def sp_on_star(d: Domain) -> bool:
    t = _require(d)
    return t.trees.satisfied_by(n3_mask(d), stars_only=True)


def _transitive(bits: int, t: ClassifierTables) -> int:
    """Transitive closure of an inversion relation given as pair bits"""
    above = [0] * t.n
    for k, (a, b) in enumerate(t.group.pairs):
        if bits >> k & 1:
            above[b] |= 1 << a
    for k in range(t.n):
        for x in range(t.n):
            if above[x] >> k & 1:
                above[x] |= above[k]
    closed = 0
    for k, (a, b) in enumerate(t.group.pairs):
        if above[b] >> a & 1:
            closed |= 1 << k
    return closed


def boolean_intersection(d: Domain) -> Optional[bool]:
    """
    Whether I = d ∩ dual(d), relabelled to contain the identity and the
    reversal, is closed under weak-order meet and join with every element's
    reverse as its only complement. None when I is empty.
    """
    t = _require(d)
    inter = Domain(d.degree, d.bits & dual(d).bits)
    if not inter.bits:
        return None
    beta = unrank(next(iter_bits(inter.bits)), d.degree)
    relabelled = act(inter, inverse(beta))
    members = {t.group.inversion_bits[r] for r in iter_bits(relabelled.bits)}
    full = t.pair_full

    def join(s: int, u: int) -> int:
        return _transitive(s | u, t)

    def meet(s: int, u: int) -> int:
        return full ^ _transitive((full ^ s) | (full ^ u), t)

    for s, u in combinations(members, 2):
        if join(s, u) not in members or meet(s, u) not in members:
            return False
    for s in members:
        complements = [u for u in members if join(s, u) == full and meet(s, u) == 0]
        if complements != [full ^ s]:
            return False
    return True


def classify_domain(d: Domain) -> ClassRecord:
    _require(d)
    key = class_key(d)
    unitary = key.canonical.to_domain()
    di = dual_intersection(unitary)
    usp_flag = usp(unitary)
    return ClassRecord(
        degree=d.degree,
        canonical=key.canonical.ranks,
        flip_canonical=key.flip_canonical.ranks,
        reflexive=key.reflexive,
        size=len(unitary),
        core_order=len(core(unitary)),
        dual_intersection=di,
        restriction_sizes=restriction_sizes(unitary),
        connected=connected(unitary),
        peak_pit=peak_pit(unitary),
        normal=di > 0,
        symmetric=di == len(unitary),
        self_dual=key.reflexive,
        copious=copious(unitary),
        ample=ample(unitary),
        fixing=fixing(unitary),
        reducible=reducible(unitary),
        arrow_sp=arrow_sp(unitary),
        usp=usp_flag,
        nuspd=not usp_flag and not usp(dual(unitary)),
        sp_tree=sp_on_tree(unitary),
        sp_star=sp_on_star(unitary),
        boolean_intersection=boolean_intersection(unitary) if di else None,
    )


def classify_ranks(n: int, ranks: Tuple[int, ...]) -> ClassRecord:
    return classify_domain(Domain.from_ranks(n, ranks))


def _classify_chunk(n: int, chunk: List[Tuple[int, ...]]) -> List[ClassRecord]:
    return [classify_ranks(n, ranks) for ranks in chunk]


def _is_power_of_two(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def invariant_failures(record: ClassRecord) -> List[str]:
    failures = []
    if record.symmetric and not record.normal:
        failures.append("symmetric but not normal")
    if record.symmetric != (record.dual_intersection == record.size):
        failures.append("symmetric flag disagrees with dual intersection")
    if record.copious and not record.ample:
        failures.append("copious but not ample")
    if record.dual_intersection and not _is_power_of_two(record.dual_intersection):
        failures.append(f"dual intersection {record.dual_intersection} is not a power of 2")
    if record.dual_intersection % 2:
        failures.append(f"dual intersection {record.dual_intersection} is odd")
    if record.boolean_intersection is False:
        failures.append("dual intersection is not a Boolean sublattice")
    if record.peak_pit != record.connected:
        failures.append("peak-pit and connected disagree")
    if record.size % record.core_order:
        failures.append(f"core order {record.core_order} does not divide size {record.size}")
    return failures


def check_invariants(records: Iterable[ClassRecord]) -> None:
    details = []
    for record in records:
        for failure in invariant_failures(record):
            details.append({"size": record.size, "canonical": list(record.canonical), "failure": failure})
    if details:
        raise InvariantViolation(f"{len(details)} invariant failures", details)


def size_histogram(degree: int, sizes: Iterable[int]) -> pd.DataFrame:
    """Class counts per domain size"""
    counts = pd.Series(list(sizes), dtype=int).value_counts().sort_index()
    return pd.DataFrame({"Degree": degree, "Size": counts.index, "Classes": counts.values})


def maximum_summary(n: int, forms: Sequence[Tuple[int, ...]]) -> Dict[str, object]:
    """Largest class size and whether every largest class is a flip of the alternating scheme"""
    if not forms:
        return {"max_size": 0, "max_classes": 0, "alternating": False}
    top = max(len(f) for f in forms)
    largest = [f for f in forms if len(f) == top]
    target = class_key(alternating(n)).flip_canonical.ranks
    return {
        "max_size": top,
        "max_classes": len(largest),
        "alternating": all(key_from_ranks(n, f).flip_canonical.ranks == target for f in largest),
    }


def size_moments(sizes: Sequence[int]) -> Dict[str, float]:
    """Mean, variance and skewness of class size, each class weighted equally"""
    x = np.asarray(sizes, dtype=float)
    if not len(x):
        return {"mean": 0.0, "variance": 0.0, "skewness": 0.0}
    mean = x.mean()
    variance = x.var()
    skewness = float(((x - mean) ** 3).mean() / variance ** 1.5) if variance > 0 else 0.0
    return {"mean": float(mean), "variance": float(variance), "skewness": skewness}


@dataclass
class DegreeReport:
    degree: int
    records: List[ClassRecord]
    moments: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.records.sort(key=lambda r: (r.size, r.canonical))
        self.moments = size_moments([r.size for r in self.records])

    @property
    def frame(self) -> pd.DataFrame:
        df = pd.DataFrame([r.model_dump() for r in self.records])
        if df.empty:
            return df
        df["non_ample"] = ~df["ample"].astype(bool)
        return df

    def table(self) -> pd.DataFrame:
        """One row per size: total and property counts"""
        df = self.frame
        columns = ["Degree", "Size", "Total"] + [name for name, _ in FLAG_COLUMNS]
        if df.empty:
            return pd.DataFrame(columns=columns)
        agg = {"Total": ("degree", "count")}
        agg.update({name: (column, "sum") for name, column in FLAG_COLUMNS})
        table = df.groupby("size").agg(**agg).reset_index().rename(columns={"size": "Size"})
        table.insert(0, "Degree", self.degree)
        return table[columns].astype(int)

    def intersections(self) -> pd.DataFrame:
        """Class counts keyed by (size, dual intersection size)"""
        df = self.frame
        columns = ["Degree", "Size", "DualIntersection", "Count"]
        if df.empty:
            return pd.DataFrame(columns=columns)
        counts = df.groupby(["size", "dual_intersection"]).size().reset_index(name="Count")
        counts = counts.rename(columns={"size": "Size", "dual_intersection": "DualIntersection"})
        counts.insert(0, "Degree", self.degree)
        return counts[columns]

    def classes(self) -> pd.DataFrame:
        """Per-class listing"""
        rows = []
        for index, r in enumerate(self.records, start=1):
            row = {
                "Class": index,
                "Size": r.size,
                "CoreOrder": r.core_order,
                "DualIntersection": r.dual_intersection,
                "RestrictionSizes": " ".join(map(str, r.restriction_sizes)),
                "Reflexive": r.reflexive,
                "BooleanIntersection": "" if r.boolean_intersection is None else r.boolean_intersection,
            }
            row.update({name: getattr(r, column) for name, column in FLAG_COLUMNS if column != "non_ample"})
            row["Ample"] = r.ample
            row["Canonical"] = " ".join(map(str, r.canonical))
            rows.append(row)
        return pd.DataFrame(rows)

    def histogram(self) -> pd.DataFrame:
        return size_histogram(self.degree, (r.size for r in self.records))

    @property
    def flip_count(self) -> int:
        return len(flip_classes(r.class_key for r in self.records))

    def maximum(self) -> Dict[str, object]:
        return maximum_summary(self.degree, [r.canonical for r in self.records])

    def to_csv(self, prefix: str) -> List[str]:
        paths = [f"{prefix}.csv", f"{prefix}_intersections.csv", f"{prefix}_classes.csv"]
        self.table().to_csv(paths[0], index=False)
        self.intersections().to_csv(paths[1], index=False)
        self.classes().to_csv(paths[2], index=False)
        logger.info(f"📊 Wrote {len(self.records)} class rows to {', '.join(paths)}")
        return paths


def classify_all(n: int, forms: Iterable[Tuple[int, ...]], workers: int = 1, chunk: int = 256) -> DegreeReport:
    """Classify every canonical form of one degree, in a process pool when workers > 1"""
    forms = list(forms)
    for ranks in forms:
        if not ranks:
            raise EmptyDomainError("empty class in input")
    records: List[ClassRecord] = []
    with trace_phase("classify", degree=n, workers=workers) as phase:
        if workers <= 1 or len(forms) <= chunk:
            records = _classify_chunk(n, forms)
        else:
            chunks = [forms[i:i + chunk] for i in range(0, len(forms), chunk)]
            with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or workers)) as pool:
                for part in pool.map(_classify_chunk, [n] * len(chunks), chunks):
                    records.extend(part)
        phase.update(classes=len(records))
    logger.info(f"✅ Classified {len(records)} classes of degree {n}")
    return DegreeReport(n, records)
