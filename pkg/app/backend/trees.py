"""
Labelled trees on the alternatives and the never-last requirements they impose.

A domain restricted to every maximal path of a tree lies in the single-peaked
domain of that path exactly when, for every three alternatives with y on the
tree path between x and z, y is never ranked last among them. Each tree is
reduced to a bitmask over (triple, role) with one bit per required yN3 law.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Tuple

import networkx as nx
import numpy as np

from laws import triples

logger = logging.getLogger("condorcet.classify")


def requirement_bit(triple_index: int, role: int) -> int:
    return 1 << (3 * triple_index + role)


def labelled_trees(n: int) -> Iterator[nx.Graph]:
    """All n^(n-2) labelled trees on the vertices 1..n, via Prüfer sequences"""
    for sequence in product(range(n), repeat=n - 2):
        tree = nx.from_prufer_sequence(list(sequence))
        yield nx.relabel_nodes(tree, {v: v + 1 for v in tree.nodes})


def betweenness_triples(tree: nx.Graph) -> List[Tuple[int, int]]:
    """(triple index, role of the middle alternative) for every triple lying on one path"""
    n = tree.number_of_nodes()
    distance = dict(nx.all_pairs_shortest_path_length(tree))
    result = []
    for t in triples(n):
        a, b, c = t.alternatives
        for role, (y, x, z) in enumerate(((a, b, c), (b, a, c), (c, a, b))):
            if distance[x][y] + distance[y][z] == distance[x][z]:
                result.append((t.index, role))
                break
    return result


def tree_mask(tree: nx.Graph) -> int:
    mask = 0
    for index, role in betweenness_triples(tree):
        mask |= requirement_bit(index, role)
    return mask


def is_star(tree: nx.Graph) -> bool:
    n = tree.number_of_nodes()
    return n <= 2 or max(d for _, d in tree.degree) == n - 1


def to_words(mask: int, words: int) -> np.ndarray:
    return np.array([(mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(words)], dtype=np.uint64)


@dataclass(frozen=True)
class TreeRequirements:
    degree: int
    masks: np.ndarray
    stars: np.ndarray
    words: int

    def satisfied_by(self, n3_mask: int, stars_only: bool = False) -> bool:
        allowed = to_words(n3_mask, self.words)
        fits = ((self.masks & ~allowed) == 0).all(axis=1)
        if stars_only:
            fits &= self.stars
        return bool(fits.any())


@lru_cache(maxsize=None)
def tree_requirements(n: int) -> TreeRequirements:
    """Distinct requirement masks over all labelled trees, with a star flag per mask"""
    words = max(1, -(-3 * len(triples(n)) // 64))
    star_of = {}
    for tree in labelled_trees(n):
        mask = tree_mask(tree)
        star_of[mask] = star_of.get(mask, False) or is_star(tree)
    masks = sorted(star_of)
    logger.debug(f"Degree {n}: {n ** (n - 2)} labelled trees, {len(masks)} distinct requirement masks")
    return TreeRequirements(
        degree=n,
        masks=np.array([to_words(m, words) for m in masks], dtype=np.uint64).reshape(len(masks), words),
        stars=np.array([star_of[m] for m in masks], dtype=bool),
        words=words,
    )


def path_axis(n: int) -> nx.Graph:
    return nx.path_graph(range(1, n + 1))
