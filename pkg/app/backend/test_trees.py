import networkx as nx

from laws import triples
from trees import (
    betweenness_triples,
    is_star,
    labelled_trees,
    path_axis,
    requirement_bit,
    tree_mask,
    tree_requirements,
)


def test_cayley_count():
    trees = list(labelled_trees(4))
    assert len(trees) == 16
    assert all(sorted(tree.nodes) == [1, 2, 3, 4] for tree in trees)
    assert sum(is_star(tree) for tree in trees) == 4


def test_path_betweenness():
    # on a path every triple lies on one path with its middle value between the others
    assert betweenness_triples(path_axis(5)) == [(t.index, 1) for t in triples(5)]


def test_star_betweenness():
    star = nx.star_graph([3, 1, 2, 4])
    for index, role in betweenness_triples(star):
        assert triples(4)[index].alternatives[role] == 3
    assert len(betweenness_triples(star)) == 3


def test_requirement_masks():
    assert tree_mask(path_axis(3)) == requirement_bit(0, 1)
    requirements = tree_requirements(4)
    assert requirements.masks.shape == (16, 1)
    assert requirements.stars.sum() == 4
    assert requirements.satisfied_by(tree_mask(path_axis(4)))
    assert not requirements.satisfied_by(0)
    assert not requirements.satisfied_by(tree_mask(path_axis(4)), stars_only=True)
