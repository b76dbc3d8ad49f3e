import pytest

from errors import FrontierFileError
from frontier import Checkpoint, read_frontier, rebuild_node, write_frontier
from search import SearchNode, split_frontier


def test_frontier_round_trip(tmp_path):
    frontier = split_frontier(5, 3)
    path = write_frontier(frontier, tmp_path / "frontier.txt")
    loaded = read_frontier(path)
    assert loaded.degree == 5 and loaded.depth == 3
    assert loaded.nodes == frontier.nodes


def test_root_frontier_writes_a_dash(tmp_path):
    path = write_frontier(split_frontier(4, 0), tmp_path / "root.txt")
    lines = path.read_text().splitlines()
    assert lines[1] == "0 -"
    assert read_frontier(path).nodes == (SearchNode.root(4),)


def test_tampered_frontier_is_rejected(tmp_path):
    path = write_frontier(split_frontier(4, 2), tmp_path / "frontier.txt")
    lines = path.read_text().splitlines()
    lines.insert(1, lines[1])
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(FrontierFileError, match="checksum"):
        read_frontier(path)


def test_law_order_mismatch(tmp_path):
    path = write_frontier(split_frontier(4, 1), tmp_path / "frontier.txt")
    text = path.read_text().replace("law_order=lex-", "law_order=other-", 1)
    path.write_text(text)
    with pytest.raises(FrontierFileError, match="law order"):
        read_frontier(path)


def test_missing_checksum(tmp_path):
    path = tmp_path / "frontier.txt"
    path.write_text("# degree=4 law_order=lex-aN2aN3bN1bN3cN1cN2 depth=0\n0 -\n")
    with pytest.raises(FrontierFileError, match="checksum"):
        read_frontier(path)


def test_rebuild_rejects_bad_ordinals():
    with pytest.raises(FrontierFileError):
        rebuild_node(3, (9,), 0)
    with pytest.raises(FrontierFileError):
        rebuild_node(3, (0, 0), 0)


def test_checkpoint(tmp_path):
    checkpoint = Checkpoint(tmp_path, 4)
    assert not checkpoint.exists()
    assert checkpoint.completed() == set()

    frontier = split_frontier(4, 1)
    checkpoint.start(frontier)
    assert checkpoint.exists()
    assert checkpoint.load_frontier().nodes == frontier.nodes

    checkpoint.mark_done(1, [(0, 5), (0, 1)])
    checkpoint.mark_done(0, [(0, 5)])
    assert checkpoint.completed() == {0, 1}
    assert list(checkpoint.iter_forms()) == [(0, 5), (0, 5), (0, 1)]
    assert not list(checkpoint.done_dir.glob("*.part"))

    checkpoint.start(split_frontier(4, 2))
    assert checkpoint.completed() == set()
    assert len(checkpoint.load_frontier()) == len(split_frontier(4, 2))


def test_checkpoint_for_another_degree(tmp_path):
    Checkpoint(tmp_path, 4).start(split_frontier(4, 1))
    (tmp_path / "degree4").rename(tmp_path / "degree5")
    with pytest.raises(FrontierFileError, match="degree 4"):
        Checkpoint(tmp_path, 5).load_frontier()
