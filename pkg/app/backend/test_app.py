import json

import pytest

import app
from app import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from class_files import read_class_file, write_class_file
from oracle import FormComparison
from permutations import act, unrank
from schemes import alternating


@pytest.fixture(autouse=True)
def cli_env(monkeypatch, tmp_path):
    monkeypatch.setenv("RUNNING_IN_PRODUCTION", "true")
    monkeypatch.setenv("CONDORCET_JOBS", "1")
    monkeypatch.setenv("CONDORCET_CHECKPOINT_DIR", str(tmp_path / "checkpoints"))


@pytest.fixture
def degree4_file(tmp_path, capsys):
    out = tmp_path / "degree4.txt"
    assert main(["enumerate", "--degree", "4", "--out", str(out)]) == EXIT_OK
    return out


def test_enumerate_writes_classes_and_manifest(degree4_file, capsys):
    assert len(read_class_file(degree4_file)) == 31
    manifest = json.loads((degree4_file.parent / "degree4.txt.manifest.json").read_text())
    assert manifest["results"]["classes"] == 31
    assert manifest["results"]["flip_classes"] == 18
    out = capsys.readouterr().out
    assert "31 classes, 18 flip classes, max size 9" in out
    assert "max size 9 (1 classes, all flip-isomorphic" in out


def test_degree_seven_needs_consent(tmp_path):
    assert main(["enumerate", "--degree", "7", "--out", str(tmp_path / "d7.txt")]) == EXIT_USAGE
    assert not (tmp_path / "d7.txt").exists()


def test_checkpointed_enumerate(tmp_path, capsys):
    out = tmp_path / "degree4.txt"
    args = ["enumerate", "--degree", "4", "--out", str(out), "--i-have-time",
            "--checkpoint", str(tmp_path / "ck"), "--frontier-depth", "1"]
    assert main(args + ["--max-subtrees", "1"]) == EXIT_OK
    assert "Checkpoint incomplete" in capsys.readouterr().out
    assert not out.exists()
    assert main(args) == EXIT_OK
    assert len(read_class_file(out)) == 31
    assert "31 classes, 18 flip classes" in capsys.readouterr().out


def test_classify_writes_csv(degree4_file, tmp_path, capsys):
    prefix = tmp_path / "report" / "degree4"
    (tmp_path / "report").mkdir()
    assert main(["classify", "--in", str(degree4_file), "--out", str(prefix)]) == EXIT_OK
    header = (tmp_path / "report" / "degree4.csv").read_text().splitlines()[0]
    assert header.startswith("Degree,Size,Total,Connected")
    assert "31 classes" in capsys.readouterr().out


def test_classify_rejects_bad_files(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert main(["classify", "--in", str(empty), "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["classify", "--in", str(tmp_path / "absent.txt"), "--out", str(tmp_path / "x")]) == EXIT_USAGE


def test_verify(capsys):
    assert main(["verify", "--degree", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "oracle 3 classes, search 3 classes" in out
    assert "pass" in out
    assert main(["verify", "--degree", "6"]) == EXIT_USAGE


def test_verify_reports_mismatch(monkeypatch, capsys):
    monkeypatch.setattr(app, "verify_degree", lambda n, jobs=1: FormComparison({(0, 1), (0, 5)}, {(0, 5)}))
    assert main(["verify", "--degree", "3"]) == EXIT_FAILURE
    out = capsys.readouterr().out
    assert "missing from search: 0 1" in out
    assert "fail" in out


def test_scheme_black(capsys, tmp_path):
    out = tmp_path / "black6.txt"
    assert main(["scheme", "black", "--degree", "6", "--out", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "size 32" in printed
    assert "maximal: True" in printed
    assert "arrow_sp" in printed
    assert len(read_class_file(out).forms[0]) == 32


def test_scheme_alternating_variant(capsys):
    assert main(["scheme", "alternating", "--degree", "5", "--variant", "B"]) == EXIT_OK
    assert "size 20" in capsys.readouterr().out


def test_scheme_usage_errors(tmp_path):
    assert main(["scheme", "replacement"]) == EXIT_USAGE
    assert main(["scheme", "alternating"]) == EXIT_USAGE
    assert main(["scheme", "black", "--degree", "1"]) == EXIT_USAGE


def test_scheme_replacement(tmp_path, capsys):
    left = write_class_file(tmp_path / "a3.txt", 3, [tuple(alternating(3).ranks())])
    right = write_class_file(tmp_path / "a3b.txt", 3, [tuple(alternating(3).ranks())])
    assert main(["scheme", "replacement", "--left", str(left), "--right", str(right)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "degree 5: size 16" in printed
    assert "reducible" in printed


def test_canon_dedups_relabelled_copies(tmp_path, capsys):
    a = alternating(4)
    copies = [tuple(act(a, unrank(r, 4)).ranks()) for r in (0, 5, 11)]
    source = write_class_file(tmp_path / "raw.txt", 4, copies)
    out = tmp_path / "canon.txt"
    assert main(["canon", "--in", str(source), "--out", str(out)]) == EXIT_OK
    assert "3 domains, 1 classes" in capsys.readouterr().out
    forms = read_class_file(out).forms
    assert len(forms) == 1 and forms[0][0] == 0


def test_stats(degree4_file, tmp_path, capsys):
    csv = tmp_path / "hist.csv"
    assert main(["stats", "--in", str(degree4_file), "--out", str(csv)]) == EXIT_OK
    lines = csv.read_text().splitlines()
    assert lines[0] == "Degree,Size,Classes"
    assert lines[1:] == ["4,4,1", "4,7,4", "4,8,25", "4,9,1"]
    assert "max size 9" in capsys.readouterr().out


def test_bad_configuration(monkeypatch, tmp_path):
    monkeypatch.setenv("CONDORCET_JOBS", "0")
    assert main(["verify", "--degree", "3"]) == EXIT_USAGE


@pytest.mark.parametrize("n", [4, pytest.param(5, marks=pytest.mark.slow)])
def test_class_files_do_not_depend_on_jobs(n, tmp_path):
    outputs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"degree{n}_jobs{jobs}.txt"
        assert main(["enumerate", "--degree", str(n), "--jobs", jobs, "--out", str(out)]) == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
