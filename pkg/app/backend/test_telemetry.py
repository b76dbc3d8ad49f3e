import pytest

from telemetry import get_run_stats, reset_run_stats, trace_phase


@pytest.fixture(autouse=True)
def clean_ring():
    reset_run_stats()
    yield
    reset_run_stats()


def test_completed_phase_is_recorded():
    with trace_phase("search", degree=4, jobs=1) as phase:
        phase.update(visited=10, classes=31)
    stats = get_run_stats()
    record = stats["phases"][-1]
    assert record["phase"] == "search"
    assert record["status"] == "completed"
    assert record["attributes"] == {"degree": 4, "jobs": 1}
    assert record["counters"] == {"visited": 10, "classes": 31}
    assert len(record["id"]) == 16
    assert stats["stats"]["total_phases"] == 1
    assert stats["stats"]["failed_phases"] == 0


def test_failed_phase_reraises():
    with pytest.raises(RuntimeError):
        with trace_phase("classify", degree=5):
            raise RuntimeError("boom")
    stats = get_run_stats()
    assert stats["phases"][-1]["status"] == "failed"
    assert stats["stats"]["failed_phases"] == 1


def test_durations_add_up_per_phase():
    for _ in range(3):
        with trace_phase("flip"):
            pass
    with trace_phase("verify"):
        pass
    totals = get_run_stats()["stats"]["duration_by_phase"]
    assert set(totals) == {"flip", "verify"}
    assert all(value >= 0 for value in totals.values())


def test_limit_from_environment(monkeypatch):
    for index in range(5):
        with trace_phase("search", index=index):
            pass
    monkeypatch.setenv("CONDORCET_TELEMETRY_LIMIT", "2")
    stats = get_run_stats()
    assert [p["attributes"]["index"] for p in stats["phases"]] == [3, 4]
    assert stats["stats"]["total_phases"] == 5
    monkeypatch.setenv("CONDORCET_TELEMETRY_LIMIT", "lots")
    assert len(get_run_stats()["phases"]) == 5


def test_ring_keeps_recent_phases():
    for index in range(60):
        with trace_phase("search", index=index):
            pass
    phases = get_run_stats()["phases"]
    assert len(phases) == 50
    assert phases[0]["attributes"]["index"] == 10
