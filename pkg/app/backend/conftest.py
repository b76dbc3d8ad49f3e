import os
from typing import List, Tuple

import pytest
from hypothesis import HealthCheck, settings

from classify import DegreeReport, classify_all
from pipeline import EnumerationResult, enumerate_classes
from settings import Settings

settings.register_profile("fast", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

RUN_DEGREE6 = os.getenv("CONDORCET_RUN_DEGREE6", "").lower() in ("1", "true", "yes")

degree6 = pytest.mark.skipif(not RUN_DEGREE6, reason="set CONDORCET_RUN_DEGREE6=1 for the degree-6 runs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: degree-5 enumerations and other runs over a few seconds")


@pytest.fixture
def run_settings(tmp_path) -> Settings:
    return Settings(jobs=1, checkpoint_dir=str(tmp_path / "checkpoints"), dedup_memory_limit=7)


@pytest.fixture(scope="session")
def degree4() -> EnumerationResult:
    return enumerate_classes(4, jobs=1)


@pytest.fixture(scope="session")
def degree4_forms(degree4) -> List[Tuple[int, ...]]:
    return degree4.forms


@pytest.fixture(scope="session")
def degree4_report(degree4_forms) -> DegreeReport:
    return classify_all(4, degree4_forms)


@pytest.fixture(scope="session")
def degree5() -> EnumerationResult:
    return enumerate_classes(5, jobs=1)


@pytest.fixture(scope="session")
def degree5_report(degree5) -> DegreeReport:
    return classify_all(5, degree5.forms)


@pytest.fixture(scope="session")
def degree6_result() -> EnumerationResult:
    return enumerate_classes(6)


@pytest.fixture(scope="session")
def degree6_report(degree6_result) -> DegreeReport:
    return classify_all(6, degree6_result.forms, workers=degree6_result.jobs)
