import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("unisep", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("unisep")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # never touch the user's cache directory from tests
    d = os.environ.get("UNISEP_TEST_CACHE") or str(tmp_path_factory.getbasetemp() / "cache")
    monkeypatch.setenv("UNISEP_CACHE_DIR", d)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
