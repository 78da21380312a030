import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("wang", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("wang")

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "wangweave" / "data" / "jeandelrao.json"


@pytest.fixture(scope="session")
def raw():
    return json.loads(DATA.read_text())


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
