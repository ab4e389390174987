import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def oracle():
    return json.loads((FIXTURES / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def sin_violation():
    return json.loads((FIXTURES / "sin_violation.json").read_text())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
