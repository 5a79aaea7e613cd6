import pytest

from fairdiv.core import Instance

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, bool] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {'pass' if ACCEPTANCE[k] else 'FAIL'}")


def rows(*rows):
    return Instance.from_rows(rows)


@pytest.fixture
def thm2():
    # ef1-2 at eps = 1/12
    return rows(["1/6", "5/12", "5/12"], [0, "1/2", "1/2"])
