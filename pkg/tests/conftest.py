import pytest
from hypothesis import settings

# first calls pay numba compilation
settings.register_profile("radial", deadline=None)
settings.load_profile("radial")

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""

    def record(number, description, ok, detail=""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {description}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
