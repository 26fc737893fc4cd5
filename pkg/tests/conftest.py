import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criteria append (number, passed, detail) here; shown at the end of the run
CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def bundled():
    from daycalc.cli import bundled_files
    from daycalc.dsl import load_files

    return load_files(bundled_files())
