from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from medianlab import build_named  # noqa: E402
from medianlab.catalog import NAMED  # noqa: E402

# Filled by test_acceptance; one line per criterion in the terminal summary.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def named():
    return {name: build_named(name) for name in NAMED}


@pytest.fixture
def N5():
    return build_named("N5")


@pytest.fixture
def M3():
    return build_named("M3")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
