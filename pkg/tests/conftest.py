"""Shared fixtures and the acceptance-criteria reporter.

Acceptance tests record one verdict per criterion; the hook below
prints them as a block after the normal pytest summary so the lines
are visible regardless of capture settings.
"""

from __future__ import annotations

import pytest

from kuhn_cheat import build_classic
from kuhn_cheat.solver import solve_lp

_CRITERIA: dict[int, tuple[bool, str]] = {}


def register_criterion(number: int, passed: bool, detail: str) -> None:
    _CRITERIA[number] = (passed, detail)


@pytest.fixture(scope="session")
def criterion():
    """Recorder: tests call criterion(number, passed, detail) before asserting."""

    return register_criterion


@pytest.fixture(scope="session")
def classic_tree():
    return build_classic()


@pytest.fixture(scope="session")
def classic_lp(classic_tree):
    return solve_lp(classic_tree)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:2d}: {word} - {detail}")
    failed = [n for n, (ok, _) in _CRITERIA.items() if not ok]
    total = len(_CRITERIA)
    terminalreporter.write_line(
        f"acceptance: {total - len(failed)}/{total} criteria passed"
        + (f" (failing: {', '.join(str(n) for n in failed)})" if failed else "")
    )
