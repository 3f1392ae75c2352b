"""Session-wide audit of every path and hierarchy the finders return.

Each emitted result is re-checked by the independent verifier.  A test that
emits a result failing verification errors out in teardown, and the terminal
summary reports the session-wide tally.
"""
import pytest

from girgspread.structure import _audit
from girgspread.structure.hierarchy import Hierarchy
from girgspread.structure.verify import verify_hierarchy, verify_path

import _report

AUDIT = {"checked": 0, "failed": []}


def _check(graph, result):
    if isinstance(result, Hierarchy):
        ok, problems = verify_hierarchy(graph, result)
    else:
        ok, problems = verify_path(graph, result)
    AUDIT["checked"] += 1
    if not ok:
        AUDIT["failed"].append((type(result).__name__, problems))
    return ok, problems


@pytest.fixture(autouse=True)
def structure_audit():
    before = len(AUDIT["failed"])
    _audit.subscribe(_check)
    yield AUDIT
    _audit.unsubscribe(_check)
    new = AUDIT["failed"][before:]
    if new:
        pytest.fail(f"{len(new)} emitted structure(s) failed re-verification: {new[:3]}")


def pytest_terminal_summary(terminalreporter):
    if not _report.LINES and not AUDIT["checked"]:
        return
    terminalreporter.section("acceptance criteria")
    for line in _report.LINES:
        terminalreporter.write_line(line)
    ok = not AUDIT["failed"]
    terminalreporter.write_line(
        f"[{'PASS' if ok else 'FAIL'}] session audit: {AUDIT['checked']} emitted paths/hierarchies "
        f"re-verified, {len(AUDIT['failed'])} failures")
