"""Acceptance bookkeeping.

Tests marked ``@pytest.mark.acceptance(n, "summary")`` are grouped by
criterion number; at the end of the session one PASS/FAIL line is printed
per criterion (a criterion passes only if every test in its group passed),
followed by any informational lines recorded through the ``report`` fixture.
"""

from collections import defaultdict

import pytest

_CRITERIA: dict[int, dict] = defaultdict(lambda: {"summary": "", "outcomes": []})
_NOTES: list[str] = []


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            n, summary = m.args
            _CRITERIA[n]["summary"] = summary
            item.user_properties.append(("criterion", n))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA[crit]["outcomes"].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.fixture
def report():
    """Append an informational line to the acceptance summary."""
    return _NOTES.append


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        c = _CRITERIA[n]
        outcomes = c["outcomes"]
        ok = bool(outcomes) and all(o == "passed" for _, o in outcomes)
        failed = [name for name, o in outcomes if o != "passed"]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {c['summary']}"
        if failed:
            line += f"  [failing: {', '.join(failed)}]"
        tr.write_line(line)
    for note in _NOTES:
        tr.write_line(f"  note: {note}")
