"""End-to-end acceptance: one test, and one PASS/FAIL line, per criterion.

Each criterion group runs once; its result lines are reused by the per-line
tests and echoed in the terminal summary.
"""

import pytest

from isoclass import acceptance

from conftest import ACCEPTANCE_LINES

EXPECTED = {
    "1": ["1"],
    "2": ["2"],
    "3": ["3a", "3b"],
    "4": ["4a", "4b", "4c", "4d"],
    "5": ["5a", "5b", "5c", "5d", "5e"],
    "6": ["6a", "6b"],
    "7": [f"7{c}" for c in "abcdefghijk"],
    "8": ["8"],
}

_results: dict[str, dict[str, acceptance.CheckResult]] = {}


def result(key: str) -> acceptance.CheckResult:
    group = next(g for g, keys in EXPECTED.items() if key in keys)
    if group not in _results:
        _results[group] = {r.key: r for r in acceptance.run_checks({group})}
        ACCEPTANCE_LINES.extend(r.line() for r in _results[group].values())
    return _results[group][key]


def test_every_criterion_is_checked():
    assert sorted(EXPECTED) == sorted(acceptance.CRITERIA)


@pytest.mark.slow
@pytest.mark.parametrize("key", [k for keys in EXPECTED.values() for k in keys])
def test_criterion(key):
    r = result(key)
    print(r.line())
    assert r.passed, r.line()
