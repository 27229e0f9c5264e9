"""Acceptance gate: every claimed numerical property, one line per check.

The whole suite runs once (module-scoped fixture); each criterion then
asserts its own pass flag, so a failure names the exact property and the
measured value against the stated tolerance.
"""

import pytest

from toruslab.acceptance import run_all

CRITERIA = {
    1: "Plancherel suite",
    2: "trilinear dual-path oracle",
    3: "diophantine triple oracle",
    4: "ball-vs-shell contrast",
    5: "d=2 sharp-exponent Strichartz",
    6: "wave mixed-norm consistency",
    7: "decoupling ratio",
    8: "picard inflation slopes",
    9: "picard coefficient oracle",
    10: "zakharov conservation",
    11: "determinism across worker counts",
}


@pytest.fixture(scope="module")
def results():
    out = {res.number: res for res in run_all()}
    for res in out.values():
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] criterion {res.number}: {res.name} -- {res.detail}")
    return out


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(results, number):
    res = results[number]
    assert res.name == CRITERIA[number]
    assert res.passed, f"criterion {number} ({res.name}): {res.detail}"
