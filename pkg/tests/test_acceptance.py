"""The twelve acceptance criteria at their stated tolerances.

Each criterion runs once; its pass/fail line is printed in the terminal
summary.  Criteria 3 and 6 check stated values that disagree with the
closed-form amplitudes, so they are strict expected failures.
"""

import pytest

from anyonqc.cli.verify import CRITERIA, run_criteria

RESULTS: dict = {}

KNOWN_FAILURES = {
    3: "stated i=2..5 amplitudes and the |A| bound disagree with the closed form",
    6: "the conjugation identity holds with γ^{+jk}, not γ^{-jk}",
}


def result(n):
    if n not in RESULTS:
        (RESULTS[n],) = run_criteria([n])
    return RESULTS[n]


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, request):
    if n in KNOWN_FAILURES:
        request.applymarker(pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[n]))
    r = result(n)
    assert r.passed, r.detail


def test_known_failures_are_narrow():
    # only the disputed sub-checks fail; everything else in those criteria holds
    d3 = result(3).detail
    assert d3["mismatched_i"] == [2, 3, 4, 5] and d3["B_bound_0_1.2"] and not d3["A_bound_2.9_3"]
    sub = result(6).detail["subchecks"]
    assert [k for k, v in sub.items() if not v] == ["conjugation_identity_minus"]
    assert result(6).detail["identity_plus_error"] < 1e-10
