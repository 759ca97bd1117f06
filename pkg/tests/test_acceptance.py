"""Acceptance gate: every criterion runs at its contractual tolerance.

The full suite is executed once per session through a module-scoped fixture;
individual tests then assert each criterion and print its one-line outcome.
"""

import pytest

from unient import acceptance


@pytest.fixture(scope="module")
def suite():
    results = acceptance.run_all(seed=0)
    return {res.index: res for res in results}


def _check(suite, index):
    res = suite[index]
    print(f"[{res.index:2d}] {res.name}: {'PASS' if res.passed else 'FAIL'} "
          f"({res.seconds:.2f} s) {res.detail}")
    assert res.passed, f"criterion {res.index} ({res.name}): {res.detail}"


def test_criterion_01_entropy_closed_forms(suite):
    _check(suite, 1)


def test_criterion_02_limit_continuity(suite):
    _check(suite, 2)


def test_criterion_03_lemma_fuzz(suite):
    _check(suite, 3)


def test_criterion_04_roof_oracle_cross_check(suite):
    _check(suite, 4)


def test_criterion_05_theorem1_saturation(suite):
    _check(suite, 5)


def test_criterion_06_theorem1_ensemble(suite):
    _check(suite, 6)


def test_criterion_07_theorem2_gating(suite):
    _check(suite, 7)


def test_criterion_08_theorem3_ensemble(suite):
    _check(suite, 8)


def test_criterion_09_tightness_chains(suite):
    _check(suite, 9)


def test_criterion_10_padding_invariance(suite):
    _check(suite, 10)


def test_criterion_11_sweep_determinism(suite):
    _check(suite, 11)


def test_tampered_tolerance_fails_saturation():
    # The slack gate is load-bearing: squeezing it to 1e-12 must flip the
    # W-state saturation criterion to a failure.
    passed, detail = acceptance.criterion_saturation(0, None, slack_tol=1e-12)
    assert not passed
    assert "slack" in detail
