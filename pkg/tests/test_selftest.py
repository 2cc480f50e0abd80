import pytest

from gafvar.selftest import CHECKS, run_selftest


def test_all_checks_pass():
    results = run_selftest(quick=True)
    assert [r.name for r in results] == list(CHECKS)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_perturbation_fails_only_that_check():
    results = run_selftest(quick=True, perturb=["dilog-reflection"])
    assert [r.name for r in results if not r.passed] == ["dilog-reflection"]


def test_unknown_check_rejected():
    with pytest.raises(KeyError):
        run_selftest(perturb=["no-such-check"])
