import math

from qbell import verify


def test_kappa_failure_gates_other_checks(monkeypatch):
    failing = lambda tol=None: verify.CheckResult("kappa", False, 1.0, 1e-10, 1)
    monkeypatch.setitem(verify.CHECKS, "kappa", failing)
    results = verify.run_checks("all")
    assert results[0].name == "kappa" and not results[0].passed
    assert len(results) == len(verify.CHECKS)
    assert all(not r.passed and "skipped" in r.detail for r in results[1:])


def test_single_check_and_tolerance_override():
    (res,) = verify.run_checks("gamma1")
    assert res.passed and res.points == 27
    (res,) = verify.run_checks("gamma1", tol=0.0)
    assert not res.passed and math.isfinite(res.worst)
