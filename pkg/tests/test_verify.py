from fourier_moments.verify import SUITES, run_verification


def test_clean_run_passes():
    report = run_verification(seed=3, cases=30, max_order=128, max_m=5)
    assert report.ok
    assert set(report.suites) == set(SUITES)
    assert all(s.cases == 30 for s in report.suites.values())
    assert "OK" in report.format()


def test_injected_fault_is_reported():
    report = run_verification(seed=3, cases=30, inject_fault=True)
    assert not report.ok
    for suite in report.suites.values():
        assert suite.failures
        assert "perturbed=" in suite.failures[0]
    assert "FAIL" in report.format()


def test_runs_are_deterministic():
    a = run_verification(seed=11, cases=10).format()
    b = run_verification(seed=11, cases=10).format()
    assert a == b
