import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourier_moments import (
    ConsistencyError,
    DenseFunction,
    GroupSpec,
    Side,
    SideMismatchError,
    SparseSpectrum,
    constant,
    dft,
    direct_general_moment,
    direct_mean,
    direct_variance,
    fourier_central_moment,
    fourier_general_moment,
    fourier_raw_moment,
    fourier_variance,
    load_dataset,
    moment_report,
)
from fourier_moments.moments import default_split, recombine_central

from conftest import functions

centers = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def scale(f, a, m):
    return max(float(np.mean(np.abs(f.values - a) ** m)), np.finfo(float).tiny)


@given(functions(), centers, st.integers(0, 6))
def test_fourier_matches_direct(f, a, m):
    got = fourier_general_moment(dft(f), a, m)
    assert abs(got - direct_general_moment(f, a, m)) <= 1e-9 * scale(f, a, m)


@given(functions(max_order=64), centers, st.integers(1, 6))
def test_every_split_agrees(f, a, m):
    fhat = dft(f)
    ref = fourier_general_moment(fhat, a, m, check_split=False)
    for p in range(m + 1):
        v = fourier_general_moment(fhat, a, m, p=p, check_split=False)
        assert abs(v - ref) <= 1e-9 * scale(f, a, m)


@given(functions(max_order=64), centers, st.integers(1, 6))
def test_strategies_agree(f, a, m):
    fhat = dft(f)
    r = fourier_general_moment(fhat, a, m, strategy="recursive")
    q = fourier_general_moment(fhat, a, m, strategy="roundtrip")
    assert abs(r - q) <= 1e-9 * scale(f, a, m)


def test_default_split():
    assert [default_split(m) for m in range(1, 7)] == [1, 1, 2, 2, 3, 3]


def test_invalid_arguments():
    fhat = dft(constant(GroupSpec((4,)), 1))
    with pytest.raises(ValueError):
        fourier_general_moment(fhat, 0, 3, p=4)
    with pytest.raises(ValueError):
        fourier_general_moment(fhat, 0, -1)
    with pytest.raises(SideMismatchError):
        fourier_general_moment(constant(GroupSpec((4,)), 1), 0, 2)
    with pytest.raises(SideMismatchError):
        direct_general_moment(fhat, 0, 2)
    with pytest.raises(ValueError):
        moment_report(fhat, max_order=1)


def test_split_check_detects_inconsistent_chains(monkeypatch):
    from fourier_moments import moments
    g = GroupSpec((5,))
    fhat = dft(DenseFunction(g, [1.0, 2, -1, 0.5, 3]))
    real_chain = moments._chain

    def broken(gv, K, strategy):
        chain = real_chain(gv, K, strategy)
        chain[-1] = chain[-1] * 1.5
        return chain

    monkeypatch.setattr(moments, "_chain", broken)
    with pytest.raises(ConsistencyError):
        fourier_general_moment(fhat, 0, 3)


@given(functions())
def test_mean_and_variance(f):
    fhat = dft(f)
    assert abs(fhat[0] - direct_mean(f)) <= 1e-12 * max(1, np.max(np.abs(f.values)))
    assert math.isclose(fourier_variance(fhat), direct_variance(f), rel_tol=1e-9, abs_tol=1e-12)
    sparse = SparseSpectrum(f.group, dict(enumerate(fhat.values.tolist())))
    assert math.isclose(fourier_variance(sparse), fourier_variance(fhat), rel_tol=1e-12, abs_tol=1e-15)


@given(functions(), st.integers(2, 6))
def test_report_matches_direct_moments(f, M):
    r = moment_report(dft(f), M)
    mu = direct_mean(f)
    for m in range(2, M + 1):
        assert abs(r.central[m] - direct_general_moment(f, mu, m)) <= 1e-9 * max(scale(f, mu, m), 1e-12)
        assert abs(r.raw[m] - direct_general_moment(f, 0, m)) <= 1e-9 * max(scale(f, 0, m), 1e-12)
        assert abs(recombine_central(r.raw, r.mean, m) - r.central[m]) <= 1e-7 * max(
            scale(f, 0, m), 1)
    assert r.is_real == f.is_real()
    if r.is_real:
        for m in range(3, M + 1):
            assert math.isclose(r.standardized[m], r.central[m].real / r.variance ** (m / 2),
                                rel_tol=1e-12)
    else:
        assert all(v is None for v in r.standardized.values())


def test_report_with_explicit_center():
    f = DenseFunction(GroupSpec((3, 2)), [1.0, 4, -2, 0, 5, 1])
    r = moment_report(dft(f), 4, center=1.5)
    for m in range(1, 5):
        assert abs(r.general[m] - direct_general_moment(f, 1.5, m)) < 1e-12
    assert moment_report(dft(f), 3, center="raw").general == moment_report(dft(f), 3).raw


def test_constant_function_has_undefined_standardized_moments():
    r = moment_report(dft(constant(GroupSpec((8,)), 3.0)), 6)
    assert r.mean == 3 and r.variance == 0
    assert all(abs(v) == 0 for v in r.central.values())
    assert r.skewness is None and r.kurtosis is None and r.hyperkurtosis is None
    assert "undefined" in r.format_table()


def test_z64_example_report():
    r = moment_report(load_dataset("z64_example"), 4)
    assert abs(r.mean) == 0
    assert r.variance == pytest.approx(8.94, abs=0.01)
    assert r.central[3].real == pytest.approx(-16.91, abs=0.02)
    assert r.central[4].real == pytest.approx(248.24, abs=0.05)
    assert r.skewness == pytest.approx(-0.63, abs=0.01)
    assert r.kurtosis == pytest.approx(3.11, abs=0.01)
    text = r.format_table()
    assert text.startswith("Statistics of f")
    assert "-16.91" in text and "248.24" in text
    d = r.to_dict()
    assert d["standardized"]["kurtosis"] == r.kurtosis


def test_z64_example_variance_is_sum_of_squared_magnitudes():
    s = load_dataset("z64_example")
    assert fourier_variance(s) == pytest.approx(2 * (1.22**2 + .19**2 + .39**2 + 1.15**2
                                                     + .69**2 + .24**2 + .12**2 + .96**2))


def test_complex_function_keeps_complex_moments():
    g = GroupSpec((4,))
    f = DenseFunction(g, [1j, 2, -1, 1 + 1j])
    r = moment_report(dft(f), 4)
    assert not r.is_real
    assert abs(r.central[3] - direct_general_moment(f, direct_mean(f), 3)) < 1e-12
    assert r.central[3].imag != 0


def test_raw_and_central_helpers():
    f = DenseFunction(GroupSpec((2, 3)), [1.0, 2, 3, 4, 5, 7])
    fhat = dft(f)
    assert abs(fourier_raw_moment(fhat, 3) - np.mean(f.values**3)) < 1e-10
    mu = np.mean(f.values)
    assert abs(fourier_central_moment(fhat, 4) - np.mean((f.values - mu) ** 4)) < 1e-10
    assert abs(fourier_central_moment(SparseSpectrum(f.group, dict(enumerate(fhat.values))), 4)
               - np.mean((f.values - mu) ** 4)) < 1e-10
