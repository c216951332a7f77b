import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourier_moments import (
    CirculantOperator,
    DenseFunction,
    GroupMismatchError,
    GroupSpec,
    ResourceLimitError,
    Side,
    SideMismatchError,
    SparseSpectrum,
    autoconvolve,
    basis,
    convolve,
    diminish,
    dft,
    direct_general_moment,
    idft,
    shift,
    sparse_convolve,
    to_dense,
)

from conftest import brute_convolve, functions


def spectrum_pair(f, seed):
    rng = np.random.default_rng(seed)
    other = rng.standard_normal(f.group.order) + 1j * rng.standard_normal(f.group.order)
    return dft(f), DenseFunction(f.group, other, Side.FOURIER)


@given(functions(max_order=40), st.integers(0, 2**32 - 1))
def test_convolution_methods_match_definition(f, seed):
    a, b = spectrum_pair(f, seed)
    want = brute_convolve(f.group, a.values, b.values)
    for method in ("direct", "fft", "auto"):
        got = convolve(a, b, method)
        assert np.allclose(got.values, want, atol=1e-10), method
        assert got.origin.startswith("convolve:")


@given(functions(), st.integers(0, 2**32 - 1))
def test_convolution_theorem(f, seed):
    a, b = spectrum_pair(f, seed)
    # the inverse transform turns convolution into a pointwise product
    assert np.allclose(idft(convolve(a, b)).values, idft(a).values * idft(b).values, atol=1e-9)


def test_basis_vectors_add_indices():
    g = GroupSpec((3, 4))
    out = convolve(basis(g, (1, 3)), basis(g, (2, 2)))
    assert np.array_equal(out.values, basis(g, (0, 1)).values)


def test_shift_moves_entries():
    g = GroupSpec((3, 2), "lsf")
    f = DenseFunction(g, np.arange(6.0))
    s = shift(f, (1, 1))
    for i in range(6):
        assert s[i] == f[g.subtract(i, (1, 1))]


def test_sparse_convolution_matches_dense(rng):
    g = GroupSpec((5, 3))
    a = SparseSpectrum(g, {1: 2, 7: 1j, 3: -1})
    b = SparseSpectrum(g, {0: 1, 7: 3})
    got = sparse_convolve(a, b)
    assert np.allclose(to_dense(got).values, convolve(to_dense(a), to_dense(b)).values)
    assert np.allclose(convolve(a, to_dense(b)).values, to_dense(got).values)


def test_sparse_convolution_guard():
    g = GroupSpec((16,))
    a = SparseSpectrum(g, {k: 1 for k in range(8)})
    with pytest.raises(ResourceLimitError, match="bound 4"):
        sparse_convolve(a, a, max_support=4)


@given(functions(max_order=64), st.integers(0, 5))
def test_autoconvolution_strategies_agree(f, m):
    fhat = dft(f)
    r = autoconvolve(fhat, m, "roundtrip")
    q = autoconvolve(fhat, m, "recursive")
    scale = max(np.sum(np.abs(fhat.values)) ** m, 1)
    assert np.max(np.abs(r.values - q.values)) <= 1e-9 * scale
    assert r.origin == "autoconvolve:roundtrip" and q.origin == "autoconvolve:recursive"
    assert autoconvolve(fhat, m).origin == "autoconvolve:roundtrip"


def test_autoconvolution_of_order_zero_is_the_identity():
    g = GroupSpec((4,))
    v = DenseFunction(g, [1, 2, 3, 4], Side.FOURIER)
    assert np.array_equal(autoconvolve(v, 0).values, basis(g, 0).values)
    with pytest.raises(ValueError):
        autoconvolve(v, -1)


def test_sparse_autoconvolution():
    g = GroupSpec.binary(4)
    s = SparseSpectrum(g, {1: 0.5, 6: -1, 9: 2j})
    for m in range(5):
        assert np.allclose(to_dense(autoconvolve(s, m)).values,
                           autoconvolve(to_dense(s), m).values)


def test_mismatch_errors():
    g, h = GroupSpec((4,)), GroupSpec((2, 2))
    with pytest.raises(GroupMismatchError):
        convolve(basis(g, 0), basis(h, 0))
    with pytest.raises(SideMismatchError):
        convolve(basis(g, 0), basis(g, 0, Side.PRIMAL))
    with pytest.raises(ValueError):
        convolve(basis(g, 0), basis(g, 1), "bogus")


@given(functions(max_order=36), st.integers(0, 2**32 - 1))
def test_circulant_operator(f, seed):
    a, b = spectrum_pair(f, seed)
    C = CirculantOperator(a)
    M = C.matrix()
    g = f.group
    for i in range(g.order):
        for j in range(g.order):
            assert M[i, j] == a[g.subtract(i, j)]
    assert np.allclose(C.apply(b).values, C.apply(b, materialize=True).values, atol=1e-10)
    assert np.allclose(C.compose(CirculantOperator(b)).matrix(), M @ CirculantOperator(b).matrix(),
                       atol=1e-9)


@given(functions(max_order=36), st.integers(1, 5), st.complex_numbers(max_magnitude=2))
def test_circulant_power_diagonal_is_the_moment(f, m, a):
    C = CirculantOperator(diminish(dft(f), a))
    scale = max(float(np.mean(np.abs(f.values - a) ** m)), 1e-300)
    assert abs(C.power_diagonal(m) - direct_general_moment(f, a, m)) <= 1e-9 * max(scale, 1)


def test_circulant_guard():
    C = CirculantOperator(basis(GroupSpec((64,)), 1))
    with pytest.raises(ResourceLimitError):
        C.matrix(max_order=32)
