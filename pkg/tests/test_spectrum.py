import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourier_moments import (
    DenseFunction,
    GroupMismatchError,
    GroupSpec,
    Side,
    SideMismatchError,
    SparseSpectrum,
    basis,
    constant,
    dft,
    diminish,
    dot,
    idft,
    parseval_gap,
    reverse,
    to_dense,
    to_sparse,
)
from fourier_moments.spectrum import dft_matrix, is_conjugate_symmetric, walsh_hadamard

from conftest import functions, groups


def character(g, j):
    """f_i = prod_l exp(2 pi i i_l j_l / N_l), whose spectrum is e_j."""
    jd = np.array(g.digits(j))
    N = np.array(g.moduli)
    phase = np.array([np.sum(np.array(g.decode(i)) * jd / N) for i in range(g.order)])
    return DenseFunction(g, np.exp(2j * np.pi * phase))


@given(functions())
def test_dft_matches_explicit_matrix(f):
    U = np.empty((f.group.order, f.group.order), dtype=complex)
    for i in range(f.group.order):
        for j in range(f.group.order):
            a, b = f.group.decode(i), f.group.decode(j)
            U[i, j] = np.prod([np.exp(-2j * np.pi * x * y / N)
                               for x, y, N in zip(a, b, f.group.moduli)])
    assert np.allclose(dft(f).values, U @ f.values / f.group.order, atol=1e-12)
    assert np.allclose(dft_matrix(f.group), U, atol=1e-12)


@given(groups(), st.data())
def test_characters_transform_to_basis_vectors(g, data):
    j = data.draw(st.integers(0, g.order - 1))
    assert np.allclose(dft(character(g, j)).values, basis(g, j).values, atol=1e-12)


@given(functions())
def test_round_trip_and_mean(f):
    fhat = dft(f)
    assert fhat.side is Side.FOURIER
    assert np.max(np.abs(idft(fhat).values - f.values)) <= 1e-12
    assert abs(fhat[0] - np.mean(f.values)) <= 1e-12


@given(functions(), st.integers(0, 2**32 - 1))
def test_parseval(f, seed):
    rng = np.random.default_rng(seed)
    g = f.replace(rng.standard_normal(f.group.order))
    assert parseval_gap(f, g) <= 1e-10


def test_walsh_hadamard_matches_sylvester():
    H = np.array([[1]])
    for _ in range(4):
        H = np.block([[H, H], [H, -H]])
    x = np.arange(16.0)
    assert np.allclose(walsh_hadamard(x), H @ x)
    with pytest.raises(ValueError):
        walsh_hadamard(np.ones(3))


def test_binary_transform_uses_lsf_layout():
    g = GroupSpec.binary(3)
    f = DenseFunction(g, np.arange(8.0))
    assert np.allclose(dft(f).values, dft_matrix(g) @ f.values / 8)


@given(functions(real=True))
def test_real_functions_have_conjugate_symmetric_spectra(f):
    fhat = dft(f)
    assert is_conjugate_symmetric(fhat)
    assert fhat.is_real()
    assert f.is_real()


def test_complex_function_not_symmetric():
    g = GroupSpec((5,))
    assert not is_conjugate_symmetric(dft(DenseFunction(g, [1j, 0, 0, 0, 0])))


@given(functions())
def test_reverse_is_an_involution(f):
    fhat = dft(f)
    assert np.array_equal(reverse(reverse(fhat)).values, fhat.values)


def test_reverse_is_identity_on_binary_groups():
    g = GroupSpec.binary(4)
    v = DenseFunction(g, np.arange(16.0), Side.FOURIER)
    assert np.array_equal(reverse(v).values, v.values)


def test_diminish_only_changes_entry_zero():
    g = GroupSpec((4,))
    v = DenseFunction(g, [1, 2, 3, 4], Side.FOURIER)
    w = diminish(v, 1 + 1j)
    assert np.array_equal(w.values, [-1j, 2, 3, 4])
    s = diminish(SparseSpectrum(g, {2: 5}), 3)
    assert s.entries == {0: -3, 2: 5}
    with pytest.raises(SideMismatchError):
        diminish(DenseFunction(g, [1, 2, 3, 4]), 1)


def test_sparse_spectrum_normalisation():
    g = GroupSpec((3, 2))
    s = SparseSpectrum(g, {(2, 1): 1.5, 1: 0, 0: 2})
    assert s.entries == {0: 2, 5: 1.5}
    assert s[(2, 1)] == 1.5 and s[3] == 0
    assert s.mean == 2
    with pytest.raises(ValueError):
        SparseSpectrum(g, {5: 1, (2, 1): 2})


def test_sparse_dense_conversion():
    g = GroupSpec((6,))
    s = SparseSpectrum(g, {1: 2, 4: -1j})
    d = to_dense(s)
    assert to_sparse(d).entries == s.entries
    assert to_sparse(d, threshold=1.5).entries == {1: 2}
    assert np.allclose(idft(s).values, idft(d).values)


def test_errors():
    g, h = GroupSpec((4,)), GroupSpec((2, 2))
    with pytest.raises(GroupMismatchError):
        DenseFunction(g, [1, 2, 3])
    with pytest.raises(GroupMismatchError):
        dot(constant(g, 1), constant(h, 1))
    with pytest.raises(SideMismatchError):
        dft(dft(constant(g, 1)))
    with pytest.raises(SideMismatchError):
        idft(constant(g, 1))
    with pytest.raises(SideMismatchError):
        dot(constant(g, 1), basis(g, 0))


def test_dot_is_bilinear():
    g = GroupSpec((3,))
    a = DenseFunction(g, [1j, 2, 3])
    assert dot(a, a) == -1 + 4 + 9
    s = SparseSpectrum(g, {1: 2, 2: 1})
    assert dot(s, SparseSpectrum(g, {1: 3})) == 6


def test_values_are_read_only():
    f = constant(GroupSpec((3,)), 2)
    with pytest.raises(ValueError):
        f.values[0] = 1
