"""Functions on a group, their spectra, and the multidimensional DFT.

Normalisation is fixed: the forward transform carries ``1/|G|`` so that entry
0 of a spectrum is the mean, and the inverse carries none::

    fhat = (1/|G|) U_G f        f = U_G^* fhat
    U_G(i, j) = prod_l exp(-2 pi i i_l j_l / N_l)

U_G is a Kronecker product of per-factor DFT matrices, so the transform runs
axis by axis on the reshaped vector.  Groups made only of Z_2 factors use a
Walsh-Hadamard butterfly instead.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import GroupMismatchError, SideMismatchError
from .group import GroupSpec, Index

REAL_RTOL = 1e-9


class Side(enum.Enum):
    PRIMAL = "primal"
    FOURIER = "fourier"


@dataclass(frozen=True)
class DenseFunction:
    """``|G|`` complex values in ordinal order, tagged with their domain."""

    group: GroupSpec
    values: np.ndarray
    side: Side = Side.PRIMAL
    origin: str = field(default="", compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.shape[0] != self.group.order:
            raise GroupMismatchError(
                f"{values.shape[0]} values given for a group of order {self.group.order}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "side", Side(self.side))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, j: Index) -> complex:
        return complex(self.values[self.group.ordinal(j)])

    def replace(self, values, side: Side | None = None, origin: str = "") -> DenseFunction:
        return DenseFunction(self.group, values, self.side if side is None else side, origin)

    def is_real(self, rtol: float = REAL_RTOL) -> bool:
        """True when every imaginary part is negligible against the largest magnitude."""
        if self.side is Side.FOURIER:
            return is_conjugate_symmetric(self, rtol)
        scale = float(np.max(np.abs(self.values), initial=0.0))
        return bool(np.all(np.abs(self.values.imag) <= rtol * scale))


@dataclass(frozen=True)
class SparseSpectrum:
    """Fourier coefficients by ordinal; absent entries are zero.

    Keys may be given as ordinals or digit tuples.  Exact zeros are dropped.
    """

    group: GroupSpec
    entries: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[int, complex] = {}
        for key, value in self.entries.items():
            k = self.group.ordinal(key)
            if k in clean:
                raise ValueError(f"index {key!r} given twice")
            value = complex(value)
            if value != 0:
                clean[k] = value
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @property
    def support(self) -> list[int]:
        return list(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: Index) -> complex:
        return self.entries.get(self.group.ordinal(j), 0j)

    def items(self):
        return self.entries.items()

    @property
    def mean(self) -> complex:
        return self.entries.get(0, 0j)

    def to_dense(self) -> DenseFunction:
        return to_dense(self)


Vector = DenseFunction | SparseSpectrum


# -- transforms ---------------------------------------------------------------

def walsh_hadamard(x: np.ndarray) -> np.ndarray:
    """Unnormalised Sylvester-Hadamard product ``H x`` by butterflies."""
    x = np.array(x, dtype=np.complex128).reshape(-1)
    size = x.shape[0]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        x = x.reshape(-1, 2, h)
        x = np.stack((x[:, 0] + x[:, 1], x[:, 0] - x[:, 1]), axis=1)
        h *= 2
    return x.reshape(size)


def _forward(group: GroupSpec, values: np.ndarray) -> np.ndarray:
    if group.is_binary:
        return walsh_hadamard(values) / group.order
    return np.fft.fftn(values.reshape(group.shape)).reshape(-1) / group.order


def _inverse(group: GroupSpec, values: np.ndarray) -> np.ndarray:
    if group.is_binary:
        return walsh_hadamard(values)
    return np.fft.ifftn(values.reshape(group.shape)).reshape(-1) * group.order


def dft(f: DenseFunction) -> DenseFunction:
    """Forward transform of a primal function; entry 0 of the result is its mean."""
    if f.side is not Side.PRIMAL:
        raise SideMismatchError("dft expects a primal-domain function")
    return DenseFunction(f.group, _forward(f.group, f.values), Side.FOURIER)


def idft(fhat: Vector) -> DenseFunction:
    """Inverse transform ``U_G^* fhat`` (no normalisation)."""
    if isinstance(fhat, SparseSpectrum):
        fhat = to_dense(fhat)
    if fhat.side is not Side.FOURIER:
        raise SideMismatchError("idft expects a Fourier-domain spectrum")
    return DenseFunction(fhat.group, _inverse(fhat.group, fhat.values), Side.PRIMAL)


def dft_matrix(group: GroupSpec) -> np.ndarray:
    """Explicit ``U_G`` as a Kronecker product; only sensible for small groups."""
    U = np.ones((1, 1), dtype=np.complex128)
    for N in group.shape:
        k = np.arange(N)
        U = np.kron(U, np.exp(-2j * np.pi * np.outer(k, k) / N))
    return U


# -- elementary operations ----------------------------------------------------

def diminish(fhat: Vector, a: complex) -> Vector:
    """Spectrum of ``f - a`` : entry 0 lowered by *a*, everything else untouched."""
    if isinstance(fhat, SparseSpectrum):
        entries = dict(fhat.entries)
        entries[0] = entries.get(0, 0j) - a
        return SparseSpectrum(fhat.group, entries)
    if fhat.side is not Side.FOURIER:
        raise SideMismatchError("diminish expects a Fourier-domain spectrum")
    values = fhat.values.copy()
    values[0] -= a
    return fhat.replace(values)


def reverse(v: Vector) -> Vector:
    """Reindex entry ``j`` to ``-j``.  An involution; the identity on Z_2^n."""
    g = v.group
    if isinstance(v, SparseSpectrum):
        neg = g.negation_permutation
        return SparseSpectrum(g, {int(neg[k]): c for k, c in v.items()})
    return v.replace(v.values[g.negation_permutation])


def is_conjugate_symmetric(fhat: Vector, rtol: float = REAL_RTOL) -> bool:
    """True when ``fhat[-j] == conj(fhat[j])`` for all j, i.e. its inverse is real."""
    values = _values(fhat)
    scale = float(np.max(np.abs(values), initial=0.0))
    gap = np.abs(values[fhat.group.negation_permutation] - np.conj(values))
    return bool(np.all(gap <= rtol * max(scale, np.finfo(float).tiny)))


def _check_same_group(f: Vector, g: Vector):
    if f.group != g.group:
        raise GroupMismatchError(f"groups differ: {f.group.describe()} vs {g.group.describe()}")


def _values(v: Vector) -> np.ndarray:
    if isinstance(v, SparseSpectrum):
        return to_dense(v).values
    return v.values


def dot(f: Vector, g: Vector) -> complex:
    """Bilinear dot product ``sum_i f_i g_i`` (no conjugation)."""
    _check_same_group(f, g)
    side_f = Side.FOURIER if isinstance(f, SparseSpectrum) else f.side
    side_g = Side.FOURIER if isinstance(g, SparseSpectrum) else g.side
    if side_f is not side_g:
        raise SideMismatchError("dot of a primal function with a spectrum")
    if isinstance(f, SparseSpectrum) and isinstance(g, SparseSpectrum):
        return complex(sum(c * g.entries.get(k, 0j) for k, c in f.items()))
    return complex(np.dot(_values(f), _values(g)))


def parseval_gap(f: DenseFunction, g: DenseFunction) -> float:
    """``| <<f, g>> - |G| <<fhat, reverse(ghat)>> |`` for two primal functions."""
    _check_same_group(f, g)
    lhs = dot(f, g)
    rhs = f.group.order * dot(dft(f), reverse(dft(g)))
    return abs(lhs - rhs)


def basis(group: GroupSpec, j: Index, side: Side = Side.FOURIER) -> DenseFunction:
    """Standard basis vector ``e_j``."""
    values = np.zeros(group.order, dtype=np.complex128)
    values[group.ordinal(j)] = 1
    return DenseFunction(group, values, side)


def constant(group: GroupSpec, c: complex) -> DenseFunction:
    return DenseFunction(group, np.full(group.order, c, dtype=np.complex128), Side.PRIMAL)


# -- sparse/dense conversion --------------------------------------------------

def to_dense(s: SparseSpectrum) -> DenseFunction:
    values = np.zeros(s.group.order, dtype=np.complex128)
    for k, c in s.items():
        values[k] = c
    return DenseFunction(s.group, values, Side.FOURIER)


def to_sparse(dense: DenseFunction, threshold: float = 0.0) -> SparseSpectrum:
    """Keep entries with magnitude strictly above *threshold*."""
    keep = np.flatnonzero(np.abs(dense.values) > threshold)
    return SparseSpectrum(dense.group, {int(k): complex(dense.values[k]) for k in keep})


def spectrum_from_pairs(group: GroupSpec, pairs: Iterable[tuple[Index, complex]]) -> SparseSpectrum:
    return SparseSpectrum(group, dict(pairs))
