"""Circular convolution on G, circulant operators and autoconvolution.

``(f * g)_i = sum_j f_{i - j} g_j``.  Dense vectors are convolved either by
accumulating shifted copies over the support of the sparser operand
(O(|G| s), the cost the moment chains rely on) or through the transform.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, GroupMismatchError, ResourceLimitError, SideMismatchError
from .group import GroupSpec, Index, subtraction_table
from .limits import limit
from .spectrum import DenseFunction, Side, SparseSpectrum, Vector, _forward, _inverse, basis

log = logging.getLogger(__name__)

# Above this many multiply-adds the dense accumulation hands over to the FFT path.
_DIRECT_WORK = 1 << 22


def _check(f: Vector, g: Vector):
    if f.group != g.group:
        raise GroupMismatchError(f"groups differ: {f.group.describe()} vs {g.group.describe()}")
    sf = Side.FOURIER if isinstance(f, SparseSpectrum) else f.side
    sg = Side.FOURIER if isinstance(g, SparseSpectrum) else g.side
    if sf is not sg:
        raise SideMismatchError("cannot convolve a primal function with a spectrum")


def shift(f: DenseFunction, j: Index) -> DenseFunction:
    """``S_j f``: entry i becomes ``f_{i - j}``."""
    g = f.group
    rolled = np.roll(f.values.reshape(g.shape), g.axis_digits(j), axis=tuple(range(g.n)))
    return f.replace(rolled.reshape(-1))


def _accumulate(group: GroupSpec, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Matrix-free ``C_f g``: sum of shifted copies of f weighted by the nonzeros of g."""
    F = f.reshape(group.shape)
    out = np.zeros(group.shape, dtype=np.complex128)
    axes = tuple(range(group.n))
    for k in np.flatnonzero(g):
        out += g[k] * np.roll(F, group.axis_digits(int(k)), axis=axes)
    return out.reshape(-1)


def _via_transform(group: GroupSpec, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    # f * g = F(F^-1 f . F^-1 g) under the 1/|G|-forward convention
    return _forward(group, _inverse(group, f) * _inverse(group, g))


def convolve(f: Vector, g: Vector, method: str = "auto") -> Vector:
    """Circular convolution of two vectors on the same group and side.

    Parameters
    ----------
    method : {"auto", "direct", "fft"}
        ``direct`` accumulates shifts over the sparser operand's support,
        ``fft`` uses the convolution theorem.  Two sparse spectra are always
        convolved by support sumset (see :func:`sparse_convolve`).
    """
    _check(f, g)
    if isinstance(f, SparseSpectrum) and isinstance(g, SparseSpectrum):
        return sparse_convolve(f, g)
    if isinstance(f, SparseSpectrum):
        f = f.to_dense()
    if isinstance(g, SparseSpectrum):
        g = g.to_dense()
    group = f.group
    nf = np.count_nonzero(f.values)
    ng = np.count_nonzero(g.values)
    if method == "auto":
        method = "direct" if min(nf, ng) * group.order <= _DIRECT_WORK else "fft"
    if method == "direct":
        a, b = (f.values, g.values) if ng <= nf else (g.values, f.values)
        out = _accumulate(group, a, b)
    elif method == "fft":
        out = _via_transform(group, f.values, g.values)
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    return f.replace(out, origin=f"convolve:{method}")


def sparse_convolve(a: SparseSpectrum, b: SparseSpectrum, max_support: int | None = None) -> SparseSpectrum:
    """Convolution of sparse spectra; the result lives on the sumset of supports."""
    if a.group != b.group:
        raise GroupMismatchError(f"groups differ: {a.group.describe()} vs {b.group.describe()}")
    bound = limit("max_support") if max_support is None else max_support
    pairs = len(a) * len(b)
    if pairs > limit("max_terms"):
        raise ResourceLimitError("sparse convolution pair count", pairs, limit("max_terms"))
    if not pairs:
        return SparseSpectrum(a.group, {})
    ka = np.fromiter(a.entries, dtype=np.int64, count=len(a))
    kb = np.fromiter(b.entries, dtype=np.int64, count=len(b))
    va = np.fromiter(a.entries.values(), dtype=np.complex128, count=len(a))
    vb = np.fromiter(b.entries.values(), dtype=np.complex128, count=len(b))
    keys = a.group.add_ordinals(ka[:, None], kb[None, :]).reshape(-1)
    prods = (va[:, None] * vb[None, :]).reshape(-1)
    uniq, inverse = np.unique(keys, return_inverse=True)
    if uniq.size > bound:
        raise ResourceLimitError("sparse convolution support", int(uniq.size), bound)
    sums = np.zeros(uniq.size, dtype=np.complex128)
    np.add.at(sums, inverse, prods)
    return SparseSpectrum(a.group, dict(zip(uniq.tolist(), sums.tolist())))


def autoconvolve(v: Vector, m: int, strategy: str | None = None) -> Vector:
    """m-fold self-convolution ``*^m v``, with ``*^0 v = e_0``.

    Dense inputs default to the ``roundtrip`` strategy (inverse transform,
    elementwise m-th power, forward transform); ``recursive`` convolves m
    times.  Sparse spectra are always expanded recursively on their support.
    The strategy used is recorded in ``result.origin``.
    """
    if m < 0:
        raise ValueError(f"autoconvolution order must be >= 0, got {m}")
    if isinstance(v, SparseSpectrum):
        out = SparseSpectrum(v.group, {0: 1})
        for _ in range(m):
            out = sparse_convolve(out, v)
        return out
    strategy = strategy or "roundtrip"
    group = v.group
    if strategy == "roundtrip":
        values = _forward(group, _inverse(group, v.values) ** m)
    elif strategy == "recursive":
        values = basis(group, 0).values
        for _ in range(m):
            values = convolve(v, v.replace(values)).values
    else:
        raise ValueError(f"unknown autoconvolution strategy {strategy!r}")
    log.debug("autoconvolve m=%d on %s via %s", m, group.describe(), strategy)
    return v.replace(values, origin=f"autoconvolve:{strategy}")


@dataclass(frozen=True)
class CirculantOperator:
    """The operator ``C_f`` with entries ``C_f(i, j) = f_{i - j}``.

    Applying it to g convolves f with g.  The matrix is only materialised on
    request and only up to the ``circulant_order`` guard.
    """

    generator: DenseFunction

    @property
    def group(self) -> GroupSpec:
        return self.generator.group

    def matrix(self, max_order: int | None = None) -> np.ndarray:
        bound = limit("circulant_order") if max_order is None else max_order
        if self.group.order > bound:
            raise ResourceLimitError("circulant matrix order |G|", self.group.order, bound)
        table = subtraction_table(self.group, max_order=bound).entries
        return self.generator.values[table.astype(np.int64)]

    def apply(self, g: DenseFunction, materialize: bool = False) -> DenseFunction:
        if g.group != self.group:
            raise GroupMismatchError("operator and vector live on different groups")
        if materialize:
            return g.replace(self.matrix() @ g.values, origin="circulant:matrix")
        return g.replace(_accumulate(self.group, self.generator.values, g.values),
                         origin="circulant:matrix-free")

    def compose(self, other: CirculantOperator) -> CirculantOperator:
        """``C_f C_g = C_{f * g}``."""
        return CirculantOperator(convolve(self.generator, other.generator))

    def power_diagonal(self, m: int, rtol: float = 1e-9) -> complex:
        """Common value of the main diagonal of ``C_f^m``.

        For ``C`` built on an a-diminished spectrum this is the m-th moment
        about a.  Every diagonal entry is checked against the first.
        """
        if m < 0:
            raise ValueError(f"power must be >= 0, got {m}")
        M = np.linalg.matrix_power(self.matrix(), m)
        diag = np.diag(M)
        scale = max(float(np.max(np.abs(M))), 1.0)
        if np.max(np.abs(diag - diag[0])) > rtol * scale:
            raise ConsistencyError("diagonal of the circulant power is not constant")
        return complex(diag[0])
