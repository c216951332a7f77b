"""Lagged m-th order moments of a function on G.

``r_m(i_1..i_{m-1}) = (1/|G|) sum_i f_i f_{i+i_1} ... f_{i+i_{m-1}}``

In the Fourier domain the same quantity is a sum over frequency tuples
``j_1..j_{m-1}`` with ``j_m = -(j_1 + ... + j_{m-1})``, each product of
coefficients weighted by the characters of the lags.  With every lag zero it
reduces to the raw moment.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence

import numpy as np

from .convolution import shift
from .errors import ResourceLimitError, SideMismatchError
from .group import GroupSpec, Index
from .limits import limit
from .spectrum import DenseFunction, Side, SparseSpectrum, Vector, to_dense


def _lag_ordinals(group: GroupSpec, lags: Sequence[Index]) -> list[int]:
    return [group.ordinal(t) for t in lags]


def lagged_moment(f: DenseFunction, lags: Sequence[Index]) -> complex:
    """Average of the product of f with its copies shifted by each lag."""
    if f.side is not Side.PRIMAL:
        raise SideMismatchError("lagged_moment needs a primal-domain function")
    g = f.group
    prod = f.values.copy()
    for t in _lag_ordinals(g, lags):
        # entry i of the shifted copy is f_{i + t}
        prod = prod * shift(f, g.negate(t)).values
    return complex(np.mean(prod))


def _characters(group: GroupSpec, support: np.ndarray, lag: int) -> np.ndarray:
    """``exp(2 pi i sum_l t_l j_l / N_l)`` for every j in *support*."""
    t = np.array(group.digits(lag), dtype=np.float64) / np.array(group.moduli, dtype=np.float64)
    return np.exp(2j * np.pi * (group.digit_array(support) @ t))


def lagged_moment_fourier(fhat: Vector, lags: Sequence[Index], max_terms: int | None = None) -> complex:
    """Frequency-domain form of :func:`lagged_moment`.

    Only frequency tuples drawn from the nonzero support are visited; the
    last index is fixed by the resonance condition.

    Raises
    ------
    ResourceLimitError
        When ``|support|^(m-1)`` exceeds *max_terms* (default: the
        ``max_terms`` guard).
    """
    if isinstance(fhat, SparseSpectrum):
        dense = to_dense(fhat)
    elif fhat.side is Side.FOURIER:
        dense = fhat
    else:
        raise SideMismatchError("lagged_moment_fourier needs a spectrum")
    group = dense.group
    lag_ords = _lag_ordinals(group, lags)
    m = len(lag_ords) + 1
    values = dense.values
    if m == 1:
        return complex(values[0])
    support = np.flatnonzero(values).astype(np.int64)
    s = support.size
    bound = limit("max_terms") if max_terms is None else max_terms
    if s ** (m - 1) > bound:
        raise ResourceLimitError(f"lagged order-{m} frequency tuples", s ** (m - 1), bound)
    if s == 0:
        return 0j
    # coefficient times lag character, per free position
    weighted = [values[support] * _characters(group, support, t) for t in lag_ords]

    # the last one or two free positions are vectorised
    outer = m - 1 - min(m - 1, 2)
    total = 0j
    for head in itertools.product(range(s), repeat=outer):
        partial = 0
        coeff = 1 + 0j
        for q, pos in enumerate(head):
            partial = int(group.add_ordinals(partial, support[pos]))
            coeff *= weighted[q][pos]
        if m - 1 - outer == 1:
            js = group.add_ordinals(partial, support)
            terms = weighted[outer]
        else:
            js = group.add_ordinals(group.add_ordinals(partial, support[:, None]), support[None, :])
            terms = weighted[outer][:, None] * weighted[outer + 1][None, :]
        jm = group.negate_ordinals(js)
        assert not group.add_ordinals(js, jm).any(), "resonance condition violated"
        total += coeff * complex(np.sum(terms * values[jm]))
    return total

