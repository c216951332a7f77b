"""Population moments computed directly and from the Fourier coefficients.

With ``g`` the spectrum of ``f - a`` (the a-diminished spectrum), the m-th
moment about ``a`` is, for any split ``0 <= p <= m``::

    mu_m^(a) = << *^(m-p) g , reverse(*^p g) >>

so a single chain ``*^1 g, *^2 g, ..., *^K g`` yields every moment up to 2K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convolution import autoconvolve, convolve
from .errors import ConsistencyError, SideMismatchError
from .spectrum import (
    DenseFunction,
    Side,
    SparseSpectrum,
    Vector,
    basis,
    diminish,
    is_conjugate_symmetric,
    to_dense,
)

STANDARDIZED_NAMES = {3: "skewness", 4: "kurtosis", 5: "hyperskewness", 6: "hyperkurtosis"}


# -- direct domain -------------------------------------------------------------

def direct_general_moment(f: DenseFunction, a: complex = 0, m: int = 2) -> complex:
    """``(1/|G|) sum_i (f_i - a)^m``."""
    if f.side is not Side.PRIMAL:
        raise SideMismatchError("direct moments need a primal-domain function")
    if m < 0:
        raise ValueError(f"moment order must be >= 0, got {m}")
    return complex(np.mean((f.values - a) ** m))


def direct_mean(f: DenseFunction) -> complex:
    return complex(np.mean(f.values))


def direct_variance(f: DenseFunction) -> float:
    if f.side is not Side.PRIMAL:
        raise SideMismatchError("direct moments need a primal-domain function")
    return float(np.mean(np.abs(f.values - np.mean(f.values)) ** 2))


# -- Fourier domain ------------------------------------------------------------

def default_split(m: int) -> int:
    """``m/2`` for even m, ``(m+1)/2`` for odd m."""
    return (m + 1) // 2


def _dense(fhat: Vector) -> DenseFunction:
    if isinstance(fhat, SparseSpectrum):
        return to_dense(fhat)
    if fhat.side is not Side.FOURIER:
        raise SideMismatchError("Fourier-domain moments need a spectrum")
    return fhat


def _chain(g: DenseFunction, K: int, strategy: str) -> list[np.ndarray]:
    """Autoconvolution powers ``*^0 g, ..., *^K g`` as arrays."""
    out = [basis(g.group, 0).values]
    if strategy == "roundtrip":
        out.extend(autoconvolve(g, k, "roundtrip").values for k in range(1, K + 1))
        return out
    if strategy != "recursive":
        raise ValueError(f"unknown strategy {strategy!r}")
    for _ in range(K):
        out.append(convolve(g, g.replace(out[-1])).values)
    return out


def _paired(chain: list[np.ndarray], neg: np.ndarray, q: int, p: int) -> complex:
    return complex(np.dot(chain[q], chain[p][neg]))


def _scale(g: DenseFunction, m: int) -> float:
    # bounds |mu_m| for every split, used to turn rtol into an absolute tolerance
    return max(float(np.sum(np.abs(g.values))) ** m, 1.0)


def fourier_general_moment(fhat: Vector, a: complex = 0, m: int = 2, p: int | None = None,
                           strategy: str = "recursive", check_split: bool = True,
                           rtol: float = 1e-9) -> complex:
    """m-th moment about *a* from the spectrum alone.

    Parameters
    ----------
    fhat : DenseFunction (Fourier side) or SparseSpectrum
    a : complex
        Centre; ``0`` gives raw moments, the mean gives central ones.
    p : int, optional
        Split of the m coefficients between the two autoconvolution factors.
    strategy : {"recursive", "roundtrip"}
        How the autoconvolutions are formed.
    check_split : bool
        For ``m >= 2`` also evaluate a second split and raise
        :class:`ConsistencyError` if the two disagree beyond *rtol*.
    """
    if m < 0:
        raise ValueError(f"moment order must be >= 0, got {m}")
    p = default_split(m) if p is None else p
    if not 0 <= p <= m:
        raise ValueError(f"split p={p} outside [0, {m}]")
    g = _dense(diminish(fhat, a))
    alt = None
    if check_split and m >= 2:
        # the pairing is symmetric, so the alternate split must use different powers
        alt = p - 1 if p > 0 and m - p != p - 1 else p + 1
        if {m - alt, alt} == {m - p, p}:
            alt = 0 if p else m
    K = max(m - p, p, *(() if alt is None else (m - alt, alt)))
    chain = _chain(g, K, strategy)
    neg = g.group.negation_permutation
    value = _paired(chain, neg, m - p, p)
    if alt is not None:
        other = _paired(chain, neg, m - alt, alt)
        if abs(value - other) > rtol * _scale(g, m):
            raise ConsistencyError(f"splits p={p} and p={alt} disagree: {value} vs {other}")
    return value


def fourier_raw_moment(fhat: Vector, m: int, **kw) -> complex:
    return fourier_general_moment(fhat, 0, m, **kw)


def fourier_central_moment(fhat: Vector, m: int, **kw) -> complex:
    mean = fhat.mean if isinstance(fhat, SparseSpectrum) else complex(fhat.values[0])
    return fourier_general_moment(fhat, mean, m, **kw)


def fourier_variance(fhat: Vector) -> float:
    """Sum of ``|fhat_j|^2`` over every nonzero index j."""
    if isinstance(fhat, SparseSpectrum):
        return float(sum(abs(c) ** 2 for k, c in fhat.items() if k != 0))
    if fhat.side is not Side.FOURIER:
        raise SideMismatchError("fourier_variance needs a spectrum")
    return float(np.sum(np.abs(fhat.values[1:]) ** 2))


# -- batched report ------------------------------------------------------------

def _fmt(z: complex, digits: int) -> str:
    if abs(z.imag) <= 1e-9 * max(abs(z.real), 1.0):
        return f"{z.real:.{digits}f}"
    return f"{z.real:.{digits}f}{z.imag:+.{digits}f}i"


@dataclass
class MomentReport:
    """Mean, variance, raw and central moments, and standardized moments.

    ``standardized`` maps an order m >= 3 to ``mu_m / sigma^m``, or to None
    when f is complex-valued or has zero variance.
    """

    mean: complex
    variance: float
    raw: dict[int, complex]
    central: dict[int, complex]
    is_real: bool
    center: complex = 0j
    general: dict[int, complex] = field(default_factory=dict)
    standardized: dict[int, float | None] = field(default_factory=dict)

    @property
    def max_order(self) -> int:
        return max(self.central, default=1)

    def _std(self, m: int) -> float | None:
        return self.standardized.get(m)

    @property
    def skewness(self) -> float | None:
        return self._std(3)

    @property
    def kurtosis(self) -> float | None:
        return self._std(4)

    @property
    def hyperskewness(self) -> float | None:
        return self._std(5)

    @property
    def hyperkurtosis(self) -> float | None:
        return self._std(6)

    def to_dict(self) -> dict:
        def c(z):
            return {"re": z.real, "im": z.imag}
        return {
            "mean": c(self.mean),
            "variance": self.variance,
            "is_real": self.is_real,
            "raw": {str(m): c(v) for m, v in self.raw.items()},
            "central": {str(m): c(v) for m, v in self.central.items()},
            "center": c(self.center),
            "general": {str(m): c(v) for m, v in self.general.items()},
            "standardized": {
                STANDARDIZED_NAMES.get(m, f"standardized_{m}"): v
                for m, v in self.standardized.items()
            },
        }

    def format_table(self, digits: int = 2) -> str:
        rows = [("mean", _fmt(self.mean, digits)), ("variance", f"{self.variance:.{digits}f}")]
        rows += [(f"mu_{m}", _fmt(v, digits)) for m, v in self.central.items() if m >= 3]
        rows += [(f"raw mu'_{m}", _fmt(v, digits)) for m, v in self.raw.items() if m >= 2]
        if self.general and self.center not in (0, self.mean):
            rows += [(f"mu_{m}^({_fmt(self.center, digits)})", _fmt(v, digits))
                     for m, v in self.general.items()]
        for m, v in self.standardized.items():
            name = STANDARDIZED_NAMES.get(m, f"standardized_{m}")
            rows.append((name, "undefined" if v is None else f"{v:.{digits}f}"))
        width = max(len(name) for name, _ in rows)
        lines = ["Statistics of f"]
        lines += [f"  {name:<{width}}  {value:>14}" for name, value in rows]
        return "\n".join(lines)


def _moments_from_chain(g: DenseFunction, M: int, strategy: str) -> dict[int, complex]:
    K = (M + 1) // 2
    chain = _chain(g, max(K, 1), strategy)
    neg = g.group.negation_permutation
    out = {}
    for m in range(1, M + 1):
        k = default_split(m)
        out[m] = _paired(chain, neg, m - k, k)
    return out


def moment_report(fhat: Vector, max_order: int = 4, center: str | complex = "central",
                  strategy: str = "recursive", rtol: float = 1e-9) -> MomentReport:
    """Every moment up to *max_order* from one autoconvolution chain per centre.

    *center* selects the extra ``general`` block: ``"raw"`` (a = 0),
    ``"central"`` (a = mean) or an explicit complex number.
    """
    if max_order < 2:
        raise ValueError(f"max_order must be >= 2, got {max_order}")
    dense = _dense(fhat)
    mean = complex(dense.values[0])
    variance = fourier_variance(dense)
    raw_g = dense
    cen_g = _dense(diminish(dense, mean))
    raw = _moments_from_chain(raw_g, max_order, strategy)
    central = _moments_from_chain(cen_g, max_order, strategy)

    tol = rtol * max(float(np.sum(np.abs(dense.values))), 1.0)
    if abs(raw[1] - mean) > tol or abs(central[1]) > tol:
        raise ConsistencyError("first moments do not match the mean")
    del central[1]

    real = is_conjugate_symmetric(dense, rtol)
    if real:
        central = {m: complex(v.real, 0.0) for m, v in central.items()}
        raw = {m: complex(v.real, 0.0) for m, v in raw.items()}
        if abs(central[2].real - variance) > rtol * _scale(cen_g, 2):
            raise ConsistencyError(f"mu_2 = {central[2]} differs from variance {variance}")

    if center == "raw":
        a = 0j
    elif center == "central":
        a = mean
    else:
        a = complex(center)
    if a == 0:
        general = dict(raw)
    elif a == mean:
        general = {1: 0j, **central}
    else:
        general = _moments_from_chain(_dense(diminish(dense, a)), max_order, strategy)

    zero_var = variance <= 1e-24 * max(1.0, abs(mean) ** 2)
    standardized: dict[int, float | None] = {}
    for m in range(3, max_order + 1):
        if real and not zero_var:
            standardized[m] = central[m].real / variance ** (m / 2)
        else:
            standardized[m] = None
    return MomentReport(mean=mean, variance=variance, raw=raw, central=central, is_real=real,
                        center=a, general=general, standardized=standardized)


def recombine_central(raw: dict[int, complex], mean: complex, m: int) -> complex:
    """Central moment m from raw moments by binomial expansion."""
    total = 0j
    for k in range(m + 1):
        mk = 1.0 if k == 0 else raw[k]
        total += math.comb(m, k) * mk * (-mean) ** (m - k)
    return total
