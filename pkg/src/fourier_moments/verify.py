"""Randomised oracle harness.

Three suites compare independent computations of the same quantity:

* ``moments``: direct-domain average of ``(f - a)^m`` against the
  autoconvolution formula on the spectrum;
* ``symbolic``: the sum over enumerated annihilating terms of a sparse
  spectrum against the direct average on its inverse transform;
* ``lagged``: the shifted-product average against its frequency-domain form.

Deviations are relative to ``(1/|G|) sum |f_i - a|^m`` (or the analogous
bound on the spectrum side), which bounds every term either sum can contain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .group import GroupSpec
from .moments import direct_general_moment, fourier_general_moment
from .spectrum import DenseFunction, SparseSpectrum, dft, idft
from .symbolic import annihilating_terms, evaluate
from .timeseries import lagged_moment, lagged_moment_fourier

SUITES = ("moments", "symbolic", "lagged")
_FACTORS = (2, 3, 4, 5, 6, 7, 8)


def random_group(rng: np.random.Generator, max_order: int) -> GroupSpec:
    while True:
        n = int(rng.integers(1, 5))
        moduli = tuple(int(x) for x in rng.choice(_FACTORS, size=n))
        if math.prod(moduli) <= max_order:
            return GroupSpec(moduli)


def random_complex(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_function(rng: np.random.Generator, group: GroupSpec, real: bool | None = None) -> DenseFunction:
    real = bool(rng.integers(2)) if real is None else real
    values = rng.standard_normal(group.order) if real else random_complex(rng, group.order)
    return DenseFunction(group, values)


def random_sparse_spectrum(rng: np.random.Generator, group: GroupSpec, size: int) -> SparseSpectrum:
    size = min(size, group.order)
    keys = rng.choice(group.order, size=size, replace=False)
    return SparseSpectrum(group, dict(zip(keys.tolist(), random_complex(rng, size).tolist())))


def moment_scale(f: DenseFunction, a: complex, m: int) -> float:
    return float(np.mean(np.abs(f.values - a) ** m))


def relative_deviation(x: complex, y: complex, scale: float) -> float:
    return abs(x - y) / max(scale, np.finfo(float).tiny)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    max_deviation: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, deviation: float, rtol: float, describe):
        self.cases += 1
        self.max_deviation = max(self.max_deviation, deviation)
        if not deviation <= rtol:
            self.failures.append(f"{describe()} deviation={deviation:.3e}")

    def line(self) -> str:
        status = "OK" if self.ok else f"FAIL ({len(self.failures)} cases)"
        return f"{self.name:<9} cases={self.cases:<5d} max_rel_dev={self.max_deviation:.3e}  {status}"


@dataclass
class VerifyReport:
    suites: dict[str, SuiteResult]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites.values())

    def format(self, show_failures: int = 5) -> str:
        lines = [s.line() for s in self.suites.values()]
        for s in self.suites.values():
            lines += [f"  {s.name}: {msg}" for msg in s.failures[:show_failures]]
        return "\n".join(lines)


def _perturb(v, rng: np.random.Generator, amount: float):
    """Add *amount* to one existing coefficient; used to check the harness catches it."""
    if isinstance(v, SparseSpectrum):
        entries = dict(v.entries)
        k = list(entries)[int(rng.integers(len(entries)))]
        entries[k] += amount
        return SparseSpectrum(v.group, entries), k
    values = v.values.copy()
    k = int(rng.integers(values.size))
    values[k] += amount
    return v.replace(values), k


def run_verification(seed: int = 0, cases: int = 50, max_order: int = 128, max_m: int = 5,
                     rtol: float = 1e-9, inject_fault: bool = False) -> VerifyReport:
    """Run every suite on *cases* random instances each.

    With *inject_fault*, one spectrum coefficient is perturbed by 1e-3 before
    the frequency-domain computation in every case; the report must then show
    failures naming the perturbed index.
    """
    rng = np.random.default_rng(seed)
    suites = {name: SuiteResult(name) for name in SUITES}
    fault = 1e-3 if inject_fault else 0.0

    for case in range(cases):
        group = random_group(rng, max_order)
        f = random_function(rng, group)
        a = complex(*rng.standard_normal(2)) if rng.integers(2) else 0j
        m = int(rng.integers(1, max_m + 1))
        fhat = dft(f)
        bad = None
        if fault:
            fhat, bad = _perturb(fhat, rng, fault)
        got = fourier_general_moment(fhat, a, m, check_split=not fault)
        want = direct_general_moment(f, a, m)
        suites["moments"].record(
            relative_deviation(got, want, moment_scale(f, a, m)), rtol,
            lambda: f"case {case}: G={group.describe()} m={m} a={a:.3g} perturbed={bad}")

    for case in range(cases):
        group = random_group(rng, min(max_order, 64))
        s = random_sparse_spectrum(rng, group, int(rng.integers(1, 9)))
        a = complex(*rng.standard_normal(2)) if rng.integers(2) else 0j
        m = int(rng.integers(1, min(max_m, 4) + 1))
        primal = idft(s)
        sym = annihilating_terms(group, m, "raw", support=set(s.support) | {0})
        target, bad = (_perturb(s, rng, fault) if fault else (s, None))
        got = evaluate(sym, target, a)
        want = direct_general_moment(primal, a, m)
        suites["symbolic"].record(
            relative_deviation(got, want, moment_scale(primal, a, m)), rtol,
            lambda: f"case {case}: G={group.describe()} m={m} support={s.support} perturbed={bad}")

    for case in range(cases):
        group = random_group(rng, min(max_order, 64))
        f = random_function(rng, group)
        m = int(rng.integers(1, min(max_m, 4) + 1))
        lags = [int(x) for x in rng.integers(group.order, size=m - 1)]
        fhat = dft(f)
        bad = None
        if fault:
            fhat, bad = _perturb(fhat, rng, fault)
        got = lagged_moment_fourier(fhat, lags)
        want = lagged_moment(f, lags)
        suites["lagged"].record(
            relative_deviation(got, want, moment_scale(f, 0, m)), rtol,
            lambda: f"case {case}: G={group.describe()} lags={lags} perturbed={bad}")

    return VerifyReport(suites)

