import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fourier_moments import DenseFunction, GroupSpec

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def groups(draw, max_order=96, max_factors=3, orderings=True):
    while True:
        moduli = draw(st.lists(st.integers(2, 7), min_size=1, max_size=max_factors))
        if math.prod(moduli) <= max_order:
            break
    ordering = draw(st.sampled_from(["msf", "lsf"])) if orderings else None
    return GroupSpec(tuple(moduli), ordering)


@st.composite
def functions(draw, max_order=96, real=None):
    group = draw(groups(max_order=max_order))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    is_real = draw(st.booleans()) if real is None else real
    values = rng.standard_normal(group.order)
    if not is_real:
        values = values + 1j * rng.standard_normal(group.order)
    return DenseFunction(group, values)


def brute_convolve(group, f, g):
    out = np.zeros(group.order, dtype=complex)
    for i in range(group.order):
        for j in range(group.order):
            out[i] += f[group.subtract(i, j)] * g[j]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
