import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourier_moments import (
    GraphBetSpec,
    GroupSpec,
    binomial_reference_moments,
    complete_graph_reference_moments,
    complete_graph_spec,
    direct_effect_spectrum,
    graph_spectrum,
    histogram,
    idft,
    moment_report,
    petersen_spec,
    to_dense,
)
from fourier_moments.models import PETERSEN_EDGES


def test_direct_effect_spectrum_n4():
    s = direct_effect_spectrum(4, -1)
    dense = to_dense(s).values.real
    expect = np.zeros(16)
    expect[[1, 2, 4, 8]] = -1
    assert np.array_equal(dense, expect)
    assert np.array_equal(idft(s).values.real,
                          [-4, -2, -2, 0, -2, 0, 0, 2, -2, 0, 0, 2, 0, 2, 2, 4])


def test_single_factor():
    s = direct_effect_spectrum(1, 2.5)
    assert s.entries == {1: 2.5}
    assert s.group == GroupSpec.binary(1)


def test_complete_graph_n4_spectrum_and_payoffs():
    s = graph_spectrum(complete_graph_spec(4, -1, 0.1))
    expect = [0, -1, -1, -0.1, -1, -0.1, -0.1, 0, -1, -0.1, -0.1, 0, -0.1, 0, 0, 0]
    assert np.allclose(to_dense(s).values, expect, atol=0)
    payoff = idft(s).values.real
    assert np.allclose(payoff, [-4.6, -2.0, -2.0, 0.2, -2.0, 0.2, 0.2, 2.0,
                                -2.0, 0.2, 0.2, 2.0, 0.2, 2.0, 2.0, 3.4], atol=1e-12)


def test_empty_edges_equal_direct_effects():
    assert graph_spectrum(GraphBetSpec(5, [-1] * 5)) == direct_effect_spectrum(5, -1)
    assert graph_spectrum(complete_graph_spec(5, -1, 0)) == direct_effect_spectrum(5, -1)


def test_petersen_graph():
    assert len(PETERSEN_EDGES) == 15
    degrees = [sum(v in e for e in PETERSEN_EDGES) for v in range(1, 11)]
    assert degrees == [3] * 10
    s = graph_spectrum(petersen_spec(-1, 0.1))
    by_degree = {}
    for k in s.support:
        by_degree[s.group.degree(k)] = by_degree.get(s.group.degree(k), 0) + 1
    assert by_degree == {1: 10, 2: 15}


def test_hyperedges():
    spec = GraphBetSpec(4, [1, 1, 1, 1], {(1, 2): -0.5}, {(1, 2, 3): 0.25})
    s = graph_spectrum(spec)
    assert s[s.group.from_set({1, 2, 3})] == 0.25
    assert s[3] == -0.5


@pytest.mark.parametrize("bad", [
    dict(n=3, vertex_effects=[1, 1]),
    dict(n=0, vertex_effects=[]),
    dict(n=3, vertex_effects=[1, 1, 1], edge_weights=[((1, 2), 1), ((2, 1), 2)]),
    dict(n=3, vertex_effects=[1, 1, 1], edge_weights={(1, 4): 1}),
    dict(n=3, vertex_effects=[1, 1, 1], edge_weights={(2, 2): 1}),
    dict(n=3, vertex_effects=[1, 1, 1], edge_weights={(1, 2, 3): 1}),
    dict(n=3, vertex_effects=[1, 1, 1], hyperedges={(1, 2): 1}),
])
def test_invalid_specs(bad):
    with pytest.raises(ValueError):
        GraphBetSpec(**bad)


def test_from_dict():
    spec = GraphBetSpec.from_dict({"n": 3, "d": -1, "edges": [[1, 2], [2, 3]], "edge_weight": -0.2,
                                   "hyperedges": [[[1, 2, 3], 0.1]]})
    assert spec.vertex_effects == (-1, -1, -1)
    assert spec.edge_weights == {frozenset({1, 2}): -0.2, frozenset({2, 3}): -0.2}
    with pytest.raises(ValueError):
        GraphBetSpec.from_dict({"n": 2, "edges": [[1, 2]]})


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("d", [-1, -0.5, 0.5, 1])
def test_binomial_identities(n, d):
    r = moment_report(direct_effect_spectrum(n, d), 6)
    ref = binomial_reference_moments(n, d)
    scale = abs(d) ** 2 * n
    assert math.isclose(r.variance, ref["variance"], rel_tol=1e-9)
    for m, key in [(3, "mu3"), (4, "mu4"), (5, "mu5"), (6, "mu6")]:
        assert abs(r.central[m].real - ref[key]) <= 1e-9 * max(abs(ref[key]), scale ** (m / 2))
    assert abs(r.kurtosis - ref["kurtosis"]) <= 1e-12
    assert abs(r.hyperkurtosis - ref["hyperkurtosis"]) <= 1e-12
    assert abs(r.skewness) <= 1e-12 and abs(r.hyperskewness) <= 1e-12


def test_binomial_examples():
    assert binomial_reference_moments(4, 1)["kurtosis"] == 2.5
    assert binomial_reference_moments(1, 1)["hyperkurtosis"] == 1
    n = 6
    assert binomial_reference_moments(n, 0.5)["mu4"] == (3 * n**2 - 2 * n) / 16
    # one fair +-d factor: every even central moment is d^m
    f = idft(direct_effect_spectrum(1, 0.5)).values.real
    assert np.mean(f**6) / np.mean(f**2) ** 3 == 1


@given(st.integers(1, 10), st.sampled_from([-1, 1]))
def test_direct_effect_histograms_are_binomial(n, d):
    hist = histogram(idft(direct_effect_spectrum(n, d)))
    assert len(hist) == n + 1
    assert [c for _, c in hist] == [math.comb(n, k) for k in range(n + 1)]


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("a", [0, 0.05, 0.1, 0.5])
def test_complete_graph_closed_forms(n, a):
    r = moment_report(graph_spectrum(complete_graph_spec(n, -1, a)), 4)
    ref = complete_graph_reference_moments(n, a)
    assert math.isclose(r.variance, ref["variance"], rel_tol=1e-9)
    s3 = ref["variance"] ** 1.5
    assert abs(r.central[3].real - ref["mu3"]) <= 1e-9 * max(abs(ref["mu3"]), s3)
    assert math.isclose(r.central[4].real, ref["mu4"], rel_tol=1e-9)


def test_complete_graph_closed_forms_collapse_at_zero():
    for n in range(1, 8):
        ref = complete_graph_reference_moments(n, 0)
        binom = binomial_reference_moments(n, 1)
        assert ref["variance"] == binom["variance"] and ref["mu3"] == 0
        assert ref["mu4"] == binom["mu4"]


def test_side_bet_statistics():
    r4 = moment_report(graph_spectrum(complete_graph_spec(4, -1, 0.1)), 4)
    assert r4.skewness == pytest.approx(-0.44, abs=0.01)
    assert r4.kurtosis == pytest.approx(2.69, abs=0.01)


def test_histogram_rejects_complex():
    from fourier_moments import DenseFunction
    with pytest.raises(ValueError):
        histogram(DenseFunction(GroupSpec((2,)), [1j, 0]))
