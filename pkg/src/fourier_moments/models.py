"""Spectrum generators on Z_2^n and closed-form reference moments.

Coin-toss designs use the gambling sign convention: a factor whose success
pays +1 is encoded with a direct effect ``d = -1`` (heads) because the
inverse transform puts ``-d`` on the elements where that factor's digit is 1.
Had success been tails, ``d = +1`` would be used instead.

Side bets on pairs of factors are degree-2 coefficients ``-a``: the pair
loses ``a`` when the two flips match and wins ``a`` when they differ.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .group import GroupSpec, Ordering
from .spectrum import DenseFunction, SparseSpectrum


def _pairs(items) -> list:
    if isinstance(items, Mapping):
        return list(items.items())
    return list(items or [])


@dataclass(frozen=True)
class GraphBetSpec:
    """Vertex effects, edge weights and optional hyperedge weights on n factors.

    Vertex labels run from 1 to n.  ``edge_weights`` and ``hyperedges`` may
    be given as mappings or as ``(labels, weight)`` pairs; either way they are
    normalised to ``frozenset -> float`` and repeated keys are rejected.
    """

    n: int
    vertex_effects: Sequence[float]
    edge_weights: Mapping = field(default_factory=dict)
    hyperedges: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        effects = tuple(float(d) for d in self.vertex_effects)
        if len(effects) != self.n:
            raise ValueError(f"{len(effects)} vertex effects for {self.n} vertices")
        object.__setattr__(self, "vertex_effects", effects)
        object.__setattr__(self, "edge_weights", self._normalise(self.edge_weights, 2, "edge"))
        object.__setattr__(self, "hyperedges", self._normalise(self.hyperedges, 3, "hyperedge"))

    def _normalise(self, items, min_size: int, what: str) -> dict[frozenset, float]:
        out: dict[frozenset, float] = {}
        for labels, weight in _pairs(items):
            key = frozenset(int(v) for v in labels)
            if len(key) != len(tuple(labels)):
                raise ValueError(f"{what} {tuple(labels)} repeats a vertex")
            if what == "edge" and len(key) != 2:
                raise ValueError(f"edge {tuple(labels)} must join two distinct vertices")
            if len(key) < min_size:
                raise ValueError(f"{what} {tuple(labels)} needs at least {min_size} vertices")
            if not all(1 <= v <= self.n for v in key):
                raise ValueError(f"{what} {tuple(labels)} has a label outside 1..{self.n}")
            if key in out:
                raise ValueError(f"{what} {sorted(key)} assigned twice")
            out[key] = float(weight)
        return out

    @property
    def group(self) -> GroupSpec:
        return GroupSpec.binary(self.n, Ordering.LSF)

    @classmethod
    def from_dict(cls, data: Mapping) -> GraphBetSpec:
        """Build from a graph file.

        Keys: ``n``; ``vertex_effects`` (list) or ``d`` (scalar for every
        vertex); ``edges`` as ``[u, v, weight]`` triples, or ``[u, v]`` pairs
        combined with a shared ``edge_weight``; ``hyperedges`` as
        ``[[labels...], weight]``.
        """
        n = int(data["n"])
        if "vertex_effects" in data:
            effects = data["vertex_effects"]
        else:
            effects = [float(data.get("d", 0.0))] * n
        shared = data.get("edge_weight")
        edges = []
        for e in data.get("edges", []):
            if len(e) == 3:
                edges.append(((e[0], e[1]), e[2]))
            elif len(e) == 2 and shared is not None:
                edges.append(((e[0], e[1]), shared))
            else:
                raise ValueError(f"edge {e} needs a weight")
        hyper = [(tuple(h[0]), h[1]) for h in data.get("hyperedges", [])]
        return cls(n, effects, edges, hyper)


def direct_effect_spectrum(n: int, d: float) -> SparseSpectrum:
    """Coefficient d at every degree-1 index ``2^(l-1)`` of LSF Z_2^n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    group = GroupSpec.binary(n, Ordering.LSF)
    return SparseSpectrum(group, {1 << l: d for l in range(n)})


def graph_spectrum(spec: GraphBetSpec) -> SparseSpectrum:
    """Degree-1 entries from the vertices, degree 2 from edges, higher from hyperedges."""
    group = spec.group
    entries: dict[int, float] = {}

    def put(labels: Iterable[int], value: float):
        k = group.from_set(labels)
        if k in entries:
            raise ValueError(f"coefficient at {sorted(labels)} assigned twice")
        entries[k] = value

    for v, d in enumerate(spec.vertex_effects, start=1):
        put([v], d)
    for key, w in spec.edge_weights.items():
        put(key, w)
    for key, w in spec.hyperedges.items():
        put(key, w)
    return SparseSpectrum(group, entries)


def complete_graph_spec(n: int, d: float = -1.0, a: float = 0.0) -> GraphBetSpec:
    """Every pair of the n factors carries the side-bet coefficient ``-a``."""
    edges = {(u, v): -a for u, v in itertools.combinations(range(1, n + 1), 2)} if a else {}
    return GraphBetSpec(n, [d] * n, edges)


PETERSEN_EDGES = (
    [(i, i % 5 + 1) for i in range(1, 6)]                 # outer 5-cycle
    + [(i, i + 5) for i in range(1, 6)]                   # spokes
    + [(5 + i, 5 + (i + 1) % 5 + 1) for i in range(1, 6)]  # inner pentagram
)


def petersen_spec(d: float = -1.0, a: float = 0.1) -> GraphBetSpec:
    return GraphBetSpec(10, [d] * 10, {e: -a for e in PETERSEN_EDGES})


def histogram(f: DenseFunction, decimals: int = 9) -> list[tuple[float, int]]:
    """Distinct values of a real function (rounded to *decimals*) with their counts."""
    if not f.is_real():
        raise ValueError("histogram needs a real-valued function")
    values, counts = np.unique(np.round(f.values.real, decimals) + 0.0, return_counts=True)
    return list(zip(values.tolist(), counts.tolist()))


# -- closed forms ----------------------------------------------------------------

def binomial_reference_moments(n: int, d: float) -> dict[str, float]:
    """Central and standardized moments of n independent fair binary factors."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return {
        "variance": n * d**2,
        "mu3": 0.0,
        "mu4": (3 * n**2 - 2 * n) * d**4,
        "mu5": 0.0,
        "mu6": (15 * n**3 - 30 * n**2 + 16 * n) * d**6,
        "skewness": 0.0,
        "kurtosis": 3 - 2 / n,
        "hyperskewness": 0.0,
        "hyperkurtosis": 15 - 30 / n + 16 / n**2,
    }


def complete_graph_reference_moments(n: int, a: float) -> dict[str, float]:
    """Variance, third and fourth central moments of the complete-graph side bet.

    Valid for unit vertex effects (``d = +1`` or ``-1``) and edge
    coefficients ``-a``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return {
        "variance": n + n * (n - 1) * a**2 / 2,
        "mu3": -3 * n * (n - 1) * a - n * (n - 1) * (n - 2) * a**3,
        "mu4": (n * (3 * n - 2) + 3 * n * (5 * n**2 - 13 * n + 8) * a**2
                + n * (15 * n**3 - 78 * n**2 + 131 * n - 68) * a**4 / 4),
    }
