"""Symbolic expansion of moments into annihilating coefficient products.

The m-th moment about a is a sum of products of m (a-diminished) Fourier
coefficients whose indices add up to 0 in G.  Grouping ordered index tuples
by multiset gives terms ``multiplicity * prod fhat_j`` with the multinomial
multiplicity ``m! / prod(count_j!)``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import GroupMismatchError, ResourceLimitError, UnsupportedOperationError
from .group import GroupSpec
from .limits import limit
from .spectrum import DenseFunction, SparseSpectrum, Vector, to_dense

MODES = ("raw", "central")

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
HAT_F = "f̂"


def multinomial(indices: Iterable[int]) -> int:
    counts = Counter(indices)
    total = sum(counts.values())
    out = math.factorial(total)
    for c in counts.values():
        out //= math.factorial(c)
    return out


@dataclass(frozen=True, order=True)
class Term:
    """A sorted multiset of ordinals with its multiplicity."""

    indices: tuple[int, ...]
    multiplicity: int = field(compare=False, default=0)

    def __post_init__(self):
        indices = tuple(sorted(int(k) for k in self.indices))
        object.__setattr__(self, "indices", indices)
        if not self.multiplicity:
            object.__setattr__(self, "multiplicity", multinomial(indices))

    @property
    def order(self) -> int:
        return len(self.indices)

    def counts(self) -> list[tuple[int, int]]:
        """Distinct indices with their repetition counts, in ordinal order."""
        return sorted(Counter(self.indices).items())


@dataclass
class SymbolicMoment:
    """Annihilating terms of the order-m moment on *group*."""

    group: GroupSpec
    order: int
    mode: str
    terms: list[Term]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def multiplicity_classes(self) -> dict[int, int]:
        """Number of terms per multiplicity."""
        return dict(sorted(Counter(t.multiplicity for t in self.terms).items()))

    def to_dict(self) -> dict:
        return {
            "moduli": list(self.group.moduli),
            "ordering": self.group.ordering.value,
            "order": self.order,
            "mode": self.mode,
            "terms": [{"indices": list(t.indices), "multiplicity": t.multiplicity}
                      for t in self.terms],
        }


def projected_nodes(candidates: int, m: int) -> int:
    """Nondecreasing choices of the first m-1 indices out of *candidates*."""
    if m <= 1:
        return 1
    return math.comb(candidates + m - 2, m - 1)


def annihilating_terms(group: GroupSpec, m: int, mode: str = "raw",
                       support: Iterable | None = None,
                       max_nodes: int | None = None) -> SymbolicMoment:
    """Every multiset ``{j_1..j_m}`` with ``j_1 + ... + j_m = 0`` in G.

    Indices are drawn from *support* (all of G by default); central mode
    drops index 0.  The first m-1 indices are chosen in nondecreasing order
    and the last is forced to minus their sum, so each multiset is produced
    exactly once.

    Raises
    ------
    ResourceLimitError
        When the number of candidate prefixes exceeds *max_nodes*
        (default: the ``max_terms`` guard).  Use the numeric engine instead.
    """
    if m < 1:
        raise ValueError(f"order must be >= 1, got {m}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if support is None:
        cand = np.arange(group.order, dtype=np.int64)
    else:
        cand = np.array(sorted({group.ordinal(k) for k in support}), dtype=np.int64)
    if mode == "central":
        cand = cand[cand != 0]
    bound = limit("max_terms") if max_nodes is None else max_nodes
    nodes = projected_nodes(len(cand), m)
    if nodes > bound:
        raise ResourceLimitError(f"order-{m} term enumeration over {len(cand)} indices", nodes, bound)

    found: list[tuple[int, ...]] = []
    if m == 1:
        if cand.size and cand[0] == 0:
            found.append((0,))
    elif cand.size:
        _search(group, cand, m, found)

    terms = sorted((Term(idx) for idx in found), key=lambda t: (t.multiplicity, t.indices))
    if terms:
        idx = np.array([t.indices for t in terms], dtype=np.int64)
        total = np.zeros(len(terms), dtype=np.int64)
        for col in idx.T:
            total = group.add_ordinals(total, col)
        assert not total.any(), "enumerated a term that does not annihilate"
    return SymbolicMoment(group, m, mode, terms)


def _search(group: GroupSpec, cand: np.ndarray, m: int, found: list):
    s = cand.size

    def recurse(prefix: tuple[int, ...], start: int, partial: int):
        if len(prefix) == m - 2:
            last = cand[start:]
            need = group.negate_ordinals(group.add_ordinals(partial, last))
            pos = np.searchsorted(cand, need)
            hit = (pos < s) & (need >= last)
            hit[hit] &= cand[np.minimum(pos[hit], s - 1)] == need[hit]
            for a, b in zip(last[hit].tolist(), need[hit].tolist()):
                found.append(prefix + (a, b))
            return
        for pos in range(start, s):
            j = int(cand[pos])
            recurse(prefix + (j,), pos, int(group.add_ordinals(partial, j)))

    recurse((), 0, 0)


def brute_force_terms(group: GroupSpec, m: int, mode: str = "raw") -> dict[tuple[int, ...], int]:
    """Exhaustive reference: every ordered m-tuple, grouped by sorted multiset."""
    pool = range(1 if mode == "central" else 0, group.order)
    out: Counter = Counter()
    for tup in itertools.product(pool, repeat=m):
        acc = 0
        for j in tup:
            acc = group.add(acc, j)
        if acc == 0:
            out[tuple(sorted(tup))] += 1
    return dict(out)


# -- evaluation ------------------------------------------------------------------

def _coefficients(sym: SymbolicMoment, spectrum: Vector, a: complex | None) -> np.ndarray:
    if spectrum.group != sym.group:
        raise GroupMismatchError("symbolic moment and spectrum live on different groups")
    dense = to_dense(spectrum) if isinstance(spectrum, SparseSpectrum) else spectrum
    values = dense.values.copy()
    if a is None:
        a = values[0] if sym.mode == "central" else 0
    values[0] -= a
    return values


def term_values(sym: SymbolicMoment, spectrum: Vector, a: complex | None = None) -> np.ndarray:
    """``multiplicity * prod coeff`` for every term, in term order."""
    if not sym.terms:
        return np.zeros(0, dtype=np.complex128)
    values = _coefficients(sym, spectrum, a)
    idx = np.array([t.indices for t in sym.terms], dtype=np.int64)
    mult = np.array([t.multiplicity for t in sym.terms], dtype=np.float64)
    return mult * np.prod(values[idx], axis=1)


def evaluate(sym: SymbolicMoment, spectrum: Vector, a: complex | None = None) -> complex:
    """Sum of the terms on the a-diminished spectrum.

    *a* defaults to 0 in raw mode and to the mean in central mode.
    """
    return complex(np.sum(term_values(sym, spectrum, a)))


def contributions(sym: SymbolicMoment, spectrum: Vector, a: complex | None = None,
                  nonzero_only: bool = True) -> list[tuple[Term, complex]]:
    out = list(zip(sym.terms, term_values(sym, spectrum, a).tolist()))
    if nonzero_only:
        out = [(t, v) for t, v in out if v != 0]
    return out


# -- rendering -------------------------------------------------------------------

NOTATIONS = ("decimal", "binary", "set")


def index_label(group: GroupSpec, k: int, notation: str = "decimal") -> str:
    if notation == "decimal":
        return str(k)
    if notation not in NOTATIONS:
        raise ValueError(f"notation must be one of {NOTATIONS}, got {notation!r}")
    if not group.is_binary:
        raise UnsupportedOperationError(f"{notation} notation needs a Z_2^n group")
    if notation == "binary":
        return "[" + ",".join(str(d) for d in group.digits(k)) + "]"
    labels = sorted(group.set_repr(k))
    return "{" + ",".join(map(str, labels)) + "}" if labels else "∅"


def _symbol(group: GroupSpec, k: int, notation: str) -> str:
    if notation == "decimal":
        return HAT_F + str(k).translate(_SUB)
    return HAT_F + index_label(group, k, notation)


def render_term(group: GroupSpec, term: Term, notation: str = "decimal") -> str:
    parts = []
    for k, c in term.counts():
        sym = _symbol(group, k, notation)
        parts.append(sym if c == 1 else sym + str(c).translate(_SUP))
    return "".join(parts)


def annihilation_note(group: GroupSpec, term: Term, notation: str = "decimal") -> str:
    """The index identity behind a term, e.g. ``{2,3} △ {1,2,4} △ {1,3,4} = ∅``."""
    labels = [index_label(group, k, notation) for k in term.indices]
    if notation == "set":
        return " △ ".join(labels) + " = ∅"
    return " ⊕ ".join(labels) + " = " + index_label(group, 0, notation)


def render(sym: SymbolicMoment, notation: str = "decimal", notes: bool = False) -> str:
    """Grouped text form, e.g. ``f̂₀³ + 3(f̂₀f̂₁²) + 6(f̂₀f̂₂f̂₄ + f̂₁f̂₃f̂₄)``.

    With *notes*, one line per term shows its annihilation identity.
    """
    if notation not in NOTATIONS:
        raise ValueError(f"notation must be one of {NOTATIONS}, got {notation!r}")
    if notation != "decimal" and not sym.group.is_binary:
        raise UnsupportedOperationError(f"{notation} notation needs a Z_2^n group")
    if not sym.terms:
        return "0"
    groups: dict[int, list[str]] = {}
    for t in sym.terms:
        groups.setdefault(t.multiplicity, []).append(render_term(sym.group, t, notation))
    chunks = []
    for mult, items in groups.items():
        body = " + ".join(items)
        if mult == 1:
            chunks.append(body)
        elif len(items) == 1:
            chunks.append(f"{mult}{body}")
        else:
            chunks.append(f"{mult}({body})")
    text = " + ".join(chunks)
    if notes:
        text += "\n" + "\n".join(annihilation_note(sym.group, t, notation) for t in sym.terms)
    return text


# -- Z_2^n closed forms ----------------------------------------------------------

def _xor_zero_subsets(keys: list[int], values: Mapping[int, complex], size: int,
                      bound: int) -> list[tuple[int, ...]]:
    """Strictly increasing index tuples of length *size* whose XOR is 0."""
    work = math.comb(len(keys), size - 1)
    if work > bound:
        raise ResourceLimitError(f"{size}-subset search over {len(keys)} indices", work, bound)
    out = []
    for head in itertools.combinations(keys, size - 1):
        last = 0
        for k in head:
            last ^= k
        if last > head[-1] and last in values:
            out.append(head + (last,))
    return out


def z2n_central_closed_form(spectrum: Vector, m: int, max_work: int | None = None) -> complex:
    """Central moment m in 2..6 from the grouped Z_2^n sums.

    ``S2 = sum_j fhat_j^2`` over the nonzero support; ``T_k`` are the
    XOR-zero subsets of k distinct nonzero indices, ``P(T)`` their products
    and ``Q(T)`` the sum of ``fhat_q^2`` over q in T.

    * m=2: ``S2``
    * m=3: ``6 sum P(T_3)``
    * m=4: ``sum f^4 + 6 sum_{l<m} f_l^2 f_m^2 + 24 sum P(T_4)``
    * m=5: ``20 sum P(T_3) Q(T_3) + 60 sum P(T_3)(S2 - Q(T_3)) + 120 sum P(T_5)``
    * m=6: ``sum f^6 + 15 sum_{l<m}(f_l^4 f_m^2 + f_l^2 f_m^4)
      + 90 sum_{l<m<p} f_l^2 f_m^2 f_p^2 + 120 sum P(T_4) Q(T_4)
      + 360 sum P(T_4)(S2 - Q(T_4)) + 720 sum P(T_6)``
    """
    group = spectrum.group
    if not group.is_binary:
        raise UnsupportedOperationError("closed forms are only available on Z_2^n")
    if m not in range(2, 7):
        raise ValueError(f"closed forms cover orders 2..6, got {m}")
    bound = limit("max_terms") if max_work is None else max_work
    if isinstance(spectrum, SparseSpectrum):
        values = {k: c for k, c in spectrum.items() if k != 0}
    else:
        nz = np.flatnonzero(spectrum.values)
        values = {int(k): complex(spectrum.values[k]) for k in nz if k != 0}
    keys = sorted(values)
    sq = np.array([values[k] ** 2 for k in keys], dtype=np.complex128)
    S2 = complex(sq.sum())

    def P(T):
        out = 1 + 0j
        for k in T:
            out *= values[k]
        return out

    def Q(T):
        return sum(values[k] ** 2 for k in T)

    def subsets(size):
        return _xor_zero_subsets(keys, values, size, bound) if len(keys) >= size else []

    # e_2 and e_3 are elementary symmetric sums of the squares
    p1, p2, p3 = S2, complex(np.sum(sq**2)), complex(np.sum(sq**3))
    e2 = (p1**2 - p2) / 2
    e3 = (p1**3 - 3 * p1 * p2 + 2 * p3) / 6
    if m == 2:
        return S2
    if m == 3:
        return 6 * sum((P(T) for T in subsets(3)), 0j)
    if m == 4:
        return p2 + 6 * e2 + 24 * sum((P(T) for T in subsets(4)), 0j)
    if m == 5:
        T3 = subsets(3)
        return (20 * sum((P(T) * Q(T) for T in T3), 0j)
                + 60 * sum((P(T) * (S2 - Q(T)) for T in T3), 0j)
                + 120 * sum((P(T) for T in subsets(5)), 0j))
    T4 = subsets(4)
    # sum_{l != m} f_l^4 f_m^2 = p2 p1 - p3
    return (p3 + 15 * (p2 * p1 - p3) + 90 * e3
            + 120 * sum((P(T) * Q(T) for T in T4), 0j)
            + 360 * sum((P(T) * (S2 - Q(T)) for T in T4), 0j)
            + 720 * sum((P(T) for T in subsets(6)), 0j))


# -- feasibility -----------------------------------------------------------------

@dataclass
class FeasibilityReport:
    """Per-order moment of the candidate spectrum, its residual and term breakdown."""

    residuals: dict[int, float]
    values: dict[int, complex]
    contributions: dict[int, list[tuple[Term, complex]]]

    @property
    def total(self) -> float:
        return float(sum(self.residuals.values()))

    def to_dict(self) -> dict:
        return {
            "residuals": {str(m): r for m, r in self.residuals.items()},
            "values": {str(m): {"re": v.real, "im": v.imag} for m, v in self.values.items()},
            "contributions": {
                str(m): [{"indices": list(t.indices), "multiplicity": t.multiplicity,
                          "re": v.real, "im": v.imag} for t, v in items]
                for m, items in self.contributions.items()
            },
        }


def candidate_spectrum(group: GroupSpec, magnitudes: Mapping, phases: Mapping) -> SparseSpectrum:
    """``|fhat_j| exp(i phi_j)`` on the common support of the two maps."""
    mk = {group.ordinal(k) for k in magnitudes}
    pk = {group.ordinal(k) for k in phases}
    if mk != pk:
        raise ValueError(f"magnitude and phase supports differ: {sorted(mk ^ pk)}")
    phase = {group.ordinal(k): v for k, v in phases.items()}
    entries = {}
    for k, mag in magnitudes.items():
        if mag < 0:
            raise ValueError(f"negative magnitude {mag} at index {k}")
        entries[group.ordinal(k)] = mag * np.exp(1j * phase[group.ordinal(k)])
    return SparseSpectrum(group, entries)


def feasibility_residual(group: GroupSpec, magnitudes: Mapping, phases: Mapping,
                         targets: Mapping[int, complex], mode: str = "central",
                         center: complex | None = None) -> FeasibilityReport:
    """How far a magnitude/phase candidate is from prescribed moments.

    ``residual_m = |target_m - sum of the annihilating terms of order m|``
    on the candidate spectrum.  Only index combinations that annihilate enter
    each sum, which is what prunes infeasible phase assignments.
    """
    if not targets:
        raise ValueError("at least one target moment order is required")
    spectrum = candidate_spectrum(group, magnitudes, phases)
    residuals, values, contrib = {}, {}, {}
    for m, target in sorted(targets.items()):
        sym = annihilating_terms(group, m, mode, support=spectrum.support)
        a = center if center is not None else (0 if mode == "raw" else spectrum.mean)
        per_term = contributions(sym, spectrum, a, nonzero_only=False)
        value = complex(sum(v for _, v in per_term))
        values[m] = value
        residuals[m] = abs(complex(target) - value)
        contrib[m] = per_term
    return FeasibilityReport(residuals, values, contrib)


def gaussian_targets(variance: float) -> dict[int, float]:
    """Central-moment targets of a normal law: skewness 0 and kurtosis 3."""
    return {3: 0.0, 4: 3.0 * variance**2}
