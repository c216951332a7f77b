"""Finite abelian groups Z_N1 x ... x Z_Nn and their index arithmetic.

An element is written either as a tuple of digits ``(i_1, ..., i_n)`` with
``0 <= i_l < N_l`` or as its ordinal in ``[0, |G|)``.  Two ordinal codecs are
supported:

* most-significant-first (MSF): ``i = sum_l i_l * prod_{k>l} N_k``
* least-significant-first (LSF): ``i = sum_l i_l * prod_{k<l} N_k``

LSF is the usual binary convention on Z_2^n (digit l is bit l-1), MSF the
lexicographic one for mixed moduli.  Every moment is invariant under the
choice.

Scalar operations accept either representation and return the same kind they
were given; the ``*_ordinals`` variants work elementwise on integer arrays.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidIndexError, ResourceLimitError, UnsupportedOperationError
from .limits import limit

_MAX_ORDINAL = np.iinfo(np.int64).max

Index = int | Sequence[int]


class Ordering(enum.Enum):
    MSF = "msf"
    LSF = "lsf"


@dataclass(frozen=True)
class GroupSpec:
    """Direct product of cyclic groups with a fixed ordinal codec.

    Parameters
    ----------
    moduli : sequence of int
        Factor sizes ``(N_1, ..., N_n)``, each at least 2.
    ordering : Ordering or str, optional
        Ordinal codec.  Defaults to LSF when every modulus is 2 and MSF
        otherwise.
    """

    moduli: tuple[int, ...]
    ordering: Ordering = None  # type: ignore[assignment]

    def __post_init__(self):
        moduli = tuple(int(N) for N in self.moduli)
        if not moduli:
            raise ValueError("a group needs at least one factor")
        if any(N < 2 for N in moduli):
            raise ValueError(f"every modulus must be >= 2, got {moduli}")
        if math.prod(moduli) > _MAX_ORDINAL:
            raise ValueError(f"|G| = {math.prod(moduli)} does not fit a 64-bit ordinal")
        ordering = self.ordering
        if ordering is None:
            ordering = Ordering.LSF if all(N == 2 for N in moduli) else Ordering.MSF
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "ordering", Ordering(ordering))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def cyclic(cls, N: int) -> GroupSpec:
        return cls((N,))

    @classmethod
    def binary(cls, n: int, ordering: Ordering | str = Ordering.LSF) -> GroupSpec:
        return cls((2,) * n, Ordering(ordering))

    @classmethod
    def parse(cls, text: str, ordering: Ordering | str | None = None) -> GroupSpec:
        """Parse shorthand such as ``"64"``, ``"3x2"``, ``"2^13"`` or ``"3x2^4"``."""
        moduli: list[int] = []
        for factor in re.split(r"\s*[x*×]\s*", text.strip()):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", factor)
            if m is None:
                raise ValueError(f"cannot parse group factor {factor!r} in {text!r}")
            moduli.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(tuple(moduli), None if ordering is None else Ordering(ordering))

    # -- basic properties -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.moduli)

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    def cardinality(self) -> int:
        return self.order

    def __len__(self) -> int:
        return self.order

    @property
    def is_binary(self) -> bool:
        return all(N == 2 for N in self.moduli)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        """Ordinal weight of each digit position."""
        out = []
        for pos in range(self.n):
            if self.ordering is Ordering.MSF:
                out.append(math.prod(self.moduli[pos + 1:]))
            else:
                out.append(math.prod(self.moduli[:pos]))
        return tuple(out)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        """Shape under which an ordinal-ordered vector reshapes in C order.

        Array axis ``a`` holds digit position ``axis_positions[a]``.
        """
        return tuple(self.moduli[p] for p in self.axis_positions)

    @cached_property
    def axis_positions(self) -> tuple[int, ...]:
        if self.ordering is Ordering.MSF:
            return tuple(range(self.n))
        return tuple(reversed(range(self.n)))

    def describe(self) -> str:
        return "x".join(str(N) for N in self.moduli)

    # -- scalar codecs --------------------------------------------------------

    def digits(self, i: Index) -> tuple[int, ...]:
        """Validated digit tuple for an ordinal or digit sequence."""
        if isinstance(i, (int, np.integer)):
            return self.decode(int(i))
        digits = tuple(int(d) for d in i)
        if len(digits) != self.n:
            raise InvalidIndexError(f"index {digits} has {len(digits)} digits, group has {self.n}")
        for d, N in zip(digits, self.moduli):
            if not 0 <= d < N:
                raise InvalidIndexError(f"digit {d} out of range for modulus {N} in {digits}")
        return digits

    def encode(self, i: Index) -> int:
        return sum(d * s for d, s in zip(self.digits(i), self.strides))

    def decode(self, k: int) -> tuple[int, ...]:
        k = int(k)
        if not 0 <= k < self.order:
            raise InvalidIndexError(f"ordinal {k} outside [0, {self.order})")
        return tuple((k // s) % N for s, N in zip(self.strides, self.moduli))

    def ordinal(self, i: Index) -> int:
        """Ordinal of *i*, validating either representation."""
        if isinstance(i, (int, np.integer)):
            self.decode(int(i))
            return int(i)
        return self.encode(i)

    def _like(self, template: Index, digits: tuple[int, ...]) -> Index:
        if isinstance(template, (int, np.integer)):
            return self.encode(digits)
        return digits

    # -- group operations -----------------------------------------------------

    def add(self, i: Index, j: Index) -> Index:
        a, b = self.digits(i), self.digits(j)
        return self._like(i, tuple((x + y) % N for x, y, N in zip(a, b, self.moduli)))

    def negate(self, j: Index) -> Index:
        return self._like(j, tuple((-x) % N for x, N in zip(self.digits(j), self.moduli)))

    def subtract(self, i: Index, j: Index) -> Index:
        a, b = self.digits(i), self.digits(j)
        return self._like(i, tuple((x - y) % N for x, y, N in zip(a, b, self.moduli)))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements in ordinal order."""
        for k in range(self.order):
            yield self.decode(k)

    # -- vectorised ordinal arithmetic ----------------------------------------

    def digit_array(self, ordinals) -> np.ndarray:
        """Digits of an array of ordinals, stacked on a new last axis."""
        k = np.asarray(ordinals, dtype=np.int64)
        return np.stack([(k // s) % N for s, N in zip(self.strides, self.moduli)], axis=-1)

    def add_ordinals(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_binary:
            return a ^ b
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for s, N in zip(self.strides, self.moduli):
            out += ((a // s + b // s) % N) * s
        return out

    def negate_ordinals(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.is_binary:
            return a.copy()
        out = np.zeros_like(a)
        for s, N in zip(self.strides, self.moduli):
            out += ((-(a // s)) % N) * s
        return out

    def subtract_ordinals(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_binary:
            return a ^ b
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for s, N in zip(self.strides, self.moduli):
            out += ((a // s - b // s) % N) * s
        return out

    @cached_property
    def negation_permutation(self) -> np.ndarray:
        """``perm[j] = ordinal of -j``; reindexing by it reverses a vector."""
        perm = self.negate_ordinals(np.arange(self.order, dtype=np.int64))
        perm.setflags(write=False)
        return perm

    def axis_digits(self, i: Index) -> tuple[int, ...]:
        """Digits of *i* in array-axis order (see :attr:`shape`)."""
        d = self.digits(i)
        return tuple(d[p] for p in self.axis_positions)

    # -- Z_2^n views ----------------------------------------------------------

    def _require_binary(self, what: str):
        if not self.is_binary:
            raise UnsupportedOperationError(f"{what} is only defined on Z_2^n, not {self.describe()}")

    def degree(self, j: Index) -> int:
        """Number of participating factors of a Z_2^n index."""
        self._require_binary("degree")
        return sum(self.digits(j))

    def set_repr(self, j: Index) -> frozenset[int]:
        """1-based labels of the factors whose digit is 1."""
        self._require_binary("set representation")
        return frozenset(pos + 1 for pos, d in enumerate(self.digits(j)) if d)

    def from_set(self, labels) -> int:
        """Ordinal of the Z_2^n index whose participating factors are *labels*."""
        self._require_binary("set representation")
        digits = [0] * self.n
        for label in labels:
            if not 1 <= label <= self.n:
                raise InvalidIndexError(f"factor label {label} outside 1..{self.n}")
            digits[label - 1] = 1
        return self.encode(digits)


@dataclass(frozen=True)
class SubtractionTable:
    """``entries[i, j]`` is the ordinal of ``i - j``."""

    group: GroupSpec
    entries: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(self.entries.tolist())
        return buf.getvalue()


def subtraction_table(group: GroupSpec, max_order: int | None = None) -> SubtractionTable:
    """Materialise the index subtraction table of *group*.

    Raises
    ------
    ResourceLimitError
        If ``|G|`` exceeds *max_order* (default: the ``table_order`` guard).
    """
    bound = limit("table_order") if max_order is None else max_order
    if group.order > bound:
        raise ResourceLimitError("subtraction table order |G|", group.order, bound)
    dtype = np.min_scalar_type(group.order - 1)
    k = np.arange(group.order, dtype=np.int64)
    entries = group.subtract_ordinals(k[:, None], k[None, :]).astype(dtype)
    entries.setflags(write=False)
    return SubtractionTable(group, entries)
