"""Reading and writing spectra (JSON) and functions (CSV).

Spectrum JSON::

    {"moduli": [64], "ordering": "msf",
     "coefficients": [{"index": 3, "re": 1.22, "im": 0.19}, ...]}

``index`` is an ordinal or a digit list; ``"group": "2^13"`` may replace
``moduli``.  Function CSV has the header ``ordinal,re,im`` and may start with
a ``# group=<shorthand> ordering=<msf|lsf>`` comment line.  Floats are
written with ``repr`` so files round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Mapping
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import GroupMismatchError, ParseError
from .group import GroupSpec
from .spectrum import DenseFunction, Side, SparseSpectrum, Vector, to_sparse


def load_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _group_from(data: Mapping, source: str, override: GroupSpec | None) -> GroupSpec:
    ordering = data.get("ordering")
    try:
        if "moduli" in data:
            group = GroupSpec(tuple(data["moduli"]), ordering)
        elif "group" in data:
            group = GroupSpec.parse(str(data["group"]), ordering)
        elif override is not None:
            return override
        else:
            raise ParseError(f"{source}: no 'moduli' or 'group' given")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{source}: bad group description: {exc}") from exc
    if override is not None and override != group:
        raise GroupMismatchError(
            f"{source} is on {group.describe()} ({group.ordering.value}), "
            f"expected {override.describe()} ({override.ordering.value})")
    return group


def spectrum_from_dict(data: Mapping, source: str = "<input>",
                       group: GroupSpec | None = None) -> SparseSpectrum:
    if not isinstance(data, Mapping) or "coefficients" not in data:
        raise ParseError(f"{source}: expected an object with a 'coefficients' list")
    g = _group_from(data, source, group)
    entries = {}
    for pos, item in enumerate(data["coefficients"]):
        try:
            idx = item["index"]
            key = g.ordinal(idx if isinstance(idx, int) else tuple(idx))
            value = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{source}: coefficient #{pos}: {exc}") from exc
        if key in entries:
            raise ParseError(f"{source}: coefficient #{pos}: index {idx} given twice")
        entries[key] = value
    return SparseSpectrum(g, entries)


def spectrum_to_dict(s: Vector) -> dict:
    sparse = s if isinstance(s, SparseSpectrum) else to_sparse(s)
    g = sparse.group
    return {
        "moduli": list(g.moduli),
        "ordering": g.ordering.value,
        "coefficients": [{"index": k, "re": c.real, "im": c.imag} for k, c in sparse.items()],
    }


def read_spectrum(path: str | Path, group: GroupSpec | None = None) -> SparseSpectrum:
    path = Path(path)
    return spectrum_from_dict(load_json_text(path.read_text(), str(path)), str(path), group)


def write_spectrum(s: Vector, path: str | Path):
    Path(path).write_text(dumps(spectrum_to_dict(s)))


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


# -- functions -----------------------------------------------------------------

def function_to_csv(f: DenseFunction) -> str:
    g = f.group
    buf = io.StringIO()
    buf.write(f"# group={g.describe()} ordering={g.ordering.value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ordinal", "re", "im"])
    for k, z in enumerate(f.values.tolist()):
        writer.writerow([k, repr(z.real + 0.0), repr(z.imag + 0.0)])
    return buf.getvalue()


def _header_group(line: str, source: str) -> GroupSpec | None:
    fields = dict(part.split("=", 1) for part in line.lstrip("#").split() if "=" in part)
    if "group" not in fields:
        return None
    try:
        return GroupSpec.parse(fields["group"], fields.get("ordering"))
    except ValueError as exc:
        raise ParseError(f"{source}: line 1: {exc}") from exc


def function_from_csv(text: str, group: GroupSpec | None = None, source: str = "<input>",
                      side: Side = Side.PRIMAL) -> DenseFunction:
    """Parse ``ordinal,re,im`` rows; the group comes from the header comment or *group*."""
    lines = text.splitlines()
    header_group = None
    if lines and lines[0].startswith("#"):
        header_group = _header_group(lines[0], source)
    if header_group is not None and group is not None and header_group != group:
        raise GroupMismatchError(
            f"{source} is on {header_group.describe()}, expected {group.describe()}")
    g = group or header_group
    rows = [(n, row) for n, row in enumerate(csv.reader(lines), start=1)
            if row and not row[0].startswith("#")]
    if not rows or [c.strip() for c in rows[0][1]][:2] != ["ordinal", "re"]:
        raise ParseError(f"{source}: expected a header 'ordinal,re,im'")
    body = rows[1:]
    if g is None:
        g = GroupSpec.cyclic(len(body)) if len(body) >= 2 else None
        if g is None:
            raise ParseError(f"{source}: cannot infer the group; pass --group")
    values = np.zeros(g.order, dtype=np.complex128)
    seen = set()
    for n, row in body:
        try:
            k = g.ordinal(int(row[0]))
            re_ = float(row[1])
            im_ = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
        except (IndexError, ValueError) as exc:
            raise ParseError(f"{source}: line {n}: {exc}") from exc
        if k in seen:
            raise ParseError(f"{source}: line {n}: ordinal {k} repeated")
        seen.add(k)
        values[k] = complex(re_, im_)
    if len(seen) != g.order:
        raise GroupMismatchError(f"{source}: {len(seen)} values for a group of order {g.order}")
    return DenseFunction(g, values, side)


def read_function(path: str | Path, group: GroupSpec | None = None) -> DenseFunction:
    path = Path(path)
    return function_from_csv(path.read_text(), group, str(path))


def write_function(f: DenseFunction, path: str | Path):
    Path(path).write_text(function_to_csv(f))


def rows_to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- bundled examples ----------------------------------------------------------

DATASETS = ("z64_example", "genetics_z2_13")


def load_dataset(name: str) -> SparseSpectrum:
    """A bundled example spectrum: ``"z64_example"`` (Z_64) or ``"genetics_z2_13"`` (Z_2^13)."""
    if name not in DATASETS:
        raise ValueError(f"unknown dataset {name!r}; choose from {DATASETS}")
    text = resources.files("fourier_moments").joinpath("data", f"{name}.json").read_text()
    return spectrum_from_dict(load_json_text(text, name), name)

