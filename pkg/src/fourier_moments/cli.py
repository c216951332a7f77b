"""Command-line interface: ``fourier-moments <subcommand> ...``.

Exit codes: 0 success, 1 other library error, 2 unreadable input,
3 group mismatch, 4 size guard exceeded (the bound is printed).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import unicodedata
from pathlib import Path

from . import io as fio
from .convolution import autoconvolve, convolve
from .errors import (
    FourierMomentsError,
    GroupMismatchError,
    ParseError,
    ResourceLimitError,
)
from .group import GroupSpec, subtraction_table
from .limits import ENV_VARS
from .models import (
    GraphBetSpec,
    complete_graph_spec,
    graph_spectrum,
    histogram,
    petersen_spec,
)
from .moments import moment_report
from .spectrum import DenseFunction, Side, SparseSpectrum, dft, idft, to_dense, to_sparse
from .symbolic import (
    annihilating_terms,
    annihilation_note,
    contributions,
    feasibility_residual,
    gaussian_targets,
    index_label,
    render,
    render_term,
)
from .timeseries import lagged_moment, lagged_moment_fourier
from .verify import run_verification

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_GROUP, EXIT_GUARD = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# -- shared helpers --------------------------------------------------------------

def _group_arg(args) -> GroupSpec | None:
    if not getattr(args, "group", None):
        return None
    try:
        return GroupSpec.parse(args.group, args.ordering)
    except ValueError as exc:
        raise ParseError(f"--group: {exc}") from exc


def _parse_index(text: str, group: GroupSpec) -> int:
    text = text.strip()
    if text.startswith(("(", "[")):
        digits = [int(x) for x in text.strip("()[]").split(",") if x.strip()]
        return group.ordinal(tuple(digits))
    return group.ordinal(int(text))


def _load_vector(path: str, group: GroupSpec | None):
    """A spectrum from ``.json`` or a primal function from ``.csv``."""
    if path.endswith(".json"):
        return fio.read_spectrum(path, group)
    return fio.read_function(path, group)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _function_json(f: DenseFunction) -> str:
    g = f.group
    return fio.dumps({"moduli": list(g.moduli), "ordering": g.ordering.value,
                      "side": f.side.value,
                      "values": [[z.real, z.imag] for z in f.values.tolist()]})


def _write_vector(v, args):
    if isinstance(v, SparseSpectrum) or v.side is Side.FOURIER:
        if args.format == "csv":
            dense = to_dense(v) if isinstance(v, SparseSpectrum) else v
            _emit(fio.function_to_csv(dense), args.output)
        else:
            _emit(fio.dumps(fio.spectrum_to_dict(v)), args.output)
    elif args.format == "json":
        _emit(_function_json(v), args.output)
    else:
        _emit(fio.function_to_csv(v), args.output)


def _columns(text: str) -> int:
    # combining marks take no column
    return sum(not unicodedata.combining(c) for c in text)


def _pad(text: str, width: int) -> str:
    return text + " " * max(width - _columns(text), 0)


def _fmt_complex(z: complex, digits: int = 4) -> str:
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:.{digits}f}"
    return f"{z.real:.{digits}f}{z.imag:+.{digits}f}i"


# -- subcommands -----------------------------------------------------------------

def cmd_dft(args) -> int:
    f = fio.read_function(args.input, _group_arg(args))
    _write_vector(dft(f), args)
    return EXIT_OK


def cmd_idft(args) -> int:
    s = fio.read_spectrum(args.input, _group_arg(args))
    _write_vector(idft(s), args)
    return EXIT_OK


def _spectrum_input(args):
    group = _group_arg(args)
    sources = [x for x in (args.spectrum, args.function, args.dataset) if x]
    if len(sources) != 1:
        raise ParseError("give exactly one of --spectrum, --function, --dataset")
    if args.spectrum:
        return fio.read_spectrum(args.spectrum, group)
    if args.function:
        return dft(fio.read_function(args.function, group))
    s = fio.load_dataset(args.dataset)
    if group is not None and group != s.group:
        raise GroupMismatchError(f"dataset {args.dataset} lives on {s.group.describe()}")
    return s


def _contribution_rows(s, m: int, reference: complex | None):
    sym = annihilating_terms(s.group, m, "central", support=s.support)
    items = sorted(contributions(sym, s), key=lambda tv: (-abs(tv[1]), tv[0].indices))
    total = sum((v for _, v in items), 0j)
    ref = total if reference is None else reference
    notation = "set" if s.group.is_binary else "decimal"
    rows = []
    for term, value in items:
        rows.append({
            "term": render_term(s.group, term, notation),
            "indices": list(term.indices),
            "labels": [index_label(s.group, k, notation) for k in term.indices],
            "multiplicity": term.multiplicity,
            "value": value,
            "relative": value / ref if ref != 0 else None,
        })
    return rows, total, ref


def cmd_moments(args) -> int:
    s = _spectrum_input(args)
    center = args.center
    if center not in ("central", "raw"):
        try:
            center = complex(center.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise ParseError(f"--center: cannot parse {args.center!r}") from exc
    report = moment_report(s, args.max_order, center=center)
    payload = report.to_dict()
    rows = None
    if args.contributions:
        reference = None if args.reference_moment is None else complex(args.reference_moment)
        sparse = s if isinstance(s, SparseSpectrum) else to_sparse(s)
        rows, total, ref = _contribution_rows(sparse, args.contributions, reference)
        payload["contributions"] = {
            "order": args.contributions,
            "total": _complex_json(total),
            "reference": _complex_json(ref),
            "terms": [{**r, "value": _complex_json(r["value"]),
                       "relative": None if r["relative"] is None else _complex_json(r["relative"])}
                      for r in rows],
        }
    if args.format == "json":
        _emit(fio.dumps(payload), args.output)
        return EXIT_OK
    if args.format == "csv":
        lines = [["quantity", "re", "im"], ["mean", repr(report.mean.real), repr(report.mean.imag)],
                 ["variance", repr(report.variance), "0.0"]]
        lines += [[f"mu_{m}", repr(v.real), repr(v.imag)] for m, v in report.central.items()]
        lines += [[f"raw_{m}", repr(v.real), repr(v.imag)] for m, v in report.raw.items()]
        lines += [[name, "" if v is None else repr(v), "0.0"]
                  for name, v in payload["standardized"].items()]
        _emit(fio.rows_to_csv(lines[0], lines[1:]), args.output)
        return EXIT_OK
    text = report.format_table(args.digits)
    if report.is_real and all(v is None for v in report.standardized.values()):
        text += "\n  note: sigma = 0, standardized moments are undefined"
    if rows is not None:
        width = max([_columns(r["term"]) for r in rows] + [4])
        text += f"\n\nContributions to mu_{args.contributions}\n"
        text += f"  {_pad('term', width)}  {'mult':>4}  {'value':>10}  {'relative':>10}\n"
        for r in rows:
            rel = "" if r["relative"] is None else _fmt_complex(r["relative"])
            text += (f"  {_pad(r['term'], width)}  {r['multiplicity']:>4d}  "
                     f"{_fmt_complex(r['value']):>10}  {rel:>10}\n")
        text += f"  total {_fmt_complex(total)} (reference {_fmt_complex(ref)})"
    _emit(text, args.output)
    return EXIT_OK


def cmd_expand(args) -> int:
    group = _group_arg(args)
    support = None
    if args.support:
        s = fio.read_spectrum(args.support, group)
        group = group or s.group
        support = s.support
    if group is None:
        raise ParseError("expand needs --group or --support")
    sym = annihilating_terms(group, args.order, args.mode, support=support)
    if args.format == "json":
        payload = sym.to_dict()
        payload["classes"] = {str(k): v for k, v in sym.multiplicity_classes().items()}
        _emit(fio.dumps(payload), args.output)
    elif args.format == "csv":
        rows = [[" ".join(map(str, t.indices)), t.multiplicity] for t in sym.terms]
        _emit(fio.rows_to_csv(["indices", "multiplicity"], rows), args.output)
    else:
        prefix = "mu'" if args.mode == "raw" else "mu"
        head = (f"{prefix}_{args.order} on {group.describe()}: {len(sym)} terms, "
                f"multiplicity classes {sym.multiplicity_classes()}")
        body = render(sym, args.notation)
        if args.notes:
            body += "\n" + "\n".join(annihilation_note(group, t, args.notation) for t in sym.terms)
        _emit(head + "\n" + body, args.output)
    return EXIT_OK


def _design_spec(args) -> GraphBetSpec:
    chosen = [x for x in (args.complete, args.graph, args.petersen) if x]
    if len(chosen) != 1:
        raise ParseError("give exactly one of --complete, --graph, --petersen")
    if args.complete:
        return complete_graph_spec(args.complete, args.d, args.a)
    if args.petersen:
        return petersen_spec(args.d, args.a)
    data = fio.load_json_text(Path(args.graph).read_text(), args.graph)
    try:
        return GraphBetSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{args.graph}: {exc}") from exc


def cmd_design(args) -> int:
    spec = _design_spec(args)
    s = graph_spectrum(spec)
    payoff = idft(s)
    hist = histogram(payoff)
    report = moment_report(s, args.max_order)
    hist_csv = fio.rows_to_csv(["value", "count"], [[repr(v), c] for v, c in hist])
    payoff_csv = fio.function_to_csv(payoff)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        fio.write_spectrum(s, out / "spectrum.json")
        (out / "payoff.csv").write_text(payoff_csv)
        (out / "histogram.csv").write_text(hist_csv)
        (out / "report.json").write_text(fio.dumps(report.to_dict()))
    if args.format == "csv":
        _emit(payoff_csv, args.output)
    elif args.format == "json":
        _emit(fio.dumps({"spectrum": fio.spectrum_to_dict(s), "report": report.to_dict(),
                         "histogram": [[v, c] for v, c in hist]}), args.output)
    else:
        values = ", ".join(f"{v:.{args.digits}f}" for v in payoff.values.real.tolist())
        if len(payoff) > 64:
            values = f"{len(payoff)} values (use --format csv)"
        text = (f"design on {s.group.describe()}: {len(s)} nonzero coefficients\n"
                f"payoff: {values}\n" + report.format_table(args.digits) + "\nhistogram\n"
                + "\n".join(f"  {v:>10.{args.digits}f}  {c}" for v, c in hist))
        _emit(text, args.output)
    return EXIT_OK


def cmd_lagged(args) -> int:
    group = _group_arg(args)
    if bool(args.function) == bool(args.spectrum):
        raise ParseError("give exactly one of --function, --spectrum")
    if args.function:
        f = fio.read_function(args.function, group)
        fhat = dft(f)
    else:
        fhat = fio.read_spectrum(args.spectrum, group)
        f = idft(fhat)
    lags = [_parse_index(t, f.group) for t in args.lags.split(";") if t.strip()] if args.lags else []
    direct = lagged_moment(f, lags)
    fourier = lagged_moment_fourier(fhat, lags)
    payload = {"order": len(lags) + 1, "lags": lags, "direct": _complex_json(direct),
               "fourier": _complex_json(fourier), "deviation": abs(direct - fourier)}
    if args.format == "json":
        _emit(fio.dumps(payload), args.output)
    else:
        _emit(f"r_{len(lags) + 1}({', '.join(map(str, lags))})\n"
              f"  direct   {_fmt_complex(direct, args.digits)}\n"
              f"  fourier  {_fmt_complex(fourier, args.digits)}\n"
              f"  |diff|   {abs(direct - fourier):.3e}", args.output)
    return EXIT_OK


def cmd_table(args) -> int:
    group = _group_arg(args)
    if group is None:
        raise ParseError("table needs --group")
    table = subtraction_table(group)
    if args.format == "csv" or args.csv:
        _emit(table.to_csv(), args.output)
    elif args.format == "json":
        _emit(json.dumps({"moduli": list(group.moduli), "ordering": group.ordering.value,
                          "entries": table.entries.tolist()}) + "\n", args.output)
    else:
        width = len(str(group.order - 1))
        _emit("\n".join(" ".join(f"{x:>{width}d}" for x in row) for row in table.entries.tolist()),
              args.output)
    return EXIT_OK


def cmd_convolve(args) -> int:
    group = _group_arg(args)
    a = _load_vector(args.left, group)
    b = _load_vector(args.right, group or a.group)
    _write_vector(convolve(a, b, args.method), args)
    return EXIT_OK


def cmd_autoconv(args) -> int:
    v = _load_vector(args.input, _group_arg(args))
    _write_vector(autoconvolve(v, args.order, args.strategy), args)
    return EXIT_OK


def _parse_targets(text: str) -> dict[int, complex]:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        try:
            m, value = part.split("=")
            out[int(m)] = complex(value.strip().replace("i", "j"))
        except ValueError as exc:
            raise ParseError(f"--targets: cannot parse {part!r}") from exc
    return out


def cmd_feasibility(args) -> int:
    s = fio.read_spectrum(args.spectrum, _group_arg(args))
    magnitudes = {k: abs(c) for k, c in s.items()}
    phases = {k: math.atan2(c.imag, c.real) for k, c in s.items()}
    if args.phases:
        data = fio.load_json_text(Path(args.phases).read_text(), args.phases)
        try:
            phases = {s.group.ordinal(int(k)): float(v) for k, v in data.items()}
        except (AttributeError, ValueError) as exc:
            raise ParseError(f"{args.phases}: expected an object of index -> radians") from exc
    targets = _parse_targets(args.targets) if args.targets else {}
    if args.gaussian:
        variance = sum(v**2 for k, v in magnitudes.items() if k != 0)
        targets = {**gaussian_targets(variance), **targets}
    result = feasibility_residual(s.group, magnitudes, phases, targets, args.mode)
    if args.format == "json":
        _emit(fio.dumps(result.to_dict()), args.output)
    else:
        lines = [f"order {m}: value {_fmt_complex(result.values[m], args.digits)}  "
                 f"target {_fmt_complex(complex(targets[m]), args.digits)}  "
                 f"residual {r:.3e}" for m, r in result.residuals.items()]
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(seed=args.seed, cases=args.cases, max_order=args.max_group,
                              max_m=args.max_m, rtol=args.rtol, inject_fault=args.inject_fault)
    if args.format == "json":
        _emit(fio.dumps({name: {"cases": r.cases, "max_deviation": r.max_deviation,
                                "failures": r.failures} for name, r in report.suites.items()}),
              args.output)
    else:
        _emit(report.format(), args.output)
    return EXIT_OK if report.ok else EXIT_ERROR


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--group", help='group shorthand such as "64", "3x2", "2^13"')
    common.add_argument("--ordering", choices=("msf", "lsf"), help="ordinal codec for --group")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--digits", type=int, default=4, help="decimals in text output")
    common.add_argument("--max-terms", type=int, help="override the enumeration guard")
    common.add_argument("--table-order", type=int, help="override the |G| bound for tables")

    parser = _Parser(prog="fourier-moments",
                     description="Moments of functions on finite abelian groups from their spectra.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("dft", cmd_dft, "forward transform of a function CSV")
    p.add_argument("input")
    p = add("idft", cmd_idft, "inverse transform of a spectrum JSON")
    p.add_argument("input")

    p = add("moments", cmd_moments, "moment report from a spectrum or function")
    p.add_argument("--spectrum")
    p.add_argument("--function")
    p.add_argument("--dataset", choices=fio.DATASETS)
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--center", default="central", help='"central", "raw" or a complex number')
    p.add_argument("--contributions", type=int, metavar="M",
                   help="list the central term contributions of order M")
    p.add_argument("--reference-moment", type=float,
                   help="denominator for relative contributions (default: their sum)")

    p = add("expand", cmd_expand, "list annihilating terms of a moment")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mode", choices=("raw", "central"), default="raw")
    p.add_argument("--support", help="spectrum JSON whose support restricts the indices")
    p.add_argument("--notation", choices=("decimal", "binary", "set"), default="decimal")
    p.add_argument("--notes", action="store_true", help="print each term's index identity")

    p = add("design", cmd_design, "coin-toss side-bet designs on Z_2^n")
    p.add_argument("--complete", type=int, metavar="N", help="complete graph on N factors")
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--petersen", action="store_true")
    p.add_argument("--d", type=float, default=-1.0, help="direct effect per factor")
    p.add_argument("--a", type=float, default=0.0, help="side bet per edge (coefficient -a)")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--out-dir")

    p = add("lagged", cmd_lagged, "lagged moment, computed directly and from the spectrum")
    p.add_argument("--function")
    p.add_argument("--spectrum")
    p.add_argument("--lags", default="", help='";"-separated ordinals or tuples, e.g. "3;(1,0)"')

    p = add("table", cmd_table, "index subtraction table")
    p.add_argument("--csv", action="store_true")

    p = add("convolve", cmd_convolve, "circular convolution of two vectors")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--method", choices=("auto", "direct", "fft"), default="auto")

    p = add("autoconv", cmd_autoconv, "m-fold self-convolution")
    p.add_argument("input")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--strategy", choices=("roundtrip", "recursive"))

    p = add("feasibility", cmd_feasibility, "moment residuals of a magnitude/phase candidate")
    p.add_argument("--spectrum", required=True, help="magnitudes (and default phases)")
    p.add_argument("--phases", help="JSON object index -> radians")
    p.add_argument("--targets", help='e.g. "3=0,4=12.5"')
    p.add_argument("--gaussian", action="store_true", help="targets skewness 0 and kurtosis 3")
    p.add_argument("--mode", choices=("raw", "central"), default="central")

    p = add("verify", cmd_verify, "randomised oracle equivalence checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--max-group", type=int, default=128)
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--inject-fault", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    saved = dict(os.environ)
    try:
        for name in ("max_terms", "table_order"):
            value = getattr(args, name, None)
            if value is not None:
                if value <= 0:
                    print(f"error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
                    return EXIT_PARSE
                os.environ[ENV_VARS[name]] = str(value)
        return _dispatch(args)
    finally:
        os.environ.clear()
        os.environ.update(saved)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"bound: {exc.bound}", file=sys.stderr)
        return EXIT_GUARD
    except GroupMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GROUP
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FourierMomentsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

if __name__ == "__main__":
    sys.exit(main())
