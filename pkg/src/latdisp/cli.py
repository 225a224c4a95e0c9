"""Command line interface.

Every command prints its result in one of three formats (--format):

* ``pretty`` (default): labelled lines, numeric values shown as
  ``decimal (exact)``.
* ``csv``: one table; every numeric column ``x`` is accompanied by an
  ``x_exact`` twin column holding the symbolic value.  Commands whose
  result is a single record emit a one-row table.
* ``json``: one object; numeric values nest as
  ``{"exact": ..., "decimal": ...}``.

Decimals are renderings only (--digits, default 5, rounded half away
from zero); the exact strings are authoritative and parse back with
``latdisp.qfield.parse_number`` / ``latdisp.contfrac.parse_cf``.  Output
is deterministic: the same invocation always produces the same bytes.
``--meta`` prepends a one-line header naming the command; ``--out FILE``
writes to a file instead of stdout.

Exit status: 0 on success, 1 on domain errors (bad numbers, failed
preconditions), 2 on usage errors.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .boxwalk import LatticeNormalForm, enumerate_boxes
from .contfrac import (
    CFSequence,
    cf_expand,
    cf_value,
    format_cf,
    parse_cf,
    tail_values,
    two_sided_periodic,
)
from .dispersion import (
    DEFAULT_TABLE_ROWS,
    MixedValue,
    SubringSpec,
    best_lattice,
    bounds_table,
    coefficient_bound_check,
    coefficient_bounds,
    coefficient_statistics_scan,
    disp_quadratic,
    disp_sequence,
    tight_bounds,
    value_decimal,
)
from .oracle import brute_dispersion, read_point_set
from .qfield import QuadraticNumber, decimal_str, parse_number, rational
from .torus import (
    RankOneLattice,
    dispersion_constant,
    fibonacci_lattice,
    periodic_dispersion,
    zaremba_scan,
)

Numeric = Union[QuadraticNumber, MixedValue, Fraction]


# ---------------------------------------------------------------------------
# reports and rendering

@dataclass
class Column:
    name: str
    numeric: bool = False


@dataclass
class Report:
    """What a command produced: labelled scalars plus an optional table."""

    command: str
    scalars: list = field(default_factory=list)
    columns: tuple = ()
    rows: list = field(default_factory=list)


def _is_numeric(value) -> bool:
    return isinstance(value, (QuadraticNumber, MixedValue, Fraction))


def _exact_str(value: Numeric) -> str:
    return str(value)


def _decimal_of(value: Numeric, digits: int) -> str:
    if isinstance(value, (QuadraticNumber, MixedValue)):
        return value_decimal(value, digits)
    return decimal_str(rational(value), digits)


def _plain_str(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _pretty_value(value, digits: int) -> str:
    if _is_numeric(value):
        return f"{_decimal_of(value, digits)} ({_exact_str(value)})"
    return _plain_str(value)


def _render_pretty(report: Report, digits: int, meta: bool) -> str:
    lines = []
    if meta:
        lines.append(f"# latdisp {report.command}")
    for name, value in report.scalars:
        lines.append(f"{name}: {_pretty_value(value, digits)}")
    if report.columns:
        if lines:
            lines.append("")
        grid = [[col.name for col in report.columns]]
        for row in report.rows:
            grid.append([_pretty_value(v, digits) for v in row])
        widths = [max(len(r[i]) for r in grid) for i in range(len(report.columns))]
        for r in grid:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _render_csv(report: Report, digits: int, meta: bool) -> str:
    buf = io.StringIO()
    if meta:
        buf.write(f"# latdisp {report.command}\n")
    writer = csv.writer(buf, lineterminator="\n")
    if report.columns:
        header = []
        for col in report.columns:
            header.append(col.name)
            if col.numeric:
                header.append(col.name + "_exact")
        writer.writerow(header)
        for row in report.rows:
            out = []
            for col, value in zip(report.columns, row):
                if col.numeric:
                    out.append(_decimal_of(value, digits))
                    out.append(_exact_str(value))
                else:
                    out.append(_plain_str(value))
            writer.writerow(out)
    else:
        header, out = [], []
        for name, value in report.scalars:
            header.append(name)
            if _is_numeric(value):
                header.append(name + "_exact")
                out.append(_decimal_of(value, digits))
                out.append(_exact_str(value))
            else:
                out.append(_plain_str(value))
        writer.writerow(header)
        writer.writerow(out)
    return buf.getvalue()


def _json_value(value, digits: int):
    if _is_numeric(value):
        return {"exact": _exact_str(value), "decimal": _decimal_of(value, digits)}
    return value


def _render_json(report: Report, digits: int) -> str:
    obj = {"command": report.command}
    for name, value in report.scalars:
        obj[name] = _json_value(value, digits)
    if report.columns:
        obj["rows"] = [
            {col.name: _json_value(v, digits) for col, v in zip(report.columns, row)}
            for row in report.rows
        ]
    return json.dumps(obj, indent=2) + "\n"


def render(report: Report, fmt: str, digits: int, meta: bool) -> str:
    if fmt == "csv":
        return _render_csv(report, digits, meta)
    if fmt == "json":
        return _render_json(report, digits)
    return _render_pretty(report, digits, meta)


# ---------------------------------------------------------------------------
# input dispatch

def parse_input(text: str):
    """Parse polymorphic input text.

    Sequence literals ("[2;1,1]", "[(1,2)]", "(1,2)|(2,1)") give a
    CFSequence; a plain reduced fraction p/n strictly between 0 and 1
    gives the rank-1 lattice with slope p/n; everything else goes
    through the number grammar and gives a QuadraticNumber.
    """
    s = text.strip()
    if s.startswith("[") or "|" in s:
        return parse_cf(s)
    x = parse_number(s)
    if x.is_rational and "/" in s and "." not in s and "sqrt" not in s:
        f = x.a
        if 0 < f < 1:
            return RankOneLattice(f.numerator, f.denominator)
    return x


def _as_two_sided(seq: CFSequence) -> CFSequence:
    """Lift a purely periodic one-sided literal to its two-sided extension."""
    if seq.kind == "one_sided_right" and not seq.right_pre:
        return two_sided_periodic(seq.right_per)
    return seq


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def _coeffs_str(coeffs) -> str:
    return ",".join(str(c) for c in coeffs)


# ---------------------------------------------------------------------------
# commands

def _cmd_cf(args) -> Report:
    obj = parse_input(args.x)
    if isinstance(obj, CFSequence):
        seq = obj
        scalars = [("sequence", format_cf(seq)), ("kind", seq.kind)]
        if seq.kind in ("finite", "one_sided_right"):
            scalars.append(("value", cf_value(seq)))
        else:
            fwd, bwd = tail_values(seq, seq.offset)
            scalars.append(("forward", fwd))
            scalars.append(("backward", bwd))
        scalars.append(("max_coefficient", seq.max_coefficient()))
        return Report("cf", scalars)
    if isinstance(obj, RankOneLattice):
        seq = obj.sequence()
        return Report("cf", [
            ("input", f"{obj.p}/{obj.n}"),
            ("kind", "rank1"),
            ("sequence", format_cf(seq)),
            ("coefficients", _coeffs_str(obj.coefficients())),
            ("max_coefficient", seq.max_coefficient()),
        ])
    seq = cf_expand(obj)
    return Report("cf", [
        ("input", str(obj)),
        ("kind", seq.kind),
        ("sequence", format_cf(seq)),
        ("max_coefficient", seq.max_coefficient()),
    ])


def _cmd_disp_seq(args) -> Report:
    seq = _as_two_sided(parse_cf(args.seq))
    result = disp_sequence(seq)
    return Report("disp-seq", [
        ("sequence", format_cf(seq)),
        ("value", result.value),
        ("attained", result.attained),
        ("position", result.witness[0]),
        ("offset", result.witness[1]),
    ])


def _cmd_disp_ring(args) -> Report:
    spec = SubringSpec(args.d, args.n)
    result = disp_quadratic(spec, verify=not args.no_verify)
    return Report("disp-ring", [
        ("d", spec.d),
        ("n", spec.n),
        ("discriminant", spec.discriminant),
        ("determinant", spec.determinant),
        ("generator", result.generator),
        ("period", _coeffs_str(result.period)),
        ("dispersion", result.dispersion),
        ("normalized", result.normalized),
    ])


def _cmd_bounds(args) -> Report:
    low, high = coefficient_bounds(args.a)
    return Report("bounds", [("a", args.a), ("lower", low), ("upper", high)])


def _cmd_tight_bounds(args) -> Report:
    low, high = tight_bounds(args.a, verify=not args.no_verify)
    return Report("tight-bounds", [("a", args.a), ("lower", low), ("upper", high)])


def _cmd_best(args) -> Report:
    seq, value = best_lattice(args.rank, verify=not args.no_verify)
    return Report("best", [
        ("rank", args.rank),
        ("sequence", format_cf(seq)),
        ("value", value),
    ])


def _cmd_table1(args) -> Report:
    values = args.a if args.a is not None else DEFAULT_TABLE_ROWS
    rows = bounds_table(values, verify=not args.no_verify)
    columns = (
        Column("a"),
        Column("lower", numeric=True),
        Column("constant", numeric=True),
        Column("alternating", numeric=True),
        Column("upper", numeric=True),
    )
    data = [
        (r.coefficient, r.lower, r.constant_sequence, r.alternating_sequence, r.upper)
        for r in rows
    ]
    return Report("table1", [], columns, data)


def _cmd_fib(args) -> Report:
    lattice, profile = fibonacci_lattice(args.m)
    result = periodic_dispersion(lattice, verify=args.verify)
    scalars = [
        ("m", args.m),
        ("p", lattice.p),
        ("n", lattice.n),
        ("value", result.value),
        ("normalized", result.normalized),
    ]
    columns = (Column("k"), Column("volume", numeric=True))
    data = [(k, volume) for k, volume in enumerate(profile)]
    return Report("fib", scalars, columns, data)


def _cmd_rank1(args) -> Report:
    lattice = RankOneLattice(args.p, args.n)
    result = periodic_dispersion(lattice, verify=args.verify)
    scalars = [
        ("p", lattice.p),
        ("n", lattice.n),
        ("coefficients", _coeffs_str(lattice.coefficients())),
        ("value", result.value),
        ("normalized", result.normalized),
    ]
    box = result.witness
    if box is not None:
        scalars += [
            ("witness_left_x", box.left_x),
            ("witness_left_y", box.left_y),
            ("witness_right_x", box.right_x),
            ("witness_right_y", box.right_y),
            ("witness_height", box.height),
        ]
    return Report("rank1", scalars)


def _cmd_zaremba(args) -> Report:
    scan = zaremba_scan(range(args.min_n, args.max_n + 1), bound=args.bound)
    scalars = [
        ("bound", scan.bound),
        ("dispersion_bound", scan.dispersion_bound),
        ("coefficient_bound", scan.coefficient_bound),
        ("all_clear", scan.all_clear),
        ("flagged", _coeffs_str(scan.flagged)),
    ]
    columns = (
        Column("n"),
        Column("witness"),
        Column("reversal"),
        Column("max_coefficient"),
        Column("normalized", numeric=True),
        Column("flagged"),
    )
    data = [
        (r.n, r.witness, r.reversal, r.max_coefficient, r.normalized, r.flagged)
        for r in scan.rows
    ]
    return Report("zaremba", scalars, columns, data)


def _cmd_oracle(args) -> Report:
    region = None
    if args.region is not None:
        parts = args.region.split(",")
        if len(parts) != 4:
            raise ValueError("region must be four comma-separated numbers x0,x1,y0,y1")
        region = tuple(parse_number(part) for part in parts)
    points = read_point_set(args.points, region=region)
    area, (left, right, low, high) = brute_dispersion(
        points.points, region=points.region, cap=args.cap
    )
    return Report("oracle", [
        ("points", len(points.points)),
        ("area", area),
        ("box_left", left),
        ("box_right", right),
        ("box_bottom", low),
        ("box_top", high),
    ])


def _lattice_from_args(args) -> LatticeNormalForm:
    if args.seq is not None:
        seq = _as_two_sided(parse_cf(args.seq))
        fwd, bwd = tail_values(seq, seq.offset)
        return LatticeNormalForm(fwd, bwd)
    fwd = parse_number(args.fwd)
    bwd = parse_number(args.bwd)
    return LatticeNormalForm(fwd, bwd)


def _cmd_boxes(args) -> Report:
    lattice = _lattice_from_args(args)
    boxes = enumerate_boxes(lattice, args.n_min, args.n_max, verify=not args.no_verify)
    scalars = [
        ("forward", lattice.fwd),
        ("backward", lattice.bwd),
        ("determinant", lattice.det),
    ]
    columns = (
        Column("n"),
        Column("left_x", numeric=True),
        Column("left_y", numeric=True),
        Column("right_x", numeric=True),
        Column("right_y", numeric=True),
        Column("height", numeric=True),
        Column("volume", numeric=True),
        Column("normalized", numeric=True),
    )
    data = [
        (b.n, b.left_x, b.left_y, b.right_x, b.right_y, b.height,
         b.volume(), b.normalized_volume(lattice.det))
        for b in boxes
    ]
    return Report("boxes", scalars, columns, data)


def _integer_norm(value: QuadraticNumber) -> int:
    if not value.is_rational or value.a.denominator != 1:
        raise ValueError(f"residue norm {value} is not an integer")
    return abs(int(value.a))


def _cmd_norm_figure(args) -> Report:
    x = parse_number(args.delta)
    check = coefficient_bound_check(x)
    lattice = LatticeNormalForm(x, x.conjugate())
    boxes = enumerate_boxes(lattice, 0, args.max_n)
    scalars = [
        ("delta", x),
        ("period", _coeffs_str(check.period)),
        ("trace", int(x.trace())),
        ("norm", int(x.norm())),
        ("bounds_ok", check.passes),
    ]
    columns = (
        Column("n"),
        Column("left_norm"),
        Column("right_norm"),
        Column("total"),
    )
    data = []
    for box in boxes:
        left = _integer_norm(box.left_x * box.left_y)
        right = _integer_norm(box.right_x * box.right_y)
        data.append((box.n, left, right, left + right))
    return Report("norm-figure", scalars, columns, data)


def _cmd_coeff_scan(args) -> Report:
    rows = coefficient_statistics_scan(args.trace_max, args.norm_min, args.norm_max)
    scalars = [("rows", len(rows)), ("all_ok", all(r.ok for r in rows))]
    columns = (
        Column("trace"),
        Column("norm"),
        Column("value", numeric=True),
        Column("period"),
        Column("distinct"),
        Column("max_ratio", numeric=True),
        Column("ok"),
    )
    data = [
        (r.trace, r.norm, r.value, _coeffs_str(r.period), _coeffs_str(r.distinct),
         r.max_ratio, r.ok)
        for r in rows
    ]
    return Report("coeff-scan", scalars, columns, data)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latdisp",
        description="Exact dispersion of plane lattices via continued fractions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("pretty", "csv", "json"), default="pretty",
        help="output format (default pretty)",
    )
    common.add_argument(
        "--digits", type=_positive_int, default=5,
        help="decimal digits for renderings (default 5)",
    )
    common.add_argument("--out", metavar="FILE", help="write output to FILE")
    common.add_argument(
        "--meta", action="store_true",
        help="prepend a header line naming the command",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "cf", parents=[common],
        help="expand a number or evaluate a sequence literal",
        description="Continued fraction expansion of a number, or the value of "
        "a sequence literal.  A reduced fraction strictly between 0 and 1 is "
        "reported as a rank-1 lattice slope.",
    )
    p.add_argument("--x", required=True, help="number or sequence literal")
    p.set_defaults(func=_cmd_cf, parser=p)

    p = sub.add_parser(
        "disp-seq", parents=[common],
        help="dispersion of a two-sided coefficient sequence",
        description="Exact normalized dispersion of a two-sided periodic "
        "coefficient sequence.  A purely periodic one-sided literal such as "
        "\"[(2,1)]\" denotes its two-sided extension.",
    )
    p.add_argument("--seq", required=True, help="sequence literal")
    p.set_defaults(func=_cmd_disp_seq, parser=p)

    p = sub.add_parser(
        "disp-ring", parents=[common],
        help="closed-form dispersion of a real quadratic subring lattice",
        description="Dispersion of the lattice spanned by the subring of "
        "index n in the ring of integers of Q(sqrt(d)).",
    )
    p.add_argument("--d", type=_positive_int, required=True,
                   help="squarefree radicand")
    p.add_argument("--n", type=_positive_int, default=1, help="subring index")
    p.add_argument("--no-verify", action="store_true",
                   help="skip the independent sequence-walk cross-check")
    p.set_defaults(func=_cmd_disp_ring, parser=p)

    p = sub.add_parser(
        "bounds", parents=[common],
        help="rational dispersion bounds from the largest coefficient",
        description="Rational lower and upper bounds on the dispersion of "
        "every sequence whose largest coefficient equals a.",
    )
    p.add_argument("--a", type=int, required=True, help="largest coefficient")
    p.set_defaults(func=_cmd_bounds, parser=p)

    p = sub.add_parser(
        "tight-bounds", parents=[common],
        help="best possible dispersion bounds for a largest coefficient",
        description="Dispersion of the constant sequence (a) and of the "
        "alternating sequence (a,1): the extreme values among sequences with "
        "largest coefficient a.",
    )
    p.add_argument("--a", type=int, required=True, help="largest coefficient")
    p.add_argument("--no-verify", action="store_true",
                   help="skip the sequence-walk cross-check")
    p.set_defaults(func=_cmd_tight_bounds, parser=p)

    p = sub.add_parser(
        "best", parents=[common],
        help="n-th smallest dispersion among plane lattices",
        description="The rank-th smallest normalized dispersion and a "
        "coefficient sequence attaining it.",
    )
    p.add_argument("--rank", type=_positive_int, required=True)
    p.add_argument("--no-verify", action="store_true",
                   help="skip the sequence-walk cross-check")
    p.set_defaults(func=_cmd_best, parser=p)

    p = sub.add_parser(
        "table1", parents=[common],
        help="bounds table over largest coefficients",
        description="For each largest coefficient: rational lower bound, the "
        "two extreme dispersions, and rational upper bound.",
    )
    p.add_argument("--a", type=_int_list, default=None,
                   help="comma-separated coefficients (default standard rows)")
    p.add_argument("--no-verify", action="store_true",
                   help="skip the sequence-walk cross-checks")
    p.set_defaults(func=_cmd_table1, parser=p)

    p = sub.add_parser(
        "fib", parents=[common],
        help="Fibonacci lattice dispersion and volume profile",
        description="Periodic dispersion of the Fibonacci lattice with "
        "n = F(m), p = F(m-2), and its profile of maximal box volumes.",
    )
    p.add_argument("--m", type=_positive_int, required=True, help="Fibonacci index")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the brute-force oracle")
    p.set_defaults(func=_cmd_fib, parser=p)

    p = sub.add_parser(
        "rank1", parents=[common],
        help="periodic dispersion of a rank-1 lattice",
        description="Exact periodic dispersion of the rank-1 lattice with "
        "slope p/n on the discrete torus.",
    )
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the brute-force oracle")
    p.set_defaults(func=_cmd_rank1, parser=p)

    p = sub.add_parser(
        "zaremba", parents=[common],
        help="scan denominators for small-coefficient slopes",
        description="For every n in range, find a slope p/n minimizing the "
        "largest expansion coefficient and report its dispersion.  Set "
        "LATDISP_THREADS to parallelize.",
    )
    p.add_argument("--max-n", type=_positive_int, required=True)
    p.add_argument("--min-n", type=_positive_int, default=2)
    p.add_argument("--bound", type=_positive_int, default=5,
                   help="flag rows whose best coefficient reaches this bound")
    p.set_defaults(func=_cmd_zaremba, parser=p)

    p = sub.add_parser(
        "oracle", parents=[common],
        help="brute-force largest empty box of a point set",
        description="Read a CSV point set (columns x,y; exact number grammar) "
        "and report the largest axis-parallel empty box in its region.",
    )
    p.add_argument("--points", required=True, metavar="FILE", help="CSV file")
    p.add_argument("--region", help="x0,x1,y0,y1 (default from file or unit square)")
    p.add_argument("--cap", type=_positive_int, default=500,
                   help="maximum number of points (default 500)")
    p.set_defaults(func=_cmd_oracle, parser=p)

    p = sub.add_parser(
        "boxes", parents=[common],
        help="walk the chain of maximal empty boxes of a lattice",
        description="Maximal empty boxes of the lattice in normal form, "
        "indexed by walk position.  Give either a two-sided sequence literal "
        "or the forward and backward tail values.",
    )
    p.add_argument("--seq", help="two-sided sequence literal")
    p.add_argument("--fwd", help="forward tail value (> 1, irrational)")
    p.add_argument("--bwd", help="backward tail value (between -1 and 0)")
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--no-verify", action="store_true",
                   help="skip closed-form verification of each box")
    p.set_defaults(func=_cmd_boxes, parser=p)

    p = sub.add_parser(
        "norm-figure", parents=[common],
        help="residue norm series along the box chain of a quadratic integer",
        description="For a purely periodic quadratic integer, emit per box "
        "the defining lattice points' absolute norms and their sum.",
    )
    p.add_argument("--delta", required=True, help="purely periodic quadratic integer")
    p.add_argument("--max-n", type=_nonnegative_int, default=50)
    p.set_defaults(func=_cmd_norm_figure, parser=p)

    p = sub.add_parser(
        "coeff-scan", parents=[common],
        help="coefficient statistics over quadratic integers by trace and norm",
        description="Scan purely periodic quadratic integers with bounded "
        "trace and absolute norm and test the ranked-coefficient inequality.",
    )
    p.add_argument("--trace-max", type=_positive_int, required=True)
    p.add_argument("--norm-min", type=_positive_int, default=1)
    p.add_argument("--norm-max", type=_positive_int, default=None)
    p.set_defaults(func=_cmd_coeff_scan, parser=p)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command, print its report.  Returns the
    exit status; argparse exits with status 2 on usage errors itself."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "boxes":
        if (args.seq is None) == (args.fwd is None and args.bwd is None):
            args.parser.error("give either --seq or both --fwd and --bwd")
        if args.seq is None and (args.fwd is None or args.bwd is None):
            args.parser.error("--fwd and --bwd are needed together")
    try:
        report = args.func(args)
        text = render(report, args.format, args.digits, args.meta)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
