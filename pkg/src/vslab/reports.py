"""Serialization helpers shared by the CLI: exact-rational JSON and CSV.

Conventions that make outputs byte-reproducible:
  - rationals are always "num/den" strings (den kept even when 1),
  - floats are rendered with repr(), the shortest round-trip form,
  - JSON is emitted with sorted keys and a trailing newline,
  - CSV rows are written in a documented, deterministic order.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .errors import SchemaMismatch

BOUND_CSV_HEADER = [
    "kind",
    "q",
    "d",
    "s",
    "r",
    "m",
    "n",
    "lhs",
    "rhs",
    "applicable",
    "feasible",
    "pass",
]


def frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def fmt_float(x) -> str:
    return repr(float(x))


def fmt_opt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return fmt_float(x)
    if isinstance(x, Fraction):
        return frac_str(x)
    return str(x)


def jsonable(obj):
    """Recursively convert Fractions/tuples for deterministic JSON."""
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dump_json(obj))


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_opt(x) for x in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(csv_text(header, rows))


def bound_check_row(check) -> list:
    return [
        check.kind,
        check.q,
        check.d,
        check.s,
        check.r,
        check.m,
        check.n,
        None if check.lhs is None else Fraction(check.lhs),
        check.rhs,
        check.applicable,
        check.feasible,
        check.passed,
    ]


def moment_report_dict(report) -> dict:
    return {
        "spec": report.spec_key,
        "q": report.q,
        "d": report.d,
        "s": report.s,
        "a": list(report.a),
        "mean": report.mean,
        "mu_d_q": report.mean - report.residual_mean(),
        "residual_mean": report.residual_mean(),
        "second_moment": report.second_moment,
        "mu_d2_q2": report.second_moment - report.residual_second(),
        "residual_second": report.residual_second(),
        "chi": {str(r): v for r, v in sorted(report.chi.items())},
        "smn": {f"{m},{n}": v for (m, n), v in sorted(report.smn.items())},
        "mean_reconstructed": report.mean_reconstructed,
        "v2_exact_mode": report.v2_exact_mode,
        "v2_paper_mode": report.v2_paper_mode,
        "paper_mode_residual": report.paper_mode_residual(),
    }


MOMENT_CSV_HEADER = [
    "spec",
    "q",
    "d",
    "s",
    "mean",
    "mu_d_q",
    "residual_mean",
    "second_moment",
    "mu_d2_q2",
    "residual_second",
    "mean_reconstruction_exact",
    "v2_exact_mode_matches",
    "paper_mode_residual",
]


def moment_report_row(report) -> list:
    mean_ok = (
        ""
        if report.mean_reconstructed is None
        else report.mean_reconstructed == report.mean
    )
    return [
        report.spec_key,
        report.q,
        report.d,
        report.s,
        report.mean,
        report.mean - report.residual_mean(),
        report.residual_mean(),
        report.second_moment,
        report.second_moment - report.residual_second(),
        report.residual_second(),
        mean_ok,
        report.v2_exact_mode == report.second_moment,
        report.paper_mode_residual(),
    ]


def merge_csv_files(paths):
    """Concatenate CSVs with identical headers; no row de-duplication.

    Rows come back sorted lexicographically by their string columns, so
    merged reports are stable regardless of input order.
    """
    header = None
    rows = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                this_header = next(reader)
            except StopIteration:
                raise SchemaMismatch(f"{path}: empty file") from None
            if header is None:
                header = this_header
            elif this_header != header:
                raise SchemaMismatch(
                    f"{path}: columns {this_header} != {header}"
                )
            rows.extend(list(r) for r in reader)
    rows.sort()
    return header, rows
