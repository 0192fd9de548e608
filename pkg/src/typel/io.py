"""CSV and JSON serialization of the package's data types.

Every writer returns a string; callers decide where it goes.  Rationals are
split into numerator and denominator columns so nothing is rounded.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .certify import CertReport
from .ferro import WeightedStateTable
from .gausspoly import PolyGaussDensity
from .moments import MomentSequence
from .polynomials import SelfInversivePolynomial

__all__ = [
    "moments_csv",
    "sequence_csv",
    "polynomial_csv",
    "density_csv",
    "state_table_csv",
    "cert_report_json",
    "dump_json",
]


def _writer(buf: io.StringIO):
    return csv.writer(buf, lineterminator="\n")


def moments_csv(seq: MomentSequence) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "m_num", "m_den", "r_num", "r_den"])
    for n, (m, r) in enumerate(zip(seq.even_moments, seq.r)):
        w.writerow([n, m.numerator, m.denominator, r.numerator, r.denominator])
    return buf.getvalue()


def sequence_csv(values: Sequence[Fraction]) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["index", "num", "den"])
    for k, x in enumerate(values):
        x = Fraction(x)
        w.writerow([k, x.numerator, x.denominator])
    return buf.getvalue()


def polynomial_csv(Q: SelfInversivePolynomial, digits: int = 30) -> str:
    """Coefficient list, exact when Q is exact, otherwise ``digits`` significant digits."""
    buf = io.StringIO()
    w = _writer(buf)
    if Q.is_exact:
        w.writerow(["power", "num", "den"])
        for k, c in enumerate(Q.coeffs):
            w.writerow([k, c.numerator, c.denominator])
    else:
        w.writerow(["power", "value"])
        for k, c in enumerate(Q.coeffs):
            w.writerow([k, mpmath.nstr(c, digits)])
    return buf.getvalue()


def density_csv(d: PolyGaussDensity, xs: Iterable) -> str:
    """Columns (x, P(x), density) for plotting elsewhere."""
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["x", "P", "density"])
    for x, P, f in d.table(xs):
        w.writerow([repr(float(x)), repr(float(P)), repr(float(f))])
    return buf.getvalue()


def state_table_csv(table: WeightedStateTable) -> str:
    return table.to_csv()


def dump_json(obj) -> str:
    # sorted keys and fixed separators keep the output byte-stable
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def cert_report_json(report: CertReport, digits: int = 15) -> str:
    return dump_json(report.to_dict(digits))
