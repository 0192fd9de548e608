"""Command-line front end: ``typel <command> [--spec FILE] [flags]``.

Specs are JSON documents with exactly one ``kind`` and rationals written as
strings ("3/4") or integers.  Floats and unknown fields are rejected.  Every
command prints a JSON report on stdout; ``--out DIR`` also writes CSV/JSON
artifacts.  Exit codes: 0 pass, 2 refuted, 3 inconclusive, 64 usage or
parse error, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import mpmath

from . import __version__
from ._rational import format_fraction, to_fraction
from .certify import classify, lattice_to_polynomial
from .ferro import (
    SiteMeasure,
    SpinSystem,
    enumerate_states,
    interval_endpoints,
    ferro_moment_comparison,
    ghost_equivalence_check,
    lee_yang_polynomial,
    lee_yang_roots,
    linear_comb_moments,
)
from .gausspoly import (
    density_from_law,
    g_lambda_analysis,
    schur_concavity_probe,
    theorem5_bounds_check,
    zb_monotone_in_b,
)
from .io import dump_json, moments_csv, polynomial_csv, sequence_csv
from .moments import (
    GaussPolyLaw,
    LatticeDistribution,
    MomentSequence,
    check_moment_comparison,
    check_r_logconcave,
    even_moments_gausspoly,
    even_moments_lattice,
)
from .sequences import egf_logconcavity_grid, gurvits_coefficient_check, logconcave_check

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3, 64, 70
DEFAULT_PRECISION = 50
DEFAULT_N = 20
VERDICTS = ("holds", "fails", "na", "inconclusive")

# Fixed set of anchors a report record may cite.
ANCHORS = frozenset(
    {
        "plumbing",
        "gaussian-moment-comparison",
        "r-sequence-log-concavity",
        "log-concavity",
        "egf-log-concavity",
        "egf-coefficient-inequality",
        "enestrom-kakeya",
        "power-mean-unit-circle",
        "jury-schur-cohn",
        "type-l-classification",
        "density-sufficient-conditions",
        "extremal-gaussian-mixture-bounds",
        "z_b-monotonicity",
        "lambda-difference-signs",
        "schur-concavity",
        "ghost-spin",
        "lee-yang",
        "ferromagnetic-moment-comparison",
    }
)


class UsageError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line, self.column = line, column

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}: " if self.line is not None else ""
        return where + self.args[0]


# -- reports -------------------------------------------------------------------

@dataclass
class Record:
    check: str
    anchor: str
    verdict: str
    value: str
    mode: str
    runtime: float | None = None

    def __post_init__(self):
        if self.anchor not in ANCHORS:
            raise ValueError(f"unregistered anchor {self.anchor!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    def to_dict(self, timing: bool) -> dict:
        out = {"check": self.check, "anchor": self.anchor, "verdict": self.verdict, "value": self.value, "mode": self.mode}
        if timing:
            out["runtime"] = round(self.runtime or 0.0, 6)
        return out


@dataclass
class Report:
    command: str
    records: list[Record] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    exit_code: int | None = None

    def add(self, check: str, anchor: str, verdict: str, value: str, mode: str, runtime: float | None = None) -> None:
        self.records.append(Record(check, anchor, verdict, value, mode, runtime))

    def timed(self, check: str, anchor: str, mode: str, fn: Callable[[], tuple[str, str]]) -> None:
        start = time.perf_counter()
        verdict, value = fn()
        self.add(check, anchor, verdict, value, mode, time.perf_counter() - start)

    @property
    def overall(self) -> str:
        verdicts = {r.verdict for r in self.records}
        if "fails" in verdicts:
            return "fails"
        if "inconclusive" in verdicts:
            return "inconclusive"
        return "holds" if "holds" in verdicts else "na"

    def code(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        return {"fails": EXIT_REFUTED, "inconclusive": EXIT_INCONCLUSIVE}.get(self.overall, EXIT_OK)

    def to_json(self, timing: bool) -> str:
        body = {
            "command": self.command,
            "records": [r.to_dict(timing) for r in self.records],
            "overall": self.overall,
        }
        body.update(self.extra)
        return dump_json(body)


def _fmt(x, digits: int = 25) -> str:
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, mpmath.ctx_iv.ivmpf):
        lo, hi = interval_endpoints(x)
        return f"[{mpmath.nstr(lo, digits)}, {mpmath.nstr(hi, digits)}]"
    return mpmath.nstr(x, digits)


# -- spec parsing --------------------------------------------------------------

class _FloatToken(str):
    """A JSON number with a fraction or exponent, kept as text so it can be located and rejected."""


def _position(text: str, needle: str) -> tuple[int, int]:
    idx = text.find(needle)
    if idx < 0:
        return 1, 1
    line = text.count("\n", 0, idx) + 1
    column = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, column


class SpecParser:
    KINDS = {
        "lattice": ({"p"}, set()),
        "gausspoly": ({"a"}, {"b", "b_prime", "y"}),
        "spin-system": ({"sites", "J"}, {"h", "a"}),
        "sequence": ({"values"}, set()),
        "density": ({"condition"}, {"m", "alpha"}),
    }
    OPTIONS = {"N", "p", "q", "alpha", "precision", "seed", "tolerance"}

    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, needle: str | None = None):
        line, column = _position(self.text, needle) if needle else (None, None)
        raise UsageError(message, line, column)

    def rational(self, value, where: str) -> Fraction:
        if isinstance(value, _FloatToken):
            self.fail(f"{where}: float {value} not accepted, write it as a string \"p/q\"", value)
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            self.fail(f"{where}: expected a rational string or integer", json.dumps(value) if isinstance(value, str) else None)
        try:
            return to_fraction(value)
        except (ValueError, TypeError) as exc:
            self.fail(f"{where}: {exc}", f'"{value}"' if isinstance(value, str) else str(value))

    def rationals(self, values, where: str) -> list[Fraction]:
        if not isinstance(values, list):
            self.fail(f"{where}: expected a list", f'"{where.split(".")[-1]}"')
        return [self.rational(v, f"{where}[{i}]") for i, v in enumerate(values)]

    def integer(self, value, where: str) -> int:
        x = self.rational(value, where)
        if x.denominator != 1:
            self.fail(f"{where}: expected an integer", f'"{value}"')
        return int(x)

    def parse(self) -> dict:
        try:
            doc = json.loads(self.text, parse_float=_FloatToken)
        except json.JSONDecodeError as exc:
            raise UsageError(exc.msg, exc.lineno, exc.colno) from None
        if not isinstance(doc, dict):
            raise UsageError("spec must be a JSON object", 1, 1)
        kind = doc.get("kind")
        if kind not in self.KINDS:
            self.fail(f"kind must be one of {sorted(self.KINDS)}, got {kind!r}", '"kind"')
        required, optional = self.KINDS[kind]
        allowed = required | optional | {"kind", "options"}
        for key in doc:
            if key not in allowed:
                self.fail(f"unknown field {key!r} for kind {kind!r}", f'"{key}"')
        for key in sorted(required):
            if key not in doc:
                self.fail(f"missing field {key!r} for kind {kind!r}", '"kind"')
        options = doc.get("options", {})
        if not isinstance(options, dict):
            self.fail("options must be an object", '"options"')
        for key in options:
            if key not in self.OPTIONS:
                self.fail(f"unknown option {key!r}", f'"{key}"')
        parsed = {"kind": kind, "options": self.parse_options(options)}
        parsed.update(getattr(self, "parse_" + kind.replace("-", "_"))(doc))
        return parsed

    def parse_options(self, options: dict) -> dict:
        out = {}
        for key in ("N", "p", "q", "precision", "seed"):
            if key in options:
                out[key] = self.integer(options[key], f"options.{key}")
        if "alpha" in options:
            out["alpha"] = self.rationals(options["alpha"], "options.alpha")
        if "tolerance" in options:
            out["tolerance"] = self.rational(options["tolerance"], "options.tolerance")
        return out

    def parse_lattice(self, doc: dict) -> dict:
        p = self.rationals(doc["p"], "p")
        try:
            return {"law": LatticeDistribution(tuple(p))}
        except ValueError as exc:
            self.fail(f"p: {exc}", '"p"')

    def parse_gausspoly(self, doc: dict) -> dict:
        a = self.rational(doc["a"], "a")
        b = self.rationals(doc.get("b", []), "b")
        out = {}
        try:
            out["law"] = GaussPolyLaw(a, tuple(b))
        except ValueError as exc:
            self.fail(str(exc), '"a"')
        if "b_prime" in doc:
            out["b_prime"] = self.rationals(doc["b_prime"], "b_prime")
        if "y" in doc:
            y = self.rationals(doc["y"], "y")
            try:
                out["y"] = LatticeDistribution(tuple(y))
            except ValueError as exc:
                self.fail(f"y: {exc}", '"y"')
        return out

    def parse_site(self, site, where: str) -> SiteMeasure:
        if site == "rademacher":
            return SiteMeasure.rademacher()
        if not isinstance(site, dict) or set(site) != {"atoms"} or not isinstance(site["atoms"], list):
            self.fail(f"{where}: a site is \"rademacher\" or {{\"atoms\": [[value, weight], ...]}}", '"sites"')
        atoms = []
        for i, pair in enumerate(site["atoms"]):
            if not isinstance(pair, list) or len(pair) != 2:
                self.fail(f"{where}.atoms[{i}]: expected [value, weight]", '"atoms"')
            atoms.append((self.rational(pair[0], f"{where}.atoms[{i}]"), self.rational(pair[1], f"{where}.atoms[{i}]")))
        try:
            return SiteMeasure(tuple(atoms))
        except ValueError as exc:
            self.fail(f"{where}: {exc}", '"sites"')

    def parse_spin_system(self, doc: dict) -> dict:
        if not isinstance(doc["sites"], list) or not doc["sites"]:
            self.fail("sites must be a nonempty list", '"sites"')
        sites = [self.parse_site(s, f"sites[{i}]") for i, s in enumerate(doc["sites"])]
        n = len(sites)
        if not isinstance(doc["J"], list):
            self.fail("J must be a list of rows", '"J"')
        J = [self.rationals(row, f"J[{i}]") for i, row in enumerate(doc["J"])]
        h = self.rationals(doc.get("h", [0] * n), "h")
        a = self.rationals(doc.get("a", [1] * n), "a")
        try:
            system = SpinSystem.build(sites, J, h)
        except ValueError as exc:
            self.fail(str(exc), '"J"')
        if len(a) != n or any(x < 0 for x in a):
            self.fail(f"a must be {n} nonnegative rationals", '"a"')
        return {"system": system, "a": a}

    def parse_sequence(self, doc: dict) -> dict:
        values = self.rationals(doc["values"], "values")
        if not values or any(x < 0 for x in values):
            self.fail("values must be a nonempty list of nonnegative rationals", '"values"')
        return {"values": values}

    DENSITY_CONDITIONS = ("nondecreasing", "decreasing-concave", "power-of-one-minus", "exp-even-power")

    def parse_density(self, doc: dict) -> dict:
        cond = doc["condition"]
        if cond not in self.DENSITY_CONDITIONS:
            self.fail(f"condition must be one of {list(self.DENSITY_CONDITIONS)}", '"condition"')
        out = {"condition": cond}
        if cond in ("power-of-one-minus", "exp-even-power"):
            if "m" not in doc:
                self.fail(f"condition {cond!r} needs m", '"condition"')
            m = self.integer(doc["m"], "m")
            if m < 0:
                self.fail("m must be nonnegative", '"m"')
            out["m"] = m
        if cond == "power-of-one-minus":
            alpha = self.rational(doc.get("alpha", 1), "alpha")
            if alpha <= -1:
                self.fail("alpha must exceed -1", '"alpha"')
            out["alpha"] = alpha
        elif "alpha" in doc:
            self.fail(f"alpha is not used by condition {cond!r}", '"alpha"')
        if cond in ("nondecreasing", "decreasing-concave") and "m" in doc:
            self.fail(f"m is not used by condition {cond!r}", '"m"')
        return out


def load_spec(path: str | None) -> dict:
    if path is None:
        raise UsageError("--spec FILE is required for this command")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return SpecParser(text).parse()


# -- option resolution ---------------------------------------------------------

def _precision(args, spec: dict | None) -> int:
    if args.precision is not None:
        value = args.precision
    elif spec and "precision" in spec["options"]:
        value = spec["options"]["precision"]
    else:
        env = os.environ.get("TYPEL_PRECISION")
        try:
            value = int(env) if env else DEFAULT_PRECISION
        except ValueError:
            raise UsageError(f"TYPEL_PRECISION must be an integer, got {env!r}") from None
    if value <= 0:
        raise UsageError("precision must be positive")
    return value


def _option(args, spec: dict | None, name: str, default=None):
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    if spec and name in spec["options"]:
        return spec["options"][name]
    return default


def _even_int(text, name: str) -> int:
    try:
        value = int(to_fraction(text)) if not isinstance(text, int) else text
    except (ValueError, TypeError):
        raise UsageError(f"--{name} must be an even integer, got {text!r}") from None
    if value % 2 or value < 2:
        raise UsageError(f"--{name} must be an even integer >= 2")
    return value


def _rational_list(text: str, name: str) -> list[Fraction]:
    try:
        return [to_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _tolerance(args, spec: dict | None, default: float = 1e-9) -> float:
    if args.tol is not None:
        return args.tol
    if spec and "tolerance" in spec["options"]:
        return float(spec["options"]["tolerance"])
    return default


# -- commands ------------------------------------------------------------------

_CERT_TO_VERDICT = {"certified": "holds", "refuted": "fails", "inconclusive": "inconclusive"}
_TEST_TO_VERDICT = {"pass": "holds", "fail": "na", "na": "na", "inconclusive": "inconclusive"}
_SC_TO_VERDICT = {"all-on-circle": "holds", "not-all-on-circle": "fails", "degenerate": "inconclusive"}


def cmd_classify(args, spec: dict) -> Report:
    report = Report("classify")
    if spec["kind"] == "density":
        cond = spec["condition"]
        report.add(
            f"density:{cond}",
            "density-sufficient-conditions",
            "inconclusive",
            "sufficient condition matched; continuous densities are never certified",
            "exact",
        )
        return report
    if spec["kind"] != "lattice":
        raise UsageError("classify needs a lattice spec (or a density condition)")
    d = spec["law"]
    alphas = _option(args, spec, "alpha") or [Fraction(1)]
    if isinstance(alphas, str):
        alphas = _rational_list(alphas, "alpha")
    tol = _tolerance(args, spec)
    start = time.perf_counter()
    cert = classify(d, alphas, tol)
    elapsed = time.perf_counter() - start
    report.add("enestrom-kakeya", "enestrom-kakeya", _TEST_TO_VERDICT[cert.ek], cert.ek, "exact")
    for a, v in cert.sv.items():
        mode = "exact" if to_fraction(a).denominator == 1 else "precision-50"
        report.add(f"power-mean(alpha={a})", "power-mean-unit-circle", _TEST_TO_VERDICT[v], v, mode)
    report.add("schur-cohn", "jury-schur-cohn", _SC_TO_VERDICT[cert.schur_cohn.verdict], cert.schur_cohn.verdict, "exact")
    report.add(
        "numeric-roots",
        "plumbing",
        "holds" if cert.numeric.max_deviation < tol else "fails",
        _fmt(cert.numeric.max_deviation, 6),
        "precision-40",
    )
    report.add("overall", "type-l-classification", _CERT_TO_VERDICT[cert.overall], cert.overall, "exact", elapsed)
    report.extra["certificate"] = cert.to_dict()
    report.exit_code = {"certified": EXIT_OK, "refuted": EXIT_REFUTED}.get(cert.overall, EXIT_INCONCLUSIVE)
    report.artifacts["polynomial.csv"] = polynomial_csv(lattice_to_polynomial(d))
    report.artifacts["certificate.json"] = dump_json(cert.to_dict())
    return report


def _moment_sequence(spec: dict, N: int) -> MomentSequence:
    kind = spec["kind"]
    if kind == "lattice":
        return even_moments_lattice(spec["law"], N)
    if kind == "gausspoly":
        return even_moments_gausspoly(spec["law"], N)
    if kind == "sequence":
        values = spec["values"]
        if values[0] != 1:
            raise UsageError("a sequence spec used as an r-sequence must start with 1")
        return MomentSequence.from_r(values[: N + 1])
    raise UsageError(f"verify-moments does not accept kind {kind!r}")


def _pairs(args, spec, N: int) -> list[tuple[int, int]]:
    p, q = _option(args, spec, "p"), _option(args, spec, "q")
    if p is None and q is None:
        return [(a, b) for a in range(2, 2 * N + 1, 2) for b in range(a, 2 * N + 1, 2)]
    if p is None or q is None:
        raise UsageError("give both --p and --q, or neither")
    p, q = _even_int(p, "p"), _even_int(q, "q")
    if p > q:
        raise UsageError("need p <= q")
    return [(p, q)]


def cmd_verify_moments(args, spec: dict) -> Report:
    report = Report("verify-moments")
    N = _option(args, spec, "N", DEFAULT_N)
    if N < 1:
        raise UsageError("N must be at least 1")
    seq = _moment_sequence(spec, N)
    pairs = _pairs(args, spec, seq.N)
    if any(q > 2 * seq.N for _, q in pairs):
        raise UsageError(f"q exceeds 2N = {2 * seq.N}")

    def logconcave():
        lc = check_r_logconcave(seq)
        if lc.holds:
            return "holds", "vacuous" if lc.vacuous else f"n <= {seq.N}"
        return "fails", f"{lc.status} at n = {lc.index}"

    report.timed("r-log-concave", "r-sequence-log-concavity", "exact", logconcave)
    for p, q in pairs:
        def compare(p=p, q=q):
            c = check_moment_comparison(seq, p, q)
            return ("holds" if c.holds else "fails"), _fmt(c.slack)

        report.timed(f"comparison(p={p},q={q})", "gaussian-moment-comparison", "exact", compare)
    report.artifacts["moments.csv"] = moments_csv(seq)
    return report


def cmd_gurvits(args, spec: dict) -> Report:
    if spec["kind"] != "sequence":
        raise UsageError("gurvits needs a sequence spec")
    a = spec["values"]
    report = Report("gurvits")
    lc = logconcave_check(a)
    report.add("log-concave", "log-concavity", "holds" if lc.holds else "fails",
               "ok" if lc.holds else f"{lc.status} at n = {lc.index}", "exact")
    for n in range(len(a) + 1):
        value = gurvits_coefficient_check(a, n)
        verdict = "holds" if value >= 0 else ("fails" if lc.holds else "na")
        report.add(f"coefficient(n={n})", "egf-coefficient-inequality", verdict, _fmt(value), "exact")
    grid = [Fraction(2) ** k for k in range(-4, 5)]
    egf = egf_logconcavity_grid(a, grid)
    verdict = {"holds": "holds", "fails": "fails" if lc.holds else "na"}.get(egf.status, "inconclusive")
    worst = min(pt.lower for pt in egf.points)
    report.add("egf-grid", "egf-log-concavity", verdict, _fmt(worst), "exact")
    report.artifacts["sequence.csv"] = sequence_csv(a)
    return report


def cmd_zb(args, spec: dict | None) -> Report:
    precision = _precision(args, spec)
    ps = _rational_list(args.p, "p") if args.p else [Fraction(3)]
    grid = _rational_list(args.grid, "grid") if args.grid else [Fraction(k, 8) for k in range(9)]
    report = Report("zb")
    rows = ["p,b,value,derivative"]
    for p in ps:
        start = time.perf_counter()
        try:
            mono = zb_monotone_in_b(p, grid, precision, diagnostic=p < 3)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if p < 3:
            verdict = "na"
        else:
            verdict = "holds" if mono.strictly_decreasing else "fails"
        label = "strictly decreasing" if mono.strictly_decreasing else ("constant" if mono.constant else "not monotone")
        report.add(f"zb-monotone(p={format_fraction(p)})", "z_b-monotonicity", verdict, label,
                   f"precision-{precision}", time.perf_counter() - start)
        for b, v, dv in zip(mono.grid, mono.values, mono.derivatives):
            rows.append(f"{format_fraction(p)},{format_fraction(b)},{_fmt(v, precision)},{_fmt(dv, precision)}")
    report.extra["table"] = rows[1:]
    report.artifacts["zb.csv"] = "\n".join(rows) + "\n"
    return report


def cmd_schur_probe(args, spec: dict) -> Report:
    if spec["kind"] != "gausspoly" or "b_prime" not in spec:
        raise UsageError("schur-probe needs a gausspoly spec with b and b_prime")
    precision = _precision(args, spec)
    p = _rational_list(args.p, "p")[0] if args.p else Fraction(spec["options"].get("p", 3))
    b = spec["law"].b
    report = Report("schur-probe")
    start = time.perf_counter()
    try:
        probe = schur_concavity_probe(b, spec["b_prime"], p, spec.get("y"), precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.add("psi(b) >= psi(b')", "schur-concavity", "holds" if probe.holds else "fails",
               _fmt(probe.slack), f"precision-{precision}", time.perf_counter() - start)
    return report


def _ferro_pairs(args, spec) -> list[tuple[int, int]]:
    p, q = _option(args, spec, "p"), _option(args, spec, "q")
    if p is None and q is None:
        return [(2, 4), (2, 8), (4, 10)]
    if p is None or q is None:
        raise UsageError("give both --p and --q, or neither")
    p, q = _even_int(p, "p"), _even_int(q, "q")
    if p > q:
        raise UsageError("need p <= q")
    return [(p, q)]


def cmd_ferro(args, spec: dict) -> Report:
    if spec["kind"] != "spin-system":
        raise UsageError("ferro needs a spin-system spec")
    system, a = spec["system"], spec["a"]
    precision = _precision(args, spec)
    tol = _tolerance(args, spec)
    mode = f"precision-{precision}"
    report = Report("ferro")
    try:
        table = enumerate_states(system, precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def ghost():
        gap = ghost_equivalence_check(system, precision)
        return ("holds" if gap < mpmath.mpf(10) ** (1 - precision) else "fails"), _fmt(gap, 6)

    report.timed("ghost-equivalence", "ghost-spin", mode, ghost)
    integer = all(s.is_integer for s in system.sites) and all(x.denominator == 1 for x in a)
    if integer:
        def lee_yang():
            roots = lee_yang_roots(system, [int(x) for x in a], precision)
            if roots is None:
                return "na", "S is constant"
            return ("holds" if roots.max_deviation < tol else "fails"), _fmt(roots.max_deviation, 6)

        report.timed("lee-yang-roots", "lee-yang", mode, lee_yang)
        report.artifacts["lee_yang.csv"] = polynomial_csv(lee_yang_polynomial(system, [int(x) for x in a], precision))
    else:
        report.add("lee-yang-roots", "lee-yang", "na", "non-integer supports or weights", mode)
    pairs = _ferro_pairs(args, spec)
    moments = linear_comb_moments(system, a, max(q for _, q in pairs) // 2, precision, table=table)
    for p, q in pairs:
        c = ferro_moment_comparison(system, a, p, q, precision, moments=moments)
        verdict = {"holds": "holds", "fails": "fails"}.get(c.verdict, "inconclusive")
        report.add(f"comparison(p={p},q={q})", "ferromagnetic-moment-comparison", verdict, _fmt(c.slack), mode)
    report.artifacts["states.csv"] = table.to_csv()
    return report


def _random_ek_law(rng: random.Random, n: int) -> LatticeDistribution:
    # nondecreasing weights with p_0/2 <= p_1 pass the Enestrom-Kakeya test
    w = sorted(Fraction(rng.randint(1, 30)) for _ in range(n))
    p0 = Fraction(rng.randint(0, 2 * int(w[0])))
    total = p0 + 2 * sum(w)
    return LatticeDistribution((p0 / total,) + tuple(x / total for x in w))


def cmd_report_all(args, spec: dict | None) -> Report:
    precision = _precision(args, spec)
    seed = args.seed if args.seed is not None else 0
    N = args.N if args.N is not None else DEFAULT_N
    rng = random.Random(seed)
    report = Report("report-all")
    mode = f"precision-{precision}"

    expected = {"1/4": "refuted", "1/2": "certified", "3/4": "certified"}
    for beta, want in expected.items():
        def three_atom(beta=beta, want=want):
            cert = classify(LatticeDistribution.three_atom(beta))
            return ("holds" if cert.overall == want else "fails"), f"{cert.overall} (expected {want})"

        report.timed(f"classify three-atom beta={beta}", "type-l-classification", "exact", three_atom)

    def corpus():
        bad = 0
        for _ in range(20):
            seq = even_moments_lattice(_random_ek_law(rng, rng.randint(1, 10)), N)
            bad += not check_r_logconcave(seq).holds
            bad += sum(
                not check_moment_comparison(seq, p, q).holds
                for p in range(2, min(20, 2 * N) + 1, 2)
                for q in range(p, min(20, 2 * N) + 1, 2)
            )
        return ("holds" if bad == 0 else "fails"), f"{bad} violations in 20 random laws"

    report.timed("random lattice corpus", "gaussian-moment-comparison", "exact", corpus)

    def z1():
        seq = even_moments_gausspoly(GaussPolyLaw.zb(1), 2)
        return "holds", _fmt(check_moment_comparison(seq, 2, 4).slack)

    report.timed("Z_1 comparison (2,4)", "gaussian-moment-comparison", "exact", z1)

    def bounds():
        worst = None
        for law in (GaussPolyLaw(1, ("1/3", "1/3")), GaussPolyLaw(2, ("1/2", "1/4", "1/8"))):
            for p in ("3", "7/2", "5"):
                chk = theorem5_bounds_check(law, p, precision)
                if not chk.holds:
                    return "fails", f"law {law}, p = {p}"
                slack = min(chk.lower_slack, chk.upper_slack)
                worst = slack if worst is None else min(worst, slack)
        return "holds", _fmt(worst, 10)

    report.timed("extremal bounds", "extremal-gaussian-mixture-bounds", mode, bounds)

    def monotone():
        mono = zb_monotone_in_b(3, [Fraction(k, 8) for k in range(9)], precision)
        return ("holds" if mono.strictly_decreasing else "fails"), "p = 3"

    report.timed("zb monotone", "z_b-monotonicity", mode, monotone)

    def lam():
        res = g_lambda_analysis("1/4", "1/3", precision)
        return ("holds" if res.pattern == "+-+" else "fails"), res.pattern

    report.timed("g_lambda sign pattern", "lambda-difference-signs", mode, lam)

    def schur():
        probe = schur_concavity_probe(("1/2", "1/2"), (1, 0), 3, None, precision)
        return ("holds" if probe.holds else "fails"), _fmt(probe.slack, 10)

    report.timed("schur probe", "schur-concavity", mode, schur)

    def ferro():
        s = SiteMeasure.rademacher()
        system = SpinSystem.build([s, s], [[0, "1/2"], ["1/2", 0]], ["1/3", 0])
        ok = ghost_equivalence_check(system, precision) < mpmath.mpf(10) ** (1 - precision)
        ok &= ferro_moment_comparison(system, (1, 1), 2, 4, precision).holds
        return ("holds" if ok else "fails"), "two-spin system"

    report.timed("two-spin ferromagnet", "ferromagnetic-moment-comparison", mode, ferro)

    def density():
        d = density_from_law(GaussPolyLaw.zb(1))
        return ("holds" if d.is_nonnegative() else "fails"), "P = " + ",".join(map(format_fraction, d.P))

    report.timed("Z_1 density", "plumbing", "exact", density)
    return report


COMMANDS: dict[str, tuple[Callable, bool]] = {
    "classify": (cmd_classify, True),
    "verify-moments": (cmd_verify_moments, True),
    "ferro": (cmd_ferro, True),
    "gurvits": (cmd_gurvits, True),
    "zb": (cmd_zb, False),
    "schur-probe": (cmd_schur_probe, True),
    "report-all": (cmd_report_all, False),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="typel", description="Exact checks for moment comparison of type L laws.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", help="JSON spec file")
        p.add_argument("--N", type=int, help=f"moment horizon (default {DEFAULT_N})")
        p.add_argument("--p", help="exponent (zb: comma-separated list)")
        p.add_argument("--q", help="second exponent")
        p.add_argument("--alpha", help="comma-separated exponents for the power-mean test")
        p.add_argument("--precision", type=int, help="working digits (env TYPEL_PRECISION)")
        p.add_argument("--seed", type=int, help="seed for randomized corpora")
        p.add_argument("--tol", type=float, help="numeric tolerance for root deviations")
        p.add_argument("--grid", help="zb: comma-separated b values")
        p.add_argument("--out", help="directory for CSV/JSON artifacts")
        p.add_argument("--timing", action="store_true", help="include runtimes (output no longer reproducible)")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    fn, needs_spec = COMMANDS[args.command]
    spec = load_spec(args.spec) if (needs_spec or args.spec) else None
    if args.N is not None and args.N < 1:
        raise UsageError("--N must be at least 1")
    report = fn(args, spec)
    text = report.to_json(args.timing)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        for name, content in report.artifacts.items():
            (out / name).write_text(content)
    return report.code(), text


def main(argv: list[str] | None = None) -> int:
    try:
        code, text = run(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
