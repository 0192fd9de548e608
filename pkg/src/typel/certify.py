"""Certify or refute type L for symmetric integer-valued laws.

For X on {-n, ..., n}, E exp(izX) = w^{-n} Q(w) with w = exp(iz) and
Q(w) = E w^{X+n}.  The zeros of E exp(zX) are purely imaginary exactly when
every zero of the palindromic polynomial Q lies on the unit circle, so the
question is settled by locating the zeros of Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np
from scipy import integrate, optimize

from ._rational import to_fraction
from .moments import LatticeDistribution
from .polynomials import (
    DEGENERATE,
    OFF_CIRCLE,
    ON_CIRCLE,
    RootReport,
    SchurCohnResult,
    SelfInversivePolynomial,
    numeric_roots,
    schur_cohn_unit_circle,
)

__all__ = [
    "CertReport",
    "ZeroBracket",
    "lattice_to_polynomial",
    "enestrom_kakeya",
    "sv_alpha_condition",
    "classify",
    "charfn_real_zero_scan",
]

PASS, FAIL, NA, INCONCLUSIVE = "pass", "fail", "na", "inconclusive"


def lattice_to_polynomial(d: LatticeDistribution) -> SelfInversivePolynomial:
    """Q(w) = E w^{X+n}: q_{n+k} = q_{n-k} = p_|k|, q_n = p_0."""
    n = d.n
    q = [Fraction(0)] * (2 * n + 1)
    q[n] = d.p[0]
    for k in range(1, n + 1):
        q[n + k] = q[n - k] = d.p[k]
    return SelfInversivePolynomial(tuple(q))


def enestrom_kakeya(d: LatticeDistribution) -> str:
    """``pass`` iff p_0/2 <= p_1 <= ... <= p_n; a pass certifies type L.

    A failure only means the test does not apply.
    """
    n = d.n
    if n == 0:
        return NA
    chain = [d.p[0] / 2] + list(d.p[1 : n + 1])
    return PASS if all(x <= y for x, y in zip(chain, chain[1:])) else FAIL


def _nonzero_coefficients(d: LatticeDistribution) -> int:
    return (1 if d.p[0] else 0) + 2 * sum(1 for x in d.p[1 : d.n + 1] if x)


def sv_alpha_condition(d: LatticeDistribution, alpha=1, *, digits: int = 50) -> str:
    """Power-mean sufficient condition for all zeros of Q on the unit circle.

    Tests ``p_0^a/2 + sum_{k<n} p_k^a <= (2/(N-2))^(a-1) p_n^a`` where N is
    the number of nonzero coefficients of Q.  For a = 1 the factor is 1 and
    N plays no role.  Integer exponents are decided exactly, other rational
    exponents with interval arithmetic (``inconclusive`` if the interval
    straddles zero).
    """
    alpha = to_fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    n = d.n
    if n == 0:
        return NA
    N = _nonzero_coefficients(d)
    if alpha > 1 and N <= 2:
        return NA
    if alpha.denominator == 1:
        a = alpha.numerator
        lhs = d.p[0] ** a / 2 + sum((x ** a for x in d.p[1:n]), Fraction(0))
        factor = Fraction(2, N - 2) ** (a - 1) if a > 1 else Fraction(1)
        return PASS if lhs <= factor * d.p[n] ** a else FAIL
    iv = mpmath.iv
    saved = iv.prec
    try:
        iv.dps = digits
        A = iv.mpf(alpha.numerator) / alpha.denominator

        def power(x: Fraction):
            if x == 0:
                return iv.mpf(0)
            return iv.exp(A * iv.log(iv.mpf(x.numerator) / x.denominator))

        lhs = power(d.p[0]) / 2
        for x in d.p[1:n]:
            lhs += power(x)
        rhs = iv.exp((A - 1) * iv.log(iv.mpf(2) / (N - 2))) * power(d.p[n])
        diff = rhs - lhs
        if diff.a >= 0:
            return PASS
        if diff.b < 0:
            return FAIL
        return INCONCLUSIVE
    finally:
        iv.prec = saved


@dataclass
class CertReport:
    ek: str
    sv: dict[str, str]
    schur_cohn: SchurCohnResult
    numeric: RootReport
    overall: str  # certified | refuted | inconclusive
    notes: list[str] = field(default_factory=list)

    def to_dict(self, digits: int = 15) -> dict:
        fmt = lambda x: mpmath.nstr(x, digits)
        return {
            "tests": [
                {"test": "enestrom-kakeya", "verdict": self.ek},
                *({"test": f"power-mean(alpha={a})", "verdict": v} for a, v in self.sv.items()),
                {"test": "schur-cohn", "verdict": self.schur_cohn.verdict, "notes": list(self.schur_cohn.notes)},
                {
                    "test": "numeric-roots",
                    "verdict": "converged" if self.numeric.converged else "not-converged",
                    "max_deviation": fmt(self.numeric.max_deviation),
                    "pairing_error": fmt(self.numeric.pairing_error),
                    "roots": [[fmt(w.real), fmt(w.imag)] for w in self.numeric.roots],
                },
            ],
            "overall": self.overall,
            "notes": list(self.notes),
        }


def classify(d: LatticeDistribution, alphas: Iterable = (1,), tol: float = 1e-9) -> CertReport:
    """Run every test and combine the verdicts.

    certified   -- at least one rigorous test passes;
    refuted     -- a numeric root lies off the circle by more than 10 tol
                   and the exact test agrees;
    inconclusive otherwise.
    """
    Q = lattice_to_polynomial(d)
    ek = enestrom_kakeya(d)
    sv = {str(to_fraction(a)): sv_alpha_condition(d, a) for a in alphas}
    sc = schur_cohn_unit_circle(Q)
    notes = []
    if Q.degree == 0:
        numeric = RootReport((), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0), True)
        notes.append("point mass at 0: the moment generating function has no zeros")
    else:
        numeric = numeric_roots(Q)
    if sc.multiple_zeros and sc.on_circle:
        notes.append("boundary case: multiple zeros on the unit circle")
    if ek == PASS or PASS in sv.values() or sc.verdict == ON_CIRCLE:
        overall = "certified"
    elif sc.verdict == OFF_CIRCLE and numeric.max_deviation > 10 * tol:
        overall = "refuted"
    else:
        overall = "inconclusive"
    if sc.verdict == DEGENERATE:
        notes.append("exact test degenerate; numeric roots only")
    return CertReport(ek, sv, sc, numeric, overall, notes)


# -- continuous densities: diagnostic only ----------------------------------

@dataclass(frozen=True)
class ZeroBracket:
    lo: float
    hi: float
    t: float


def _as_callable(f) -> Callable[[float], float]:
    if callable(f):
        return f
    xs, fs = (np.asarray(v, dtype=float) for v in f)
    return lambda x: float(np.interp(abs(x), xs, fs))


def charfn_real_zero_scan(f, t_max: float, step: float = 0.05) -> list[ZeroBracket]:
    """Bracket the real zeros of phi(t) = int_{-1}^{1} cos(tx) f(x) dx on (0, t_max].

    ``f`` is an even density on [-1, 1], given as a callable or as a table
    ``(xs, values)`` on [0, 1].  This is a sign-change scan: it can miss
    pairs of close zeros and proves nothing about complex zeros.
    """
    g = _as_callable(f)
    grid = np.linspace(0.0, 1.0, 2001)
    if min(g(x) for x in grid) < 0:
        raise ValueError("density takes negative values")
    mass, _ = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=1e-13, epsrel=1e-13)
    if abs(2 * mass - 1) > 1e-8:
        raise ValueError(f"density integrates to {2 * mass!r}, not 1")

    def phi(t: float) -> float:
        if t == 0:
            return 2 * mass
        val, _ = integrate.quad(g, 0.0, 1.0, weight="cos", wvar=t, limit=200)
        return 2 * val

    out = []
    ts = np.arange(step, t_max + step / 2, step)
    prev_t, prev = 0.0, phi(0.0)
    for t in ts:
        cur = phi(float(t))
        if cur == 0:
            out.append(ZeroBracket(float(t), float(t), float(t)))
        elif prev != 0 and math.copysign(1, cur) != math.copysign(1, prev):
            root = optimize.brentq(phi, prev_t, float(t), xtol=1e-13)
            out.append(ZeroBracket(prev_t, float(t), root))
        prev_t, prev = float(t), cur
    return out
