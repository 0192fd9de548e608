"""Laws with characteristic function exp(-a t^2/2) prod(1 - b_j t^2).

Multiplying a characteristic function by (1 - b t^2) adds b f'' to the
density, so every such law has density P(x) exp(-x^2/(2a)) / sqrt(2 pi a)
with an even polynomial P obtained exactly.  Integrals of |x|^p against
these densities reduce to Gamma functions term by term, so no numerical
quadrature is involved anywhere below except for shifted absolute moments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy

from ._rational import double_factorial_odd, fractions, to_fraction
from .moments import GaussPolyLaw, LatticeDistribution, MomentSequence, gaussian_abs_moment, to_mpf

__all__ = [
    "PolyGaussDensity",
    "Theorem5Check",
    "LambdaDifference",
    "SchurProbe",
    "density_from_law",
    "glambda_density",
    "abs_moment_closed_zb",
    "abs_moment_quadrature",
    "theorem5_bounds_check",
    "g_lambda_analysis",
    "is_majorized",
    "psi",
    "schur_concavity_probe",
    "zb_monotone_in_b",
    "sample",
]


@dataclass(frozen=True)
class PolyGaussDensity:
    """density(x) = P(x) exp(-x^2 / (2a)) / sqrt(2 pi a); P[k] is the x^k coefficient."""

    a: Fraction
    P: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        P = list(fractions(self.P))
        while len(P) > 1 and P[-1] == 0:
            P.pop()
        if any(c for k, c in enumerate(P) if k % 2):
            raise ValueError("P must be even")
        object.__setattr__(self, "P", tuple(P))

    def __call__(self, x):
        x = mpmath.mpmathify(x)
        a = to_mpf(self.a)
        poly = mpmath.polyval([to_mpf(c) for c in reversed(self.P)], x)
        return poly * mpmath.exp(-x * x / (2 * a)) / mpmath.sqrt(2 * mpmath.pi * a)

    def even_moment(self, n: int) -> Fraction:
        """E X^{2n}, exact: int x^{2n+k} against N(0, a) is a^{n+k/2} (2n+k-1)!!."""
        return sum(
            (c * self.a ** (n + k // 2) * double_factorial_odd(n + k // 2) for k, c in enumerate(self.P) if c),
            Fraction(0),
        )

    def moments(self, N: int) -> MomentSequence:
        return MomentSequence(tuple(self.even_moment(n) for n in range(N + 1)))

    def is_nonnegative(self) -> bool:
        """P >= 0 on the real line, decided with Sturm sequences on P(sqrt(u)), u >= 0."""
        u = sympy.Symbol("u")
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in self.P[::2]]
        Pu = sympy.Poly(list(reversed(coeffs)), u, domain=sympy.QQ)
        if Pu.is_zero:
            return False
        if Pu.degree() == 0:
            return Pu.LC() > 0
        if Pu.LC() < 0 or Pu.eval(0) < 0:
            return False
        _, factors = Pu.sqf_list()
        for factor, mult in factors:
            # an odd-multiplicity zero with u > 0 is a sign change
            if mult % 2 and factor.count_roots(0) - (1 if factor.eval(0) == 0 else 0) > 0:
                return False
        return True

    def table(self, xs: Iterable) -> list[tuple[float, float, float]]:
        """Rows (x, P(x), density(x)) for export."""
        rows = []
        for x in xs:
            poly = sum(float(c) * x ** k for k, c in enumerate(self.P))
            rows.append((float(x), poly, float(self(x))))
        return rows


def _real(p):
    """Keep exponents exact when they are rational; floats pass through."""
    if isinstance(p, (float, mpmath.mpf)):
        return p
    return to_fraction(p)


def _shift_derivative(P: list[Fraction], a: Fraction) -> list[Fraction]:
    # d/dx [P e^{-x^2/2a}] = (P' - x P / a) e^{-x^2/2a}
    out = [Fraction(0)] * (len(P) + 1)
    for k in range(1, len(P)):
        out[k - 1] += k * P[k]
    for k, c in enumerate(P):
        out[k + 1] -= c / a
    return out


def density_from_law(law: GaussPolyLaw, *, check: bool = True) -> PolyGaussDensity:
    """Apply prod(1 + b_j D^2) to the N(0, a) density."""
    if not law.is_probability_law:
        raise ValueError("sum(b) exceeds a: the result need not be a density")
    P = [Fraction(1)]
    for b in law.b:
        if not b:
            continue
        second = _shift_derivative(_shift_derivative(P, law.a), law.a)
        P = [(P[k] if k < len(P) else 0) + b * second[k] for k in range(len(second))]
    d = PolyGaussDensity(law.a, tuple(P))
    if check:
        if d.even_moment(0) != 1:
            raise AssertionError("density does not integrate to one")
        if not d.is_nonnegative():
            raise AssertionError(f"P takes negative values although sum(b) <= a for {law}")
    return d


def glambda_density(lam) -> PolyGaussDensity:
    """g_lambda(x) = (x^2 + l(1-l)(3 - 6x^2 + x^4)) phi(x): density of sqrt(l) X_1 + sqrt(1-l) X_2."""
    lam = to_fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    c = lam * (1 - lam)
    return PolyGaussDensity(Fraction(1), (3 * c, Fraction(0), 1 - 6 * c, Fraction(0), c))


def _abs_gauss(s, a, precision: int):
    # E|G_a|^s for G_a ~ N(0, a)
    with mpmath.workdps(precision + 10):
        return mpmath.power(to_mpf(a), to_mpf(s) / 2) * gaussian_abs_moment(s, precision + 10)


def abs_moment_closed_zb(p, b, precision: int = 30, *, normalized: bool = True) -> mpmath.mpf:
    """E|Z_b|^p = 2^{p/2} Gamma((p+1)/2)/sqrt(pi) (1 + p b), optionally for Z_b/sqrt(1+2b)."""
    b = to_fraction(b)
    with mpmath.workdps(precision + 10):
        pm = to_mpf(p)
        base = gaussian_abs_moment(p, precision + 10) * (1 + pm * to_mpf(b))
        if normalized:
            base /= mpmath.power(1 + 2 * to_mpf(b), pm / 2)
        return +base


def abs_moment_quadrature(d: PolyGaussDensity, p, precision: int = 30) -> mpmath.mpf:
    """int |x|^p density(x) dx as a finite sum of Gamma closed forms."""
    if to_mpf(_real(p)) < 0:
        raise ValueError("p must be nonnegative")
    with mpmath.workdps(precision + 10):
        total = mpmath.mpf(0)
        for k, c in enumerate(d.P):
            if c:
                s = _real(p) + k
                total += to_mpf(c) * _abs_gauss(s, d.a, precision)
        return +total


@dataclass(frozen=True)
class Theorem5Check:
    p: object
    variance: Fraction
    lower: mpmath.mpf  # E|sigma Z_1 / sqrt(3)|^p
    value: mpmath.mpf  # E|X|^p
    upper: mpmath.mpf  # E|sigma G|^p
    tolerance: mpmath.mpf

    @property
    def lower_slack(self):
        return self.value - self.lower

    @property
    def upper_slack(self):
        return self.upper - self.value

    @property
    def holds(self) -> bool:
        return self.lower_slack >= -self.tolerance and self.upper_slack >= -self.tolerance

    @property
    def strict(self) -> bool:
        return self.lower_slack > self.tolerance and self.upper_slack > self.tolerance


def theorem5_bounds_check(law: GaussPolyLaw, p, precision: int = 20, *, diagnostic: bool = False) -> Theorem5Check:
    """Compare E|X|^p with the unit-variance Z_1 and Gaussian laws scaled to Var X.

    The lower comparison law is Z_1 / sqrt(3), i.e. Z_1 normalized to unit
    variance, so X = Z_1 is the equality case.  ``tolerance`` is 10^-precision;
    the arithmetic runs with 20 guard digits.
    """
    if not diagnostic and to_mpf(_real(p)) < 3:
        raise ValueError("the two-sided bound is stated for p >= 3 (pass diagnostic=True to override)")
    if not law.is_probability_law:
        raise ValueError("need sum(b) <= a")
    work = precision + 20
    with mpmath.workdps(work):
        pm = to_mpf(p)
        var = law.variance
        scale = mpmath.power(to_mpf(var), pm / 2)
        value = abs_moment_quadrature(density_from_law(law), p, work)
        lower = scale * abs_moment_closed_zb(p, 1, work)
        upper = scale * gaussian_abs_moment(p, work)
        return Theorem5Check(p, var, +lower, +value, +upper, mpmath.mpf(10) ** (-precision))


@dataclass(frozen=True)
class LambdaDifference:
    zeros: tuple  # closed form sqrt(3 -+ sqrt 6)
    located: tuple  # zeros of g_{l2} - g_{l1} found by root bracketing
    pattern: str
    samples: tuple  # (x, value) used to read the pattern


def g_lambda_analysis(lam1, lam2, precision: int = 30) -> LambdaDifference:
    """Zeros and sign pattern of g_{l2} - g_{l1} on (0, infinity), 0 < l1 <= l2 < 1/2."""
    lam1, lam2 = to_fraction(lam1), to_fraction(lam2)
    if not (0 < lam1 <= lam2 < Fraction(1, 2)):
        raise ValueError("need 0 < lambda1 <= lambda2 < 1/2")
    g1, g2 = glambda_density(lam1), glambda_density(lam2)
    with mpmath.workdps(precision + 10):
        closed = (mpmath.sqrt(3 - mpmath.sqrt(6)), mpmath.sqrt(3 + mpmath.sqrt(6)))
        diff = lambda x: g2(x) - g1(x)
        if lam1 == lam2:
            return LambdaDifference(closed, (), "0", ())
        grid = [mpmath.mpf(k) / 20 for k in range(1, 161)]
        located = []
        values = [diff(x) for x in grid]
        for (x0, v0), (x1, v1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
            if v0 * v1 < 0:
                located.append(mpmath.findroot(diff, (x0, x1), solver="anderson"))
        brackets = [closed[0] / 2, (closed[0] + closed[1]) / 2, closed[1] + 1]
        samples = tuple((x, diff(x)) for x in brackets)
        pattern = "".join("+" if v > 0 else "-" if v < 0 else "0" for _, v in samples)
        return LambdaDifference(closed, tuple(located), pattern, samples)


def is_majorized(b: Sequence, b_prime: Sequence) -> bool:
    """True when b is majorized by b' (equal sums, dominated sorted partial sums)."""
    b, bp = list(fractions(b)), list(fractions(b_prime))
    width = max(len(b), len(bp))
    b += [Fraction(0)] * (width - len(b))
    bp += [Fraction(0)] * (width - len(bp))
    if sum(b) != sum(bp):
        return False
    b.sort(reverse=True)
    bp.sort(reverse=True)
    s = sp = Fraction(0)
    for x, y in zip(b, bp):
        s, sp = s + x, sp + y
        if s > sp:
            return False
    return True


def _shifted_abs_moment(d: PolyGaussDensity, c: Fraction, p, precision: int):
    # E|S + c|^p; the only kink of the integrand is at x = -c
    with mpmath.workdps(precision + 10):
        pm = to_mpf(p)
        cm = to_mpf(c)
        f = lambda x: abs(x + cm) ** pm * d(x)
        return mpmath.quad(f, [-mpmath.inf, -cm, mpmath.inf])


def psi(b: Sequence, p, y=None, precision: int = 30):
    """E|sum_j sqrt(b_j) X_j + Y|^p with X_j i.i.d. copies of Z_1, Y independent.

    ``y`` may be None (Y = 0), a GaussPolyLaw or a LatticeDistribution.
    """
    b = fractions(b)
    total = sum(b, Fraction(0))
    with mpmath.workdps(precision + 10):
        if isinstance(y, GaussPolyLaw):
            return abs_moment_quadrature(density_from_law(GaussPolyLaw(total + y.a, b + y.b)), p, precision)
        if total == 0:
            if y is None:
                return mpmath.mpf(0)
            return mpmath.fsum(w * mpmath.power(abs(k), to_mpf(p)) for k, w in ((k, to_mpf(w)) for k, w in y.atoms()))
        S = density_from_law(GaussPolyLaw(total, b))
        if y is None:
            return abs_moment_quadrature(S, p, precision)
        if isinstance(y, LatticeDistribution):
            out = to_mpf(y.p[0]) * abs_moment_quadrature(S, p, precision) if y.p[0] else mpmath.mpf(0)
            for k in range(1, len(y.p)):
                if y.p[k]:
                    # S symmetric: E|S - k|^p = E|S + k|^p
                    out += 2 * to_mpf(y.p[k]) * _shifted_abs_moment(S, Fraction(k), p, precision)
            return out
    raise TypeError(f"unsupported law for Y: {type(y).__name__}")


@dataclass(frozen=True)
class SchurProbe:
    psi_b: mpmath.mpf
    psi_b_prime: mpmath.mpf
    tolerance: mpmath.mpf

    @property
    def slack(self):
        return self.psi_b - self.psi_b_prime

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tolerance


def schur_concavity_probe(b: Sequence, b_prime: Sequence, p, y=None, precision: int = 30) -> SchurProbe:
    """Check psi(b) >= psi(b') for b majorized by b'."""
    if to_mpf(_real(p)) < 3:
        raise ValueError("p >= 3 required")
    if not is_majorized(b, b_prime):
        raise ValueError("b is not majorized by b'")
    with mpmath.workdps(precision + 10):
        lhs = psi(b, p, y, precision + 5)
        rhs = psi(b_prime, p, y, precision + 5)
        return SchurProbe(+lhs, +rhs, mpmath.mpf(10) ** (-precision))


@dataclass(frozen=True)
class MonotoneReport:
    p: object
    grid: tuple[Fraction, ...]
    values: tuple
    derivatives: tuple
    strictly_decreasing: bool
    constant: bool


def zb_monotone_in_b(p, grid: Iterable, precision: int = 30, *, diagnostic: bool = False) -> MonotoneReport:
    """E|Z_b / sqrt(1+2b)|^p over a grid of b, with the closed-form derivative sign.

    d/db (1+pb)(1+2b)^{-p/2} = p(2-p) b (1+2b)^{-p/2-1}.
    """
    p = _real(p)
    if to_mpf(p) < 3 and not diagnostic:
        raise ValueError("p >= 3 required (diagnostic=True to override)")
    grid = tuple(sorted(fractions(grid)))
    if any(not 0 <= x <= 1 for x in grid):
        raise ValueError("b must lie in [0, 1]")
    with mpmath.workdps(precision + 10):
        pm = to_mpf(p)
        values = tuple(abs_moment_closed_zb(p, x, precision) for x in grid)
        ders = tuple(
            gaussian_abs_moment(p, precision) * pm * (2 - pm) * to_mpf(x) * mpmath.power(1 + 2 * to_mpf(x), -pm / 2 - 1)
            for x in grid
        )
        dec = all(u > v for u, v in zip(values, values[1:]))
        const = all(abs(u - values[0]) <= mpmath.mpf(10) ** (-precision) for u in values)
        return MonotoneReport(p, grid, values, ders, dec, const)


def sample(law: GaussPolyLaw, seed: int, count: int) -> np.ndarray:
    """Draw sum_j sqrt(b_j) X_j + sqrt(a - sum b) G with X_j ~ Z_1.

    |Z_1| is chi-distributed with three degrees of freedom.
    """
    if not law.is_probability_law:
        raise ValueError("need sum(b) <= a")
    rng = np.random.default_rng(seed)
    out = np.sqrt(float(law.gaussian_excess)) * rng.standard_normal(count)
    for b in law.b:
        radius = np.sqrt(rng.chisquare(3, size=count))
        sign = rng.choice((-1.0, 1.0), size=count)
        out += np.sqrt(float(b)) * sign * radius
    return out
