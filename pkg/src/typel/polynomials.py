"""Unit-circle root location for self-inversive polynomials.

Coefficient lists are ordered from the constant term upwards.  Three
routes are provided:

* :func:`schur_cohn_unit_circle` -- exact.  Cohn's theorem turns "all zeros
  of the self-inversive Q on |w| = 1" into "all zeros of Q' in the closed
  unit disk", which the Schur-Cohn recursion decides in rational
  arithmetic.  Zeros of Q' on the circle (multiple zeros of Q) are split off
  with ``gcd(f, f*)`` and handled recursively.
* :func:`unit_circle_zero_count` -- exact and independent of the above: the
  substitution x = w + 1/w maps Q to a real polynomial of half the degree
  whose zeros in [-2, 2] are counted with Sturm sequences.
* :func:`numeric_roots` -- Aberth-Ehrlich simultaneous iteration in double
  precision, refined with mpmath.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
import sympy

from ._rational import fractions

log = logging.getLogger(__name__)

__all__ = [
    "SelfInversivePolynomial",
    "SchurCohnResult",
    "RootReport",
    "schur_cohn_unit_circle",
    "closed_disk_test",
    "strict_disk_test",
    "unit_circle_zero_count",
    "numeric_roots",
    "aberth",
]

_X = sympy.Symbol("x")

ON_CIRCLE = "all-on-circle"
OFF_CIRCLE = "not-all-on-circle"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SelfInversivePolynomial:
    """Palindromic coefficient vector q_0..q_{2n}: w^{2n} Q(1/w) = Q(w).

    Coefficients are exact Fractions unless built with
    :meth:`from_approximate`, in which case they are mpmath reals.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)
        if not c or all(x == 0 for x in c):
            raise ValueError("zero polynomial")
        if all(isinstance(x, (int, Fraction)) for x in c):
            c = fractions(c)
        if c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if any(c[k] != c[-1 - k] for k in range(len(c))):
            raise ValueError("coefficients are not palindromic")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_approximate(cls, coeffs: Sequence, rtol=mpmath.mpf("1e-30")) -> "SelfInversivePolynomial":
        """Accept floating coefficients that are palindromic to ``rtol`` and symmetrize them."""
        c = [mpmath.mpf(x) for x in coeffs]
        scale = max(abs(x) for x in c)
        for k in range(len(c)):
            if abs(c[k] - c[-1 - k]) > rtol * scale:
                raise ValueError(f"coefficient {k} breaks the palindrome beyond tolerance")
        sym = tuple((c[k] + c[-1 - k]) / 2 for k in range(len(c)))
        return cls(sym)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.coeffs)

    def __call__(self, w):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc


# -- exact polynomial helpers (coefficients low -> high) ---------------------

def _trim(c: list) -> list:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _derivative(c: Sequence[Fraction]) -> list[Fraction]:
    return _trim([k * c[k] for k in range(1, len(c))] or [Fraction(0)])


def _reverse(c: Sequence[Fraction]) -> list[Fraction]:
    return list(reversed(c))


def _to_sympy(c: Sequence[Fraction]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(c)], _X, domain=sympy.QQ)


def _from_sympy(p: sympy.Poly) -> list[Fraction]:
    out = []
    for x in reversed(p.all_coeffs()):
        x = sympy.Rational(x)
        out.append(Fraction(int(x.p), int(x.q)))
    return _trim(out)


def _scaled(c: Sequence[Fraction], rho: Fraction) -> list[Fraction]:
    return [x * rho ** k for k, x in enumerate(c)]


def _primitive(c: Sequence[Fraction]) -> list[Fraction]:
    """Positive multiple of c with coprime integer coefficients."""
    scale = math.lcm(*(x.denominator for x in c))
    ints = [x.numerator * (scale // x.denominator) for x in c]
    g = math.gcd(*ints) or 1
    return [Fraction(x // g) for x in ints]


def _schur_step(c: list[Fraction]) -> list[Fraction]:
    # (c_d f - c_0 f*) / z has degree d-1 and leading coefficient c_d^2 - c_0^2;
    # a positive rescaling changes neither the zeros nor later signs, and
    # without it the coefficient size doubles at every step
    d = len(c) - 1
    rev = _reverse(c)
    g = [c[d] * c[k] - c[0] * rev[k] for k in range(d + 1)]
    return _primitive(g[1:])


def strict_disk_test(c: Sequence[Fraction]) -> bool | None:
    """Schur-Cohn recursion: are all zeros of c strictly inside |z| < 1?

    Returns None when a vanishing parameter c_d^2 - c_0^2 makes the
    recursion singular.
    """
    c = _trim(list(c))
    while len(c) > 1:
        gamma = c[-1] ** 2 - c[0] ** 2
        if gamma < 0:
            return False
        if gamma == 0:
            return None
        c = _trim(_schur_step(c))
    return True


def _strict_with_rescaling(c: list[Fraction], max_k: int) -> tuple[bool | None, str]:
    verdict = strict_disk_test(c)
    if verdict is not None:
        return verdict, "direct"
    # c has no zeros on |z| = 1 here.  A pass at radius 1 - eps proves
    # "inside"; a failure at radius 1 + eps proves "outside".
    for k in range(1, max_k + 1):
        eps = Fraction(1, 10 ** k)
        if strict_disk_test(_scaled(c, 1 - eps)) is True:
            return True, f"rescaled(1-1e-{k})"
        if strict_disk_test(_scaled(c, 1 + eps)) is False:
            return False, f"rescaled(1+1e-{k})"
    return None, "unresolved"


@dataclass
class _Trace:
    notes: list[str] = field(default_factory=list)
    multiple_on_circle: bool = False


def closed_disk_test(c: Sequence[Fraction], *, max_k: int = 40, _trace: _Trace | None = None) -> bool | None:
    """Are all zeros of the polynomial in the closed unit disk |z| <= 1?

    Zeros on the circle and inversion-symmetric pairs are common zeros of
    f and f*; they are split off as g = gcd(f, f*), which must then have
    every zero on the circle (checked through g' by Cohn's theorem).  The
    cofactor is tested strictly.
    """
    trace = _trace if _trace is not None else _Trace()
    c = _trim(fractions(c))
    if len(c) == 1:
        return True
    f = _to_sympy(c)
    g = sympy.gcd(f, _to_sympy(_reverse(c)))
    if g.degree() > 0:
        gc = _from_sympy(g)
        trace.notes.append(f"split off gcd(f, f*) of degree {len(gc) - 1}")
        on = _on_circle(gc, max_k, trace)
        if on is False:
            return False
        trace.multiple_on_circle |= on is True
        rest = closed_disk_test(_from_sympy(sympy.div(f, g)[0]), max_k=max_k, _trace=trace)
        if rest is False:
            return False
        return None if on is None or rest is None else True
    verdict, how = _strict_with_rescaling(c, max_k)
    if how != "direct":
        trace.notes.append(how)
    return verdict


def _on_circle(c: list[Fraction], max_k: int, trace: _Trace) -> bool | None:
    # c is self-inversive up to sign (a gcd of f and f*)
    if len(c) == 1:
        return True
    if c[0] == 0:
        return False
    return closed_disk_test(_derivative(c), max_k=max_k, _trace=trace)


@dataclass(frozen=True)
class SchurCohnResult:
    verdict: str  # all-on-circle | not-all-on-circle | degenerate
    notes: tuple[str, ...] = ()
    multiple_zeros: bool = False

    @property
    def on_circle(self) -> bool:
        return self.verdict == ON_CIRCLE


def schur_cohn_unit_circle(Q: SelfInversivePolynomial, *, max_k: int = 40) -> SchurCohnResult:
    """Exact decision whether every zero of Q lies on the unit circle."""
    if not Q.is_exact:
        raise TypeError("the exact test needs rational coefficients")
    if Q.degree == 0:
        return SchurCohnResult(ON_CIRCLE, ("constant polynomial: no zeros",))
    trace = _Trace()
    verdict = closed_disk_test(_derivative(Q.coeffs), max_k=max_k, _trace=trace)
    label = {True: ON_CIRCLE, False: OFF_CIRCLE, None: DEGENERATE}[verdict]
    return SchurCohnResult(label, tuple(trace.notes), trace.multiple_on_circle)


def unit_circle_zero_count(Q: SelfInversivePolynomial) -> int:
    """Number of zeros of Q on |w| = 1, with multiplicity, via x = w + 1/w.

    w^{-n} Q(w) = q_n + sum_k q_{n+k} V_k(x) with V_0 = 2, V_1 = x,
    V_{k+1} = x V_k - V_{k-1}.  Each zero of that polynomial in [-2, 2]
    accounts for two zeros of Q on the circle.
    """
    if not Q.is_exact:
        raise TypeError("exact coefficients required")
    c = Q.coeffs
    n = Q.degree // 2
    if Q.degree % 2:
        # odd palindromic degree: w = -1 is a zero; divide it out
        quotient, rem = sympy.div(_to_sympy(c), sympy.Poly(_X + 1, _X, domain=sympy.QQ))
        assert rem.is_zero
        return 1 + unit_circle_zero_count(SelfInversivePolynomial(tuple(_from_sympy(quotient))))
    x = _X
    V = [sympy.Integer(2), x]
    for _ in range(2, n + 1):
        V.append(sympy.expand(x * V[-1] - V[-2]))
    expr = sympy.Rational(c[n].numerator, c[n].denominator)
    for k in range(1, n + 1):
        q = c[n + k]
        expr += sympy.Rational(q.numerator, q.denominator) * V[k]
    T = sympy.Poly(expr, x, domain=sympy.QQ)
    _, factors = T.sqf_list()
    count = 0
    for factor, mult in factors:
        count += mult * factor.count_roots(-2, 2)
    return 2 * count


# -- numeric roots -------------------------------------------------------------

def aberth(coeffs: Sequence[complex], *, maxiter: int = 500, tol: float = 1e-15) -> tuple[np.ndarray, bool]:
    """Aberth-Ehrlich iteration in complex128; coefficients low -> high.

    Starts from a rotated circle of radius (|c_0|/|c_d|)^{1/d}, which is 1
    for self-inversive input.  Returns (roots, converged).
    """
    c = np.asarray(coeffs, dtype=complex)
    d = len(c) - 1
    if d < 1:
        return np.empty(0, dtype=complex), True
    high = c[::-1]
    dhigh = np.polyder(high)
    radius = (abs(c[0]) / abs(c[-1])) ** (1.0 / d) if c[0] != 0 else 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    converged = False
    for _ in range(maxiter):
        p = np.polyval(high, z)
        dp = np.polyval(dhigh, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(np.abs(z), 1.0)):
            converged = True
            break
    return z, converged


def _aberth_mp(coeffs_high: list, z: list, maxiter: int) -> tuple[list, bool]:
    # stops once every residual is at the rounding level of its own evaluation
    d = len(z)
    eps = mpmath.eps * 16
    abs_high = [abs(c) for c in coeffs_high]
    for _ in range(maxiter):
        new = list(z)
        done = True
        for i in range(d):
            p, dp = mpmath.polyval(coeffs_high, z[i], derivative=True)
            if abs(p) <= eps * mpmath.polyval(abs_high, abs(z[i])):
                continue
            done = False
            if dp == 0:
                continue
            ratio = p / dp
            s = mpmath.fsum(1 / (z[i] - z[j]) for j in range(d) if j != i)
            w = ratio / (1 - ratio * s)
            if mpmath.isfinite(w):
                new[i] = z[i] - w
        z = new
        if done:
            return z, True
    return z, False


def _min_separation(z: list):
    if len(z) < 2:
        return mpmath.inf
    return min(abs(z[i] - z[j]) for i in range(len(z)) for j in range(i))


@dataclass(frozen=True)
class RootReport:
    roots: tuple  # mpmath.mpc
    max_deviation: mpmath.mpf  # max_i | |w_i| - 1 |
    pairing_error: mpmath.mpf  # max_i dist(1/conj(w_i), roots)
    max_residual: mpmath.mpf  # max_i |Q(w_i)| / ||Q||_1
    converged: bool

    @property
    def on_circle(self) -> bool:
        return self.converged and self.max_deviation < mpmath.mpf("1e-9")


def _cluster_centroids(z: list, radius) -> list:
    # members of a tight cluster carry error ~ eps^(1/m); their mean is well conditioned
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i):
            if abs(z[i] - z[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(z)
    for members in groups.values():
        if len(members) > 1:
            centre = mpmath.fsum(z[i] for i in members) / len(members)
            for i in members:
                out[i] = centre
    return out


def _solve(coeffs: Sequence, dps: int, maxiter: int, to_mp) -> tuple[list, bool]:
    if len(coeffs) == 2:
        with mpmath.workdps(dps):
            return [-to_mp(coeffs[0]) / to_mp(coeffs[1])], True
    start, _ = aberth([complex(to_mp(x)) for x in coeffs])
    z = [mpmath.mpc(complex(x)) for x in start]
    converged = False
    # clustered zeros are only accurate to about eps^(1/multiplicity); buy
    # that back with extra digits, then average what is still clustered
    for work in (dps, 2 * dps, 4 * dps):
        with mpmath.workdps(work):
            high = [to_mp(x) for x in reversed(coeffs)]
            z, converged = _aberth_mp(high, [mpmath.mpc(w) for w in z], maxiter)
            if converged and _min_separation(z) > mpmath.mpf("1e-2"):
                break
    with mpmath.workdps(4 * dps):
        z = _cluster_centroids(z, mpmath.mpf("1e-6"))
    return z, converged


def numeric_roots(Q: SelfInversivePolynomial | Sequence, tol: float = 1e-12, *, dps: int = 40, maxiter: int = 300) -> RootReport:
    """All complex roots of Q with unit-circle and inversion-symmetry diagnostics.

    Exact input is first split into square-free factors, so multiple zeros
    are computed as simple zeros of a factor and repeated.  Approximate
    input is refined at up to 4 ``dps`` digits and tight clusters are
    replaced by their centroid.  ``converged`` is False when the refinement
    hits ``maxiter`` or the residual exceeds ``tol``.
    """
    coeffs = Q.coeffs if isinstance(Q, SelfInversivePolynomial) else tuple(Q)
    if len(coeffs) < 2:
        raise ValueError("degree must be at least 1")

    def to_mp(x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpmathify(x)

    if all(isinstance(x, (int, Fraction)) for x in coeffs):
        _, factors = _to_sympy(fractions(coeffs)).sqf_list()
        z, converged = [], True
        for factor, mult in factors:
            if factor.degree() < 1:
                continue
            roots, ok = _solve(_from_sympy(factor), dps, maxiter, to_mp)
            z += roots * mult
            converged &= ok
    else:
        z, converged = _solve(coeffs, dps, maxiter, to_mp)
    with mpmath.workdps(dps):
        mp_coeffs = [to_mp(x) for x in coeffs]
        high = list(reversed(mp_coeffs))
        norm = mpmath.fsum(abs(x) for x in mp_coeffs)
        residual = max(abs(mpmath.polyval(high, w)) for w in z) / norm
        deviation = max(abs(abs(w) - 1) for w in z)
        pairing = mpmath.mpf(0)
        for w in z:
            mirror = 1 / mpmath.conj(w) if w != 0 else mpmath.inf
            pairing = max(pairing, min(abs(mirror - v) for v in z))
        converged = converged and residual < tol
        if not converged:
            log.warning("numeric_roots: iteration did not converge (residual %s)", mpmath.nstr(residual, 5))
        z = sorted((+w for w in z), key=lambda w: (cmath.phase(complex(w)), float(abs(w))))
        return RootReport(tuple(z), +deviation, +pairing, +residual, converged)
