"""Finite ferromagnetic spin systems by exact enumeration.

The joint law is

    rho(x) = Z^{-1} exp(sum_j h_j x_j + sum_{j,k} J_jk x_j x_k) prod_j mu_j(x_j)

with J >= 0, h >= 0 and symmetric site measures mu_j.  The quadratic form
runs over all ordered pairs, diagonal included.  Weights involve exp of
rationals, so everything downstream of the energies is carried in mpmath
interval arithmetic; verdicts are "inconclusive" rather than wrong when the
intervals are too wide to decide.
"""

from __future__ import annotations

import csv
import io
import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
from mpmath import iv

from ._rational import double_factorial_odd, fractions, to_fraction
from .moments import LatticeDistribution
from .polynomials import RootReport, SelfInversivePolynomial, numeric_roots

__all__ = [
    "SiteMeasure",
    "SpinSystem",
    "WeightedStateTable",
    "IntervalMoments",
    "FerroComparison",
    "enumerate_states",
    "linear_comb_moments",
    "ghost_spin",
    "ghost_equivalence_check",
    "lee_yang_polynomial",
    "lee_yang_roots",
    "ferro_moment_comparison",
    "interval_endpoints",
]

DEFAULT_CAP = 2_000_000
GUARD_DIGITS = 15


@contextmanager
def _interval_digits(digits: int) -> Iterator[None]:
    # mpmath's interval context has no workdps(); save and restore by hand
    saved = iv.prec
    iv.dps = digits
    try:
        yield
    finally:
        iv.prec = saved


def interval_endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Lower and upper endpoints of an interval as plain mpf numbers."""
    return mpmath.mpf(x.a), mpmath.mpf(x.b)


def _iv(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class SiteMeasure:
    """Finite symmetric probability measure; ``atoms`` is ((value, weight), ...) sorted by value."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for value, weight in self.atoms:
            value, weight = to_fraction(value), to_fraction(weight)
            if weight < 0:
                raise ValueError("negative weight")
            if weight:
                merged[value] = merged.get(value, Fraction(0)) + weight
        total = sum(merged.values(), Fraction(0))
        if total <= 0:
            raise ValueError("site measure has no mass")
        for value, weight in merged.items():
            if merged.get(-value) != weight:
                raise ValueError("site measure must be symmetric under x -> -x")
        atoms = tuple(sorted((v, w / total) for v, w in merged.items()))
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def rademacher(cls) -> "SiteMeasure":
        return cls(((Fraction(-1), Fraction(1)), (Fraction(1), Fraction(1))))

    @classmethod
    def three_point(cls, p0) -> "SiteMeasure":
        """Mass ``p0`` at 0, the rest split evenly between -1 and 1."""
        p0 = to_fraction(p0)
        return cls(((Fraction(-1), (1 - p0) / 2), (Fraction(0), p0), (Fraction(1), (1 - p0) / 2)))

    @classmethod
    def from_lattice(cls, d: LatticeDistribution) -> "SiteMeasure":
        return cls(tuple((Fraction(v), w) for v, w in d.atoms()))

    @property
    def support(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def is_integer(self) -> bool:
        return all(v.denominator == 1 for v in self.support)

    def to_lattice(self) -> LatticeDistribution:
        if not self.is_integer:
            raise ValueError("support is not integer")
        top = int(max(abs(v) for v in self.support))
        p = [Fraction(0)] * (top + 1)
        for v, w in self.atoms:
            if v >= 0:
                p[int(v)] = w
        return LatticeDistribution(tuple(p))


@dataclass(frozen=True)
class SpinSystem:
    sites: tuple[SiteMeasure, ...]
    J: tuple[tuple[Fraction, ...], ...]
    h: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.sites)
        J = tuple(fractions(row) for row in self.J)
        h = fractions(self.h)
        if len(J) != n or any(len(row) != n for row in J):
            raise ValueError(f"J must be {n} x {n}")
        if len(h) != n:
            raise ValueError(f"h must have length {n}")
        if any(x < 0 for row in J for x in row):
            raise ValueError("couplings must be nonnegative (ferromagnetic)")
        if any(x < 0 for x in h):
            raise ValueError("external field must be nonnegative")
        object.__setattr__(self, "sites", tuple(self.sites))
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "h", h)

    @classmethod
    def build(cls, sites: Sequence[SiteMeasure], J=None, h=None) -> "SpinSystem":
        n = len(sites)
        J = J if J is not None else [[0] * n for _ in range(n)]
        h = h if h is not None else [0] * n
        return cls(tuple(sites), tuple(tuple(row) for row in J), tuple(h))

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def state_count(self) -> int:
        count = 1
        for s in self.sites:
            count *= len(s.atoms)
        return count

    def energy(self, x: Sequence[Fraction]) -> Fraction:
        e = sum((hj * xj for hj, xj in zip(self.h, x)), Fraction(0))
        for j, row in enumerate(self.J):
            for k, Jjk in enumerate(row):
                if Jjk:
                    e += Jjk * x[j] * x[k]
        return e

    def symmetrized(self) -> "SpinSystem":
        """Same law with J replaced by (J + J^T)/2."""
        n = self.n
        J = tuple(tuple((self.J[j][k] + self.J[k][j]) / 2 for k in range(n)) for j in range(n))
        return SpinSystem(self.sites, J, self.h)


@dataclass(frozen=True)
class WeightedStateTable:
    states: tuple[tuple[Fraction, ...], ...]
    weights: tuple  # intervals
    Z: object  # interval
    digits: int

    def probabilities(self) -> tuple:
        with _interval_digits(self.digits):
            return tuple(w / self.Z for w in self.weights)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n = len(self.states[0]) if self.states else 0
        writer.writerow([f"x{j}" for j in range(n)] + ["weight_lo", "weight_hi"])
        for x, w in zip(self.states, self.weights):
            lo, hi = interval_endpoints(w)
            writer.writerow([str(v) for v in x] + [mpmath.nstr(lo, 20), mpmath.nstr(hi, 20)])
        return buf.getvalue()


def enumerate_states(sys: SpinSystem, precision: int = 50, *, cap: int = DEFAULT_CAP) -> WeightedStateTable:
    """Every configuration with its unnormalized weight, in lexicographic order."""
    if sys.state_count > cap:
        raise ValueError(f"{sys.state_count} states exceed the enumeration cap {cap}")
    digits = precision + GUARD_DIGITS
    states, weights = [], []
    with _interval_digits(digits):
        for combo in itertools.product(*(s.atoms for s in sys.sites)):
            x = tuple(v for v, _ in combo)
            mass = Fraction(1)
            for _, w in combo:
                mass *= w
            weights.append(iv.exp(_iv(sys.energy(x))) * _iv(mass))
            states.append(x)
        Z = iv.mpf(0)
        for w in weights:
            Z += w
    return WeightedStateTable(tuple(states), tuple(weights), Z, digits)


@dataclass(frozen=True)
class IntervalMoments:
    """Raw moments E S^k, k = 0..2N, as intervals; even part normalized into r."""

    raw: tuple
    digits: int

    @property
    def even_moments(self) -> tuple:
        return self.raw[::2]

    @property
    def r(self) -> tuple:
        with _interval_digits(self.digits):
            return tuple(m / double_factorial_odd(n) for n, m in enumerate(self.even_moments))


def linear_comb_moments(sys: SpinSystem, a: Sequence, N: int, precision: int = 50, *, table: WeightedStateTable | None = None) -> IntervalMoments:
    """Moments of S = sum_j a_j X_j under rho, up to order 2N."""
    a = fractions(a)
    if len(a) != sys.n:
        raise ValueError("coefficient vector has the wrong length")
    if any(x < 0 for x in a):
        raise ValueError("coefficients must be nonnegative")
    table = table or enumerate_states(sys, precision)
    with _interval_digits(table.digits):
        raw = [iv.mpf(0)] * (2 * N + 1)
        for x, w in zip(table.states, table.weights):
            s = sum((aj * xj for aj, xj in zip(a, x)), Fraction(0))
            power = Fraction(1)
            for k in range(2 * N + 1):
                if power:
                    raw[k] += w * _iv(power)
                power *= s
        raw = tuple(m / table.Z for m in raw)
    return IntervalMoments(raw, table.digits)


def ghost_spin(sys: SpinSystem) -> SpinSystem:
    """Absorb the field into a Rademacher site 0: J'_{0k} = J'_{k0} = h_k / 2, h' = 0."""
    n = sys.n
    half = tuple(x / 2 for x in sys.h)
    J = [(Fraction(0),) + half]
    for j in range(n):
        J.append((half[j],) + sys.J[j])
    return SpinSystem((SiteMeasure.rademacher(),) + sys.sites, tuple(J), (Fraction(0),) * (n + 1))


def ghost_equivalence_check(sys: SpinSystem, precision: int = 50) -> mpmath.mpf:
    """Max |P(eps, eps X) = y) - rho'(y)| over all configurations y (an upper bound).

    The left law pairs X ~ rho with an independent Rademacher eps; the right
    one is the ghost-spin system.
    """
    left_table = enumerate_states(sys, precision)
    right_table = enumerate_states(ghost_spin(sys), precision)
    digits = max(left_table.digits, right_table.digits)
    with _interval_digits(digits):
        half = iv.mpf(1) / 2
        left: dict = {}
        for x, p in zip(left_table.states, left_table.probabilities()):
            for e in (Fraction(-1), Fraction(1)):
                key = (e,) + tuple(e * v for v in x)
                left[key] = left.get(key, iv.mpf(0)) + half * p
        right = dict(zip(right_table.states, right_table.probabilities()))
        worst = mpmath.mpf(0)
        zero = iv.mpf(0)
        for key in sorted(set(left) | set(right)):
            diff = left.get(key, zero) - right.get(key, zero)
            worst = max(worst, interval_endpoints(abs(diff))[1])
    return worst


def lee_yang_polynomial(sys: SpinSystem, a: Sequence[int], precision: int = 50, *, ghost: bool = True) -> SelfInversivePolynomial:
    """E exp(zS) as a polynomial in w = e^z, shifted to start at w^0.

    With a nonzero field the sum S = sum a_j X_j is not symmetric; when
    ``ghost`` is set the polynomial of eps S is returned instead, computed
    from the ghost-spin system (site 0 weighted by 0).  Both have the same
    even moments.
    """
    a = [int(x) for x in a]
    if any(x < 0 for x in a):
        raise ValueError("coefficients must be nonnegative integers")
    if not all(s.is_integer for s in sys.sites):
        raise ValueError("site supports must be integer")
    if any(sys.h):
        if not ghost:
            raise ValueError("nonzero field: the law of S is not symmetric")
        sys, a = ghost_spin(sys), [0] + a
    table = enumerate_states(sys, precision)
    D = sum(aj * int(max(abs(v) for v in s.support)) for aj, s in zip(a, sys.sites))
    with _interval_digits(table.digits):
        coeffs = [iv.mpf(0)] * (2 * D + 1)
        for x, w in zip(table.states, table.weights):
            s = sum(aj * int(xj) for aj, xj in zip(a, x))
            coeffs[s + D] += w
        coeffs = [c / table.Z for c in coeffs]
        for k in range(len(coeffs)):
            if interval_endpoints(abs(coeffs[k] - coeffs[-1 - k]))[0] > 0:
                raise AssertionError("Laurent polynomial is not palindromic")
        mids = [c.mid for c in coeffs]
    with mpmath.workdps(table.digits):
        mids = [mpmath.mpf(m) for m in mids]
        while len(mids) > 1 and mids[-1] == 0:
            mids = mids[1:-1]  # S never reaches +-D
        return SelfInversivePolynomial.from_approximate(mids, rtol=mpmath.mpf(10) ** (-precision))


def lee_yang_roots(sys: SpinSystem, a: Sequence[int], precision: int = 50) -> RootReport | None:
    """Numeric zeros of :func:`lee_yang_polynomial`; None when S is degenerate."""
    Q = lee_yang_polynomial(sys, a, precision)
    if Q.degree == 0:
        return None
    return numeric_roots(Q, tol=1e-20, dps=max(40, precision))


@dataclass(frozen=True)
class FerroComparison:
    p: int
    q: int
    slack: object  # interval containing r_{p/2}^{q/2} - r_{q/2}^{p/2}

    @property
    def verdict(self) -> str:
        lo, hi = interval_endpoints(self.slack)
        if lo >= 0:
            return "holds"
        if hi < 0:
            return "fails"
        return "inconclusive"

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def ferro_moment_comparison(sys: SpinSystem, a: Sequence, p: int, q: int, precision: int = 50, *, moments: IntervalMoments | None = None) -> FerroComparison:
    """Even-moment comparison for S = sum a_j X_j with interval error bars."""
    if p % 2 or q % 2 or not 2 <= p <= q:
        raise ValueError("need even 2 <= p <= q")
    if p == q:
        with _interval_digits(precision):
            return FerroComparison(p, q, iv.mpf(0))
    m = moments if moments is not None else linear_comb_moments(sys, a, q // 2, precision)
    r = m.r
    with _interval_digits(m.digits):
        slack = r[p // 2] ** (q // 2) - r[q // 2] ** (p // 2)
    return FerroComparison(p, q, slack)
