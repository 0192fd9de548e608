"""Exact even moments and the sharp Gaussian moment-comparison predicate.

Moments of the supported symmetric laws are exact rationals.  The
normalized sequence ``r_n = E X^{2n} / E G^{2n}`` (G standard Gaussian)
carries all the structure: it is log-concave for type L variables, and the
comparison ``||X||_q / ||G||_q <= ||X||_p / ||G||_p`` for even p <= q is the
statement ``r_{q/2}^{p/2} <= r_{p/2}^{q/2}``, which is checked without
extracting roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from ._rational import binom, double_factorial_odd, fractions, to_fraction
from .sequences import LogConcavity, elementary_symmetric

__all__ = [
    "MomentSequence",
    "LatticeDistribution",
    "GaussPolyLaw",
    "Comparison",
    "gaussian_even_moment",
    "gaussian_abs_moment",
    "even_moments_lattice",
    "even_moments_gausspoly",
    "moments_of_independent_sum",
    "check_r_logconcave",
    "check_moment_comparison",
    "point_mass",
    "rademacher_moments",
    "to_mpf",
]


def to_mpf(x) -> mpmath.mpf:
    if isinstance(x, str):
        x = to_fraction(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def gaussian_even_moment(n: int) -> int:
    """E G^{2n} = (2n-1)!! for a standard Gaussian G."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return double_factorial_odd(n)


def gaussian_abs_moment(p, precision: int = 30) -> mpmath.mpf:
    """E|G|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi), to ``precision`` digits.

    Even integer p returns the exact double factorial; odd integer p uses
    Gamma at an integer argument.
    """
    if precision <= 0:
        raise ValueError("precision must be a positive number of digits")
    exact = None if isinstance(p, (float, mpmath.mpf)) else to_fraction(p)
    if (exact if exact is not None else p) < 0:
        raise ValueError("p must be nonnegative")
    with mpmath.workdps(precision + 10):
        if exact is not None and exact.denominator == 1:
            k = exact.numerator
            if k % 2 == 0:
                return mpmath.mpf(gaussian_even_moment(k // 2))
            # Gamma((k+1)/2) = ((k-1)/2)!
            return mpmath.sqrt(mpmath.mpf(2) ** k) * mpmath.factorial((k - 1) // 2) / mpmath.sqrt(mpmath.pi)
        p = to_mpf(exact if exact is not None else p)
        return mpmath.power(2, p / 2) * mpmath.gamma((p + 1) / 2) / mpmath.sqrt(mpmath.pi)


@dataclass(frozen=True)
class MomentSequence:
    """Even moments m_n = E X^{2n}, n = 0..N, and r_n = m_n / (2n-1)!!."""

    even_moments: tuple[Fraction, ...]

    def __post_init__(self):
        m = fractions(self.even_moments)
        if not m:
            raise ValueError("empty moment sequence")
        if m[0] != 1:
            raise ValueError("m_0 must be 1")
        if any(x < 0 for x in m):
            raise ValueError("even moments are nonnegative")
        object.__setattr__(self, "even_moments", m)

    @classmethod
    def from_r(cls, r: Sequence) -> "MomentSequence":
        return cls(tuple(x * gaussian_even_moment(n) for n, x in enumerate(fractions(r))))

    @property
    def r(self) -> tuple[Fraction, ...]:
        return tuple(m / gaussian_even_moment(n) for n, m in enumerate(self.even_moments))

    @property
    def N(self) -> int:
        return len(self.even_moments) - 1

    def __len__(self) -> int:
        return len(self.even_moments)

    def truncated(self, N: int) -> "MomentSequence":
        return MomentSequence(self.even_moments[: N + 1])


def point_mass(N: int) -> MomentSequence:
    return MomentSequence((Fraction(1),) + (Fraction(0),) * N)


def rademacher_moments(N: int) -> MomentSequence:
    return MomentSequence((Fraction(1),) * (N + 1))


@dataclass(frozen=True)
class LatticeDistribution:
    """Symmetric law on the integers: P(X = 0) = p_0, P(X = +-k) = p_k."""

    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = fractions(self.p)
        if not p:
            raise ValueError("need at least p_0")
        if any(x < 0 for x in p):
            raise ValueError("probabilities must be nonnegative")
        total = p[0] + 2 * sum(p[1:], Fraction(0))
        if total != 1:
            raise ValueError(f"p_0 + 2 sum p_k must equal 1, got {total}")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        """Largest atom actually carrying mass."""
        for k in range(len(self.p) - 1, 0, -1):
            if self.p[k]:
                return k
        return 0

    @classmethod
    def rademacher(cls) -> "LatticeDistribution":
        return cls((Fraction(0), Fraction(1, 2)))

    @classmethod
    def three_atom(cls, beta) -> "LatticeDistribution":
        """P(X = 0) = 1 - beta, P(X = +-1) = beta / 2."""
        beta = to_fraction(beta)
        return cls((1 - beta, beta / 2))

    @classmethod
    def uniform(cls, n: int, p0=Fraction(0)) -> "LatticeDistribution":
        """Uniform on {+-1, ..., +-n} with an extra atom p0 at zero."""
        p0 = to_fraction(p0)
        pk = (1 - p0) / (2 * n)
        return cls((p0,) + (pk,) * n)

    def atoms(self) -> list[tuple[int, Fraction]]:
        out = [(0, self.p[0])] if self.p[0] else []
        for k in range(1, len(self.p)):
            if self.p[k]:
                out += [(-k, self.p[k]), (k, self.p[k])]
        return sorted(out)


@dataclass(frozen=True)
class GaussPolyLaw:
    """Law with moment generating function exp(a z^2 / 2) prod(1 + b_j z^2).

    Equivalently the characteristic function is exp(-a t^2/2) prod(1 - b_j t^2).
    It is a probability law whenever sum(b) <= a; outside that regime it is
    still a formal object whose moments can be computed.
    """

    a: Fraction
    b: tuple[Fraction, ...] = ()

    def __post_init__(self):
        a = to_fraction(self.a)
        b = fractions(self.b)
        if a <= 0:
            raise ValueError("a must be positive")
        if any(x < 0 for x in b):
            raise ValueError("b_j must be nonnegative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zb(cls, b) -> "GaussPolyLaw":
        """Z_b: characteristic function exp(-t^2/2)(1 - b t^2)."""
        return cls(Fraction(1), (to_fraction(b),))

    @property
    def variance(self) -> Fraction:
        return self.a + 2 * sum(self.b, Fraction(0))

    @property
    def hadamard_alphas(self) -> tuple[Fraction, ...]:
        """Zero parameters alpha_j = 2 b_j of the factor prod(1 + alpha_j z^2 / 2)."""
        return tuple(2 * x for x in self.b if x)

    @property
    def is_probability_law(self) -> bool:
        return sum(self.b, Fraction(0)) <= self.a

    def scaled(self, c2) -> "GaussPolyLaw":
        """Law of c X given c^2 = ``c2``."""
        c2 = to_fraction(c2)
        return GaussPolyLaw(self.a * c2, tuple(x * c2 for x in self.b))

    def normalized(self) -> tuple["GaussPolyLaw", Fraction]:
        """Rescale so that sum(b) = 1; returns (law, c^2) with law = c X.

        Laws without b-factors are returned unchanged with c^2 = 1.
        """
        total = sum(self.b, Fraction(0))
        if not total:
            return self, Fraction(1)
        c2 = 1 / total
        return self.scaled(c2), c2

    @property
    def gaussian_excess(self) -> Fraction:
        """a - sum(b): the variance of the independent Gaussian component."""
        return self.a - sum(self.b, Fraction(0))

    def convolve(self, other: "GaussPolyLaw") -> "GaussPolyLaw":
        """Law of X + Y for independent X, Y (characteristic functions multiply)."""
        return GaussPolyLaw(self.a + other.a, self.b + other.b)


def even_moments_lattice(d: LatticeDistribution, N: int) -> MomentSequence:
    if N < 0:
        raise ValueError("N must be nonnegative")
    moments = []
    for n in range(N + 1):
        m = d.p[0] if n == 0 else Fraction(0)  # 0^0 = 1
        m += sum((2 * pk * k ** (2 * n) for k, pk in enumerate(d.p) if k), Fraction(0))
        moments.append(m)
    return MomentSequence(tuple(moments))


def even_moments_gausspoly(law: GaussPolyLaw, N: int) -> MomentSequence:
    """r_n = sum_k C(n,k) a^{n-k} sigma_k k!, sigma_k the symmetric functions of {2 b_j}."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    sigma = elementary_symmetric(law.hadamard_alphas, N)
    fact = [1]
    for k in range(1, N + 1):
        fact.append(fact[-1] * k)
    r = []
    for n in range(N + 1):
        r.append(sum((binom(n, k) * law.a ** (n - k) * sigma[k] * fact[k] for k in range(n + 1)), Fraction(0)))
    return MomentSequence.from_r(r)


def moments_of_independent_sum(mX: MomentSequence, mY: MomentSequence) -> MomentSequence:
    """Even moments of X + Y for independent symmetric X, Y (odd terms vanish)."""
    N = min(mX.N, mY.N)
    x, y = mX.even_moments, mY.even_moments
    out = []
    for n in range(N + 1):
        out.append(sum((binom(2 * n, 2 * k) * x[k] * y[n - k] for k in range(n + 1)), Fraction(0)))
    return MomentSequence(tuple(out))


def check_r_logconcave(seq: MomentSequence) -> LogConcavity:
    """First n with r_n^2 < r_{n-1} r_{n+1}, or ``holds`` on the available prefix."""
    r = seq.r
    seen_zero = None
    for n, x in enumerate(r):
        if x == 0 and seen_zero is None:
            seen_zero = n
        elif x != 0 and seen_zero is not None:
            return LogConcavity("support-gap", seen_zero)
    for n in range(1, len(r) - 1):
        if r[n] * r[n] < r[n - 1] * r[n + 1]:
            return LogConcavity("fails", n)
    if len(r) < 3:
        return LogConcavity("holds", vacuous=True, detail="fewer than three terms")
    return LogConcavity("holds")


@dataclass(frozen=True)
class Comparison:
    """Outcome of the even-moment comparison for the pair (p, q).

    ``slack = r_{p/2}^{q/2} - r_{q/2}^{p/2}``; nonnegative exactly when
    ``||X||_q / ||G||_q <= ||X||_p / ||G||_p``.
    """

    p: int
    q: int
    slack: Fraction

    @property
    def holds(self) -> bool:
        return self.slack >= 0

    def __bool__(self) -> bool:
        return self.holds


def _check_pair(p: int, q: int, N: int) -> None:
    if p % 2 or q % 2:
        raise ValueError("p and q must be even integers")
    if not 2 <= p <= q:
        raise ValueError("need 2 <= p <= q")
    if q // 2 > N:
        raise ValueError(f"q/2 = {q // 2} exceeds the available moments (N = {N})")


def check_moment_comparison(seq: MomentSequence, p: int, q: int) -> Comparison:
    _check_pair(p, q, seq.N)
    if p == q:
        return Comparison(p, q, Fraction(0))
    r = seq.r
    return Comparison(p, q, r[p // 2] ** (q // 2) - r[q // 2] ** (p // 2))
