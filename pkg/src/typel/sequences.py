"""Exact algebra of nonnegative log-concave sequences.

Everything here works on tuples of :class:`fractions.Fraction` and never
rounds.  The functions cover the machinery behind the even-moment argument
(elementary symmetric functions, Newton's inequalities, binomial
convolution) and the coefficient-level proof that the exponential
generating function of a log-concave sequence is log-concave on the
positive half-line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ._rational import binom, fractions

__all__ = [
    "NonnegSequence",
    "SignSequence",
    "LogConcavity",
    "NewtonReport",
    "EGFPoint",
    "EGFReport",
    "elementary_symmetric",
    "newton_check",
    "logconcave_check",
    "factorial_weighted",
    "binomial_convolution",
    "egf_logconcavity_grid",
    "gurvits_coefficient_check",
    "gurvits_coefficient_unshifted",
    "sk_sequence",
    "sk_unfolded",
    "sk_parabola",
    "sign_pairing_inequality",
]


@dataclass(frozen=True)
class NonnegSequence:
    a: tuple[Fraction, ...]

    def __post_init__(self):
        a = fractions(self.a)
        if any(x < 0 for x in a):
            raise ValueError("sequence entries must be nonnegative")
        object.__setattr__(self, "a", a)

    def __len__(self) -> int:
        return len(self.a)

    def __getitem__(self, n: int) -> Fraction:
        # zero outside the stored window
        if 0 <= n < len(self.a):
            return self.a[n]
        return Fraction(0)

    def shifted(self, k: int) -> "NonnegSequence":
        """The sequence (a_{n+k})_n, i.e. the coefficients of the k-th derivative of the EGF."""
        return NonnegSequence(self.a[k:] or (Fraction(0),))


@dataclass(frozen=True)
class SignSequence:
    s: tuple[Fraction, ...]
    b: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "s", fractions(self.s))
        if self.b is not None:
            object.__setattr__(self, "b", fractions(self.b))


@dataclass(frozen=True)
class LogConcavity:
    """Outcome of a log-concavity test.

    ``status`` is ``"holds"``, ``"fails"`` (``a_n^2 < a_{n-1} a_{n+1}`` at
    ``index``) or ``"support-gap"`` (a zero strictly inside the support at
    ``index``).  ``vacuous`` flags inputs too short to test anything.
    """

    status: str
    index: int | None = None
    vacuous: bool = False
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def __bool__(self) -> bool:
        return self.holds


def _as_seq(seq) -> tuple[Fraction, ...]:
    if isinstance(seq, NonnegSequence):
        return seq.a
    return fractions(seq)


def elementary_symmetric(alphas: Iterable, K: int | None = None) -> tuple[Fraction, ...]:
    """sigma_0..sigma_K of ``alphas``, by multiplying out prod(1 + alpha_j t).

    ``K`` defaults to ``len(alphas)``; indices past the number of parameters
    are zero.
    """
    alphas = fractions(alphas)
    if K is None:
        K = len(alphas)
    if K < 0:
        raise ValueError("K must be nonnegative")
    sigma = [Fraction(0)] * (K + 1)
    sigma[0] = Fraction(1)
    for i, alpha in enumerate(alphas):
        for k in range(min(i + 1, K), 0, -1):
            sigma[k] += alpha * sigma[k - 1]
    return tuple(sigma)


@dataclass(frozen=True)
class NewtonReport:
    holds: bool
    slacks: dict[int, Fraction] = field(default_factory=dict)

    @property
    def worst(self) -> tuple[int, Fraction] | None:
        if not self.slacks:
            return None
        k = min(self.slacks, key=lambda j: (self.slacks[j], j))
        return k, self.slacks[k]


def newton_check(alphas: Iterable, n: int | None = None) -> NewtonReport:
    """Check Newton's inequalities for the normalized symmetric means.

    For ``1 <= k <= n-1`` tests
    ``(sigma_k/C(n,k))^2 >= (sigma_{k-1}/C(n,k-1)) (sigma_{k+1}/C(n,k+1))``
    exactly.  ``n`` defaults to the number of parameters; a larger ``n``
    pads with zeros.
    """
    alphas = fractions(alphas)
    if n is None:
        n = len(alphas)
    if n < len(alphas):
        raise ValueError("n must be at least the number of parameters")
    if any(x < 0 for x in alphas):
        raise ValueError("Newton's inequalities are checked for nonnegative parameters")
    sigma = elementary_symmetric(alphas, n)
    slacks = {}
    for k in range(1, n):
        mean = [sigma[j] / binom(n, j) for j in (k - 1, k, k + 1)]
        slacks[k] = mean[1] ** 2 - mean[0] * mean[2]
    return NewtonReport(all(v >= 0 for v in slacks.values()), slacks)


def logconcave_check(seq, derived: bool = False) -> LogConcavity:
    """Exact log-concavity test with the contiguous-support requirement.

    With ``derived=True`` the consequences ``a_k a_l >= a_{k+j} a_{l-j}``
    (``k >= l``, ``0 <= j <= l``) are verified as well.
    """
    a = _as_seq(seq)
    if any(x < 0 for x in a):
        raise ValueError("log-concavity is defined for nonnegative sequences")
    support = [i for i, x in enumerate(a) if x != 0]
    if support:
        for i in range(support[0], support[-1] + 1):
            if a[i] == 0:
                return LogConcavity("support-gap", i)
    for n in range(1, len(a) - 1):
        if a[n] * a[n] < a[n - 1] * a[n + 1]:
            return LogConcavity("fails", n)
    if derived:
        M = len(a)
        for l in range(M):
            for k in range(l, M):
                for j in range(l + 1):
                    hi = a[k + j] if k + j < M else 0
                    if a[k] * a[l] < hi * a[l - j]:
                        return LogConcavity("fails", k, detail=f"a_{k} a_{l} < a_{k + j} a_{l - j}")
    return LogConcavity("holds", vacuous=len(a) < 3)


def factorial_weighted(sigma: Sequence) -> NonnegSequence:
    out = []
    fact = 1
    for k, s in enumerate(fractions(sigma)):
        if k:
            fact *= k
        out.append(s * fact)
    return NonnegSequence(tuple(out))


def binomial_convolution(x, y) -> NonnegSequence:
    """c_n = sum_k C(n,k) x_k y_{n-k}; length len(x) + len(y) - 1."""
    x, y = _as_seq(x), _as_seq(y)
    if not x or not y:
        return NonnegSequence(())
    c = [Fraction(0)] * (len(x) + len(y) - 1)
    for k, xk in enumerate(x):
        if not xk:
            continue
        for j, yj in enumerate(y):
            c[k + j] += binom(k + j, k) * xk * yj
    return NonnegSequence(tuple(c))


# -- exponential generating functions ---------------------------------------

@dataclass(frozen=True)
class EGFPoint:
    t: Fraction
    lower: Fraction
    upper: Fraction | None
    status: str  # "certified" | "negative" | "inconclusive"


@dataclass(frozen=True)
class EGFReport:
    points: tuple[EGFPoint, ...]

    @property
    def status(self) -> str:
        statuses = {p.status for p in self.points}
        if "negative" in statuses:
            return "fails"
        if "inconclusive" in statuses:
            return "inconclusive"
        return "holds"

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _egf_values(a: tuple[Fraction, ...], t: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    # f, f', f'' of sum a_n t^n / n! truncated to the given terms
    f = f1 = f2 = Fraction(0)
    term = Fraction(1)  # t^n / n!
    for n in range(len(a)):
        if n:
            term = term * t / n
        f += a[n] * term
        if n + 1 < len(a):
            f1 += a[n + 1] * term
        if n + 2 < len(a):
            f2 += a[n + 2] * term
    return f, f1, f2


def _geometric_tail(a: tuple[Fraction, ...], t: Fraction, shift: int) -> Fraction | None:
    """Bound on sum_{n >= len(a)-shift} a_{n+shift} t^n/n! for a log-concave continuation.

    Log-concavity forces a_{M+j} <= a_M rho^j with rho = a_M / a_{M-1}.
    Returns None when the geometric bound does not converge.
    """
    M = len(a) - 1
    if M >= 0 and a[M] == 0:
        return Fraction(0)  # support has ended
    if M < 1 or a[M - 1] == 0:
        return None
    rho = a[M] / a[M - 1]
    start = M + 1 - shift  # first omitted power of t
    # sum_{n >= start} a_M rho^{n+shift-M} t^n / n!
    #   <= a_M rho^{start+shift-M} t^start/start! * 1/(1 - rho t/(start+1))
    q = rho * t / (start + 1)
    if q >= 1:
        return None
    lead = a[M] * rho ** (start + shift - M)
    fact = 1
    for j in range(2, start + 1):
        fact *= j
    return lead * t ** start / fact / (1 - q)


def egf_logconcavity_grid(seq, grid: Iterable, *, derivative: int = 0, prefix: bool = False) -> EGFReport:
    """Check ``(f')^2 - f f'' >= 0`` at each grid point, f(t) = sum a_n t^n / n!.

    With ``prefix=False`` the sequence is the whole sequence, f is a
    polynomial and the value is computed exactly.  With ``prefix=True`` the
    input is treated as the start of an unknown infinite log-concave
    sequence; the omitted tail is bounded by geometric domination and a point
    is reported ``inconclusive`` when the bound cannot decide the sign.
    ``derivative=k`` runs the same check for the k-th derivative of f.
    """
    a = _as_seq(seq)
    if any(x < 0 for x in a):
        raise ValueError("sequence must be nonnegative")
    a = a[derivative:]
    points = []
    for t in fractions(grid):
        if t <= 0:
            raise ValueError("grid points must be positive")
        f, f1, f2 = _egf_values(a, t)
        value = f1 * f1 - f * f2
        if not prefix:
            status = "certified" if value >= 0 else "negative"
            points.append(EGFPoint(t, value, value, status))
            continue
        tails = [_geometric_tail(a, t, s) for s in range(3)]
        if any(b is None for b in tails):
            points.append(EGFPoint(t, value, None, "inconclusive"))
            continue
        b0, b1, b2 = tails
        lower = f1 * f1 - (f + b0) * (f2 + b2)
        upper = (f1 + b1) ** 2 - f * f2
        if lower >= 0:
            status = "certified"
        elif upper < 0:
            status = "negative"
        else:
            status = "inconclusive"
        points.append(EGFPoint(t, lower, upper, status))
    return EGFReport(tuple(points))


# -- coefficient-level proof apparatus ---------------------------------------

def gurvits_coefficient_check(seq, n: int) -> Fraction:
    """sum_k (C(n,k-1) - C(n,k)) a_k a_{n-k+2}.

    This is n! times the coefficient of t^n in (f')^2 - f f''; it is
    nonnegative whenever ``seq`` is log-concave.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = NonnegSequence(_as_seq(seq))
    return sum(
        ((binom(n, k - 1) - binom(n, k)) * a[k] * a[n - k + 2] for k in range(n + 3)),
        Fraction(0),
    )


def gurvits_coefficient_unshifted(seq, n: int) -> Fraction:
    """The same quantity before the index shift: sum C(n,k) a_{k+1} a_{n-k+1} - sum C(n,k) a_k a_{n-k+2}."""
    a = NonnegSequence(_as_seq(seq))
    first = sum((binom(n, k) * a[k + 1] * a[n - k + 1] for k in range(n + 1)), Fraction(0))
    second = sum((binom(n, k) * a[k] * a[n - k + 2] for k in range(n + 1)), Fraction(0))
    return first - second


def sk_parabola(n: int, k: int) -> int:
    return -4 * k * k + 4 * k * n + 8 * k - n * n - 3 * n - 2


def sk_unfolded(n: int) -> tuple[int, ...]:
    """Coefficients C(n,k-1) - C(n,k) for k = 0..n+2 (pairs with b_k = a_k a_{n-k+2})."""
    return tuple(binom(n, k - 1) - binom(n, k) for k in range(n + 3))


def sk_sequence(n: int, seq=None) -> SignSequence:
    """Folded weights s_0..s_m, m = floor(n/2 + 1), of the symmetric sum.

    For k < n/2 + 1, ``s_k = 2C(n,k-1) - C(n,k) - C(n,k-2)``; for even n the
    middle weight is ``C(n,n/2) - C(n,n/2-1)``.  When ``seq`` is given the
    companion ``b_k = a_k a_{n-k+2}`` is attached.
    """
    if n < 2:
        raise ValueError("the folded form is used for n >= 2; n = 0, 1 are direct")
    m = n // 2 + 1
    s = []
    for k in range(m + 1):
        if 2 * k < n + 2:
            s.append(2 * binom(n, k - 1) - binom(n, k) - binom(n, k - 2))
        else:  # k == n/2 + 1, n even
            s.append(binom(n, n // 2) - binom(n, n // 2 - 1))
    b = None
    if seq is not None:
        a = NonnegSequence(_as_seq(seq))
        b = tuple(a[k] * a[n - k + 2] for k in range(m + 1))
    return SignSequence(tuple(s), b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_pairing_inequality(ss: SignSequence, b: Sequence | None = None) -> Fraction:
    """Return sum s_k b_k after validating the pairing lemma's hypotheses.

    Requires b nondecreasing, sum s_k = 0 and sgn(s_k) nondecreasing; the
    result is then nonnegative.  Raises ValueError naming the violated
    hypothesis.
    """
    s = ss.s
    b = fractions(b) if b is not None else ss.b
    if b is None:
        raise ValueError("no companion sequence b supplied")
    if len(b) != len(s):
        raise ValueError(f"length mismatch: {len(s)} weights, {len(b)} values")
    if sum(s) != 0:
        raise ValueError("hypothesis violated: weights do not sum to zero")
    signs = [_sign(x) for x in s]
    if any(u > v for u, v in zip(signs, signs[1:])):
        raise ValueError("hypothesis violated: signs of the weights are not nondecreasing")
    if any(u > v for u, v in zip(b, b[1:])):
        raise ValueError("hypothesis violated: b is not nondecreasing")
    return sum((x * y for x, y in zip(s, b)), Fraction(0))
