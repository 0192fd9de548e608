import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from strategies import log_concave_sequences, small_rationals
from typel._rational import binom
from typel.sequences import (
    NonnegSequence,
    SignSequence,
    binomial_convolution,
    egf_logconcavity_grid,
    elementary_symmetric,
    factorial_weighted,
    gurvits_coefficient_check,
    gurvits_coefficient_unshifted,
    logconcave_check,
    newton_check,
    sign_pairing_inequality,
    sk_parabola,
    sk_sequence,
    sk_unfolded,
)


def brute_sigma(alphas, k):
    return sum((math.prod(c) for c in itertools.combinations(alphas, k)), F(0))


# -- elementary symmetric functions -------------------------------------------

def test_sigma_of_one_two_three():
    assert elementary_symmetric([1, 2, 3]) == (1, 6, 11, 6)


def test_sigma_empty():
    assert elementary_symmetric([]) == (1,)


def test_sigma_repeated_value_is_binomial():
    c = F(2, 3)
    sigma = elementary_symmetric([c] * 6)
    assert sigma == tuple(binom(6, k) * c ** k for k in range(7))


def test_sigma_pads_with_zeros():
    assert elementary_symmetric([1, 2], 4) == (1, 3, 2, 0, 0)


@given(st.lists(small_rationals, max_size=7))
def test_sigma_matches_brute_force(alphas):
    sigma = elementary_symmetric(alphas)
    assert sigma == tuple(brute_sigma(alphas, k) for k in range(len(alphas) + 1))


# -- Newton ---------------------------------------------------------------------

def test_newton_equal_roots_saturate():
    report = newton_check([1, 1])
    assert report.holds
    assert report.slacks == {1: 0}


def test_newton_one_two_three():
    report = newton_check([1, 2, 3])
    assert report.holds
    assert report.slacks[1] == F(4) - F(11, 3)


def test_newton_one_four():
    report = newton_check([1, 4])
    assert report.slacks == {1: F(9, 4)}


@given(st.lists(small_rationals, max_size=12))
def test_newton_holds_for_nonnegative_alphas(alphas):
    assert newton_check(alphas).holds


# -- log-concavity --------------------------------------------------------------

def test_constant_sequence_is_log_concave():
    assert logconcave_check([1] * 10).holds


@pytest.mark.parametrize("m", range(31))
def test_binomial_rows_are_log_concave(m):
    assert logconcave_check([binom(m, k) for k in range(m + 1)]).holds


def test_support_gap_detected():
    lc = logconcave_check([1, 0, 1])
    assert lc.status == "support-gap" and lc.index == 1


def test_failure_index():
    lc = logconcave_check([1, 1, 3])
    assert lc.status == "fails" and lc.index == 1


def test_trailing_zeros_allowed():
    assert logconcave_check([1, 2, 1, 0, 0]).holds


@given(log_concave_sequences())
def test_derived_inequalities_follow(seq):
    assert logconcave_check(seq, derived=True).holds


# -- factorial weighting and Walkup --------------------------------------------

def test_factorial_weighted_example():
    assert factorial_weighted(elementary_symmetric([1, 2, 3])).a == (1, 6, 22, 36)


def test_factorial_weighted_empty():
    assert factorial_weighted(elementary_symmetric([])).a == (1,)


@given(st.lists(small_rationals, max_size=15))
def test_factorial_weighted_sigma_is_log_concave(alphas):
    assert logconcave_check(factorial_weighted(elementary_symmetric(alphas))).holds


def test_convolution_identity():
    y = [F(3), F(2), F(1, 2)]
    assert binomial_convolution([1], y).a == tuple(y)


def test_convolution_hand_example():
    assert binomial_convolution([1, 1], [1, 1]).a == (1, 2, 2)


def test_convolution_reproduces_r_identity():
    # c_n = sum C(n,k) b^{n-k} sigma_k k!
    alphas, b, K = [F(1, 2), F(3)], F(2, 3), 6
    sigma = elementary_symmetric(alphas, K)
    x = [b ** k for k in range(K + 1)]
    c = binomial_convolution(x, factorial_weighted(sigma))
    for n in range(K + 1):
        expected = sum(binom(n, k) * b ** (n - k) * sigma[k] * math.factorial(k) for k in range(n + 1))
        assert c[n] == expected


@given(log_concave_sequences(), log_concave_sequences())
def test_walkup(x, y):
    c = binomial_convolution(x, y)
    assert len(c) == len(x) + len(y) - 1
    assert logconcave_check(c).holds


# -- exponential generating function --------------------------------------------

def test_egf_all_ones():
    assert egf_logconcavity_grid([1] * 12, [F(1, 2), 1, 2]).holds


def test_egf_fails_for_non_log_concave_at_small_t():
    report = egf_logconcavity_grid([1, 1, 3], [F(1, 1000)])
    assert report.status == "fails"


def test_egf_value_at_zero_limit():
    # (f')^2 - f f'' -> a_1^2 - a_0 a_2 as t -> 0
    report = egf_logconcavity_grid([1, 1, 3], [F(1, 10 ** 9)])
    assert abs(report.points[0].lower - (-2)) < F(1, 10 ** 6)


def test_egf_binomial_row():
    assert egf_logconcavity_grid([binom(5, k) for k in range(6)], [F(2) ** k for k in range(-4, 5)]).holds


def test_egf_prefix_mode_certifies_strictly_log_concave_prefix():
    report = egf_logconcavity_grid([F(1, math.factorial(k)) for k in range(30)], [F(1, 2), 1, 4], prefix=True)
    assert report.holds


def test_egf_prefix_mode_cannot_decide_log_linear_input():
    # f = e^{t/2} makes (f')^2 - f f'' vanish identically
    report = egf_logconcavity_grid([F(1, 2) ** k for k in range(30)], [1], prefix=True)
    assert report.status == "inconclusive"


def test_egf_prefix_mode_is_inconclusive_when_tail_diverges():
    report = egf_logconcavity_grid([1, 2], [1], prefix=True)
    assert report.status == "inconclusive"


def test_egf_derivative_uses_shifted_sequence():
    a = [F(1), F(3), F(4), F(4)]
    direct = egf_logconcavity_grid(a[1:], [1])
    shifted = egf_logconcavity_grid(a, [1], derivative=1)
    assert direct.points[0].lower == shifted.points[0].lower


@given(log_concave_sequences(max_size=15), st.integers(0, 3))
def test_egf_never_negative_for_log_concave(seq, derivative):
    grid = [F(2) ** k for k in range(-4, 5)]
    for prefix in (False, True):
        report = egf_logconcavity_grid(seq, grid, derivative=derivative, prefix=prefix)
        assert report.status != "fails"


# -- coefficient apparatus ----------------------------------------------------------

def test_gurvits_n0_n1():
    a = [F(2), F(3), F(4), F(5)]
    assert gurvits_coefficient_check(a, 0) == a[1] ** 2 - a[0] * a[2]
    assert gurvits_coefficient_check(a, 1) == a[1] * a[2] - a[0] * a[3]


def test_gurvits_telescopes_on_constant():
    assert gurvits_coefficient_check([1] * 5, 2) == 0


def test_gurvits_rejects_negative_n():
    with pytest.raises(ValueError):
        gurvits_coefficient_check([1, 1], -1)


def test_gurvits_is_taylor_coefficient():
    # n! [t^n] ((f')^2 - f f'') for a polynomial f
    a = [F(1), F(2), F(5, 2), F(2), F(1)]
    M = len(a)
    fact = [math.factorial(k) for k in range(2 * M + 2)]
    f = [a[k] / fact[k] for k in range(M)]
    f1 = [a[k + 1] / fact[k] for k in range(M - 1)]
    f2 = [a[k + 2] / fact[k] for k in range(M - 2)]

    def mul(u, v):
        out = [F(0)] * (len(u) + len(v))
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] += x * y
        return out

    left, right = mul(f1, f1), mul(f, f2)
    for n in range(2 * M):
        coeff = (left[n] if n < len(left) else 0) - (right[n] if n < len(right) else 0)
        assert gurvits_coefficient_check(a, n) == coeff * fact[n]


@given(log_concave_sequences(max_size=20), st.integers(0, 25))
def test_shift_of_summation_index(seq, n):
    assert gurvits_coefficient_check(seq, n) == gurvits_coefficient_unshifted(seq, n)


@given(log_concave_sequences(max_size=20), st.integers(0, 25))
def test_gurvits_nonnegative_for_log_concave(seq, n):
    assert gurvits_coefficient_check(seq, n) >= 0


def test_sk_small_cases():
    assert sk_sequence(2).s == (-1, 0, 1)
    assert sk_sequence(3).s == (-1, -1, 2)


def test_sk_needs_n_at_least_two():
    with pytest.raises(ValueError):
        sk_sequence(1)


@pytest.mark.parametrize("n", range(2, 60))
def test_sk_folding_matches_unfolded(n):
    # folding pairs k with n + 2 - k; b_k is symmetric under that map
    unfolded = sk_unfolded(n)
    s = sk_sequence(n).s
    for k in range(len(s)):
        partner = n + 2 - k
        expected = unfolded[k] + (unfolded[partner] if partner != k else 0)
        assert s[k] == expected


@pytest.mark.parametrize("n", range(2, 60))
def test_sk_sign_matches_parabola(n):
    s = sk_sequence(n).s
    assert sum(s) == 0
    for k, x in enumerate(s):
        if 2 * k < n + 2:
            assert (x <= 0) == (sk_parabola(n, k) <= 0)


def test_pairing_examples():
    assert sign_pairing_inequality(SignSequence((-1, 0, 1)), [1, 1, 1]) == 0
    assert sign_pairing_inequality(SignSequence((-1, 0, 1)), [0, 0, 1]) == 1


@pytest.mark.parametrize(
    "s, b, message",
    [
        ((-1, 2), (0, 1), "sum to zero"),
        ((1, -1), (0, 1), "signs"),
        ((-1, 1), (1, 0), "b is not nondecreasing"),
    ],
)
def test_pairing_names_violated_hypothesis(s, b, message):
    with pytest.raises(ValueError, match=message):
        sign_pairing_inequality(SignSequence(s), b)


@given(log_concave_sequences(max_size=20), st.integers(2, 30))
def test_pairing_cross_checks_coefficient(seq, n):
    ss = sk_sequence(n, seq)
    value = sign_pairing_inequality(ss)
    assert value >= 0
    assert value == gurvits_coefficient_check(seq, n)


def test_nonneg_sequence_rejects_negative():
    with pytest.raises(ValueError):
        NonnegSequence((1, -1))
