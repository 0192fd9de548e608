import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from strategies import gausspoly_laws
from typel.moments import (
    GaussPolyLaw,
    LatticeDistribution,
    MomentSequence,
    check_moment_comparison,
    check_r_logconcave,
    even_moments_gausspoly,
    even_moments_lattice,
    gaussian_abs_moment,
    gaussian_even_moment,
    moments_of_independent_sum,
    point_mass,
    rademacher_moments,
)


@pytest.mark.parametrize("n, expected", [(0, 1), (2, 3), (5, 945)])
def test_gaussian_even_moment(n, expected):
    assert gaussian_even_moment(n) == expected


@pytest.mark.parametrize("n", range(12))
def test_gaussian_even_moment_factorial_form(n):
    assert gaussian_even_moment(n) == math.factorial(2 * n) // (2 ** n * math.factorial(n))


def test_abs_moment_small_cases():
    assert gaussian_abs_moment(4) == 3
    assert gaussian_abs_moment(2) == 1


def test_abs_moment_p3_against_quadrature():
    oracle, _ = integrate.quad(lambda x: abs(x) ** 3 * stats.norm.pdf(x), -math.inf, math.inf, epsabs=1e-13)
    value = gaussian_abs_moment(3, 30)
    assert abs(float(value) - oracle) < 1e-10
    with mpmath.workdps(40):
        assert abs(value - 2 * mpmath.sqrt(2 / mpmath.pi)) < mpmath.mpf(10) ** -29


@pytest.mark.parametrize("p", ["7/2", "15/2", F(5, 3)])
def test_abs_moment_fractional_against_mpmath_quad(p):
    with mpmath.workdps(30):
        pm = mpmath.mpf(F(p).numerator) / F(p).denominator
        oracle = 2 * mpmath.quad(lambda x: x ** pm * mpmath.npdf(x), [0, mpmath.inf])
        assert abs(gaussian_abs_moment(p, 25) - oracle) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("k", range(0, 30, 2))
def test_abs_moment_even_is_exact(k):
    assert gaussian_abs_moment(k, 50) == gaussian_even_moment(k // 2)


def test_abs_moment_rejects_zero_precision():
    with pytest.raises(ValueError):
        gaussian_abs_moment(3, 0)


def test_lattice_rademacher():
    assert even_moments_lattice(LatticeDistribution.rademacher(), 3).even_moments == (1, 1, 1, 1)


def test_lattice_three_atom_half():
    assert even_moments_lattice(LatticeDistribution.three_atom(F(1, 2)), 2).even_moments == (1, F(1, 2), F(1, 2))


def test_lattice_uniform_two():
    d = LatticeDistribution((0, F(1, 4), F(1, 4)))
    assert even_moments_lattice(d, 2).even_moments == (1, F(5, 2), F(17, 2))


def test_lattice_validation():
    with pytest.raises(ValueError):
        LatticeDistribution((F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        LatticeDistribution((F(3, 2), F(-1, 4)))


def test_point_mass_moments():
    assert even_moments_lattice(LatticeDistribution((1,)), 3).even_moments == (1, 0, 0, 0)


def test_gausspoly_z1():
    r = even_moments_gausspoly(GaussPolyLaw.zb(1), 2).r
    assert r[1] == 3 and r[2] == 5


def test_z1_fourth_moment_against_quadrature():
    # E Z_1^4 = int x^4 x^2 phi(x) dx
    oracle, _ = integrate.quad(lambda x: x ** 6 * stats.norm.pdf(x), -math.inf, math.inf)
    assert even_moments_gausspoly(GaussPolyLaw.zb(1), 2).even_moments[2] == 15
    assert abs(oracle - 15) < 1e-9


def test_gausspoly_pure_gaussian():
    assert even_moments_gausspoly(GaussPolyLaw(1), 10).r == (1,) * 11


@pytest.mark.parametrize("b", [F(0), F(1, 4), F(2, 3), F(1)])
def test_zb_variance(b):
    assert even_moments_gausspoly(GaussPolyLaw.zb(b), 1).r[1] == 1 + 2 * b


def test_gausspoly_moments_from_mgf_series():
    # oracle: Taylor coefficients of exp(a z^2/2) prod(1 + b_j z^2), m_n = (2n)! [z^{2n}]
    law = GaussPolyLaw(F(3, 2), (F(1, 3), F(1, 2)))
    with mpmath.workdps(40):
        a = mpmath.mpf(3) / 2
        coeffs = mpmath.taylor(lambda z: mpmath.exp(a * z * z / 2) * (1 + z * z / 3) * (1 + z * z / 2), 0, 12)
        m = even_moments_gausspoly(law, 6).even_moments
        for n in range(7):
            assert abs(coeffs[2 * n] * math.factorial(2 * n) - mpmath.mpf(m[n].numerator) / m[n].denominator) < 1e-25


def test_independent_sum_identity():
    rad = rademacher_moments(5)
    assert moments_of_independent_sum(rad, point_mass(5)) == rad


def test_independent_sum_two_rademachers():
    m = moments_of_independent_sum(rademacher_moments(3), rademacher_moments(3)).even_moments
    assert m == (1, 2, 8, 32)
    assert all(m[n] == 2 ** (2 * n - 1) for n in range(1, 4))


def test_independent_sum_two_gaussians():
    g = even_moments_gausspoly(GaussPolyLaw(1), 8)
    m = moments_of_independent_sum(g, g).even_moments
    assert m == tuple(2 ** n * gaussian_even_moment(n) for n in range(9))


def test_independent_sum_truncates():
    assert moments_of_independent_sum(rademacher_moments(5), rademacher_moments(2)).N == 2


@given(gausspoly_laws(), gausspoly_laws(), gausspoly_laws())
def test_independent_sum_commutative_associative(x, y, z):
    mx, my, mz = (even_moments_gausspoly(law, 6) for law in (x, y, z))
    assert moments_of_independent_sum(mx, my) == moments_of_independent_sum(my, mx)
    left = moments_of_independent_sum(moments_of_independent_sum(mx, my), mz)
    right = moments_of_independent_sum(mx, moments_of_independent_sum(my, mz))
    assert left == right


@given(gausspoly_laws(), gausspoly_laws())
def test_independent_sum_matches_convolved_law(x, y):
    direct = even_moments_gausspoly(x.convolve(y), 6)
    assert moments_of_independent_sum(even_moments_gausspoly(x, 6), even_moments_gausspoly(y, 6)) == direct


def test_r_logconcave_rademacher():
    assert check_r_logconcave(rademacher_moments(20)).holds


@pytest.mark.parametrize("beta", [F(1, 10), F(1, 4), F(1, 3), F(2, 5), F(1, 2), F(9, 10), F(1)])
def test_r_logconcave_three_atom(beta):
    # r = (1, beta, beta/3, beta/15, ...): the first inequality beta^2 >= beta/3
    # needs beta >= 1/3, every later one holds for all beta
    seq = even_moments_lattice(LatticeDistribution.three_atom(beta), 20)
    assert all(seq.r[n] == beta / gaussian_even_moment(n) for n in range(1, 21))
    lc = check_r_logconcave(seq)
    assert lc.holds == (beta >= F(1, 3))
    if not lc.holds:
        assert lc.status == "fails" and lc.index == 1
    r = seq.r
    assert all(r[n] ** 2 >= r[n - 1] * r[n + 1] for n in range(2, 20))


def test_r_logconcave_failure():
    lc = check_r_logconcave(MomentSequence.from_r((1, 1, 3)))
    assert lc.status == "fails" and lc.index == 1


def test_r_logconcave_vacuous():
    lc = check_r_logconcave(MomentSequence((1, 2)))
    assert lc.holds and lc.vacuous


def test_r_logconcave_point_mass_has_no_gap():
    assert check_r_logconcave(point_mass(4)).holds


def test_comparison_examples():
    assert check_moment_comparison(rademacher_moments(5), 4, 4).slack == 0
    rad = check_moment_comparison(rademacher_moments(2), 2, 4)
    assert rad.holds and rad.slack == 1 - F(1, 3)
    z1 = check_moment_comparison(even_moments_gausspoly(GaussPolyLaw.zb(1), 2), 2, 4)
    assert z1.holds and z1.slack == 4


@pytest.mark.parametrize("p, q", [(3, 4), (2, 5), (6, 4), (0, 2), (2, 12)])
def test_comparison_rejects_bad_pairs(p, q):
    with pytest.raises(ValueError):
        check_moment_comparison(rademacher_moments(5), p, q)


def test_comparison_matches_norm_ratio_reading():
    # ||X||_q/||G||_q <= ||X||_p/||G||_p evaluated in floating point
    seq = even_moments_gausspoly(GaussPolyLaw(2, (F(1, 3), F(3, 2))), 6)
    for p in (2, 4, 6):
        for q in range(p, 13, 2):
            m = seq.even_moments
            lhs = (float(m[q // 2]) / gaussian_even_moment(q // 2)) ** (1 / q)
            rhs = (float(m[p // 2]) / gaussian_even_moment(p // 2)) ** (1 / p)
            assert (lhs <= rhs * (1 + 1e-12)) == check_moment_comparison(seq, p, q).holds


@given(st.lists(st.fractions(min_value=F(1, 10), max_value=10, max_denominator=10), min_size=1, max_size=12))
def test_log_concave_r_implies_comparison(ratios):
    # r_0 = 1 with nonincreasing ratios is log-concave; comparison must then hold
    ratios = sorted(ratios, reverse=True)
    r = [F(1)]
    for x in ratios:
        r.append(r[-1] * x)
    seq = MomentSequence.from_r(r)
    assert check_r_logconcave(seq).holds
    N = seq.N
    for p in range(2, 2 * N + 1, 2):
        for q in range(p, 2 * N + 1, 2):
            assert check_moment_comparison(seq, p, q).holds


@given(gausspoly_laws())
def test_gausspoly_r_log_concave(law):
    assert check_r_logconcave(even_moments_gausspoly(law, 15)).holds


def test_moment_sequence_validation():
    with pytest.raises(ValueError):
        MomentSequence((2, 1))
    with pytest.raises(ValueError):
        MomentSequence((1, -1))


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        GaussPolyLaw(0.5, ())
    with pytest.raises(ValueError):
        LatticeDistribution(("0.5", "1/4"))
