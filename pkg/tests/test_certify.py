import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strategies import random_ek_law
from typel.certify import (
    NA,
    PASS,
    FAIL,
    INCONCLUSIVE,
    charfn_real_zero_scan,
    classify,
    enestrom_kakeya,
    lattice_to_polynomial,
    sv_alpha_condition,
)
from typel.moments import (
    LatticeDistribution,
    check_moment_comparison,
    check_r_logconcave,
    even_moments_lattice,
)
from typel.polynomials import OFF_CIRCLE, ON_CIRCLE, schur_cohn_unit_circle

RADEMACHER = LatticeDistribution.rademacher()


def uniform(n: int, p0=F(0)) -> LatticeDistribution:
    rest = (1 - F(p0)) / (2 * n)
    return LatticeDistribution((F(p0),) + (rest,) * n)


# -- polynomial construction --------------------------------------------------

def test_rademacher_polynomial():
    assert lattice_to_polynomial(RADEMACHER).coeffs == (F(1, 2), 0, F(1, 2))


@pytest.mark.parametrize("beta", [F(1, 4), F(1, 2), F(3, 4)])
def test_three_atom_polynomial(beta):
    Q = lattice_to_polynomial(LatticeDistribution.three_atom(beta))
    assert Q.coeffs == (beta / 2, 1 - beta, beta / 2)


def test_uniform_two_polynomial():
    assert lattice_to_polynomial(uniform(2)).coeffs == (F(1, 4), F(1, 4), 0, F(1, 4), F(1, 4))


@given(st.integers(1, 10), st.integers(0, 10 ** 6))
def test_polynomial_sums_to_one(n, seed):
    Q = lattice_to_polynomial(random_ek_law(random.Random(seed), n))
    assert sum(Q.coeffs) == 1
    assert Q.coeffs == Q.coeffs[::-1]


# -- Enestrom-Kakeya ------------------------------------------------------------

def test_ek_rademacher():
    assert enestrom_kakeya(RADEMACHER) == PASS


def test_ek_three_atom_quarter_is_inapplicable():
    assert enestrom_kakeya(LatticeDistribution.three_atom(F(1, 4))) == FAIL


def test_ek_point_mass():
    assert enestrom_kakeya(LatticeDistribution((1,))) == NA


@pytest.mark.parametrize("n", range(1, 9))
def test_ek_uniform_with_atom_at_zero(n):
    # the largest allowed atom at zero is 1/(n+1), which makes p_0 = 2 p_k
    assert enestrom_kakeya(uniform(n, F(1, n + 1))) == PASS
    assert enestrom_kakeya(uniform(n, F(1, n + 1) + F(1, 1000))) == FAIL


# -- power-mean condition ---------------------------------------------------------

def test_sv_rademacher():
    assert sv_alpha_condition(RADEMACHER, 1) == PASS


def test_sv_three_atom_three_quarters():
    assert sv_alpha_condition(LatticeDistribution.three_atom(F(3, 4)), 1) == PASS


def test_sv_alpha_one_formula():
    d = LatticeDistribution((F(1, 5), F(1, 10), F(1, 10), F(1, 5)))
    expected = d.p[0] / 2 + d.p[1] + d.p[2] <= d.p[3]
    assert (sv_alpha_condition(d, 1) == PASS) == expected


def test_sv_needs_three_nonzero_coefficients_for_alpha_above_one():
    assert sv_alpha_condition(RADEMACHER, 2) == NA
    assert sv_alpha_condition(LatticeDistribution((1,)), 1) == NA


def test_sv_rejects_alpha_below_one():
    with pytest.raises(ValueError):
        sv_alpha_condition(RADEMACHER, F(1, 2))


def test_sv_alpha_two_exact():
    # uniform on {+-1, +-2, +-3}: N = 6 nonzero coefficients, factor (2/4)^1
    d = uniform(3)
    c = F(1, 6)
    expected = c ** 2 + c ** 2 <= F(1, 2) * c ** 2
    assert (sv_alpha_condition(d, 2) == PASS) == expected
    assert sv_alpha_condition(d, 2) == FAIL


def test_sv_fractional_alpha_matches_float():
    d = LatticeDistribution((F(1, 10), F(1, 20), F(1, 10), F(3, 10)))
    for alpha in (F(3, 2), F(5, 4), F(7, 3)):
        a = float(alpha)
        N = 7
        lhs = float(d.p[0]) ** a / 2 + float(d.p[1]) ** a + float(d.p[2]) ** a
        rhs = (2 / (N - 2)) ** (a - 1) * float(d.p[3]) ** a
        verdict = sv_alpha_condition(d, alpha)
        assert verdict != INCONCLUSIVE
        assert (verdict == PASS) == (lhs <= rhs)


@given(st.integers(1, 8), st.integers(0, 10 ** 6), st.sampled_from([1, 2, F(3, 2), 3]))
def test_sufficient_conditions_imply_exact_verdict(n, seed, alpha):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        d = random_ek_law(rng, n)
    else:
        w = [F(rng.randint(0, 10)) for _ in range(n + 1)]
        w[n] += 1
        total = w[0] + 2 * sum(w[1:])
        d = LatticeDistribution(tuple(x / total for x in w))
    if enestrom_kakeya(d) == PASS or sv_alpha_condition(d, alpha) == PASS:
        assert schur_cohn_unit_circle(lattice_to_polynomial(d)).verdict == ON_CIRCLE


# -- classification -----------------------------------------------------------------

def test_classify_rademacher():
    report = classify(RADEMACHER)
    assert report.overall == "certified"
    assert report.ek == PASS
    assert report.schur_cohn.verdict == ON_CIRCLE
    assert report.numeric.max_deviation < 1e-30


def test_classify_three_atom_quarter_refuted():
    report = classify(LatticeDistribution.three_atom(F(1, 4)))
    assert report.overall == "refuted"
    assert report.schur_cohn.verdict == OFF_CIRCLE
    roots = sorted(float(w.real) for w in report.numeric.roots)
    assert roots == pytest.approx([-3 - 2 * math.sqrt(2), -3 + 2 * math.sqrt(2)], abs=1e-12)


def test_classify_uniform_five_with_small_atom():
    report = classify(uniform(5, F(1, 6) - F(1, 100)))
    assert report.ek == PASS
    assert report.overall == "certified"


@pytest.mark.parametrize(
    "beta, overall",
    [(F(1, 8), "refuted"), (F(1, 4), "refuted"), (F(3, 8), "refuted"),
     (F(5, 8), "certified"), (F(3, 4), "certified"), (F(1), "certified")],
)
def test_three_atom_family(beta, overall):
    assert classify(LatticeDistribution.three_atom(beta)).overall == overall


def test_three_atom_half_is_a_boundary_case():
    report = classify(LatticeDistribution.three_atom(F(1, 2)))
    assert report.overall == "certified"
    assert report.schur_cohn.multiple_zeros
    assert any("boundary" in note for note in report.notes)


def test_classify_point_mass():
    report = classify(LatticeDistribution((1,)))
    assert report.overall == "certified"
    assert report.notes


def test_cert_report_to_dict_has_one_record_per_test():
    data = classify(RADEMACHER, alphas=(1, 2)).to_dict()
    names = [t["test"] for t in data["tests"]]
    assert names == ["enestrom-kakeya", "power-mean(alpha=1)", "power-mean(alpha=2)", "schur-cohn", "numeric-roots"]
    assert data["overall"] == "certified"


def test_certified_laws_satisfy_moment_checks():
    rng = random.Random(11)
    for _ in range(15):
        d = random_ek_law(rng, rng.randint(1, 8))
        assert classify(d).overall == "certified"
        seq = even_moments_lattice(d, 10)
        assert check_r_logconcave(seq).holds
        for p in range(2, 21, 2):
            for q in range(p, 21, 2):
                assert check_moment_comparison(seq, p, q).holds


# -- continuous diagnostic ----------------------------------------------------------

def test_scan_uniform_density():
    zeros = charfn_real_zero_scan(lambda x: 0.5, 20.0)
    assert len(zeros) == 6
    for k, z in enumerate(zeros, start=1):
        assert z.t == pytest.approx(k * math.pi, abs=1e-9)
        assert z.lo <= z.t <= z.hi


def test_scan_parabolic_density():
    zeros = charfn_real_zero_scan(lambda x: 0.75 * (1 - x * x), 12.0)
    # zeros of sin t - t cos t, i.e. tan t = t
    from scipy import optimize

    expected = [optimize.brentq(lambda t: math.tan(t) - t, k * math.pi + 0.1, k * math.pi + math.pi / 2 - 1e-9) for k in (1, 2, 3)]
    assert [z.t for z in zeros] == pytest.approx(expected, abs=1e-9)
    assert zeros[0].t == pytest.approx(4.4934, abs=1e-4)


def test_scan_below_first_zero_is_empty():
    assert charfn_real_zero_scan(lambda x: 0.5, 3.0) == []


def test_scan_accepts_table():
    xs = np.linspace(0, 1, 401)
    zeros = charfn_real_zero_scan((xs, np.full_like(xs, 0.5)), 7.0)
    assert [z.t for z in zeros] == pytest.approx([math.pi, 2 * math.pi], abs=1e-6)


def test_scan_rejects_bad_density():
    with pytest.raises(ValueError):
        charfn_real_zero_scan(lambda x: 1.0, 5.0)
    with pytest.raises(ValueError):
        charfn_real_zero_scan(lambda x: 1.5 - 2 * x, 5.0)
