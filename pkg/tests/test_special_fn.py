import math
import sys

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etamu import special_fn as sf
from etamu.errors import DomainError

mpmath.mp.dps = 40

# frozen from 40-digit mpmath
LN_GAMMA = [
    (0.5, 0.5723649429247001),
    (6.0, 4.787491742782046),
    (1e-3, 6.907178885383853),
    (3.7, 1.428072326665388),
    (150.25, 601.2615040324997),
    (1e4, 82099.71749644238),
]
LOWER = [
    (1.0, 2.0, 0.8646647167633873),
    (2.0, 1.0, 0.26424111765711533),
    (0.5, 0.5, 1.2100356193111088),
    (7.5, 3.0, 37.89711615639913),
    (50.0, 60.0, 5.569388107216507e62),
    (3.0, 1e4, 2.0),
]
UPPER = [
    (1.0, 0.7, 0.4965853037914095),
    (0.5, 0.0, 1.772453850905516),
    (0.5, 0.5, 0.5624182315944071),
    (7.5, 30.0, 0.00047194625630985127),
    (2.0, 0.01, 0.9999503320866597),
]
BESSEL = [
    (0.5, 1.0, 0.9376748882454876),
    (2.5, 3.0, 1.5153394466819652),
    (0.0, 1e-8, 1.0),
    (8.5, 40.0, 5988837026863554.0),
    (3.5, 700.0, 1.5162583266280015e302),
    (-0.5, 2.0, 2.122591620177637),
]
HYP2F1 = [
    (1, 2, 2, -0.5, 2.0 / 3.0),
    (3, 7, 4, -2.5, 0.0030089503523191867),
    (0.5, 1.5, 2.5, -0.3, 0.9221442585673755),
    (5, 10, 6, -40.0, 7.750488266760777e-11),
    (2.3, 1.7, 3.1, -0.9, 0.4349670453980375),
    (9, 17, 10, -1000.0, 8.741258741258742e-32),
]


@pytest.mark.parametrize("x, expected", LN_GAMMA)
def test_ln_gamma_oracle(x, expected):
    assert sf.ln_gamma(x) == pytest.approx(expected, rel=1e-13)


def test_ln_gamma_trivial():
    assert sf.ln_gamma(1.0) == 0.0
    assert sf.ln_gamma(6.0) == pytest.approx(math.log(120.0), rel=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, math.nan, math.inf])
def test_ln_gamma_domain(x):
    with pytest.raises(DomainError):
        sf.ln_gamma(x)


@pytest.mark.parametrize("s, x, expected", LOWER)
def test_lower_inc_gamma_oracle(s, x, expected):
    assert sf.lower_inc_gamma(s, x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("s, x, expected", UPPER)
def test_upper_inc_gamma_oracle(s, x, expected):
    assert sf.upper_inc_gamma(s, x) == pytest.approx(expected, rel=1e-12)


def test_log_forms_past_double_range():
    assert sf.ln_lower_inc_gamma(200.0, 150.0) == pytest.approx(848.1629088426489, rel=1e-13)
    assert sf.ln_upper_inc_gamma(200.0, 400.0) == pytest.approx(792.9847844136725, rel=1e-13)
    assert sf.ln_upper_inc_gamma(0.5, 800.0) == pytest.approx(-803.3429298902691, rel=1e-13)
    with pytest.raises(OverflowError):
        sf.lower_inc_gamma(200.0, 150.0)


def test_incomplete_gamma_limits():
    assert sf.lower_inc_gamma(2.0, 0.0) == 0.0
    assert sf.gamma_p(2.0, math.inf) == 1.0
    assert sf.gamma_q(2.0, math.inf) == 0.0
    assert sf.upper_inc_gamma(0.5, 0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("s, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (math.nan, 1.0), (1.0, math.nan)])
def test_incomplete_gamma_domain(s, x):
    for fn in (sf.lower_inc_gamma, sf.upper_inc_gamma, sf.gamma_p, sf.gamma_q):
        with pytest.raises(DomainError):
            fn(s, x)


def test_full_output_records_terms():
    r = sf.lower_inc_gamma(3.0, 1.0, full_output=True)
    assert isinstance(r, sf.EvalResult)
    assert r.converged and r.terms_used > 0
    assert r.value == pytest.approx(2.0 - 5.0 * math.exp(-1.0), rel=1e-14)


@pytest.mark.parametrize("nu, x, expected", BESSEL)
def test_bessel_oracle(nu, x, expected):
    assert sf.bessel_i(nu, x) == pytest.approx(expected, rel=1e-10)


def test_bessel_scaled_log_forms():
    assert sf.ln_bessel_ive(3.5, 1e5) == pytest.approx(-6.675461265989784, rel=1e-13)
    assert sf.ln_bessel_i(0.5, 1e-6) == pytest.approx(-7.1335466316266976, rel=1e-13)


def test_bessel_zero_and_overflow():
    assert sf.bessel_i(1.5, 0.0) == 0.0
    assert sf.bessel_i(0.0, 0.0) == 1.0
    with pytest.raises(OverflowError):
        sf.bessel_i(0.5, 720.0)


@pytest.mark.parametrize("nu, x", [(-0.6, 1.0), (0.5, -1.0), (0.5, math.inf)])
def test_bessel_domain(nu, x):
    with pytest.raises(DomainError):
        sf.bessel_i(nu, x)


@pytest.mark.parametrize("a, b, c, z, expected", HYP2F1)
def test_gauss_2f1_oracle(a, b, c, z, expected):
    assert sf.gauss_2f1(a, b, c, z) == pytest.approx(expected, rel=1e-12)


def test_gauss_2f1_trivial():
    assert sf.gauss_2f1(1.3, 2.7, 0.4, 0.0) == 1.0
    # kernel identity: int e^{-2g}(1 - e^{-g}) dg = 1/6 = p Gamma(2) / beta^2 * 2F1(1, 2; 2; -1/2)
    assert 1.0 * math.gamma(2.0) / 4.0 * sf.gauss_2f1(1, 2, 2, -0.5) == pytest.approx(1.0 / 6.0, rel=1e-15)


@pytest.mark.parametrize("args", [(1, 2, 0.0, -0.5), (1, 2, -1.0, -0.5), (1, 2, 3, 0.1)])
def test_gauss_2f1_domain(args):
    with pytest.raises(DomainError):
        sf.gauss_2f1(*args)


# --- properties -------------------------------------------------------------

s_strat = st.floats(0.5, 200.0)
frac = st.floats(0.0, 10.0)


@settings(max_examples=200, deadline=None)
@given(s_strat, frac)
def test_lower_plus_upper_is_complete_gamma(s, f):
    x = f * s
    if s < 150.0:
        assert sf.lower_inc_gamma(s, x) + sf.upper_inc_gamma(s, x) == pytest.approx(math.gamma(s), rel=1e-12)
    else:
        # Gamma(s) overflows; the log forms still have to add up
        lo, up = sf.ln_lower_inc_gamma(s, x), sf.ln_upper_inc_gamma(s, x)
        big = max(lo, up)
        total = big + math.log(math.exp(lo - big) + math.exp(up - big))
        assert total == pytest.approx(math.lgamma(s), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 60.0), st.floats(0.0, 10.0))
def test_lower_gamma_recurrence(s, f):
    x = f * s
    # gamma(s+1, x) + x^s e^-x = s gamma(s, x), arranged without a subtraction
    lhs = sf.lower_inc_gamma(s + 1.0, x) + (x**s * math.exp(-x) if x > 0 else 0.0)
    rhs = s * sf.lower_inc_gamma(s, x)
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 20.0))
def test_half_order_bessel_is_sinh(x):
    assert sf.bessel_i(0.5, x) * math.sqrt(math.pi * x / 2.0) == pytest.approx(math.sinh(x), rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 700.0), st.sampled_from([0.0, 0.5, 1.5, 2.5, 8.5, 20.5]))
def test_bessel_against_mpmath(x, nu):
    expected = float(mpmath.log(mpmath.besseli(nu, x)) - x) if x > 0 else None
    if expected is None:
        return
    assert sf.ln_bessel_ive(nu, x) == pytest.approx(expected, rel=1e-12, abs=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 50.0), st.floats(0.0, 5.0))
def test_incomplete_gamma_against_mpmath(s, f):
    x = f * s
    expected = float(mpmath.gammainc(s, 0, x, regularized=True))
    assert sf.gamma_p(s, x) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(-50.0, 0.0))
def test_gauss_2f1_symmetry(a, b, c, z):
    assert sf.gauss_2f1(a, b, c, z) == pytest.approx(sf.gauss_2f1(b, a, c, z), rel=1e-11)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 14), st.floats(-0.5, 0.0))
def test_terminating_path_matches_taylor(m, xi, z):
    a, b, c = float(xi), float(m + xi), float(xi + 1)
    closed = sf.gauss_2f1(a, b, c, z)
    taylor, conv, _ = sf._taylor(a, b, c, z)
    assert conv
    # the direct series alternates; its own rounding grows with sum|t| / |sum|
    cond = abs(sf._taylor(a, b, c, -z)[0] / taylor)
    assert closed == pytest.approx(taylor, rel=1e-11 + 8 * sys.float_info.epsilon * cond)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 14), st.floats(-1e3, -1e-3))
def test_terminating_path_against_mpmath(m, xi, z):
    expected = float(mpmath.hyp2f1(xi, m + xi, xi + 1, z))
    assert sf.gauss_2f1(xi, m + xi, xi + 1, z) == pytest.approx(expected, rel=1e-12)
