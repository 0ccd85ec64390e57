"""Zeta, binomials, polylogarithms and C(s), checked against mpmath and
against hand-rolled series with explicit tail bounds."""

from fractions import Fraction

import gmpy2
import mpmath
import pytest
from conftest import to_mp
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from heckezeta.errors import DomainError, PoleAt1, PoleProximity
from heckezeta.precision import PrecisionContext
from heckezeta.special import (
    bernoulli,
    binom_complex,
    binom_ladder,
    c_upper,
    polylog_neg,
    polylog_partial,
    scan_cutoff,
    zeta_complex,
)

CTX = PrecisionContext(40)
FIRST_ZERO_IM = "14.134725141734693790457251983562470270784257115699"


def close(a, b, tol):
    return abs(to_mp(a) - b) <= tol


# zeta ---------------------------------------------------------------------------


def test_zeta_at_zero_is_exact():
    assert zeta_complex(0, CTX) == gmpy2.mpc(-0.5)


@pytest.mark.parametrize("m", [1, 2, 5, 13])
def test_trivial_zeros_are_exact(m):
    assert zeta_complex(-2 * m, CTX) == 0


def test_even_values(mp50):
    tol = to_mp(CTX.tolerance)
    assert close(zeta_complex(2, CTX), mpmath.pi**2 / 6, tol)
    assert close(zeta_complex(4, CTX), mpmath.pi**4 / 90, tol)
    assert close(zeta_complex(-1, CTX), mpmath.mpf(-1) / 12, tol)


def test_zeta3_against_series_with_integral_tail(mp50):
    # sum_{n<=N} n^-3 + tail, tail in [1/(2(N+1)^2), 1/(2N^2)]
    n_terms = 20000
    head = mpmath.fsum(mpmath.mpf(n) ** -3 for n in range(1, n_terms + 1))
    lo = head + 1 / (2 * mpmath.mpf(n_terms + 1) ** 2)
    hi = head + 1 / (2 * mpmath.mpf(n_terms) ** 2)
    got = to_mp(zeta_complex(3, CTX).real)
    tol = to_mp(CTX.tolerance)
    assert lo - tol <= got <= hi + tol
    assert abs(got - mpmath.mpf("1.2020569031595942854")) < 1e-19


def test_first_nontrivial_zero():
    z = zeta_complex(CTX.complex("0.5", FIRST_ZERO_IM), CTX)
    assert abs(to_mp(z)) < 1e-10


def test_pole_raises():
    with pytest.raises(PoleAt1):
        zeta_complex(1, CTX)


@given(st.floats(-6, 8), st.floats(-40, 40))
def test_matches_mpmath_oracle(re, im):
    s = CTX.complex(re, im)
    if abs(complex(s) - 1) < 1e-3:
        return
    with mpmath.workdps(60):
        want = mpmath.zeta(to_mp(s))
        assert abs(to_mp(zeta_complex(s, CTX)) - want) <= to_mp(CTX.tolerance) * max(1, abs(want))


@given(st.floats(-6, 8), st.floats(0.01, 40))
def test_conjugate_symmetry(re, im):
    s = CTX.complex(re, im)
    a = zeta_complex(s, CTX)
    b = zeta_complex(CTX.complex(re, -im), CTX)
    with CTX.nearest():
        assert abs(a - b.conjugate()) <= 2 * CTX.tolerance


@settings(max_examples=10)
@given(st.floats(2, 8), st.floats(-30, 30))
def test_dirichlet_series_for_large_real_part(sigma, t):
    s = CTX.complex(sigma, t)
    n_terms = 3000
    with mpmath.workdps(40):
        sm = to_mp(s)
        head = mpmath.fsum(mpmath.power(n, -sm) for n in range(1, n_terms + 1))
        tail = mpmath.mpf(n_terms) ** (1 - sigma) / (sigma - 1)
        assert abs(to_mp(zeta_complex(s, CTX)) - head) <= tail + to_mp(CTX.tolerance)


def test_bernoulli_numbers():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(12) == Fraction(-691, 2730)


# binomials ------------------------------------------------------------------------


def test_binomial_examples():
    z = CTX.complex("0.3", "-1.7")
    assert binom_complex(z, 0, CTX) == 1
    assert binom_complex(1, 3, CTX) == 0
    assert binom_complex(-1, 2, CTX) == 1
    with pytest.raises(DomainError):
        binom_complex(1, -1, CTX)


@given(st.floats(-20, 20), st.floats(-20, 20), st.integers(0, 60))
def test_ladder_matches_product(re, im, k):
    z = CTX.complex(re, im)
    with CTX.nearest():
        ladder = binom_ladder(z, k)[k]
    direct = binom_complex(z, k, CTX)
    with CTX.nearest():
        scale = max(1, abs(direct))
        assert abs(ladder - direct) <= 2**-(CTX.working_bits - 20) * scale


# polylogarithms ---------------------------------------------------------------------


def test_polylog_at_zero():
    assert polylog_neg("-1/2", 0, CTX) == 0


@pytest.mark.parametrize("order,x", [("-1/2", Fraction(2, 3)), ("-3/2", Fraction(1, 2)), ("-1/2", Fraction(1, 4)), ("-3/2", Fraction(1, 7))])
def test_polylog_upper_bound_is_tight(order, x):
    xv = CTX.real(x)
    got = polylog_neg(order, xv, CTX)
    with mpmath.workdps(60):
        want = mpmath.polylog(mpmath.mpf(Fraction(order).numerator) / Fraction(order).denominator, to_mp(xv))
        assert to_mp(got) >= want
        assert to_mp(got) - want <= 4 * to_mp(CTX.tolerance) * max(1, want)


def test_li_minus_three_halves_at_half():
    # independent series: 200 terms plus the geometric tail bound
    with mpmath.workdps(40):
        terms = [mpmath.mpf(n) ** 1.5 / mpmath.mpf(2) ** n for n in range(1, 201)]
        head = mpmath.fsum(terms)
    got = to_mp(polylog_neg("-3/2", CTX.real("0.5"), CTX))
    assert abs(got - mpmath.mpf("3.2931439195129137")) < 1e-15
    assert got >= head


def test_polylog_argument_checks():
    with pytest.raises(DomainError):
        polylog_neg("-1/2", 1, CTX)
    with pytest.raises(DomainError):
        polylog_neg("-5/2", CTX.real("0.5"), CTX)


@given(st.sampled_from(["-1/2", "-3/2"]), st.floats(0.01, 0.9), st.integers(5, 200), st.integers(1, 200))
def test_partial_sum_bound_is_monotone(order, x, n1, extra):
    xv = CTX.real(x)
    p1, t1 = polylog_partial(order, xv, n1, CTX)
    p2, t2 = polylog_partial(order, xv, n1 + extra, CTX)
    assert p2 >= p1
    if gmpy2.is_finite(t1):
        # upward rounding may add one ulp of the partial sum per extra term
        with CTX.upward():
            slack = (extra + 1) * gmpy2.mul_2exp(mpfr(1), gmpy2.get_exp(p2) - CTX.working_bits)
            assert p2 + t2 <= p1 + t1 + t1 + slack


# C(s) ---------------------------------------------------------------------------------


def test_c_upper_real_above_half():
    c = c_upper(CTX.complex("0.75"), CTX)
    assert c.scan_cutoff == 2
    with mpmath.workdps(50):
        want = mpmath.zeta(1.5)
    assert to_mp(c.value) >= want
    assert to_mp(c.value) - want < 1e-40
    assert abs(to_mp(c.value) - mpmath.mpf("2.6123753")) < 1e-7


def test_c_upper_at_minus_quarter():
    c = c_upper(CTX.complex("-0.25"), CTX)
    with mpmath.workdps(50):
        assert abs(mpmath.zeta(-0.5)) < mpmath.zeta(1.5)
        assert abs(to_mp(c.value) - mpmath.zeta(1.5)) < 1e-40


def test_c_upper_near_pole():
    with pytest.raises(PoleProximity):
        c_upper(CTX.complex("0.5"), CTX)
    with pytest.raises(PoleProximity):
        c_upper(CTX.complex("-0.5"), CTX)


def test_scan_cutoff_makes_tail_argument_at_least_two():
    for sigma in ("0.75", "0.5", "0.3", "-0.25", "-3.1", "2"):
        n0 = scan_cutoff(mpfr(sigma))
        assert n0 % 2 == 0
        assert 2 * float(sigma) + n0 >= 2


@settings(max_examples=10)
@given(st.floats(-2.5, 2.5), st.floats(-6, 6))
def test_c_upper_dominates_zeta_scan(re, im):
    s = CTX.complex(re, im)
    sc = complex(s)
    if any(abs(2 * sc + n - 1) < 1e-3 for n in range(0, 12, 2)):
        return
    c = to_mp(c_upper(s, CTX).value)
    with mpmath.workdps(60):
        sm = to_mp(s)
        for n in range(0, 201, 2):
            assert c >= abs(mpmath.zeta(2 * sm + n)) - mpmath.mpf(10) ** -55
