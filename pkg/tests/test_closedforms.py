"""Closed-form special values against exact rationals and the table pipeline."""
from __future__ import annotations

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from semijacobi import (
    DomainError,
    PrecisionContext,
    WeightParams,
    beta_deriv_zero,
    beta_one,
    beta_zero,
    build_ortho_table,
    h_aux_deriv_zero,
    h_aux_one,
    h_aux_two,
    h_aux_zero,
    p_two,
    p_zero,
    pv_w_deriv_zero,
    pv_w_zero,
)

CTX = PrecisionContext(mantissa_bits=192, agreement_digits=30)

BETA_ONE_HALF_ONE = mpf("0.195170775206202945225012317068051885265538")


def close(a, b, tol=mpf("1e-28")):
    return abs(a - b) <= tol * max(abs(a), abs(b), mpf(1))


# --------------------------------------------------------------------------
# exact rational checks
# --------------------------------------------------------------------------
def frac_beta_zero(n, a: Fraction) -> Fraction:
    if n == 0:
        return Fraction(0)
    return Fraction(n) * (n + 2 * a) / ((2 * n - 1 + 2 * a) * (2 * n + 1 + 2 * a))


@pytest.mark.parametrize(
    "n,a,expected",
    [
        (3, Fraction(1), Fraction(5, 21)),
        (1, Fraction(-1, 2), Fraction(1, 2)),
        (2, Fraction(-1, 2), Fraction(1, 4)),
        (4, Fraction(3, 2), Fraction(4 * 7, 10 * 12)),
    ],
)
def test_beta_zero_exact(n, a, expected):
    if 2 * n - 1 + 2 * a != 0:
        assert frac_beta_zero(n, a) == expected
    value = beta_zero(n, mpf(a.numerator) / a.denominator)
    assert close(value, mpf(expected.numerator) / expected.denominator, tol=mpf("1e-45"))


def test_beta_zero_survives_removable_point():
    # at alpha = -1/2 the generic formula for n = 1 is 0/0; limit is 1/2
    assert close(beta_zero(1, mpf("-0.5")), mpf("0.5"), tol=mpf("1e-45"))


@pytest.mark.parametrize("n,a", [(2, Fraction(1, 3)), (5, Fraction(7, 4)), (3, Fraction(-1, 4))])
def test_p_zero_exact(n, a):
    expected = Fraction(-n * (n - 1)) / (2 * (2 * n - 1 + 2 * a))
    value = p_zero(n, mpf(a.numerator) / a.denominator)
    assert close(value, mpf(expected.numerator) / expected.denominator, tol=mpf("1e-45"))


def test_beta_deriv_zero_matches_explicit_rational():
    # generic point: explicit form
    # 4n(n+a)(n+2a)(1-4a^2) / ((2n-1+2a)^2 (2n+1+2a)^2 (2n-3+2a)(2n+3+2a))
    for n, a in ((3, Fraction(1)), (2, Fraction(1, 3)), (6, Fraction(-1, 4))):
        num = 4 * n * (n + a) * (n + 2 * a) * (1 - 4 * a * a)
        den = (
            (2 * n - 1 + 2 * a) ** 2
            * (2 * n + 1 + 2 * a) ** 2
            * (2 * n - 3 + 2 * a)
            * (2 * n + 3 + 2 * a)
        )
        expected = Fraction(num, 1) / den
        value = beta_deriv_zero(n, mpf(a.numerator) / a.denominator)
        assert close(value, mpf(expected.numerator) / expected.denominator, tol=mpf("1e-42"))


@pytest.mark.parametrize(
    "n,a,expected",
    [
        (1, mpf("0.5"), Fraction(-1, 16)),
        (2, mpf("-0.5"), Fraction(1, 16)),
    ],
)
def test_beta_deriv_zero_removable_points(n, a, expected):
    value = beta_deriv_zero(n, a)
    assert close(value, mpf(expected.numerator) / expected.denominator, tol=mpf("1e-42"))


def test_h_aux_zero_values():
    assert h_aux_zero(0, mpf(1)) == 0
    assert close(h_aux_zero(4, mpf("0.5")), mpf(4) * 5, tol=mpf("1e-45"))


def test_h_aux_deriv_zero_values():
    # generic: -2n(2n^2+2na-1)/((2n-1+2a)(2n+1+2a))
    n, a = 3, Fraction(1)
    expected = Fraction(-2 * n * (2 * n * n + 2 * n * a - 1), 1) / (
        (2 * n - 1 + 2 * a) * (2 * n + 1 + 2 * a)
    )
    assert close(
        h_aux_deriv_zero(n, mpf(1)),
        mpf(expected.numerator) / expected.denominator,
        tol=mpf("1e-42"),
    )
    # removable point n=1, alpha=-1/2: limit -2/(3+2a) = -1
    assert close(h_aux_deriv_zero(1, mpf("-0.5")), mpf(-1), tol=mpf("1e-42"))


def test_pv_initial_conditions():
    assert pv_w_zero(5, mpf("0.5")) == 1
    assert close(pv_w_deriv_zero(3, mpf("0.5")), mpf(2) / 8, tol=mpf("1e-45"))
    with pytest.raises(DomainError):
        pv_w_deriv_zero(0, mpf("-0.5"))


# --------------------------------------------------------------------------
# Kummer-ratio forms against the table pipeline
# --------------------------------------------------------------------------
@pytest.mark.parametrize(
    "alpha,t", [(mpf("0.5"), mpf(1)), (mpf("1.5"), mpf("0.3")), (mpf("-0.25"), mpf(2))]
)
def test_beta_one_and_p_two_match_table(alpha, t):
    params = WeightParams(alpha, t)
    table = build_ortho_table(params, 4, CTX)
    assert close(beta_one(params, CTX), table.beta[1])
    assert close(p_two(params, CTX), table.p[2])


def test_beta_one_frozen_value():
    assert close(beta_one(WeightParams(mpf("0.5"), mpf(1)), CTX), BETA_ONE_HALF_ONE)


@pytest.mark.parametrize("alpha,t", [(mpf("0.5"), mpf(1)), (mpf("1.5"), mpf("0.3"))])
def test_h_aux_small_n_match_recurrence_route(alpha, t):
    # H_n = sum_{j<n} R_j with R_j = 2j+1+2a - 2t(beta_j + beta_{j+1})
    params = WeightParams(alpha, t)
    table = build_ortho_table(params, 4, CTX)
    with mp.workprec(table.mantissa_bits):
        r0 = 1 + 2 * alpha - 2 * t * (table.beta[0] + table.beta[1])
        r1 = 3 + 2 * alpha - 2 * t * (table.beta[1] + table.beta[2])
    assert close(h_aux_one(params, CTX), r0)
    assert close(h_aux_two(params, CTX), r0 + r1)


def test_derivatives_match_finite_differences():
    # sanity: derivative closed forms against a symmetric difference of the
    # pipeline values in t around 0 (truncation-limited tolerance)
    alpha = mpf("0.75")
    eps = mpf("1e-8")
    up = build_ortho_table(WeightParams(alpha, eps), 6, CTX)
    dn = build_ortho_table(WeightParams(alpha, -eps), 6, CTX)
    for n in (1, 2, 5):
        fd = (up.beta[n] - dn.beta[n]) / (2 * eps)
        assert close(beta_deriv_zero(n, alpha), fd, tol=mpf("1e-14"))
    with mp.workprec(up.mantissa_bits):
        for n in (1, 2):
            hu = sum(
                2 * j + 1 + 2 * alpha - 2 * eps * (up.beta[j] + up.beta[j + 1])
                for j in range(n)
            )
            hd = sum(
                2 * j + 1 + 2 * alpha + 2 * eps * (dn.beta[j] + dn.beta[j + 1])
                for j in range(n)
            )
            fd = (hu - hd) / (2 * eps)
            assert close(h_aux_deriv_zero(n, alpha), fd, tol=mpf("1e-14"))
