"""Large-n series for beta_n, p(n,t), and the Hankel determinant."""
import warnings
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from semijacobi.asymptotics import (
    AsymSeries,
    beta_series,
    log_barnes_half,
    log_hankel_asymptotic,
    log_hankel_at_zero,
    log_hankel_ratio_asymptotic,
    log_hankel_ratio_integral,
    order_fit,
    p_series,
    running_slope,
    series_error_rows,
)
from semijacobi.errors import DomainError, PrecisionError
from semijacobi.orthocore import ortho_table_cached
from semijacobi.precision import PrecisionContext
from semijacobi.specfun import WeightParams, _log_barnes_at

CTX = PrecisionContext(mantissa_bits=192, agreement_digits=25)


def as_mpf(f: Fraction) -> mpf:
    return mpf(f.numerator) / f.denominator


def close(x, y, tol="1e-45"):
    return abs(x - y) <= mpf(tol)


# ------------------------------------------------------------ coefficients
def test_beta_series_coefficients_match_closed_forms():
    a, t = Fraction(3, 4), Fraction(2)
    q = 1 - 4 * a * a
    expected = [
        Fraction(1, 4),
        Fraction(0),
        q / 16,
        q * (t - 2 * a) / 16,
        q * (3 * t * t - 12 * a * t + 12 * a * a + 1) / 64,
        q * (2 * t**3 - 12 * a * t * t + (11 + 20 * a * a) * t - 4 * a * (1 + 4 * a * a)) / 64,
        q
        * (
            5 * t**4
            - 40 * a * t**3
            + 20 * (5 + 4 * a * a) * t * t
            - 20 * a * (11 + 4 * a * a) * t
            + 80 * a**4
            + 40 * a * a
            + 1
        )
        / 256,
    ]
    series = beta_series(WeightParams(as_mpf(a), as_mpf(t)))
    assert series.powers == (0, -1, -2, -3, -4, -5, -6)
    for got, want in zip(series.coefficients, expected):
        assert close(got, as_mpf(want))


def test_beta_series_classical_point():
    series = beta_series(WeightParams(mpf(0), mpf(0)))
    c = series.coefficients
    assert c[2] == mpf(1) / 16
    assert c[3] == 0
    assert c[4] == mpf(1) / 64
    assert c[6] == mpf(1) / 256


def test_beta_series_t_zero_matches_classical_expansion():
    # at t = 0 the coefficients must collapse to the classical weight's
    # expansion: a3 = -alpha q / 8, a4 = q (1 + 12 alpha^2)/64,
    # a5 = -alpha q (1 + 4 alpha^2)/16, a6 = q (1 + 40 alpha^2 + 80 alpha^4)/256
    a = Fraction(5, 4)
    q = 1 - 4 * a * a
    series = beta_series(WeightParams(as_mpf(a), mpf(0)))
    c = series.coefficients
    assert close(c[2], as_mpf(q / 16))
    assert close(c[3], as_mpf(-a * q / 8))
    assert close(c[4], as_mpf(q * (1 + 12 * a * a) / 64))
    assert close(c[5], as_mpf(-a * q * (1 + 4 * a * a) / 16))
    assert close(c[6], as_mpf(q * (1 + 40 * a * a + 80 * a**4) / 256))


def test_series_collapse_at_half_integer_alpha():
    for alpha in (mpf("0.5"), mpf("-0.5")):
        for t in (mpf(0), mpf("1.25")):
            bs = beta_series(WeightParams(alpha, t))
            assert all(c == 0 for c in bs.coefficients[1:])
            ps = p_series(WeightParams(alpha, t))
            assert all(c == 0 for c in ps.coefficients[2:])


def test_p_series_coefficients():
    a, t = Fraction(3, 4), Fraction(0)
    series = p_series(WeightParams(as_mpf(a), as_mpf(t)))
    assert series.powers == (1, 0, -1, -2, -3, -4, -5)
    assert series.coefficients[0] == mpf(-1) / 4
    # t = 0 collapse: b_j = (1-2a)^j (1+2a) / 2^(j+3)
    assert close(series.coefficients[1], as_mpf((1 + 2 * a) / 8))
    for j in range(1, 6):
        want = (1 - 2 * a) ** j * (1 + 2 * a) / Fraction(2 ** (j + 3))
        assert close(series.coefficients[j + 1], as_mpf(want))


def test_p_series_general_t_coefficient():
    a, t = Fraction(1, 4), Fraction(3)
    series = p_series(WeightParams(as_mpf(a), as_mpf(t)))
    q = 1 - 4 * a * a
    assert close(series.coefficients[1], as_mpf((t + 2 + 4 * a) / 16))
    assert close(series.coefficients[3], as_mpf(q * (t + 1 - 2 * a) / 32))
    assert close(series.coefficients[4], as_mpf(q * (t + 1 - 2 * a) ** 2 / 64))


def test_p_shift_consistency_with_beta_series():
    # p-series(n) - p-series(n+1) must reproduce the beta series through
    # n^-6, leaving an O(n^-7) discrepancy
    params = WeightParams(mpf("0.75"), mpf("1.3"))
    bs, ps = beta_series(params), p_series(params)
    pts = []
    for n in (64, 128, 256, 512):
        pts.append((n, abs(ps.evaluate(n) - ps.evaluate(n + 1) - bs.evaluate(n))))
    slope = order_fit(pts)
    assert abs(slope + 7) < mpf("0.4")


# ------------------------------------------------------- regime detection
def test_regime_gate():
    assert beta_series(WeightParams(mpf(0), mpf(1))).in_regime(64)
    assert not beta_series(WeightParams(mpf(0), mpf(80))).in_regime(16)
    # collapsed series are trivially inside their regime
    assert beta_series(WeightParams(mpf("0.5"), mpf(5))).in_regime(2)


def test_series_against_pipeline():
    params = WeightParams(mpf(0), mpf(1))
    table = ortho_table_cached(params, 65, CTX)
    bs, ps = beta_series(params), p_series(params)
    assert abs(table.beta[64] - bs.evaluate(64)) < mpf("1e-12")
    assert abs(table.p[64] - ps.evaluate(64)) < mpf("1e-11")


# ------------------------------------------------------ Hankel determinant
def test_hankel_at_zero_known_values():
    # D_1(0) = mu_0(0) = 2 for alpha = 0; D_2(0) = det diag(2, 2/3)
    v1 = log_hankel_at_zero(WeightParams(mpf(0), mpf(0)), 1, CTX)
    assert abs(v1 - mpmath.log(2)) < mpf("1e-30")
    v2 = log_hankel_at_zero(WeightParams(mpf(0), mpf(0)), 2, CTX)
    assert abs(v2 - mpmath.log(mpf(4) / 3)) < mpf("1e-30")


def test_hankel_at_zero_matches_pipeline():
    params = WeightParams(mpf("1.5"), mpf(0))
    table = ortho_table_cached(params, 11, CTX)
    v = log_hankel_at_zero(params, 10, CTX)
    assert abs(v - table.logD[10]) < mpf("1e-20")


def test_hankel_at_zero_two_forms_high_precision():
    ctx = PrecisionContext(mantissa_bits=256, agreement_digits=40)
    log_hankel_at_zero(WeightParams(mpf("1.5"), mpf(0)), 50, ctx)


def test_hankel_at_zero_rejections():
    with pytest.raises(DomainError):
        log_hankel_at_zero(WeightParams(mpf(0), mpf(0)), 0, CTX)
    over = PrecisionContext(mantissa_bits=512, agreement_digits=55)
    with pytest.raises(PrecisionError):
        log_hankel_at_zero(WeightParams(mpf(0), mpf(0)), 3, over)


def test_barnes_half_closed_form():
    ours = log_barnes_half(256)
    direct = _log_barnes_at(mpf("0.5"), 256, 40)
    assert abs(ours - direct) < mpf("1e-35")
    with mp.workprec(256):
        oracle = mpmath.log(mpmath.barnesg(mpf("0.5")))
    assert abs(ours - oracle) < mpf("1e-30")


def test_hankel_asymptotic_error_decays_at_fourth_order():
    params = WeightParams(mpf("0.75"), mpf(0))
    table = ortho_table_cached(params, 129, CTX)
    pts = [
        (n, abs(table.logD[n] - log_hankel_asymptotic(params, n, CTX)))
        for n in (16, 32, 64, 128)
    ]
    slope = order_fit(pts)
    assert abs(slope + 4) < mpf("0.4")


def test_hankel_asymptotic_prefactor_exact_at_collapsed_alpha():
    # at alpha = 1/2 the exponent bracket vanishes at t = 0, so the
    # asymptotic form reduces to the bare prefactor, which must then agree
    # with the exact determinant up to exponentially small terms
    params = WeightParams(mpf("0.5"), mpf(0))
    v_exact = log_hankel_at_zero(params, 100, CTX)
    v_asym = log_hankel_asymptotic(params, 100, CTX)
    assert abs(v_exact - v_asym) < mpf("1e-25")


def test_hankel_asymptotic_rejects_below_regime():
    with pytest.raises(DomainError):
        log_hankel_asymptotic(WeightParams(mpf(0), mpf(0)), 0, CTX)
    # huge t pushes the n^-3 term above the n^-2 term at small n
    with pytest.raises(DomainError):
        log_hankel_asymptotic(WeightParams(mpf(0), mpf(500)), 2, CTX)


def test_hankel_ratio_asymptotic_against_pipeline():
    params = WeightParams(mpf(0), mpf(1))
    at_t = ortho_table_cached(params, 101, CTX)
    at_zero = ortho_table_cached(WeightParams(mpf(0), mpf(0)), 101, CTX)
    ratio = at_t.logD[100] - at_zero.logD[100]
    est = log_hankel_ratio_asymptotic(params, 100)
    assert abs(est - ratio) < mpf("1e-8")


def test_hankel_ratio_integral_route():
    params = WeightParams(mpf("0.75"), mpf(1))
    got = log_hankel_ratio_integral(params, 8, CTX)
    at_t = ortho_table_cached(params, 9, CTX)
    at_zero = ortho_table_cached(WeightParams(mpf("0.75"), mpf(0)), 9, CTX)
    assert abs(got - (at_t.logD[8] - at_zero.logD[8])) < mpf("1e-12")
    assert log_hankel_ratio_integral(WeightParams(mpf(1), mpf(0)), 4, CTX) == 0
    with pytest.raises(DomainError):
        log_hankel_ratio_integral(params, 0, CTX)


# ------------------------------------------------------------- order fits
def test_order_fit_exact_power_law():
    pts = [(n, mpf("3.7") / mpf(n) ** 7) for n in (10, 20, 40, 80)]
    slope = order_fit(pts)
    assert abs(slope + 7) < mpf("1e-6")


def test_order_fit_drops_floored_points():
    pts = [(10, mpf("1e-3")), (20, mpf("1e-4")), (40, mpf(0)), (80, mpf("1e-6"))]
    with pytest.warns(UserWarning, match="precision floor"):
        slope = order_fit(pts)
    assert slope < 0


def test_order_fit_rejections():
    with pytest.raises(DomainError):
        order_fit([(10, mpf(1)), (20, mpf(1))])
    with pytest.raises(DomainError):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            order_fit([(10, mpf(0)), (20, mpf(0)), (40, mpf(0)), (80, mpf(-1))])


def test_running_slope():
    s = running_slope(64, mpf("1e-7"), 128, mpf("1e-7") / 128)
    assert abs(s + 7) < mpf("1e-9")
    assert running_slope(64, mpf(0), 128, mpf("1e-9")) is None


def test_series_error_rows_shapes():
    params = WeightParams(mpf(0), mpf(1))
    rows = series_error_rows(params, "beta", (16, 32, 64), CTX)
    assert [r[0] for r in rows] == [16, 32, 64]
    errs = [r[3] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert all(r[4] for r in rows)
    hrows = series_error_rows(WeightParams(mpf("0.75"), mpf(1)), "hankel", (16, 32), CTX)
    assert hrows[0][3] > hrows[1][3]
    with pytest.raises(DomainError):
        series_error_rows(params, "gamma", (16, 32, 64), CTX)
    with pytest.raises(DomainError):
        series_error_rows(params, "beta", (0, 16, 32), CTX)
