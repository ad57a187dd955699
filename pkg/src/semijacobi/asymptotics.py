"""Large-n expansions of beta_n, p(n,t), and the Hankel determinant.

The expansion coefficients are transcribed closed forms; nothing here
re-derives them symbolically.  Their independent verification lives in the
error-decay fits: truncating the beta series after the n^-6 term must leave
an O(n^-7) error against the pipeline, and analogously for the other
series.  ``order_fit`` measures those decay exponents from log-log data.

Every coefficient beyond the leading terms carries the factor 1 - 4 alpha^2,
so at alpha = +/-1/2 the series collapse to their leading parts and the true
error is exponentially small in n rather than algebraic; fits in that regime
measure the precision floor, not a decay order.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath
import numpy
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError
from .orthocore import ortho_table_cached
from .precision import PrecisionContext
from .specfun import (
    GLAISHER_A_64,
    _GLAISHER_MAX_DIGITS,
    WeightParams,
    _log_barnes_at,
    _loggamma_cached,
)

# a trailing term larger than this fraction of the leading one marks the
# evaluation as outside the asymptotic regime
REGIME_TAIL_FRACTION = mpf("0.1")

# extra decimal digits carried by the two Hankel-at-zero formulas so their
# absolute agreement resolves the context tolerance
_CROSS_CHECK_BOOST = 10


@dataclass(frozen=True)
class AsymSeries:
    """A truncated expansion sum(c_k n^p_k) with powers in decreasing order."""

    quantity: str
    params: WeightParams
    powers: tuple
    coefficients: tuple

    def terms(self, n) -> tuple:
        nn = mpf(n)
        return tuple(c * nn**p for c, p in zip(self.coefficients, self.powers))

    def evaluate(self, n) -> mpf:
        with mp.extraprec(32):
            return mpmath.fsum(self.terms(n))

    def in_regime(self, n) -> bool:
        """Whether the retained nonzero terms decay monotonically and the
        last stays below REGIME_TAIL_FRACTION of the first."""
        mags = [abs(t) for t in self.terms(n) if t != 0]
        if len(mags) <= 1:
            return True
        if any(mags[i + 1] > mags[i] for i in range(len(mags) - 1)):
            return False
        return mags[-1] <= REGIME_TAIL_FRACTION * mags[0]


def beta_series(params: WeightParams) -> AsymSeries:
    """Expansion of beta_n: 1/4 + sum_{j>=1} a_j / n^j through j = 6."""
    with mp.extraprec(32):
        alpha, t = params.alpha, params.t
        q = 1 - 4 * alpha * alpha
        coeffs = (
            mpf(1) / 4,
            mpf(0),
            q / 16,
            q * (t - 2 * alpha) / 16,
            q * (3 * t * t - 12 * alpha * t + 12 * alpha * alpha + 1) / 64,
            q
            * (
                2 * t**3
                - 12 * alpha * t * t
                + (11 + 20 * alpha * alpha) * t
                - 4 * alpha * (1 + 4 * alpha * alpha)
            )
            / 64,
            q
            * (
                5 * t**4
                - 40 * alpha * t**3
                + 20 * (5 + 4 * alpha * alpha) * t * t
                - 20 * alpha * (11 + 4 * alpha * alpha) * t
                + 80 * alpha**4
                + 40 * alpha * alpha
                + 1
            )
            / 256,
        )
    return AsymSeries(
        quantity="beta",
        params=params,
        powers=(0, -1, -2, -3, -4, -5, -6),
        coefficients=coeffs,
    )


def p_series(params: WeightParams) -> AsymSeries:
    """Expansion of p(n,t): -n/4 + b_0 + sum_{j>=1} b_j / n^j through j = 5."""
    with mp.extraprec(32):
        alpha, t = params.alpha, params.t
        q = 1 - 4 * alpha * alpha
        u = 1 - 2 * alpha
        coeffs = (
            mpf(-1) / 4,
            (t + 2 + 4 * alpha) / 16,
            q / 16,
            q * (t + 1 - 2 * alpha) / 32,
            q * (t + 1 - 2 * alpha) ** 2 / 64,
            q
            * (
                2 * t**3
                + 6 * u * t * t
                + (20 * alpha * alpha - 24 * alpha + 15) * t
                + 2 * u**3
            )
            / 256,
            q
            * (
                t**4
                + 4 * u * t**3
                + 8 * (2 * alpha * alpha - 3 * alpha + 3) * t * t
                + 2 * u * (4 * alpha * alpha - 8 * alpha + 11) * t
                + u**4
            )
            / 256,
        )
    return AsymSeries(
        quantity="p",
        params=params,
        powers=(1, 0, -1, -2, -3, -4, -5),
        coefficients=coeffs,
    )


# --------------------------------------------------------------------------
# Hankel determinant at t = 0 and its large-n form
# --------------------------------------------------------------------------
def _log_glaisher(bits: int) -> mpf:
    with mp.workprec(bits):
        return mpmath.log(mpmath.mpmathify(GLAISHER_A_64))


def log_barnes_half(bits: int) -> mpf:
    """ln G(1/2) from its closed form in ln 2, ln pi and the Glaisher
    constant."""
    with mp.workprec(bits):
        return (
            mpmath.log(2) / 24
            - mpmath.log(mpmath.pi) / 4
            + mpf(1) / 8
            - 3 * _log_glaisher(bits) / 2
        )


def log_hankel_at_zero(
    params: WeightParams, n: int, ctx: PrecisionContext | None = None
) -> mpf:
    """ln D_n(0) by two independent closed forms, cross-checked.

    The gamma-ratio product and the Barnes-G quotient are evaluated
    separately at boosted precision and must agree to within
    10^(-agreement_digits) absolutely (i.e. relatively on D_n(0) itself);
    the product-form value is returned.
    """
    ctx = ctx or PrecisionContext.from_env()
    if n < 1:
        raise DomainError(f"log_hankel_at_zero needs n >= 1, got {n}")
    digits = ctx.agreement_digits
    if digits + _CROSS_CHECK_BOOST > _GLAISHER_MAX_DIGITS:
        raise PrecisionError(
            f"the stored Glaisher constant supports at most "
            f"{_GLAISHER_MAX_DIGITS - _CROSS_CHECK_BOOST} agreement digits here"
        )
    alpha = params.alpha
    bits = ctx.mantissa_bits + 160
    with mp.workprec(bits):
        lead = n * (n + 2 * alpha) * mpmath.log(2)
        product = lead - _loggamma_cached(mpf(n + 1), bits)
        for j in range(1, n + 1):
            product += (
                _loggamma_cached(mpf(j + 1), bits)
                + 2 * _loggamma_cached(j + alpha, bits)
                - _loggamma_cached(j + n + 2 * alpha, bits)
            )
        inner = digits + _CROSS_CHECK_BOOST
        barnes = (
            lead
            + _log_barnes_at(mpf(n + 1), bits, inner)
            + _log_barnes_at(n + 1 + 2 * alpha, bits, inner)
            + 2 * _log_barnes_at(n + alpha + 1, bits, inner)
            - _log_barnes_at(2 * n + 2 * alpha + 1, bits, inner)
            - 2 * _log_barnes_at(alpha + 1, bits, inner)
        )
        if abs(product - barnes) > mpf(10) ** (-digits):
            raise PrecisionError(
                f"gamma-product and Barnes-G forms of ln D_{n}(0) disagree: "
                f"{mpmath.nstr(abs(product - barnes), 5)} at n={n}"
            )
    with mp.workprec(ctx.mantissa_bits):
        return +product


def log_hankel_asymptotic(
    params: WeightParams, n: int, ctx: PrecisionContext | None = None
) -> mpf:
    """Large-n estimate of ln D_n(t): explicit prefactor plus the
    exponent bracket through O(n^-3).

    Requires n large enough that the retained n^-3 term does not exceed
    the n^-2 term.
    """
    ctx = ctx or PrecisionContext.from_env()
    if n < 1:
        raise DomainError(f"log_hankel_asymptotic needs n >= 1, got {n}")
    alpha, t = params.alpha, params.t
    bits = ctx.mantissa_bits + 64
    with mp.workprec(bits):
        q = 1 - 4 * alpha * alpha
        c2 = q * (6 * t * t - 24 * alpha * t + 28 * alpha * alpha - 3) / 192
        c3 = (
            q
            * (
                t**3
                - 6 * alpha * t * t
                + 3 * (1 + 4 * alpha * alpha) * t
                + 3 * alpha * q
            )
            / 96
        )
        if abs(c3) > n * abs(c2):
            raise DomainError(
                f"n={n} is below the asymptotic regime: the n^-3 term "
                f"exceeds the n^-2 term"
            )
        bracket = (
            -n * t / 2
            + t * (t + 8 * alpha) / 16
            + q * (t - 2 * alpha) / (8 * n)
            + c2 / (n * n)
            + c3 / n**3
        )
        prefactor = (
            (n + alpha + mpf(1) / 2) * mpmath.log(mpmath.pi)
            + (alpha * alpha - mpf(1) / 4) * mpmath.log(n)
            - (n * n + (2 * alpha - 1) * (n + alpha)) * mpmath.log(2)
            + 2 * log_barnes_half(bits)
            - 2 * _log_barnes_at(alpha + 1, bits, ctx.agreement_digits)
        )
        value = prefactor + bracket
    with mp.workprec(ctx.mantissa_bits):
        return +value


def log_hankel_ratio_asymptotic(params: WeightParams, n: int) -> mpf:
    """Large-n estimate of ln(D_n(t)/D_n(0)) through O(n^-3)."""
    if n < 1:
        raise DomainError(f"log_hankel_ratio_asymptotic needs n >= 1, got {n}")
    with mp.extraprec(32):
        alpha, t = params.alpha, params.t
        q = 1 - 4 * alpha * alpha
        return (
            -n * t / 2
            + t * (t + 8 * alpha) / 16
            + t * q / (8 * n)
            + t * q * (t - 4 * alpha) / (32 * n * n)
            + t * q * (t * t - 6 * alpha * t + 12 * alpha * alpha + 3) / (96 * n**3)
        )


def log_hankel_ratio_integral(
    params: WeightParams,
    n: int,
    ctx: PrecisionContext | None = None,
    tolerance=mpf("1e-12"),
    max_degree: int = 6,
) -> mpf:
    """ln(D_n(t)/D_n(0)) as the t-integral of the beta-expressed logarithmic
    derivative, evaluated by quadrature on pipeline recurrence coefficients.

    Independent of the series route: every integrand sample is a fresh
    orthogonality build at the quadrature node.  The quadrature working
    width targets `tolerance`, deliberately below the certified accuracy of
    the integrand samples.
    """
    ctx = ctx or PrecisionContext.from_env()
    if n < 1:
        raise DomainError(f"log_hankel_ratio_integral needs n >= 1, got {n}")
    alpha, t = params.alpha, params.t
    if t == 0:
        return mpf(0)

    def integrand(s):
        table = ortho_table_cached(WeightParams(alpha, s), n + 1, ctx, "split")
        b = table.beta
        return 2 * b[n] * (n + alpha + s - s * (b[n] + b[n - 1] + b[n + 1])) - n

    tolerance = mpf(tolerance)
    bits = max(56, int(mpmath.log(1 / tolerance, 2)) + 16)
    with mp.workprec(bits):
        value, err = mpmath.quad(
            integrand, [mpf(0), t], maxdegree=max_degree, error=True
        )
    if err > tolerance * max(1, abs(value)):
        raise PrecisionError(
            f"quadrature for the determinant ratio did not converge: "
            f"error estimate {mpmath.nstr(err, 3)}"
        )
    return +value


# --------------------------------------------------------------------------
# decay-order estimation
# --------------------------------------------------------------------------
def order_fit(points) -> mpf:
    """Least-squares slope of log|error| against log n.

    points: sequence of (n, error) pairs, at least four.  Nonpositive
    errors sit at the precision floor and are dropped with a warning;
    fitting needs at least two surviving points.
    """
    pts = list(points)
    if len(pts) < 4:
        raise DomainError(f"order_fit needs at least 4 points, got {len(pts)}")
    usable = [(nv, ev) for nv, ev in pts if ev > 0]
    dropped = len(pts) - len(usable)
    if dropped:
        warnings.warn(
            f"order_fit dropped {dropped} nonpositive point(s) at the "
            f"precision floor",
            stacklevel=2,
        )
    if len(usable) < 2:
        raise DomainError("all error points sit at the precision floor")
    xs = numpy.array([float(mpmath.log(mpf(nv))) for nv, _ in usable])
    ys = numpy.array([float(mpmath.log(mpf(ev))) for _, ev in usable])
    slope = numpy.polyfit(xs, ys, 1)[0]
    return mpf(slope)


def running_slope(n_prev, err_prev, n_next, err_next) -> mpf | None:
    """Pairwise decay exponent between two ladder points, None at the
    floor."""
    if err_prev <= 0 or err_next <= 0:
        return None
    return mpmath.log(mpf(err_next) / mpf(err_prev)) / mpmath.log(
        mpf(n_next) / mpf(n_prev)
    )


def series_error_rows(
    params: WeightParams,
    quantity: str,
    n_values,
    ctx: PrecisionContext | None = None,
) -> list[tuple]:
    """(n, oracle, series value, |error|, in_regime) rows for a ladder of n.

    quantity 'beta' and 'p' read the pipeline table built once at the
    largest n; 'hankel' compares pipeline ln D_n(t) with the asymptotic
    form.
    """
    ctx = ctx or PrecisionContext.from_env()
    n_values = sorted(set(int(v) for v in n_values))
    if not n_values or n_values[0] < 1:
        raise DomainError("n ladder must contain positive degrees")
    rows = []
    if quantity in ("beta", "p"):
        series = beta_series(params) if quantity == "beta" else p_series(params)
        table = ortho_table_cached(params, n_values[-1] + 1, ctx, "split")
        source = table.beta if quantity == "beta" else table.p
        for nv in n_values:
            oracle = source[nv]
            est = series.evaluate(nv)
            rows.append((nv, oracle, est, abs(oracle - est), series.in_regime(nv)))
    elif quantity == "hankel":
        table = ortho_table_cached(params, n_values[-1] + 1, ctx, "split")
        for nv in n_values:
            oracle = table.logD[nv]
            est = log_hankel_asymptotic(params, nv, ctx)
            rows.append((nv, oracle, est, abs(oracle - est), True))
    else:
        raise DomainError(f"unknown series quantity {quantity!r}")
    return rows
