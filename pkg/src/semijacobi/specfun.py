"""Extended-precision scalar special functions and the weight's moments.

The weight under study is w(x, t) = (1 - x^2)^alpha * exp(-t x^2) on [-1, 1]
with alpha > -1.  Its even moments have a closed form built from the gamma
function and Kummer's confluent hypergeometric function Phi(a, b; z); odd
moments vanish by symmetry.  This module provides those scalars plus the
logarithm of the Barnes G-function, which enters the Hankel determinant
asymptotics.

Every public operation routes through the precision-doubling certificate of
:mod:`semijacobi.precision`: the value is recomputed at twice the mantissa
width and accepted only when the two runs agree to the context's digit
target.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError
from .precision import PrecisionContext, certify, snap_real

# Glaisher-Kinkelin constant A to 64 decimal digits (classical value, see
# e.g. OEIS A074962).  Stored as a literal rather than derived at runtime;
# accuracy of log_barnes_g is capped accordingly.
GLAISHER_A_64 = "1.282427129100622636875342568869791727767688927325001192063740022"
_GLAISHER_MAX_DIGITS = 58

# Guard bits added to every working precision before rounding to the
# requested width.
_GUARD = 16

_KUMMER_TERM_CAP = 10**6


@dataclass(frozen=True)
class WeightParams:
    """The pair (alpha, t) defining w(x,t) = (1-x^2)^alpha e^(-t x^2).

    Inputs are snapped to dyadic rationals once at construction, so the same
    WeightParams yields bit-identical parameter values at every working
    precision.  Pass strings ("0.1") for decimals without an exact binary
    representation.
    """

    alpha: mpf
    t: mpf

    def __init__(self, alpha, t):
        a = snap_real(alpha)
        if not a > -1:
            raise DomainError(f"alpha must exceed -1 for an integrable weight, got {a}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "t", snap_real(t))


def _require_positive(z: mpf, name: str) -> None:
    if not z > 0:
        raise DomainError(f"{name} requires a positive argument, got {z}")


def log_gamma(z, ctx: PrecisionContext) -> mpf:
    """ln Gamma(z) for real z > 0, certified to ctx accuracy."""
    z = snap_real(z)
    _require_positive(z, "log_gamma")

    def produce(bits: int) -> mpf:
        with mp.workprec(bits + _GUARD):
            return mpmath.loggamma(z)

    # scale_floor=1: ln Gamma legitimately vanishes at z=1,2, where a purely
    # relative agreement test would choke on rounding noise.
    value, _ = certify(produce, ctx, scale_floor=1, label="log_gamma")
    return value


def _kummer_series(a: mpf, b: mpf, z: mpf, bits: int) -> mpf:
    """Power series sum_k (a)_k/(b)_k z^k/k! at the ambient precision."""
    total = mpf(1)
    term = mpf(1)
    small = 0
    threshold = mpf(2) ** (-(bits + 8))
    for k in range(_KUMMER_TERM_CAP):
        term = term * (a + k) / (b + k) * z / (k + 1)
        total += term
        if abs(term) <= abs(total) * threshold:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise PrecisionError(
        f"Kummer series did not converge within {_KUMMER_TERM_CAP} terms "
        f"for (a={a}, b={b}, z={z})"
    )


def _kummer_at(a: mpf, b: mpf, z: mpf, bits: int) -> mpf:
    with mp.workprec(bits + _GUARD):
        if z < 0:
            # Kummer transformation: the raw series at z < 0 alternates and
            # cancels catastrophically; e^z Phi(b-a, b; -z) does not.
            return mpmath.exp(z) * _kummer_series(b - a, b, -z, bits)
        return _kummer_series(a, b, z, bits)


def kummer_phi(a, b, z, ctx: PrecisionContext) -> mpf:
    """Confluent hypergeometric Phi(a, b; z) for real arguments.

    Negative z is always routed through the Kummer transformation
    Phi(a,b;z) = e^z Phi(b-a, b; -z).
    """
    a, b, z = snap_real(a), snap_real(b), snap_real(z)
    if b <= 0 and b == mpmath.floor(b):
        raise DomainError(f"kummer_phi undefined at nonpositive integer b={b}")

    value, _ = certify(lambda bits: _kummer_at(a, b, z, bits), ctx, label="kummer_phi")
    return value


def _moment_at(j: int, alpha: mpf, t: mpf, bits: int) -> mpf:
    with mp.workprec(bits + _GUARD):
        half = mpf(j + 1) / 2
        ratio = mpmath.exp(
            mpmath.loggamma(1 + alpha)
            + mpmath.loggamma(half)
            - mpmath.loggamma(half + 1 + alpha)
        )
        return ratio * _kummer_at(half, half + 1 + alpha, -t, bits)


def moment(j: int, params: WeightParams, ctx: PrecisionContext) -> mpf:
    """The j-th moment of the weight: integral of x^j w(x,t) over [-1,1].

    Exactly zero for odd j; for even j the Gamma/Phi closed form is used.
    """
    if j < 0:
        raise DomainError(f"moment index must be nonnegative, got {j}")
    if j % 2 == 1:
        return mpf(0)
    value, _ = certify(
        lambda bits: _moment_at(j, params.alpha, params.t, bits),
        ctx,
        label=f"moment({j})",
    )
    return value


@lru_cache(maxsize=200_000)
def _loggamma_cached(z: mpf, bits: int) -> mpf:
    """ln Gamma(z) at a fixed working width, memoized.

    The Barnes-G recursion and the Hankel-at-zero product sweep the same
    unit-spaced argument lattices over and over; caching turns their cost
    from quadratic in the recursion depth into linear.
    """
    with mp.workprec(bits):
        return mpmath.loggamma(z)


def _log_barnes_at(z: mpf, bits: int, digits: int) -> mpf:
    """ln G(z) via the large-argument expansion plus downward recursion.

    The expansion for ln G(z+1) is applied at an argument large enough that
    the first omitted term (of order z^-10) is below 10^(-digits-5); smaller
    arguments are reached through G(z+1) = Gamma(z) G(z).  Truncation error
    is therefore controlled analytically, while rounding error is covered by
    the caller's precision doubling.
    """
    with mp.workprec(bits + _GUARD):
        threshold = mpf(10) ** ((digits + 3) / mpf(10))
        log_a = mpmath.log(mpmath.mpmathify(GLAISHER_A_64))
        shift = mpf(0)
        w = z
        while w < threshold:
            # lnG(w) = lnG(w+1) - lnGamma(w)
            shift -= _loggamma_cached(w, bits + _GUARD)
            w += 1
        zz = w - 1  # expansion variable: lnG(zz+1) with zz >= threshold-1
        series = (
            zz**2 * (mpmath.log(zz) / 2 - mpf(3) / 4)
            + zz / 2 * mpmath.log(2 * mpmath.pi)
            - mpmath.log(zz) / 12
            + mpf(1) / 12
            - log_a
            - 1 / (240 * zz**2)
            + 1 / (1008 * zz**4)
            - 1 / (1440 * zz**6)
            + 1 / (1056 * zz**8)
        )
        return series + shift


def log_barnes_g(z, ctx: PrecisionContext) -> mpf:
    """ln G(z) for real z > 0, where G is the Barnes G-function.

    G satisfies G(z+1) = Gamma(z) G(z) with G(1) = 1.
    """
    z = snap_real(z)
    _require_positive(z, "log_barnes_g")
    if ctx.agreement_digits > _GLAISHER_MAX_DIGITS:
        raise PrecisionError(
            f"log_barnes_g is limited to {_GLAISHER_MAX_DIGITS} digits by the "
            f"stored Glaisher constant"
        )

    value, _ = certify(
        lambda bits: _log_barnes_at(z, bits, ctx.agreement_digits),
        ctx,
        scale_floor=1,
        label="log_barnes_g",
    )
    return value
