"""Working-precision policy.

All numerical values in this package are mpmath floats produced under an
explicit binary working precision.  Because the moment matrices involved are
exponentially ill-conditioned, no fixed precision is trusted a priori:
every top-level quantity is computed at some mantissa width m and again at
2m, and accepted only when the two runs share the leading
``agreement_digits`` decimal digits.  ``certify`` implements that loop.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Callable, Sequence, TypeVar

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionError

# Inputs (alpha, t, grid points) are snapped to dyadic rationals at this
# fixed width once, so that every later evaluation, at whatever working
# precision, sees bit-identical parameters.
SNAP_BITS = 4096

ENV_MANTISSA_BITS = "SEMIJACOBI_MANTISSA_BITS"
ENV_AGREEMENT_DIGITS = "SEMIJACOBI_AGREEMENT_DIGITS"

T = TypeVar("T")


def snap_real(x) -> mpf:
    """Convert x (str, int, float, Fraction, mpf) to a dyadic mpf.

    Strings are preferred for non-representable decimals: ``snap_real("0.1")``
    gives the same dyadic value in every run, independent of the working
    precision active at call time.
    """
    with mp.workprec(SNAP_BITS):
        return mpmath.mpmathify(x)


@dataclass(frozen=True)
class PrecisionContext:
    """Mantissa width plus the doubling policy that certifies results.

    mantissa_bits:    starting binary precision (>= 64).
    max_doublings:    how many times the width may double before giving up.
    agreement_digits: decimal digits two successive precisions must share
                      before a value is accepted.
    """

    mantissa_bits: int = 192
    max_doublings: int = 3
    agreement_digits: int = 25

    def __post_init__(self):
        if self.mantissa_bits < 64:
            raise ValueError("mantissa_bits must be at least 64")
        if self.agreement_digits < 1:
            raise ValueError("agreement_digits must be positive")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be nonnegative")

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionContext":
        """Default context, honoring the precision environment variables."""
        kw = {}
        bits = os.environ.get(ENV_MANTISSA_BITS)
        if bits is not None:
            kw["mantissa_bits"] = int(bits)
        digits = os.environ.get(ENV_AGREEMENT_DIGITS)
        if digits is not None:
            kw["agreement_digits"] = int(digits)
        kw.update(overrides)
        return cls(**kw)

    def floor_bits(self, mantissa_bits: int) -> "PrecisionContext":
        """This context, widened to at least `mantissa_bits` if narrower."""
        return replace(self, mantissa_bits=max(mantissa_bits, self.mantissa_bits))

    @property
    def tolerance(self) -> mpf:
        """Relative agreement threshold, 10^(-agreement_digits)."""
        return mpf(10) ** (-self.agreement_digits)


def agree(a, b, digits: int, scale_floor=0) -> bool:
    """True when a and b share their first `digits` significant digits.

    `scale_floor` sets a minimum comparison scale: quantities whose natural
    magnitude is O(1) but that legitimately pass through zero (log Gamma,
    log G) use scale_floor=1 so that pure rounding noise around zero is not
    mistaken for disagreement.  Leave it at 0 for strictly relative tests.
    """
    if a == b:
        return True
    scale = max(abs(a), abs(b), scale_floor)
    if scale == 0:
        return True
    return abs(a - b) / scale <= mpf(10) ** (-digits)


def all_agree(xs: Sequence, ys: Sequence, digits: int, scale_floor=0) -> int | None:
    """Index of the first disagreement between two value sequences, or None."""
    for i, (x, y) in enumerate(zip(xs, ys)):
        if not agree(x, y, digits, scale_floor):
            return i
    return None


def certify(
    producer: Callable[[int], T],
    ctx: PrecisionContext,
    *,
    values: Callable[[T], Sequence] = lambda v: (v,),
    scale_floor=0,
    label: str = "value",
) -> tuple[T, int]:
    """Run `producer` at doubling precisions until two runs agree.

    producer(bits) must evaluate the quantity entirely at the given binary
    precision.  `values` extracts the sequence of scalars that the agreement
    test applies to.  Returns (result of the higher-precision run, bits of
    the lower run that it agreed with).

    Raises PrecisionError when max_doublings is exhausted without agreement.
    """
    bits = ctx.mantissa_bits
    low = producer(bits)
    bad = None
    for _ in range(max(ctx.max_doublings, 1)):
        high = producer(2 * bits)
        bad = all_agree(values(low), values(high), ctx.agreement_digits, scale_floor)
        if bad is None:
            return high, bits
        low, bits = high, 2 * bits
    raise PrecisionError(
        f"{label}: no {ctx.agreement_digits}-digit agreement after "
        f"doubling up to {2 * bits} bits (first disagreement at index {bad})"
    )
