"""Second-order nonlinear difference equations in n, as residuals and iterators.

Three sequences from the pipeline each satisfy a three-term nonlinear
difference equation: the recurrence coefficient beta_n, the sub-leading
coefficient p(n,t), and the accumulated ladder sum H_n.  The residual
functions evaluate those equations on oracle (Cholesky-pipeline) data; the
iterator solves the beta equation forward from its Kummer-ratio initial
data as an independent verification path.

Forward iteration of nonlinear recurrences of this type is numerically
unstable (the wanted solution is minimal-like), so the iterator tracks a
per-step cancellation estimate and aborts when the accumulated loss would
eat into the requested accuracy.  The Cholesky pipeline remains the
production route; the iterator exists to confirm it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import mpmath
from mpmath import mp, mpf

from .closedforms import beta_one
from .errors import DomainError, PrecisionError, SingularStepError
from .ladder import AuxTable
from .orthocore import BITS_PER_DEGREE, OrthoTable, conditioning_bits
from .precision import PrecisionContext
from .report import format_real, scaled_residual
from .specfun import WeightParams


def _check_interior(n: int, n_max: int) -> None:
    if not 1 <= n <= n_max - 1:
        raise DomainError(f"need 1 <= n <= {n_max - 1}, got {n}")


def beta_difference_residual(table: OrthoTable, n: int) -> mpf:
    """Scaled residual of the beta difference equation at one n.

    (n-2t b_n)^2 + 2a(n-2t b_n)
      = b_n (2n-1+2a-2t b_{n-1}-2t b_n)(2n+1+2a-2t b_n-2t b_{n+1}),
    scaled by the largest constituent term.
    """
    _check_interior(n, table.n_max)
    alpha, t = table.params.alpha, table.params.t
    b = table.beta
    with mp.workprec(table.mantissa_bits):
        r = n - 2 * t * b[n]
        lower = 2 * n - 1 + 2 * alpha - 2 * t * (b[n - 1] + b[n])
        upper = 2 * n + 1 + 2 * alpha - 2 * t * (b[n] + b[n + 1])
        t1 = r * r
        t2 = 2 * alpha * r
        t3 = b[n] * lower * upper
        return scaled_residual(t1 + t2 - t3, (t1, t2, t3))


def p_difference_residual(table: OrthoTable, n: int) -> mpf:
    """Scaled residual of the sub-leading-coefficient difference equation.

    With X = n - 2t p(n) + 2t p(n+1):
    X^2 + 2aX = (2n-1+2a-2t p(n-1)+2t p(n+1))
                * [n + 2p(n) + 2t(p(n)-p(n+1))(p(n-1)-p(n)-1)].
    """
    _check_interior(n, table.n_max)
    alpha, t = table.params.alpha, table.params.t
    p = table.p
    with mp.workprec(table.mantissa_bits):
        x = n - 2 * t * p[n] + 2 * t * p[n + 1]
        t1 = x * x
        t2 = 2 * alpha * x
        t3 = (2 * n - 1 + 2 * alpha - 2 * t * p[n - 1] + 2 * t * p[n + 1]) * (
            n + 2 * p[n] + 2 * t * (p[n] - p[n + 1]) * (p[n - 1] - p[n] - 1)
        )
        return scaled_residual(t1 + t2 - t3, (t1, t2, t3))


def h_difference_residual(aux: AuxTable, n: int) -> mpf:
    """Scaled residual of the H_n difference equation.

    With A = 2t+H_n-H_{n-1} and B = 2t+H_{n+1}-H_n:
    A^2 B^2 (H_n + n H_{n-1} - n H_{n+1})
      + [nAB - 2t(2nt+H_n)] [AB(2t-n-2a+H_{n+1}-H_{n-1}) + 2t(2nt+H_n)] = 0.
    """
    _check_interior(n, aux.n_max)
    alpha, t = aux.params.alpha, aux.params.t
    H = aux.H
    with mp.workprec(aux.mantissa_bits):
        a_fac = 2 * t + H[n] - H[n - 1]
        b_fac = 2 * t + H[n + 1] - H[n]
        ab = a_fac * b_fac
        t1 = ab * ab * (H[n] + n * H[n - 1] - n * H[n + 1])
        f1 = n * ab - 2 * t * (2 * n * t + H[n])
        f2 = ab * (2 * t - n - 2 * alpha + H[n + 1] - H[n - 1]) + 2 * t * (
            2 * n * t + H[n]
        )
        return scaled_residual(t1 + f1 * f2, (t1, f1 * f2))


def r_from_h(aux: AuxTable, n: int) -> mpf:
    """Reconstruct r_n from (H_{n-1}, H_n, H_{n+1}) alone.

    r_n = [nAB - 2t(2nt+H_n)] / (AB) with the A, B factors of
    h_difference_residual; raises when the denominator underflows.
    """
    _check_interior(n, aux.n_max)
    t = aux.params.t
    H = aux.H
    with mp.workprec(aux.mantissa_bits):
        ab = (2 * t + H[n] - H[n - 1]) * (2 * t + H[n + 1] - H[n])
        if not abs(ab) > mpf(2) ** (-aux.mantissa_bits // 2):
            raise SingularStepError(
                f"ladder-sum factors vanish at n={n}; r_n not recoverable"
            )
        return (n * ab - 2 * t * (2 * n * t + H[n])) / ab


# --------------------------------------------------------------------------
# forward iteration of the beta difference equation
# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Forward-iterated beta sequence with cancellation accounting.

    values[n] is the iterated beta_n for n = 0..n_target; digits_lost[n] is
    the accumulated decimal-digit cancellation estimate incurred producing
    values[n] (0 for the initial data).
    """

    params: WeightParams
    n_target: int
    values: tuple
    digits_lost: tuple
    mantissa_bits: int


def iterate_beta(
    params: WeightParams,
    n_target: int,
    ctx: PrecisionContext | None = None,
    extra_bits_per_step: int = 2 * BITS_PER_DEGREE,
) -> IterationTrace:
    """Iterate the beta difference equation from beta_0 = 0 and the
    Kummer-ratio beta_1.

    The equation is affine in beta_{n+1}; each step solves for it and logs
    the cancellation of the final subtraction.  Aborts with
    SingularStepError when the affine coefficient 2t beta_n
    (2n-1+2a-2t(beta_{n-1}+beta_n)) falls below 10^-agreement_digits, and
    with PrecisionError when accumulated cancellation would push the result
    below agreement accuracy.  Refuses t = 0, where the equation holds
    identically and determines nothing beyond the classical closed form
    (see closedforms.beta_zero).
    """
    ctx = ctx or PrecisionContext.from_env()
    if params.t == 0:
        raise DomainError(
            "the difference equation degenerates at t=0; "
            "use the classical closed form beta_zero instead"
        )
    if n_target < 1:
        raise DomainError(f"n_target must be at least 1, got {n_target}")
    bits = (
        max(ctx.mantissa_bits, conditioning_bits(n_target))
        + extra_bits_per_step * n_target
    )
    run_ctx = ctx.floor_bits(bits)
    alpha, t = params.alpha, params.t
    budget = bits * mpmath.log(2, 10) - ctx.agreement_digits - 5

    with mp.workprec(bits):
        values = [mpf(0), beta_one(params, run_ctx)]
        lost = [mpf(0), mpf(0)]
        coeff_floor = mpf(10) ** (-ctx.agreement_digits)
        for n in range(1, n_target):
            bn, bm = values[n], values[n - 1]
            r = n - 2 * t * bn
            lower = 2 * n - 1 + 2 * alpha - 2 * t * (bm + bn)
            coeff = 2 * t * bn * lower
            if not abs(coeff) > coeff_floor:
                raise SingularStepError(
                    f"affine coefficient {format_real(coeff, 3)} of beta_{n + 1} "
                    f"vanishes at n={n} (alpha={format_real(alpha, 6)}, "
                    f"t={format_real(t, 6)})"
                )
            upper = (r * r + 2 * alpha * r) / (bn * lower)
            head = 2 * n + 1 + 2 * alpha - 2 * t * bn
            top = head - upper
            values.append(top / (2 * t))
            cancel = max(abs(head), abs(upper)) / max(
                abs(top), mpf(2) ** (-bits)
            )
            step_loss = max(mpf(0), mpmath.log10(cancel))
            lost.append(lost[-1] + step_loss)
            if lost[-1] > budget:
                raise PrecisionError(
                    f"iteration lost ~{format_real(lost[-1], 3)} digits by "
                    f"n={n + 1}, beyond the {format_real(budget, 3)}-digit budget"
                )
    return IterationTrace(
        params=params,
        n_target=n_target,
        values=tuple(values),
        digits_lost=tuple(lost),
        mantissa_bits=bits,
    )


def iterate_comparison_csv(
    trace: IterationTrace, table: OrthoTable, digits: int | None = None
) -> str:
    """CSV comparing the iterated sequence against the pipeline oracle.

    Columns: n, beta_iter, beta_oracle, abs_diff, digits_lost.
    """
    if (
        trace.params.alpha != table.params.alpha
        or trace.params.t != table.params.t
    ):
        raise DomainError("trace and table were built for different parameters")
    digits = digits or table.agreement_digits + 5
    top = min(trace.n_target, table.n_max)
    lines = ["n,beta_iter,beta_oracle,abs_diff,digits_lost"]
    with mp.workprec(max(trace.mantissa_bits, table.mantissa_bits)):
        for n in range(top + 1):
            diff = abs(trace.values[n] - table.beta[n])
            lines.append(
                ",".join(
                    (
                        str(n),
                        format_real(trace.values[n], digits),
                        format_real(table.beta[n], digits),
                        format_real(diff, 3),
                        format_real(trace.digits_lost[n], 3),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def perturbed_table(table: OrthoTable, n: int, delta) -> OrthoTable:
    """Copy of a table with beta_n shifted by delta (sensitivity probes)."""
    beta = list(table.beta)
    beta[n] = beta[n] + mpmath.mpmathify(delta)
    return replace(table, beta=tuple(beta))
