"""Closed-form special values of the pipeline quantities.

At t = 0 the weight is the classical symmetric Jacobi (Gegenbauer) weight
and every quantity of interest has a rational closed form in (n, alpha);
at general t the n = 1, 2 values are ratios of Kummer functions.  These are
the anchors for difference-equation iteration, ODE initial conditions, and
the oracle tests.

All rational forms are written so that removable 0/0 points inside
alpha > -1 (they occur only at n = 1 for some) are already cancelled.
"""
from __future__ import annotations

from mpmath import mp, mpf

from .errors import DomainError
from .precision import PrecisionContext, snap_real
from .specfun import WeightParams, kummer_phi


def beta_zero(n: int, alpha) -> mpf:
    """beta_n at t=0: n(n+2a) / ((2n-1+2a)(2n+1+2a))."""
    alpha = snap_real(alpha)
    with mp.extraprec(16):
        if n == 0:
            return mpf(0)
        if n == 1:
            # the (1+2a) factors cancel; this form survives alpha = -1/2
            return 1 / (3 + 2 * alpha)
        return (
            mpf(n) * (n + 2 * alpha)
            / ((2 * n - 1 + 2 * alpha) * (2 * n + 1 + 2 * alpha))
        )


def p_zero(n: int, alpha) -> mpf:
    """p(n, 0) = -n(n-1) / (2(2n-1+2a)); zero for n <= 1."""
    alpha = snap_real(alpha)
    with mp.extraprec(16):
        if n <= 1:
            return mpf(0)
        return -mpf(n) * (n - 1) / (2 * (2 * n - 1 + 2 * alpha))


def beta_deriv_zero(n: int, alpha) -> mpf:
    """d(beta_n)/dt at t=0.

    Computed as beta_n(0) (beta_{n-1}(0) - beta_{n+1}(0)), the derivative
    relation p' = beta_n beta_{n-1} combined with beta_n = p(n) - p(n+1).
    This product form equals the explicit rational expression
    4n(n+a)(n+2a)(1-4a^2) / ((2n-1+2a)^2 (2n+1+2a)^2 (2n-3+2a)(2n+3+2a))
    wherever the latter's denominator is nonzero, and remains finite at its
    removable 0/0 points (n=1, a=1/2 and n=2, a=-1/2).
    """
    with mp.extraprec(16):
        return beta_zero(n, alpha) * (beta_zero(n - 1, alpha) - beta_zero(n + 1, alpha))


def h_aux_zero(n: int, alpha) -> mpf:
    """H_n at t=0: n(n+2a), the sum of R_j(0) = 2j+1+2a over j < n."""
    alpha = snap_real(alpha)
    with mp.extraprec(16):
        return mpf(n) * (n + 2 * alpha)


def h_aux_deriv_zero(n: int, alpha) -> mpf:
    """dH_n/dt at t=0: -2n(2n^2+2na-1) / ((2n-1+2a)(2n+1+2a))."""
    alpha = snap_real(alpha)
    with mp.extraprec(16):
        if n == 0:
            return mpf(0)
        if n == 1:
            # numerator and denominator share (1+2a); survives alpha = -1/2
            return -2 / (3 + 2 * alpha)
        return (
            -2 * mpf(n) * (2 * n**2 + 2 * n * alpha - 1)
            / ((2 * n - 1 + 2 * alpha) * (2 * n + 1 + 2 * alpha))
        )


def pv_w_zero(n: int, alpha) -> mpf:
    """W_n(0) = 1 for the Painleve V transform W_n = 1 + 2t/R_n."""
    return mpf(1)


def pv_w_deriv_zero(n: int, alpha) -> mpf:
    """W_n'(0) = 2/(2n+1+2a) (from R_n(0) = 2n+1+2a)."""
    alpha = snap_real(alpha)
    with mp.extraprec(16):
        den = 2 * n + 1 + 2 * alpha
        if den == 0:
            raise DomainError(f"W_{n}'(0) undefined at alpha={alpha}")
        return 2 / den


def beta_one(params: WeightParams, ctx: PrecisionContext) -> mpf:
    """beta_1(t) = Phi(3/2, 5/2+a; -t) / ((3+2a) Phi(1/2, 3/2+a; -t))."""
    a, t = params.alpha, params.t
    with mp.workprec(ctx.mantissa_bits + 16):
        num = kummer_phi(mpf(3) / 2, mpf(5) / 2 + a, -t, ctx)
        den = kummer_phi(mpf(1) / 2, mpf(3) / 2 + a, -t, ctx)
        return num / ((3 + 2 * a) * den)


def p_two(params: WeightParams, ctx: PrecisionContext) -> mpf:
    """p(2, t) = -beta_1(t), since p(1,t) = 0 and beta_n = p(n) - p(n+1)."""
    return -beta_one(params, ctx)


def h_aux_one(params: WeightParams, ctx: PrecisionContext) -> mpf:
    """H_1(t) = (1+2a) Phi(1/2, 1/2+a; -t) / Phi(1/2, 3/2+a; -t).

    Valid for alpha > -1/2 as written (the first Phi's second parameter
    vanishes at alpha = -1/2); the algebraic route R_0 = 1+2a-2t beta_1
    covers the rest of the parameter range.
    """
    a, t = params.alpha, params.t
    with mp.workprec(ctx.mantissa_bits + 16):
        num = kummer_phi(mpf(1) / 2, mpf(1) / 2 + a, -t, ctx)
        den = kummer_phi(mpf(1) / 2, mpf(3) / 2 + a, -t, ctx)
        return (1 + 2 * a) * num / den


def h_aux_two(params: WeightParams, ctx: PrecisionContext) -> mpf:
    """H_2(t) = H_1(t) + (3+2a) Phi(3/2, 3/2+a; -t) / Phi(3/2, 5/2+a; -t)."""
    a, t = params.alpha, params.t
    with mp.workprec(ctx.mantissa_bits + 16):
        num = kummer_phi(mpf(3) / 2, mpf(3) / 2 + a, -t, ctx)
        den = kummer_phi(mpf(3) / 2, mpf(5) / 2 + a, -t, ctx)
        return h_aux_one(params, ctx) + (3 + 2 * a) * num / den
