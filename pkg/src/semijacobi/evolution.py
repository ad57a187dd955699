"""Differential structure in t: derivative identities, Riccati flow,
Painleve V, and the second-order ODE residuals.

Every equation here carries 1/t coefficients, so t = 0 is a singular point
of the flows even though the pipeline data are perfectly regular there;
grids and integrations keep away from it and take their initial data from
the pipeline at t_start, never from a series at 0.

Derivatives for residual checks are taken by central finite differences on
small symmetric stencils around each requested center, with the step
balancing truncation against the certified precision of the pipeline
values (h ~ eps^(1/3) for first derivatives, eps^(1/6) when a second
derivative participates).  Each check evaluates its stencil at h and h/2
and converts the difference into a Richardson truncation estimate, so a
reported residual comes with an internal error bar.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, GridError, PrecisionError, SingularStepError
from .orthocore import OrthoTable, ortho_table_cached
from .precision import PrecisionContext
from .report import scaled_residual
from .specfun import WeightParams

DEFAULT_T_CENTERS = (mpf("0.5"), mpf(1), mpf("1.5"))

# grid uniformity tolerance demanded by the stencils
GRID_UNIFORMITY = mpf("1e-12")


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A quantity sampled on a strictly increasing, uniform t grid."""

    params: WeightParams
    n: int
    t_grid: tuple
    values: tuple

    def __post_init__(self):
        if len(self.t_grid) != len(self.values):
            raise GridError("t_grid and values differ in length")
        if len(self.t_grid) >= 2:
            steps = [
                self.t_grid[i + 1] - self.t_grid[i]
                for i in range(len(self.t_grid) - 1)
            ]
            if any(s <= 0 for s in steps):
                raise GridError("t_grid must be strictly increasing")
            lo, hi = min(steps), max(steps)
            if hi - lo > GRID_UNIFORMITY * hi:
                raise GridError(
                    f"grid spacing varies by more than 1e-12 "
                    f"({hi - lo} over step {hi})"
                )


@dataclass(frozen=True)
class RiccatiState:
    """One point of the coupled flow: (t, R_n(t), r_n(t))."""

    t: mpf
    R: mpf
    r: mpf


@dataclass(frozen=True)
class FdCheck:
    """Outcome of a finite-difference residual check.

    truncation_estimate is the Richardson bound on the stencil's own error
    at the returned step; residuals below it are indistinguishable from
    exact agreement at this grid resolution.
    """

    max_residual: mpf
    truncation_estimate: mpf
    argmax_t: mpf
    stencil_order: int
    step: mpf
    skipped: tuple = ()
    branch_residual: mpf | None = None


def uniform_grid(t_start, t_end, count: int) -> tuple:
    """count equally spaced points from t_start to t_end inclusive."""
    if count < 1:
        raise GridError("grid needs at least one point")
    t_start, t_end = mpmath.mpmathify(t_start), mpmath.mpmathify(t_end)
    if count == 1:
        return (t_start,)
    h = (t_end - t_start) / (count - 1)
    return tuple(t_start + k * h for k in range(count))


def _table_at(params: WeightParams, t, n: int, ctx: PrecisionContext) -> OrthoTable:
    return ortho_table_cached(WeightParams(params.alpha, t), n + 1, ctx, "split")


def _aux_r(table: OrthoTable, n: int) -> mpf:
    alpha, t = table.params.alpha, table.params.t
    return 2 * n + 1 + 2 * alpha - 2 * t * (table.beta[n] + table.beta[n + 1])


def _h_sum(table: OrthoTable, n: int) -> mpf:
    return sum(_aux_r(table, j) for j in range(n))


def _first_step(ctx: PrecisionContext) -> mpf:
    # balance h^2 truncation against eps/h rounding for first derivatives
    return mpf(10) ** (-mpf(ctx.agreement_digits) / 3)


def _second_step(ctx: PrecisionContext) -> mpf:
    # balance h^4 truncation against eps/h^2 rounding for second derivatives
    return mpf(10) ** (-mpf(ctx.agreement_digits) / 6)


def _d1_order2(f, h):
    # f = (f(-h), f(0), f(h))
    return (f[2] - f[0]) / (2 * h)


def _d1_order4(f, h):
    # f = (f(-2h), f(-h), f(0), f(h), f(2h))
    return (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h)


def _d2_order4(f, h):
    return (-f[4] + 16 * f[3] - 30 * f[2] + 16 * f[1] - f[0]) / (12 * h * h)


# --------------------------------------------------------------------------
# derivative identities
# --------------------------------------------------------------------------
def _check_centers(t_centers):
    for t in t_centers:
        if t == 0:
            raise DomainError("t = 0 sits on the singular line; move the center")


def dln_h_check(
    params: WeightParams,
    n: int,
    ctx: PrecisionContext | None = None,
    t_centers=None,
    step=None,
    fd_tolerance=mpf("1e-12"),
) -> mpf:
    """Max scaled residual of 2t (ln h_n)' = R_n - 2n - 1 - 2alpha.

    The derivative is a second-order central difference evaluated at step h
    and h/2 around each center; the h/2 value is the reported one and the
    spread gives a Richardson truncation estimate, which must stay below
    fd_tolerance or the grid is declared too coarse.
    """
    ctx = ctx or PrecisionContext.from_env()
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    _check_centers(t_centers)
    h = mpmath.mpmathify(step) if step is not None else _first_step(ctx)
    worst = mpf(0)
    with mp.workprec(4 * ctx.mantissa_bits):
        for t0 in t_centers:
            tabs = {
                k: _table_at(params, t0 + k * h / 2, n, ctx)
                for k in (-2, -1, 0, 1, 2)
            }
            logs = {k: mpmath.log(tabs[k].h[n]) for k in tabs}
            center = tabs[0]
            rhs = _aux_r(center, n) - 2 * n - 1 - 2 * params.alpha

            def residual_at(deriv):
                lhs = 2 * t0 * deriv
                return scaled_residual(lhs - rhs, (lhs, rhs))

            res_h = residual_at(_d1_order2((logs[-2], logs[0], logs[2]), h))
            res_h2 = residual_at(_d1_order2((logs[-1], logs[0], logs[1]), h / 2))
            estimate = abs(res_h - res_h2) / 3
            if estimate > fd_tolerance:
                raise GridError(
                    f"step {mpmath.nstr(h, 3)} too coarse at t={mpmath.nstr(t0, 6)}: "
                    f"truncation estimate {mpmath.nstr(estimate, 3)} exceeds "
                    f"{mpmath.nstr(fd_tolerance, 3)}"
                )
            worst = max(worst, res_h2)
    return worst


def dp_check(
    params: WeightParams,
    n: int,
    ctx: PrecisionContext | None = None,
    t_centers=None,
    step=None,
    fd_tolerance=mpf("1e-12"),
) -> mpf:
    """Max scaled residual over both derivative forms of p(n,t).

    Checks 2t p' = beta_n R_n - r_n - 2p and p' = beta_n beta_{n-1}
    simultaneously (their difference is an algebraic identity already
    covered by the ladder suite, so agreement here pins the derivative).
    """
    if n < 1:
        raise DomainError("p(n,t) derivative checks need n >= 1")
    ctx = ctx or PrecisionContext.from_env()
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    _check_centers(t_centers)
    h = mpmath.mpmathify(step) if step is not None else _first_step(ctx)
    worst = mpf(0)
    with mp.workprec(4 * ctx.mantissa_bits):
        for t0 in t_centers:
            tabs = {
                k: _table_at(params, t0 + k * h / 2, n, ctx)
                for k in (-2, -1, 0, 1, 2)
            }
            ps = {k: tabs[k].p[n] for k in tabs}
            center = tabs[0]
            beta_n = center.beta[n]
            r_n = n - 2 * t0 * beta_n
            rhs_a = beta_n * _aux_r(center, n) - r_n - 2 * center.p[n]
            rhs_b = beta_n * center.beta[n - 1]

            def residuals_at(deriv):
                lhs_a = 2 * t0 * deriv
                yield scaled_residual(lhs_a - rhs_a, (lhs_a, rhs_a))
                yield scaled_residual(deriv - rhs_b, (deriv, rhs_b))

            d_h = _d1_order2((ps[-2], ps[0], ps[2]), h)
            d_h2 = _d1_order2((ps[-1], ps[0], ps[1]), h / 2)
            res_h = max(residuals_at(d_h))
            res_h2 = max(residuals_at(d_h2))
            estimate = abs(res_h - res_h2) / 3
            if estimate > fd_tolerance:
                raise GridError(
                    f"step {mpmath.nstr(h, 3)} too coarse at t={mpmath.nstr(t0, 6)}: "
                    f"truncation estimate {mpmath.nstr(estimate, 3)} exceeds "
                    f"{mpmath.nstr(fd_tolerance, 3)}"
                )
            worst = max(worst, res_h2)
    return worst


# --------------------------------------------------------------------------
# coupled Riccati flow
# --------------------------------------------------------------------------
def riccati_rhs(
    state: RiccatiState, params: WeightParams, n: int
) -> tuple[mpf, mpf]:
    """(dr/dt, dR/dt) of the coupled flow at one state.

    2t r' = 2t(r^2 + 2 alpha r)/R - (n - r) R
    2t R' = 4 alpha t - R^2 + (2 alpha + 1 - 2t) R + 2(2t + R) r
    """
    t, R, r = state.t, state.R, state.r
    alpha = params.alpha
    if t == 0:
        raise SingularStepError("the flow is singular at t = 0")
    if R == 0:
        raise SingularStepError(f"R_n vanishes at t = {t}; flow undefined")
    drdt = (2 * t * (r * r + 2 * alpha * r) / R - (n - r) * R) / (2 * t)
    dRdt = (
        4 * alpha * t - R * R + (2 * alpha + 1 - 2 * t) * R + 2 * (2 * t + R) * r
    ) / (2 * t)
    return drdt, dRdt


def riccati_integrate(
    params: WeightParams,
    n: int,
    t_start,
    t_end,
    ctx: PrecisionContext | None = None,
    rtol: float = 1e-13,
    atol: float = 1e-14,
    points: int = 33,
) -> tuple[GridFunction, GridFunction]:
    """Integrate the coupled flow from pipeline data at t_start.

    Returns (R grid function, r grid function) sampled from the dense
    output on `points` uniform points.  The span must stay strictly on one
    side of t = 0; reversed spans integrate backwards.
    """
    from scipy.integrate import solve_ivp

    ctx = ctx or PrecisionContext.from_env()
    t_start, t_end = mpmath.mpmathify(t_start), mpmath.mpmathify(t_end)
    if t_start <= 0 or t_end <= 0:
        raise DomainError("the flow is singular at t = 0; spans must stay positive")
    start_table = _table_at(params, t_start, n, ctx)
    R0 = _aux_r(start_table, n)
    r0 = n - 2 * t_start * start_table.beta[n]

    if t_end == t_start:
        grid = (t_start,)
        gf = lambda vals: GridFunction(params=params, n=n, t_grid=grid, values=vals)
        return gf((R0,)), gf((r0,))

    alpha_f = float(params.alpha)

    def fun(t, y):
        R, r = y
        drdt = (2 * t * (r * r + 2 * alpha_f * r) / R - (n - r) * R) / (2 * t)
        dRdt = (
            4 * alpha_f * t
            - R * R
            + (2 * alpha_f + 1 - 2 * t) * R
            + 2 * (2 * t + R) * r
        ) / (2 * t)
        return (dRdt, drdt)

    sol = solve_ivp(
        fun,
        (float(t_start), float(t_end)),
        (float(R0), float(r0)),
        method="RK45",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if not sol.success:
        raise PrecisionError(f"flow integration failed: {sol.message}")

    lo, hi = (t_start, t_end) if t_end > t_start else (t_end, t_start)
    grid = uniform_grid(lo, hi, points)
    Rs, rs = [], []
    for t in grid:
        R, r = sol.sol(float(t))
        Rs.append(mpf(R))
        rs.append(mpf(r))
    gfR = GridFunction(params=params, n=n, t_grid=grid, values=tuple(Rs))
    gfr = GridFunction(params=params, n=n, t_grid=grid, values=tuple(rs))
    return gfR, gfr


# --------------------------------------------------------------------------
# second-order ODE residuals by finite differences
# --------------------------------------------------------------------------
def _fd_scan(params, n, t_centers, ctx, step, values_fn, residual_fn):
    """Shared h-vs-h/2 scan: values_fn(table, t) -> sample value;
    residual_fn(t0, center_table, value0, d1, d2) -> scaled residual or None
    to skip the center.  Returns an FdCheck."""
    _check_centers(t_centers)
    ctx = ctx or PrecisionContext.from_env()
    h = mpmath.mpmathify(step) if step is not None else _second_step(ctx)
    worst, worst_t, estimate = mpf(0), t_centers[0], mpf(0)
    skipped = []
    with mp.workprec(4 * ctx.mantissa_bits):
        for t0 in t_centers:
            offs = (-4, -3, -2, -1, 0, 1, 2, 3, 4)
            tabs = {k: _table_at(params, t0 + k * h / 2, n, ctx) for k in offs}
            vals = {k: values_fn(tabs[k], t0 + k * h / 2) for k in offs}
            center = tabs[0]

            def res_for(stride, hh):
                f = tuple(vals[k * stride] for k in (-2, -1, 0, 1, 2))
                d1 = _d1_order4(f, hh)
                d2 = _d2_order4(f, hh)
                return residual_fn(t0, center, vals[0], d1, d2)

            res_h = res_for(2, h)
            res_h2 = res_for(1, h / 2)
            if res_h is None or res_h2 is None:
                skipped.append(t0)
                continue
            estimate = max(estimate, abs(res_h - res_h2) * 16 / 15)
            if res_h2 > worst:
                worst, worst_t = res_h2, t0
    return FdCheck(
        max_residual=worst,
        truncation_estimate=estimate,
        argmax_t=worst_t,
        stencil_order=4,
        step=h / 2,
        skipped=tuple(skipped),
    )


def painleve_v_residual(
    params: WeightParams,
    n: int,
    t_centers=None,
    ctx: PrecisionContext | None = None,
    step=None,
) -> FdCheck:
    """Residual of the Painleve V equation for W_n = 1 + 2t/R_n.

    W'' = (3W-1)(W')^2 / (2W(W-1)) - W'/t
          + (W-1)^2 (mu1 W + mu2/W)/t^2 + mu3 W/t + mu4 W(W+1)/(W-1)
    with mu1 = alpha^2/2, mu2 = -1/8, mu3 = (2n+1+2alpha)/2, mu4 = -1/2.
    Centers where W hits 0 or 1 (poles of the right side) are skipped and
    reported.
    """
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    alpha = params.alpha
    mu1, mu2, mu3, mu4 = (
        alpha * alpha / 2,
        mpf(-1) / 8,
        (2 * n + 1 + 2 * alpha) / mpf(2),
        mpf(-1) / 2,
    )
    tiny = mpf(10) ** (-12)

    def w_of(table, t):
        return 1 + 2 * t / _aux_r(table, n)

    def residual(t0, center, W, d1, d2):
        if abs(W - 1) < tiny or abs(W) < tiny:
            return None
        t1 = (3 * W - 1) * d1 * d1 / (2 * W * (W - 1))
        t2 = -d1 / t0
        t3 = (W - 1) ** 2 * (mu1 * W + mu2 / W) / (t0 * t0)
        t4 = mu3 * W / t0
        t5 = mu4 * W * (W + 1) / (W - 1)
        return scaled_residual(d2 - t1 - t2 - t3 - t4 - t5, (d2, t1, t2, t3, t4, t5))

    return _fd_scan(params, n, t_centers, ctx, step, w_of, residual)


def beta_ode_residual(
    params: WeightParams,
    n: int,
    t_centers=None,
    ctx: PrecisionContext | None = None,
    step=None,
) -> FdCheck:
    """Residual of the squared second-order ODE for beta_n.

    The printed equation carries one leftover auxiliary symbol r_n inside a
    coefficient; it is replaced by its identity value n - 2t beta_n, the
    substitution under which the equation verifies numerically.
    """
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    alpha = params.alpha

    def beta_of(table, t):
        return table.beta[n]

    def residual(t0, center, b, d1, d2):
        t = t0
        u = t * d1 + b  # (t beta_n)' = t beta_n' + beta_n
        v = t * d2 + 2 * d1  # (t beta_n)''
        y = n - 2 * t * b  # r_n via the linear identity
        lhs_inner = (
            8 * t * t * u * v
            + 4 * t * (2 * t - 2 * n + 1 - 2 * alpha + 4 * t * b) * u * u
            - 4 * t * u * (2 * n * alpha + 2 * (n - 2 * alpha) * y - 3 * y * y)
            + 4 * y**4
            - 4 * (n - 3 * alpha + t) * y**3
            + 4 * (n * (t - 3 * alpha) - 2 * alpha * (t - alpha)) * y * y
            + 8 * n * alpha * (t - alpha) * y
        )
        lhs = lhs_inner * lhs_inner
        rhs_bracket = (
            2 * t * v
            + (2 * t - 2 * alpha + 1 - 2 * y) * u
            + 3 * y * y
            - 2 * (n - 2 * alpha) * y
            - 2 * n * alpha
        )
        rhs = (
            rhs_bracket
            * rhs_bracket
            * 16
            * t
            * t
            * (b * y * (n + 2 * alpha - 2 * t * b) + u * u)
        )
        return scaled_residual(lhs - rhs, (lhs, rhs))

    return _fd_scan(params, n, t_centers, ctx, step, beta_of, residual)


def h_ode_residual(
    params: WeightParams,
    n: int,
    t_centers=None,
    ctx: PrecisionContext | None = None,
    step=None,
) -> FdCheck:
    """Residual of the squared second-order ODE for H_n, plus branch check.

    Also reconstructs r_n from the quadratic
    r_n^2 + 2(t+alpha) r_n + 2t H_n' - H_n = 0 on the positive branch
    (the one matching r_n(0) = n) and reports its worst deviation from the
    linear identity value as branch_residual.
    """
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    alpha = params.alpha
    branch_worst = [mpf(0)]

    def h_of(table, t):
        return _h_sum(table, n)

    def residual(t0, center, H, d1, d2):
        t = t0
        a = alpha
        lhs_inner = (
            4 * t**3 * d2 * d2
            + 4 * t * t * d2 * (d1 - 2 * (t + a))
            + 8 * t * t * d1**3
            - t * d1 * d1 * (4 * H + 4 * (t + a) ** 2 - 32 * n * t - 1)
            - 4
            * t
            * d1
            * (4 * (2 * n + a + t) * H + (3 * t + a) * (4 * n * t + 4 * n * a + 1))
            + 8 * (n + a + t) * H * H
            + 4
            * H
            * (
                2 * t**3
                + 6 * t * t * (n + a)
                + t * (8 * n * a + 6 * a * a + 1)
                + 2 * a * a * (n + a)
            )
            + 8 * t * (t + a) ** 2 * (2 * n * (t + a) + 1)
        )
        lhs = lhs_inner * lhs_inner
        rhs_brace = (
            2 * t * t * d2
            + t * (4 * H + 8 * n * t + 1) * d1
            - 2 * H * H
            - 2 * H * (2 * n * t + (t + a) ** 2)
            - 2 * t * (t + a) * (2 * n * (t + a) + 1)
        )
        rhs = 16 * (H - 2 * t * d1 + (t + a) ** 2) * rhs_brace * rhs_brace

        disc = (t + a) ** 2 + H - 2 * t * d1
        if disc >= 0:
            r_rec = -t - a + mpmath.sqrt(disc)
            r_lin = n - 2 * t * center.beta[n]
            branch_worst[0] = max(
                branch_worst[0], scaled_residual(r_rec - r_lin, (r_rec, r_lin))
            )
        return scaled_residual(lhs - rhs, (lhs, rhs))

    check = _fd_scan(params, n, t_centers, ctx, step, h_of, residual)
    return FdCheck(
        max_residual=check.max_residual,
        truncation_estimate=check.truncation_estimate,
        argmax_t=check.argmax_t,
        stencil_order=check.stencil_order,
        step=check.step,
        skipped=check.skipped,
        branch_residual=branch_worst[0],
    )


def log_hankel_consistency(
    params: WeightParams,
    n: int,
    ctx: PrecisionContext | None = None,
    t_centers=None,
    step=None,
) -> mpf:
    """Max scaled residual of H_n - n(n+2alpha) = 2t (ln D_n)'.

    Ties the ladder sum to the Hankel determinant through the derivative,
    closing the loop between the algebraic and determinantal routes.
    """
    ctx = ctx or PrecisionContext.from_env()
    t_centers = tuple(t_centers) if t_centers is not None else DEFAULT_T_CENTERS
    _check_centers(t_centers)
    h = mpmath.mpmathify(step) if step is not None else _first_step(ctx)
    worst = mpf(0)
    with mp.workprec(4 * ctx.mantissa_bits):
        for t0 in t_centers:
            tabs = {k: _table_at(params, t0 + k * h, n, ctx) for k in (-1, 0, 1)}
            d1 = _d1_order2(
                (tabs[-1].logD[n], tabs[0].logD[n], tabs[1].logD[n]), h
            )
            lhs = _h_sum(tabs[0], n) - n * (n + 2 * params.alpha)
            rhs = 2 * t0 * d1
            worst = max(worst, scaled_residual(lhs - rhs, (lhs, rhs)))
    return worst


def elimination_residual(
    params: WeightParams,
    n: int,
    t,
    ctx: PrecisionContext | None = None,
) -> mpf:
    """Scaled residual of the eliminated quadratic in r_n.

    r_n^2 + 2(t + alpha) r_n + 2t H_n' - H_n = 0, where H_n' is rebuilt
    from the flow right side via 2 beta_n R_n = H_n' + 2 r_n - r_n', so a
    zero residual certifies that eliminating r_n' from the coupled system
    is legitimate on pipeline data.
    """
    ctx = ctx or PrecisionContext.from_env()
    t = mpmath.mpmathify(t)
    with mp.workprec(4 * ctx.mantissa_bits):
        table = _table_at(params, t, n, ctx)
        R = _aux_r(table, n)
        r = n - 2 * t * table.beta[n]
        H = _h_sum(table, n)
        drdt, _ = riccati_rhs(RiccatiState(t=t, R=R, r=r), params, n)
        h_prime = 2 * table.beta[n] * R - 2 * r + drdt
        terms = (r * r, 2 * (t + params.alpha) * r, 2 * t * h_prime, H)
        return scaled_residual(mpmath.fsum(terms[:3]) - H, terms)
