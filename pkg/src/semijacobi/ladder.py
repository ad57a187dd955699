"""Ladder coefficients, auxiliary quantities, and the identity suite.

The lowering/raising operators for this weight have coefficients

  A_n(z) = 2t + R_n/(1-z^2),      B_n(z) = z r_n/(1-z^2),

where R_n and r_n admit two independent routes: integrals of P_n^2/(1-y^2)
and y P_n P_{n-1}/(1-y^2) against the weight (convergent for alpha > 0),
and algebraic expressions in the recurrence data,

  r_n = n - 2t beta_n,            R_n = 2n+1+2alpha - 2t(beta_n + beta_{n+1}),

valid for every alpha > -1.  The compatibility conditions of the ladder
pair then force a family of nonlinear identities tying R_n, r_n, beta_n,
p(n,t) and H_n = sum_{j<n} R_j together; identity_residuals evaluates each
of them as a scaled residual over a table.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import DomainError
from .orthocore import OrthoTable, QuadratureRule, _recurrence_row, quad_eval
from .report import ResidualEntry, ResidualReport, scaled_residual

ALGEBRAIC = "algebraic"
INTEGRAL = "integral"


@dataclass(frozen=True, eq=False)
class AuxTable:
    """Auxiliary ladder quantities R_n, r_n, H_n for one (alpha, t).

    R and r run over n = 0..n_max, H over n = 0..n_max+1 with H_0 = 0 and
    H_{n+1} = H_n + R_n.  provenance flags, per entry of R/r, whether the
    value came from the algebraic route or the quadrature integrals.
    """

    params: object
    n_max: int
    R: tuple
    r: tuple
    H: tuple
    provenance: tuple
    mantissa_bits: int


@dataclass(frozen=True)
class LadderCoeffs:
    """One ladder coefficient pair as (constant part, pole coefficient).

    A_n(z) = a_const + a_pole/(1-z^2) and B_n(z) = z b_pole/(1-z^2) with
    b_const identically zero for this even weight; kept explicit so the
    compatibility checks can match coefficients structurally.
    """

    n: int
    a_const: mpf
    a_pole: mpf
    b_const: mpf
    b_pole: mpf

    def a_at(self, z):
        return self.a_const + self.a_pole / (1 - z * z)

    def a_deriv_at(self, z):
        return 2 * z * self.a_pole / (1 - z * z) ** 2

    def b_at(self, z):
        return self.b_const + z * self.b_pole / (1 - z * z)

    def b_deriv_at(self, z):
        return self.b_pole * (1 + z * z) / (1 - z * z) ** 2


def build_aux_table(table: OrthoTable) -> AuxTable:
    """Algebraic-route AuxTable from the recurrence data of a table."""
    params = table.params
    alpha, t = params.alpha, params.t
    with mp.workprec(table.mantissa_bits):
        R = tuple(
            2 * n + 1 + 2 * alpha - 2 * t * (table.beta[n] + table.beta[n + 1])
            for n in range(table.n_max + 1)
        )
        r = tuple(n - 2 * t * table.beta[n] for n in range(table.n_max + 1))
        H = [mpf(0)]
        for n in range(table.n_max + 1):
            H.append(H[-1] + R[n])
    return AuxTable(
        params=params,
        n_max=table.n_max,
        R=R,
        r=r,
        H=tuple(H),
        provenance=(ALGEBRAIC,) * (table.n_max + 1),
        mantissa_bits=table.mantissa_bits,
    )


def ladder_coeffs(aux: AuxTable, n: int) -> LadderCoeffs:
    """The (constant, pole) descriptor pair for A_n and B_n."""
    if not 0 <= n <= aux.n_max:
        raise DomainError(f"degree {n} outside aux range 0..{aux.n_max}")
    return LadderCoeffs(
        n=n,
        a_const=2 * aux.params.t,
        a_pole=aux.R[n],
        b_const=mpf(0),
        b_pole=aux.r[n],
    )


def _integral_pass(table: OrthoTable, rule: QuadratureRule):
    """One quadrature sweep producing every R_n and r_n integral at once.

    Both integrands are even in y, so the nonnegative-node half of the rule
    with doubled pair weights covers them; one recurrence row per node
    yields all degrees simultaneously.
    """
    params = table.params
    alpha, t = params.alpha, params.t
    if not alpha > 0:
        raise DomainError(
            f"ladder integrals diverge for alpha = {alpha} <= 0; "
            f"use the algebraic route instead"
        )
    top = table.n_max
    with mp.workprec(rule.bits + 16):
        accR = [mpf(0)] * (top + 1)
        accr = [mpf(0)] * (top + 1)
        for k, (x, w, s) in enumerate(rule.nodes):
            row = _recurrence_row(table.beta, top, x)
            base = w * s ** (alpha - 1) * mpmath.exp(-t * x * x)
            pair = base if k == 0 else 2 * base
            for n in range(top + 1):
                accR[n] += pair * row[n] * row[n]
                # y P_n P_{n-1} is even; the k=0 node contributes 0 via x=0
                if n >= 1:
                    accr[n] += pair * x * row[n] * row[n - 1]
        R = tuple(2 * alpha * accR[n] / table.h[n] for n in range(top + 1))
        r = (mpf(0),) + tuple(
            2 * alpha * accr[n] / table.h[n - 1] for n in range(1, top + 1)
        )
    return R, r


_INTEGRAL_CACHE: dict = {}


def aux_by_integral(
    table: OrthoTable, rule: QuadratureRule, n: int
) -> tuple[mpf, mpf]:
    """(R_n, r_n) from the defining integrals, for alpha > 0.

    The full sweep over the rule is cached per (table, rule) pair, so
    repeated per-n calls cost one quadrature pass total.
    """
    if not 0 <= n <= table.n_max:
        raise DomainError(f"degree {n} outside table range 0..{table.n_max}")
    key = (id(table), id(rule))
    if key not in _INTEGRAL_CACHE:
        if len(_INTEGRAL_CACHE) > 64:
            _INTEGRAL_CACHE.clear()
        _INTEGRAL_CACHE[key] = _integral_pass(table, rule)
    R, r = _INTEGRAL_CACHE[key]
    return R[n], r[n]


# --------------------------------------------------------------------------
# identity suite
# --------------------------------------------------------------------------
def identity_residuals(
    table: OrthoTable, aux: AuxTable, tolerance=None
) -> ResidualReport:
    """Scaled residuals of every ladder identity over 1 <= n <= n_max-1.

    Each residual is |left - right| divided by the largest magnitude among
    the identity's constituent terms (floor 1), so one tolerance is
    meaningful across n even though raw terms grow like n^2.
    """
    if aux.params is not table.params and (
        aux.params.alpha != table.params.alpha or aux.params.t != table.params.t
    ):
        raise DomainError("table and aux were built for different parameters")
    alpha, t = table.params.alpha, table.params.t
    if tolerance is None:
        tolerance = mpf(10) ** (-(table.agreement_digits - 5))
    beta, p = table.beta, table.p
    R, r, H = aux.R, aux.r, aux.H

    names = (
        "aux_pair_sum",
        "aux_linear_in_beta",
        "aux_affine_in_beta",
        "aux_quadratic_product",
        "aux_weighted_sum",
        "subleading_link",
        "subleading_hankel_link",
        "compat_pole_match",
    )
    worst = {name: (mpf(-1), None) for name in names}

    def consider(name, n, value):
        if value > worst[name][0]:
            worst[name] = (value, n)

    with mp.workprec(table.mantissa_bits):
        for n in range(1, table.n_max):
            # r_{n+1} + r_n = R_n - 2 alpha
            lhs, rhs = r[n + 1] + r[n], R[n] - 2 * alpha
            consider("aux_pair_sum", n, scaled_residual(lhs - rhs, (lhs, rhs)))

            # r_n = n - 2t beta_n
            lhs, rhs = r[n], n - 2 * t * beta[n]
            consider("aux_linear_in_beta", n, scaled_residual(lhs - rhs, (lhs, rhs)))

            # R_n = 2n + 1 + 2 alpha - 2t (beta_n + beta_{n+1})
            lhs = R[n]
            rhs = 2 * n + 1 + 2 * alpha - 2 * t * (beta[n] + beta[n + 1])
            consider("aux_affine_in_beta", n, scaled_residual(lhs - rhs, (lhs, rhs)))

            # r_n^2 + 2 alpha r_n = beta_n R_n R_{n-1}
            lhs = r[n] ** 2 + 2 * alpha * r[n]
            rhs = beta[n] * R[n] * R[n - 1]
            consider(
                "aux_quadratic_product", n, scaled_residual(lhs - rhs, (lhs, rhs))
            )

            # 2(t-alpha) r_n - r_n^2 + H_n = 2t beta_n (R_n + R_{n-1})
            t1 = 2 * (t - alpha) * r[n]
            t2 = -(r[n] ** 2)
            t3 = H[n]
            rhs = 2 * t * beta[n] * (R[n] + R[n - 1])
            consider(
                "aux_weighted_sum",
                n,
                scaled_residual(t1 + t2 + t3 - rhs, (t1, t2, t3, rhs)),
            )

            # beta_n R_n = r_n + 2 p(n) + 2t beta_n beta_{n-1}
            lhs = beta[n] * R[n]
            t1, t2, t3 = r[n], 2 * p[n], 2 * t * beta[n] * beta[n - 1]
            consider(
                "subleading_link",
                n,
                scaled_residual(lhs - t1 - t2 - t3, (lhs, t1, t2, t3)),
            )

            # 4t p(n) = H_n - r_n - n(n - 1 + 2 alpha)
            lhs = 4 * t * p[n]
            t1, t2, t3 = H[n], -r[n], -n * (n - 1 + 2 * alpha)
            consider(
                "subleading_hankel_link",
                n,
                scaled_residual(lhs - t1 - t2 - t3, (lhs, t1, t2, t3)),
            )

            # compatibility condition, 1/(1-z^2) coefficient level:
            # pole of B_{n+1} + B_n matches pole of z A_n - v'(z)
            cn, cn1 = ladder_coeffs(aux, n), ladder_coeffs(aux, n + 1)
            lhs = cn1.b_pole + cn.b_pole
            rhs = cn.a_pole - 2 * alpha
            consider("compat_pole_match", n, scaled_residual(lhs - rhs, (lhs, rhs)))

    results = [
        ResidualEntry(
            name=name,
            max_residual=worst[name][0],
            argmax={"alpha": alpha, "t": t, "n": worst[name][1]},
        )
        for name in names
    ]
    return ResidualReport(
        suite="ladder-identities",
        grid={"alpha": alpha, "t": t, "n": f"1..{table.n_max - 1}"},
        tolerance=tolerance,
        results=results,
    )


def aux_sum_closed_form(table: OrthoTable, aux: AuxTable, n: int, z) -> mpf:
    """sum_{j<n} A_j(z) in closed form via the recurrence data.

    Equals 2nt + [n^2 - 2n(t-alpha) + 2t beta_n (2t+1-2t beta_{n+1})
    + 2t(n-2t beta_n)(n+2alpha-2t beta_n)/R_n] / (1-z^2).
    """
    alpha, t = table.params.alpha, table.params.t
    beta = table.beta
    with mp.workprec(table.mantissa_bits):
        z = mpmath.mpmathify(z)
        s = 1 - z * z
        pole = (
            n * n
            - 2 * n * (t - alpha)
            + 2 * t * beta[n] * (2 * t + 1 - 2 * t * beta[n + 1])
            + 2 * t * (n - 2 * t * beta[n]) * (n + 2 * alpha - 2 * t * beta[n])
            / aux.R[n]
        )
        return 2 * n * t + pole / s


def pn_ode_residual(
    table: OrthoTable, aux: AuxTable, n: int, z_samples
) -> mpf:
    """Max scaled residual of the polynomial second-order equation.

    P_n'' - (v' + A_n'/A_n) P_n' + (B_n' - B_n A_n'/A_n + sum_{j<n} A_j) P_n
    evaluated at each sample, scaled by the largest of the three terms.
    """
    from .orthocore import eval_monic_derivs

    alpha, t = table.params.alpha, table.params.t
    coeffs = ladder_coeffs(aux, n)
    worst = mpf(0)
    with mp.workprec(table.mantissa_bits):
        for z in z_samples:
            z = mpmath.mpmathify(z)
            if abs(abs(z) - 1) < mpf(2) ** (-20):
                raise DomainError(f"sample z={z} too close to the weight endpoints")
            P, dP, d2P = eval_monic_derivs(table, n, z)
            s = 1 - z * z
            vprime = 2 * t * z + 2 * alpha * z / s
            ratio = coeffs.a_deriv_at(z) / coeffs.a_at(z)
            term1 = d2P
            term2 = -(vprime + ratio) * dP
            term3 = (
                coeffs.b_deriv_at(z)
                - coeffs.b_at(z) * ratio
                + aux_sum_closed_form(table, aux, n, z)
            ) * P
            res = scaled_residual(term1 + term2 + term3, (term1, term2, term3))
            worst = max(worst, res)
    return worst
