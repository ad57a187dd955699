"""From moments to orthogonal-polynomial data, with a quadrature oracle.

The pipeline: the Gram matrix of the monomial basis under w(x,t) is the
Hankel moment matrix (mu_{j+k}).  Its Cholesky factor C encodes everything
this package studies:

  * h_n   = C[n][n]^2            (squared norm of the monic P_n),
  * p_n   = -C[n][n-2]/C[n-2][n-2]   (coefficient of x^{n-2} in P_n;
            the sub-diagonal C[n][n-1] vanishes by parity),
  * beta_n = h_n / h_{n-1},
  * ln D_n = sum_{j<n} ln h_j    (log Hankel determinant).

Moment matrices on [-1,1] are exponentially ill-conditioned, so the build
runs at a conditioning-scaled precision and is accepted only after the
doubling certificate of :mod:`semijacobi.precision` (a nonpositive pivot
counts as automatic disagreement and triggers the same retry).

A tanh-sinh (double-exponential) quadrature rule provides the independent
oracle: it integrates (1-x^2)^alpha * e^{-t x^2} times polynomials without
special-casing the endpoint singularity, because the substitution
x = tanh(pi/2 sinh u) maps it away double-exponentially.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import ConditioningError, DomainError, PrecisionError
from .precision import PrecisionContext, all_agree
from .specfun import WeightParams, _moment_at

# Conditioning floor: empirically the moment-matrix Cholesky loses a few
# bits per polynomial degree; 6 bits/degree plus slack keeps the first
# doubling pass almost always sufficient.
BITS_PER_DEGREE = 6
BITS_BASE = 64

_QUAD_GUARD = 16

Factor = Literal["one", "inv_one_minus_x2", "x_over_one_minus_x2"]


def conditioning_bits(n_max: int) -> int:
    """Default working precision for a table up to degree n_max."""
    return BITS_BASE + BITS_PER_DEGREE * n_max


# --------------------------------------------------------------------------
# tanh-sinh quadrature
# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Double-exponential nodes on (-1,1), nonnegative half only.

    Entries are (x_k, w_k, s_k) with s_k = 1 - x_k^2 held in the
    cancellation-free form sech^2(pi/2 sinh(k h)); integrands evaluate the
    weight's endpoint factor from s_k directly.  k=0 is the x=0 node; the
    negative half is implied by symmetry.
    """

    scheme: str
    level: int
    bits: int
    min_exponent: float
    nodes: tuple  # of (x, w, one_minus_x2)


@lru_cache(maxsize=64)
def tanh_sinh_rule(level: int, bits: int, min_exponent: float = -0.875) -> QuadratureRule:
    """Build the tanh-sinh rule with step 2^-level at the given precision.

    Nodes are emitted until w * (1-x^2)^min_exponent underflows the target
    precision, so the rule is guaranteed to resolve the endpoint tail of any
    integrand whose (1-x^2)-exponent is at least min_exponent.  The default
    -7/8 covers the plain weight down to alpha = -7/8 and the singular
    ladder factors down to alpha = 1/8; callers outside that range must
    request a smaller min_exponent (nodes grow like 1/(min_exponent+1)).
    """
    if level < 1:
        raise DomainError("quadrature level must be positive")
    if not min_exponent > -1:
        raise DomainError(f"min_exponent must exceed -1, got {min_exponent}")
    nodes = []
    with mp.workprec(bits + 2 * _QUAD_GUARD):
        h = mpf(2) ** (-level)
        half_pi = mpmath.pi / 2
        cutoff = mpf(2) ** (-(bits + 40))
        e = mpmath.mpmathify(min_exponent)
        k = 0
        while True:
            u = half_pi * mpmath.sinh(k * h)
            s = mpmath.sech(u) ** 2  # 1 - tanh^2 = sech^2
            x = mpmath.tanh(u)
            w = h * half_pi * mpmath.cosh(k * h) * s
            nodes.append((x, w, s))
            if k > 0 and w * s**e < cutoff:
                break
            k += 1
            if k > (1 << level) * 256:
                raise PrecisionError("tanh-sinh node generation failed to terminate")
    return QuadratureRule(
        scheme="tanh-sinh",
        level=level,
        bits=bits,
        min_exponent=min_exponent,
        nodes=tuple(nodes),
    )


def quad_eval(f: Callable[[mpf, mpf], mpf], rule: QuadratureRule) -> tuple[mpf, mpf]:
    """Integrate f(x, 1-x^2) over (-1,1) with the rule.

    Returns (integral, l1) where l1 is the sum of |w f|, used as the scale
    for near-zero integrals.  Symmetric node pairs are summed together so
    odd integrands cancel to rounding.
    """
    x0, w0, s0 = rule.nodes[0]
    total = w0 * f(x0, s0)
    l1 = abs(total)
    for x, w, s in rule.nodes[1:]:
        term = w * (f(x, s) + f(-x, s))
        total += term
        l1 += abs(term)
    return total, l1


def quad_adaptive(
    make_f: Callable[[int], Callable[[mpf, mpf], mpf]],
    bits: int,
    rel_digits: int,
    start_level: int = 6,
    max_level: int = 12,
    min_exponent: float = -0.875,
) -> mpf:
    """Increase the rule level until two successive levels agree.

    make_f(bits) returns the integrand, evaluated under workprec(bits).
    Agreement is relative to max(|integral|, l1 * tol): integrals that are
    tol-small relative to the integrand's L1 mass count as (zero) agreement.
    """
    tol = mpf(10) ** (-rel_digits)
    prev = None
    with mp.workprec(bits + _QUAD_GUARD):
        f = make_f(bits)
        for level in range(start_level, max_level + 1):
            rule = tanh_sinh_rule(level, bits, min_exponent)
            value, l1 = quad_eval(f, rule)
            if prev is not None:
                scale = max(abs(value), l1 * tol)
                if scale == 0 or abs(value - prev) <= tol * scale:
                    return value
            prev = value
    raise PrecisionError(
        f"quadrature did not reach {rel_digits}-digit agreement by level {max_level}"
    )


# --------------------------------------------------------------------------
# the table
# --------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class OrthoTable:
    """Orthogonal-polynomial data for one (alpha, t) at certified precision.

    Arrays run one index past n_max (the factorization of the
    (n_max+2)-square moment matrix yields them for free), so that any
    consumer needing beta_{n_max+1} - e.g. the pole coefficient
    R_{n_max} = 2n+1+2alpha - 2t(beta_n + beta_{n+1}) - can stay inside one
    table:

      h[0..n_max+1], beta[0..n_max+1], p[0..n_max+1], logD[0..n_max+1]

    with beta[0] = p[0] = p[1] = 0 and logD[k] = ln D_k (logD[0] = 0 for the
    empty product).  logD is accumulated from h and inherits its relative
    certificate as an absolute one (sum of n terms each relatively certified).

    mantissa_bits records the precision of the stored values; certified_bits
    the lower precision they were checked against.
    """

    params: WeightParams
    n_max: int
    h: tuple
    beta: tuple
    p: tuple
    logD: tuple
    mantissa_bits: int
    certified_bits: int
    agreement_digits: int
    method: str


def _cholesky(M: list, bits: int) -> list:
    """Lower Cholesky factor of symmetric positive-definite M (list of rows).

    Raises ConditioningError (carrying the row index) on a nonpositive
    pivot, the signature of precision exhaustion for moment matrices.
    """
    N = len(M)
    C = [[mpf(0)] * N for _ in range(N)]
    with mp.workprec(bits):
        for i in range(N):
            Ci = C[i]
            for j in range(i + 1):
                Cj = C[j]
                s = M[i][j]
                for k in range(j):
                    s -= Ci[k] * Cj[k]
                if i == j:
                    if not s > 0:
                        raise ConditioningError(
                            f"moment matrix lost positive-definiteness at degree {i} "
                            f"under {bits} bits",
                            degree=i,
                        )
                    Ci[i] = mpmath.sqrt(s)
                else:
                    Ci[j] = s / Cj[j]
    return C


def _build_arrays_full(params: WeightParams, n_max: int, bits: int):
    N = n_max + 2
    with mp.workprec(bits):
        # unary + rounds the guard-precision moments to the working width,
        # keeping the full and split factorizations bit-identical
        mu = [+_moment_at(2 * q, params.alpha, params.t, bits) for q in range(N)]
        zero = mpf(0)
        M = [[mu[(j + k) // 2] if (j + k) % 2 == 0 else zero for k in range(N)] for j in range(N)]
        C = _cholesky(M, bits)
        h = [C[i][i] ** 2 for i in range(N)]
        p = [zero, zero] + [-C[i][i - 2] / C[i - 2][i - 2] for i in range(2, N)]
    return h, p


def _build_arrays_split(params: WeightParams, n_max: int, bits: int):
    # Checkerboard zeros make the full factorization two interleaved
    # half-size Hankel factorizations: even-degree polynomials live in
    # y = x^2 with Gram (mu_{2(i+j)}), odd ones (P = x*Q(x^2)) in
    # (mu_{2(i+j)+2}).  Same arithmetic as the full path, 4x fewer flops.
    N = n_max + 2
    me = (N - 1) // 2 + 1
    mo = N // 2
    with mp.workprec(bits):
        mu = [+_moment_at(2 * q, params.alpha, params.t, bits) for q in range(me + mo)]
        Me = [[mu[i + j] for j in range(me)] for i in range(me)]
        Mo = [[mu[i + j + 1] for j in range(mo)] for i in range(mo)]
        Ce = _cholesky(Me, bits)
        Co = _cholesky(Mo, bits)
        zero = mpf(0)
        h = [zero] * N
        p = [zero] * N
        for n in range(N):
            m = n // 2
            C = Ce if n % 2 == 0 else Co
            h[n] = C[m][m] ** 2
            if m >= 1:
                p[n] = -C[m][m - 1] / C[m - 1][m - 1]
    return h, p


def _finish_table(params, n_max, h, p, bits):
    with mp.workprec(bits):
        beta = [mpf(0)] + [h[i] / h[i - 1] for i in range(1, len(h))]
        logD = [mpf(0)]
        for i in range(len(h) - 1):
            logD.append(logD[-1] + mpmath.log(h[i]))
    return h, beta, p, logD


def build_ortho_table(
    params: WeightParams,
    n_max: int,
    ctx: PrecisionContext | None = None,
    method: str = "full",
) -> OrthoTable:
    """Compute h_n, beta_n, p(n,t), ln D_n for n through n_max (+1).

    The context's mantissa width is raised to the conditioning floor
    64 + 6*n_max, then the doubling policy governs: the build is repeated at
    twice the width until the two runs share agreement_digits digits on
    every h, beta and p entry.  A nonpositive Cholesky pivot counts as
    disagreement.  method="split" uses the even/odd fast path (validated
    against "full" in the test suite).
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    if method not in ("full", "split"):
        raise DomainError(f"unknown build method {method!r}")
    ctx = (ctx or PrecisionContext.from_env()).floor_bits(conditioning_bits(n_max))
    build = _build_arrays_full if method == "full" else _build_arrays_split

    def attempt(bits):
        try:
            return build(params, n_max, bits)
        except ConditioningError:
            return None

    bits = ctx.mantissa_bits
    low = attempt(bits)
    failure_degree = None
    for _ in range(max(ctx.max_doublings, 1)):
        try:
            high = build(params, n_max, 2 * bits)
        except ConditioningError as exc:
            failure_degree = exc.degree
            high = None
        if high is not None and low is not None:
            bad = all_agree(
                low[0] + low[1][2:], high[0] + high[1][2:], ctx.agreement_digits
            )
            if bad is None:
                h, beta, p, logD = _finish_table(params, n_max, high[0], high[1], 2 * bits)
                return OrthoTable(
                    params=params,
                    n_max=n_max,
                    h=tuple(h),
                    beta=tuple(beta),
                    p=tuple(p),
                    logD=tuple(logD),
                    mantissa_bits=2 * bits,
                    certified_bits=bits,
                    agreement_digits=ctx.agreement_digits,
                    method=method,
                )
        low, bits = high, 2 * bits
    raise ConditioningError(
        f"table build for n_max={n_max} failed the doubling policy at "
        f"{2 * bits} bits",
        degree=failure_degree,
    )


@lru_cache(maxsize=256)
def ortho_table_cached(
    params: WeightParams,
    n_max: int,
    ctx: PrecisionContext | None = None,
    method: str = "full",
) -> OrthoTable:
    """Memoized build_ortho_table (all arguments are hashable values)."""
    return build_ortho_table(params, n_max, ctx, method)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------
def _recurrence_row(beta: Sequence, n: int, x: mpf) -> list:
    """[P_0(x), ..., P_n(x)] by x P_k = P_{k+1} + beta_k P_{k-1}."""
    values = [mpf(1)]
    if n >= 1:
        values.append(x)
    for k in range(1, n):
        values.append(x * values[k] - beta[k] * values[k - 1])
    return values


def _check_degree(table: OrthoTable, n: int) -> None:
    if not 0 <= n <= table.n_max:
        raise DomainError(f"degree {n} outside table range 0..{table.n_max}")


def eval_monic(table: OrthoTable, n: int, x) -> mpf:
    """P_n(x, t) by the three-term recurrence (P_0 = 1, beta_0 = 0)."""
    _check_degree(table, n)
    with mp.workprec(table.mantissa_bits):
        return _recurrence_row(table.beta, n, mpmath.mpmathify(x))[n]


def eval_monic_derivs(table: OrthoTable, n: int, x) -> tuple[mpf, mpf, mpf]:
    """(P_n, P_n', P_n'') by the differentiated three-term recurrence."""
    _check_degree(table, n)
    with mp.workprec(table.mantissa_bits):
        x = mpmath.mpmathify(x)
        P, dP, d2P = mpf(1), mpf(0), mpf(0)
        Pm, dPm, d2Pm = mpf(0), mpf(0), mpf(0)  # degree -1
        for k in range(n):
            bk = table.beta[k]
            P1 = x * P - bk * Pm
            dP1 = P + x * dP - bk * dPm
            d2P1 = 2 * dP + x * d2P - bk * d2Pm
            Pm, dPm, d2Pm = P, dP, d2P
            P, dP, d2P = P1, dP1, d2P1
        return P, dP, d2P


def quad_inner_product(
    degrees: tuple[int, int],
    factor: Factor,
    params: WeightParams,
    rule: QuadratureRule,
    table: OrthoTable,
) -> mpf:
    """Integral of P_m P_n * factor * w(x,t) over (-1,1) by the rule.

    factor "one" is the plain inner product; "inv_one_minus_x2" and
    "x_over_one_minus_x2" are the ladder-operator integrands 1/(1-y^2) and
    y/(1-y^2), which converge only for alpha > 0.
    """
    m, n = degrees
    _check_degree(table, m)
    _check_degree(table, n)
    if factor not in ("one", "inv_one_minus_x2", "x_over_one_minus_x2"):
        raise DomainError(f"unknown integrand factor {factor!r}")
    if factor != "one" and not params.alpha > 0:
        raise DomainError(
            f"factor {factor!r} diverges for alpha = {params.alpha} <= 0; "
            f"use the algebraic route instead"
        )
    exponent = params.alpha if factor == "one" else params.alpha - 1
    if not exponent >= rule.min_exponent:
        raise DomainError(
            f"rule resolves endpoint exponents down to {rule.min_exponent}; "
            f"integrand has exponent {exponent}"
        )
    alpha, t = params.alpha, params.t
    top = max(m, n)
    beta = table.beta

    with mp.workprec(rule.bits + _QUAD_GUARD):

        def f(x, s):
            row = _recurrence_row(beta, top, x)
            g = row[m] * row[n] * s**alpha * mpmath.exp(-t * x * x)
            if factor == "inv_one_minus_x2":
                return g / s
            if factor == "x_over_one_minus_x2":
                return g * x / s
            return g

        value, _ = quad_eval(f, rule)
        return value


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------
def ortho_table_csv(table: OrthoTable, digits: int | None = None) -> str:
    """CSV rows n=0..n_max with columns n,h_n,beta_n,p_n,logD_n.

    The leading comment line records the weight parameters and the stored
    precision; numbers are decimal strings with agreement_digits+5 digits.
    """
    from .report import format_real

    digits = digits or table.agreement_digits + 5
    lines = [
        f"# alpha={format_real(table.params.alpha, digits)},"
        f"t={format_real(table.params.t, digits)},"
        f"mantissa_bits={table.mantissa_bits}",
        "n,h_n,beta_n,p_n,logD_n",
    ]
    for n in range(table.n_max + 1):
        lines.append(
            ",".join(
                (
                    str(n),
                    format_real(table.h[n], digits),
                    format_real(table.beta[n], digits),
                    format_real(table.p[n], digits),
                    format_real(table.logD[n], digits),
                )
            )
        )
    return "\n".join(lines) + "\n"
