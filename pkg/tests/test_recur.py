"""Tests for the difference-equation residuals and the forward iterator."""
from __future__ import annotations

import pytest
from mpmath import mp, mpf

from semijacobi import (
    DomainError,
    PrecisionContext,
    PrecisionError,
    SingularStepError,
    WeightParams,
    beta_one,
    build_ortho_table,
    beta_zero,
    p_zero,
)
from semijacobi.ladder import build_aux_table
from semijacobi.recur import (
    beta_difference_residual,
    h_difference_residual,
    iterate_beta,
    iterate_comparison_csv,
    p_difference_residual,
    perturbed_table,
    r_from_h,
)

CTX = PrecisionContext(mantissa_bits=192, agreement_digits=30)
TOL = mpf(10) ** (-(CTX.agreement_digits - 3))


def make(alpha, t, n_max=12):
    table = build_ortho_table(WeightParams(alpha, t), n_max, CTX)
    return table, build_aux_table(table)


# --------------------------------------------------------------------------
# residuals on oracle data
# --------------------------------------------------------------------------
@pytest.mark.parametrize(
    "alpha,t,n_max",
    [
        (mpf("0.5"), mpf(1), 40),
        (mpf("1.5"), mpf(5), 40),
        (mpf("-0.25"), mpf("0.3"), 12),
        (mpf("2"), mpf("-1.5"), 12),
    ],
)
def test_difference_residuals_vanish_on_pipeline(alpha, t, n_max):
    table, aux = make(alpha, t, n_max)
    for n in range(1, n_max):
        assert beta_difference_residual(table, n) < TOL
        assert p_difference_residual(table, n) < TOL
        assert h_difference_residual(aux, n) < TOL


def test_residuals_at_t_zero_closed_forms():
    # the equations hold on the classical values as well
    table, aux = make(mpf("0.75"), mpf(0), 16)
    for n in range(1, 16):
        assert beta_difference_residual(table, n) < TOL
        assert p_difference_residual(table, n) < TOL
        assert h_difference_residual(aux, n) < TOL


def test_residual_detects_perturbation():
    table, _ = make(mpf("0.5"), mpf(1), 10)
    bumped = perturbed_table(table, 5, mpf("1e-6"))
    assert beta_difference_residual(table, 5) < TOL
    assert beta_difference_residual(bumped, 5) > mpf("1e-7")
    for n in (4, 6):
        assert beta_difference_residual(bumped, n) > mpf("1e-7")


def test_residual_index_range():
    table, aux = make(mpf("0.5"), mpf(1), 8)
    for bad in (0, 8, 9):
        with pytest.raises(DomainError):
            beta_difference_residual(table, bad)
        with pytest.raises(DomainError):
            p_difference_residual(table, bad)
        with pytest.raises(DomainError):
            h_difference_residual(aux, bad)


# --------------------------------------------------------------------------
# r_n reconstruction from the ladder sums
# --------------------------------------------------------------------------
def test_r_from_h_matches_algebraic():
    table, aux = make(mpf("0.5"), mpf(1), 10)
    for n in (1, 5, 9):
        assert abs(r_from_h(aux, n) - aux.r[n]) < TOL * (n + 1)


def test_r_from_h_classical_limit():
    _, aux = make(mpf("0.75"), mpf(0), 8)
    assert abs(r_from_h(aux, 4) - 4) < TOL


def test_r_from_h_subleading_consistency():
    # 4t p(n,t) = H_n - r_n - n(n-1+2a)
    table, aux = make(mpf("1.5"), mpf(2), 10)
    alpha, t = table.params.alpha, table.params.t
    with mp.workprec(table.mantissa_bits):
        for n in (2, 5, 9):
            lhs = 4 * t * table.p[n]
            rhs = aux.H[n] - r_from_h(aux, n) - n * (n - 1 + 2 * alpha)
            assert abs(lhs - rhs) <= TOL * max(abs(lhs), mpf(1))


# --------------------------------------------------------------------------
# forward iteration
# --------------------------------------------------------------------------
def test_iterate_matches_pipeline():
    params = WeightParams(mpf("0.5"), mpf(1))
    table = build_ortho_table(params, 20, CTX)
    trace = iterate_beta(params, 20, CTX)
    assert trace.values[0] == 0
    assert abs(trace.values[1] - beta_one(params, CTX)) < mpf("1e-28")
    for n in range(2, 21):
        assert abs(trace.values[n] - table.beta[n]) < mpf("1e-15"), n
    # cancellation estimates accumulate monotonically
    assert all(
        trace.digits_lost[n + 1] >= trace.digits_lost[n] for n in range(20)
    )
    assert trace.digits_lost[-1] > 1


def test_iterate_small_t_stays_near_classical():
    alpha, t = mpf(1), mpf("1e-3")
    trace = iterate_beta(WeightParams(alpha, t), 10, CTX)
    for n in range(1, 11):
        assert abs(trace.values[n] - beta_zero(n, alpha)) < 10 * t


def test_iterate_refuses_t_zero_and_bad_target():
    with pytest.raises(DomainError):
        iterate_beta(WeightParams(mpf("0.5"), 0), 10, CTX)
    with pytest.raises(DomainError):
        iterate_beta(WeightParams(mpf("0.5"), 1), 0, CTX)


def test_iterate_raises_on_exhausted_budget():
    ctx = PrecisionContext(mantissa_bits=64, agreement_digits=12)
    with pytest.raises(PrecisionError):
        iterate_beta(WeightParams(mpf("0.5"), mpf("1e-4")), 40, ctx, extra_bits_per_step=0)


def test_iterate_singular_step():
    # Find t where the affine coefficient vanishes at the first step:
    # lower(n=1) = 1 + 2a - 2t(beta_0 + beta_1) = 0.  For alpha = -1/4 this
    # crossing sits between t=1/2 and t=1; bisect it, then iterate there.
    alpha = mpf("-0.25")

    def lower_factor(t):
        b1 = beta_one(WeightParams(alpha, t), CTX)
        return 1 + 2 * alpha - 2 * t * b1

    lo, hi = mpf("0.5"), mpf(1)
    assert lower_factor(lo) > 0 and lower_factor(hi) < 0
    with mp.workprec(256):
        for _ in range(140):
            mid = (lo + hi) / 2
            if lower_factor(mid) > 0:
                lo = mid
            else:
                hi = mid
    with pytest.raises(SingularStepError):
        iterate_beta(WeightParams(alpha, (lo + hi) / 2), 5, CTX)


def test_iterate_csv_layout():
    params = WeightParams(mpf("0.5"), mpf(1))
    table = build_ortho_table(params, 8, CTX)
    trace = iterate_beta(params, 8, CTX)
    text = iterate_comparison_csv(trace, table)
    lines = text.strip().split("\n")
    assert lines[0] == "n,beta_iter,beta_oracle,abs_diff,digits_lost"
    assert len(lines) == 10
    fields = lines[3].split(",")
    assert fields[0] == "2"
    assert abs(mpf(fields[1]) - mpf(fields[2])) <= mpf(fields[3]) * mpf("1.01") + mpf("1e-30")
    with pytest.raises(DomainError):
        iterate_comparison_csv(trace, build_ortho_table(WeightParams(1, 1), 8, CTX))
