"""Extended-precision orthogonal-polynomial data for the symmetric
semi-classical Jacobi weight w(x,t) = (1-x^2)^alpha e^(-t x^2) on [-1,1].

The package computes moments, recurrence coefficients, sub-leading
coefficients and Hankel determinants at certified precision, and verifies
the nonlinear identities, difference equations, differential equations,
Painleve V reduction and large-n asymptotics that this weight satisfies.
"""
from .errors import (
    ConditioningError,
    DomainError,
    GridError,
    PrecisionError,
    SemiJacobiError,
    SingularStepError,
    UsageError,
)
from .precision import PrecisionContext, certify, snap_real
from .specfun import WeightParams, kummer_phi, log_barnes_g, log_gamma, moment
from .orthocore import (
    OrthoTable,
    build_ortho_table,
    conditioning_bits,
    eval_monic,
    eval_monic_derivs,
    ortho_table_cached,
    ortho_table_csv,
    quad_adaptive,
    quad_inner_product,
    tanh_sinh_rule,
)
from .closedforms import (
    beta_deriv_zero,
    beta_one,
    beta_zero,
    h_aux_deriv_zero,
    h_aux_one,
    h_aux_two,
    h_aux_zero,
    p_two,
    p_zero,
    pv_w_deriv_zero,
    pv_w_zero,
)
from .report import (
    ResidualEntry,
    ResidualReport,
    format_real,
    grid_function_csv,
    identity_map_json,
    merge_entries,
    report_to_json,
    scaled_residual,
)
from .ladder import (
    AuxTable,
    LadderCoeffs,
    aux_by_integral,
    aux_sum_closed_form,
    build_aux_table,
    identity_residuals,
    ladder_coeffs,
    pn_ode_residual,
)
from .recur import (
    IterationTrace,
    beta_difference_residual,
    h_difference_residual,
    iterate_beta,
    iterate_comparison_csv,
    p_difference_residual,
    perturbed_table,
    r_from_h,
)
from .evolution import (
    FdCheck,
    GridFunction,
    RiccatiState,
    beta_ode_residual,
    dln_h_check,
    dp_check,
    elimination_residual,
    h_ode_residual,
    log_hankel_consistency,
    painleve_v_residual,
    riccati_integrate,
    riccati_rhs,
    uniform_grid,
)
from .asymptotics import (
    AsymSeries,
    beta_series,
    log_hankel_asymptotic,
    log_hankel_at_zero,
    log_hankel_ratio_asymptotic,
    log_hankel_ratio_integral,
    order_fit,
    p_series,
    running_slope,
    series_error_rows,
)

__all__ = [
    "ConditioningError",
    "DomainError",
    "GridError",
    "PrecisionError",
    "SemiJacobiError",
    "SingularStepError",
    "UsageError",
    "PrecisionContext",
    "certify",
    "snap_real",
    "WeightParams",
    "kummer_phi",
    "log_barnes_g",
    "log_gamma",
    "moment",
    "OrthoTable",
    "build_ortho_table",
    "conditioning_bits",
    "eval_monic",
    "eval_monic_derivs",
    "ortho_table_cached",
    "ortho_table_csv",
    "quad_adaptive",
    "quad_inner_product",
    "tanh_sinh_rule",
    "beta_deriv_zero",
    "beta_one",
    "beta_zero",
    "h_aux_deriv_zero",
    "h_aux_one",
    "h_aux_two",
    "h_aux_zero",
    "p_two",
    "p_zero",
    "pv_w_deriv_zero",
    "pv_w_zero",
    "ResidualEntry",
    "ResidualReport",
    "format_real",
    "grid_function_csv",
    "identity_map_json",
    "merge_entries",
    "report_to_json",
    "scaled_residual",
    "AuxTable",
    "LadderCoeffs",
    "aux_by_integral",
    "aux_sum_closed_form",
    "build_aux_table",
    "identity_residuals",
    "ladder_coeffs",
    "pn_ode_residual",
    "IterationTrace",
    "beta_difference_residual",
    "h_difference_residual",
    "iterate_beta",
    "iterate_comparison_csv",
    "p_difference_residual",
    "perturbed_table",
    "r_from_h",
    "FdCheck",
    "GridFunction",
    "RiccatiState",
    "beta_ode_residual",
    "dln_h_check",
    "dp_check",
    "elimination_residual",
    "h_ode_residual",
    "log_hankel_consistency",
    "painleve_v_residual",
    "riccati_integrate",
    "riccati_rhs",
    "uniform_grid",
    "AsymSeries",
    "beta_series",
    "log_hankel_asymptotic",
    "log_hankel_at_zero",
    "log_hankel_ratio_asymptotic",
    "log_hankel_ratio_integral",
    "order_fit",
    "p_series",
    "running_slope",
    "series_error_rows",
]

__version__ = "0.1.0"
