"""Command-line driver for tables, verification suites and order studies.

Every run is reproducible: numbers are serialized as decimal strings with
agreement_digits+5 digits, no timestamps enter data files, and identical
configurations produce byte-identical output.  Reports embed the full
configuration and the working precision actually applied so a result can
be traced without rerunning.

Exit codes: 0 all checks passed (or data written), 1 a verification suite
failed, 2 the configuration was rejected before any computation.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from .asymptotics import (
    beta_series,
    order_fit,
    p_series,
    running_slope,
    series_error_rows,
)
from .errors import SemiJacobiError, UsageError
from .evolution import (
    beta_ode_residual,
    dln_h_check,
    dp_check,
    h_ode_residual,
    log_hankel_consistency,
    painleve_v_residual,
    riccati_integrate,
    uniform_grid,
)
from .ladder import build_aux_table, identity_residuals, pn_ode_residual
from .orthocore import conditioning_bits, ortho_table_cached, ortho_table_csv
from .precision import PrecisionContext
from .recur import (
    beta_difference_residual,
    h_difference_residual,
    iterate_beta,
    iterate_comparison_csv,
    p_difference_residual,
    perturbed_table,
)
from .report import (
    ResidualEntry,
    ResidualReport,
    format_real,
    merge_entries,
    report_to_json,
)
from .specfun import WeightParams

VERIFY_SUITES = ("identities", "difference", "ode", "painleve")
ASYM_QUANTITIES = ("beta", "p", "hankel")

# Suites built on finite differences need enough grid resolution for the
# stencils, and every t-derivative here carries a 1/t; both limits are
# config invariants rather than runtime failures.
FD_SUITES = ("ode", "painleve")
MIN_FD_POINTS = 5

# Residuals of exact identities sit at the certified-agreement floor;
# finite-difference residuals sit at the stencil truncation, far above it.
# The gates leave two to three orders of headroom over measured worst
# cases at the default agreement_digits = 25.
IDENTITY_TOLERANCE_DIGITS = 3
DIFFERENCE_TOLERANCE_DIGITS = 5
ODE_N_VALUES = (3, 5)
ODE_Z_SAMPLES = (mpf("0.1"), mpf("0.3"), mpf("0.7"))
DERIVATIVE_N_CAP = 10

LADDER_POINTS_MIN = 4


@dataclass(frozen=True)
class RunConfig:
    """One validated command invocation.

    grid is (t_start, t_end, points) for commands that sample a t-interval;
    alphas/ts are the point lists for commands that sweep parameter pairs.
    """

    command: str
    alphas: tuple
    ts: tuple
    n_max: int
    ctx: PrecisionContext
    grid: tuple | None
    output: str | None
    fmt: str


def validate_config(config: RunConfig, suite: str | None = None) -> None:
    """Reject invalid configurations, naming the offending field."""
    for alpha in config.alphas:
        if not alpha > -1:
            raise UsageError(f"alpha must exceed -1 (got {alpha})")
    if config.n_max < 1:
        raise UsageError(f"n_max must be at least 1 (got {config.n_max})")
    if config.fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json (got {config.fmt})")
    needs_grid = config.command == "riccati" or (
        config.command == "verify" and suite in FD_SUITES
    )
    if needs_grid:
        t_start, t_end, points = config.grid
        if not t_start > 0:
            raise UsageError(
                f"t_start > 0 required: the flow is singular at t = 0 "
                f"(got t_start={t_start})"
            )
        if not t_end > 0:
            raise UsageError(f"t_end must be positive (got {t_end})")
        if config.command == "verify" and points < MIN_FD_POINTS:
            raise UsageError(
                f"points must be at least {MIN_FD_POINTS} for "
                f"finite-difference suites (got {points})"
            )
        if config.command == "riccati" and points < 2:
            raise UsageError(f"points must be at least 2 (got {points})")
    if config.command == "iterate":
        for t in config.ts:
            if t == 0:
                raise UsageError(
                    "t must be nonzero for iterate: the difference equation "
                    "degenerates at t = 0 (use the closed form instead)"
                )


def _digits(config: RunConfig) -> int:
    return config.ctx.agreement_digits + 5


def config_payload(config: RunConfig, working_bits: int) -> dict:
    """Config and precision echo embedded in every JSON report."""
    digits = _digits(config)
    grid = None
    if config.grid is not None:
        t_start, t_end, points = config.grid
        grid = {
            "t_start": format_real(t_start, digits),
            "t_end": format_real(t_end, digits),
            "points": points,
        }
    return {
        "config": {
            "command": config.command,
            "alpha": [format_real(a, digits) for a in config.alphas],
            "t": [format_real(t, digits) for t in config.ts],
            "n_max": config.n_max,
            "grid": grid,
            "output": config.output,
            "format": config.fmt,
        },
        "precision": {
            "mantissa_bits": config.ctx.mantissa_bits,
            "agreement_digits": config.ctx.agreement_digits,
            "working_bits": working_bits,
        },
    }


def _pairs(config: RunConfig):
    for alpha in config.alphas:
        for t in config.ts:
            yield WeightParams(alpha, t)


def _table(params: WeightParams, n_max: int, ctx: PrecisionContext):
    return ortho_table_cached(params, n_max, ctx, "split")


def _pair_tag(params: WeightParams, digits: int) -> str:
    return (
        f"alpha{format_real(params.alpha, digits)}"
        f"_t{format_real(params.t, digits)}"
    )


# --------------------------------------------------------------------------
# table
# --------------------------------------------------------------------------
def aux_table_csv(aux, digits: int | None = None) -> str:
    """CSV rows n=0..n_max with columns n,R_n,r_n,H_n.

    Same conventions as the orthogonal-polynomial table: one comment line
    of metadata, then plain columns.
    """
    # default matches the serialization policy at agreement_digits = 25
    digits = digits or 30
    lines = [
        f"# alpha={format_real(aux.params.alpha, digits)},"
        f"t={format_real(aux.params.t, digits)},"
        f"mantissa_bits={aux.mantissa_bits}",
        "n,R_n,r_n,H_n",
    ]
    for n in range(aux.n_max + 1):
        lines.append(
            ",".join(
                (
                    str(n),
                    format_real(aux.R[n], digits),
                    format_real(aux.r[n], digits),
                    format_real(aux.H[n], digits),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _rows_json(meta: dict, columns: tuple, rows: list) -> str:
    payload = dict(meta)
    payload["columns"] = list(columns)
    payload["rows"] = rows
    return json.dumps(payload, indent=2) + "\n"


def cmd_table(config: RunConfig) -> list[tuple[str, str]]:
    """Orthogonal-polynomial and auxiliary tables for each (alpha, t)."""
    digits = _digits(config)
    artifacts = []
    for params in _pairs(config):
        table = _table(params, config.n_max, config.ctx)
        aux = build_aux_table(table)
        tag = _pair_tag(params, digits)
        if config.fmt == "csv":
            artifacts.append((f"{tag}.ortho.csv", ortho_table_csv(table, digits)))
            artifacts.append((f"{tag}.aux.csv", aux_table_csv(aux, digits)))
        else:
            meta = config_payload(config, table.mantissa_bits)
            meta["alpha"] = format_real(params.alpha, digits)
            meta["t"] = format_real(params.t, digits)
            ortho_rows = [
                [
                    n,
                    format_real(table.h[n], digits),
                    format_real(table.beta[n], digits),
                    format_real(table.p[n], digits),
                    format_real(table.logD[n], digits),
                ]
                for n in range(config.n_max + 1)
            ]
            aux_rows = [
                [
                    n,
                    format_real(aux.R[n], digits),
                    format_real(aux.r[n], digits),
                    format_real(aux.H[n], digits),
                ]
                for n in range(config.n_max + 1)
            ]
            artifacts.append(
                (
                    f"{tag}.ortho.json",
                    _rows_json(meta, ("n", "h_n", "beta_n", "p_n", "logD_n"), ortho_rows),
                )
            )
            artifacts.append(
                (
                    f"{tag}.aux.json",
                    _rows_json(meta, ("n", "R_n", "r_n", "H_n"), aux_rows),
                )
            )
    return artifacts


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------
def _corrupted(table, corrupt: tuple | None):
    if corrupt is None:
        return table
    n, delta = corrupt
    return perturbed_table(table, min(n, table.n_max), delta)


def _suite_identities(config: RunConfig, corrupt) -> tuple[ResidualReport, int]:
    groups, bits = [], config.ctx.mantissa_bits
    for params in _pairs(config):
        table = _corrupted(_table(params, config.n_max, config.ctx), corrupt)
        bits = max(bits, table.mantissa_bits)
        groups.append(identity_residuals(table, build_aux_table(table)).results)
    tolerance = mpf(10) ** (
        IDENTITY_TOLERANCE_DIGITS - config.ctx.agreement_digits
    )
    report = ResidualReport(
        suite="identities",
        grid=_grid_dict(config),
        tolerance=tolerance,
        results=merge_entries(groups),
    )
    return report, bits


def _suite_difference(config: RunConfig, corrupt) -> tuple[ResidualReport, int]:
    checks = (
        ("beta_difference", lambda table, aux, n: beta_difference_residual(table, n)),
        ("p_difference", lambda table, aux, n: p_difference_residual(table, n)),
        ("h_difference", lambda table, aux, n: h_difference_residual(aux, n)),
    )
    groups, bits = [], config.ctx.mantissa_bits
    for params in _pairs(config):
        table = _corrupted(_table(params, config.n_max, config.ctx), corrupt)
        bits = max(bits, table.mantissa_bits)
        aux = build_aux_table(table)
        entries = []
        for name, residual in checks:
            worst, arg_n = mpf(0), 1
            for n in range(1, config.n_max):
                value = residual(table, aux, n)
                if value > worst:
                    worst, arg_n = value, n
            entries.append(
                ResidualEntry(
                    name=name,
                    max_residual=worst,
                    argmax={"alpha": params.alpha, "t": params.t, "n": arg_n},
                )
            )
        groups.append(entries)
    tolerance = mpf(10) ** (
        DIFFERENCE_TOLERANCE_DIGITS - config.ctx.agreement_digits
    )
    report = ResidualReport(
        suite="difference",
        grid=_grid_dict(config),
        tolerance=tolerance,
        results=merge_entries(groups),
    )
    return report, bits


def _fd_entry(name, worst_map):
    value, argmax = worst_map[name]
    return ResidualEntry(name=name, max_residual=value, argmax=argmax)


def _track(worst_map, name, value, alpha, t, n):
    if name not in worst_map or value > worst_map[name][0]:
        worst_map[name] = (value, {"alpha": alpha, "t": t, "n": n})


def _suite_ode(config: RunConfig) -> tuple[ResidualReport, int]:
    t_start, t_end, points = config.grid
    centers = uniform_grid(t_start, t_end, points)
    n_small = range(1, min(config.n_max, DERIVATIVE_N_CAP) + 1)
    n_ode = tuple(n for n in ODE_N_VALUES if n <= config.n_max) or (config.n_max,)
    worst: dict = {}
    for alpha in config.alphas:
        for c in centers:
            params = WeightParams(alpha, c)
            for n in n_small:
                _track(
                    worst,
                    "log_h_derivative",
                    dln_h_check(params, n, config.ctx, t_centers=(c,)),
                    alpha, c, n,
                )
                _track(
                    worst,
                    "subleading_derivative",
                    dp_check(params, n, config.ctx, t_centers=(c,)),
                    alpha, c, n,
                )
            table = _table(params, max(n_small.stop - 1, max(n_ode)) + 1, config.ctx)
            aux = build_aux_table(table)
            for n in n_small:
                _track(
                    worst,
                    "polynomial_ode",
                    pn_ode_residual(table, aux, n, ODE_Z_SAMPLES),
                    alpha, c, n,
                )
            for n in n_ode:
                _track(
                    worst,
                    "hankel_log_derivative",
                    log_hankel_consistency(params, n, config.ctx, t_centers=(c,)),
                    alpha, c, n,
                )
        ode_params = WeightParams(alpha, centers[0])
        for n in n_ode:
            beta_check = beta_ode_residual(
                ode_params, n, t_centers=centers, ctx=config.ctx
            )
            _track(
                worst, "beta_ode", beta_check.max_residual,
                alpha, beta_check.argmax_t, n,
            )
            h_check = h_ode_residual(
                ode_params, n, t_centers=centers, ctx=config.ctx
            )
            _track(
                worst, "h_ode", h_check.max_residual,
                alpha, h_check.argmax_t, n,
            )
    names = (
        "log_h_derivative",
        "subleading_derivative",
        "polynomial_ode",
        "hankel_log_derivative",
        "beta_ode",
        "h_ode",
    )
    tolerance = mpf(10) ** -(config.ctx.agreement_digits // 2)
    report = ResidualReport(
        suite="ode",
        grid=_grid_dict(config),
        tolerance=tolerance,
        results=[_fd_entry(name, worst) for name in names],
    )
    bits = max(
        config.ctx.mantissa_bits,
        conditioning_bits(max(max(n_small), max(n_ode)) + 2),
    )
    return report, bits


def _suite_painleve(config: RunConfig) -> tuple[ResidualReport, int]:
    t_start, t_end, points = config.grid
    centers = uniform_grid(t_start, t_end, points)
    n_ode = tuple(n for n in ODE_N_VALUES if n <= config.n_max) or (config.n_max,)
    worst: dict = {}
    for alpha in config.alphas:
        for n in n_ode:
            check = painleve_v_residual(
                WeightParams(alpha, centers[0]), n, t_centers=centers, ctx=config.ctx
            )
            _track(
                worst, "painleve_v", check.max_residual, alpha, check.argmax_t, n
            )
    tolerance = mpf(10) ** -(config.ctx.agreement_digits // 2)
    report = ResidualReport(
        suite="painleve",
        grid=_grid_dict(config),
        tolerance=tolerance,
        results=[_fd_entry("painleve_v", worst)],
    )
    bits = max(config.ctx.mantissa_bits, conditioning_bits(max(n_ode) + 2))
    return report, bits


def _grid_dict(config: RunConfig) -> dict:
    grid = {
        "alpha": list(config.alphas),
        "t": list(config.ts),
        "n_max": config.n_max,
    }
    if config.grid is not None:
        t_start, t_end, points = config.grid
        grid["t_start"], grid["t_end"], grid["points"] = t_start, t_end, points
    return grid


def cmd_verify(
    config: RunConfig, suite: str, corrupt: tuple | None = None
) -> tuple[str, int]:
    """Run one verification suite; return (JSON report, exit code)."""
    if suite not in VERIFY_SUITES:
        raise UsageError(
            f"unknown suite {suite!r}; choose from {', '.join(VERIFY_SUITES)}"
        )
    runners = {
        "identities": lambda: _suite_identities(config, corrupt),
        "difference": lambda: _suite_difference(config, corrupt),
        "ode": lambda: _suite_ode(config),
        "painleve": lambda: _suite_painleve(config),
    }
    report, bits = runners[suite]()
    digits = _digits(config)
    payload = json.loads(report_to_json(report, digits))
    payload.update(config_payload(config, bits))
    text = json.dumps(payload, indent=2) + "\n"
    return text, 0 if report.passed else 1


# --------------------------------------------------------------------------
# asymptotics
# --------------------------------------------------------------------------
def _regime(params: WeightParams, quantity: str) -> str:
    """Algebraic 1/n decay, or exponentially small error (collapsed series)."""
    if quantity == "beta":
        collapsed = all(c == 0 for c in beta_series(params).coefficients[1:])
    elif quantity == "p":
        collapsed = all(c == 0 for c in p_series(params).coefficients[2:])
    else:
        collapsed = 1 - 4 * params.alpha * params.alpha == 0
    return "exponential" if collapsed else "algebraic"


def _ladder(config: RunConfig, ladder_points: int) -> tuple:
    if ladder_points < LADDER_POINTS_MIN:
        raise UsageError(
            f"ladder_points must be at least {LADDER_POINTS_MIN} for a slope "
            f"fit (got {ladder_points})"
        )
    ns = tuple(config.n_max >> k for k in range(ladder_points - 1, -1, -1))
    if ns[0] < 1:
        raise UsageError(
            f"n ladder too short: n_max={config.n_max} cannot seed "
            f"{ladder_points} doublings (n_max must be at least "
            f"{1 << (ladder_points - 1)})"
        )
    return ns


def cmd_asymptotics(
    config: RunConfig, quantity: str, ladder_points: int = LADDER_POINTS_MIN
) -> tuple[list[tuple[str, str]], int]:
    """Pipeline-vs-series error ladder with a fitted convergence order."""
    if quantity not in ASYM_QUANTITIES:
        raise UsageError(
            f"unknown quantity {quantity!r}; choose from "
            f"{', '.join(ASYM_QUANTITIES)}"
        )
    ns = _ladder(config, ladder_points)
    digits = _digits(config)
    artifacts = []
    for params in _pairs(config):
        rows = series_error_rows(params, quantity, ns, config.ctx)
        regime = _regime(params, quantity)
        slope = None
        if regime == "algebraic":
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    slope = order_fit([(n, err) for n, _, _, err, _ in rows])
            except SemiJacobiError:
                regime = "floored"
        csv_lines = [
            f"# alpha={format_real(params.alpha, digits)},"
            f"t={format_real(params.t, digits)},"
            f"quantity={quantity},regime={regime}",
            "n,oracle,series,abs_error,running_slope",
        ]
        prev = None
        slopes = []
        for n, oracle, series, err, _ in rows:
            run = None
            if prev is not None:
                run = running_slope(prev[0], prev[1], n, err)
            slopes.append(run)
            csv_lines.append(
                ",".join(
                    (
                        str(n),
                        format_real(oracle, digits),
                        format_real(series, digits),
                        format_real(err, digits),
                        "" if run is None else format_real(run, digits),
                    )
                )
            )
            prev = (n, err)
        bits = max(config.ctx.mantissa_bits, conditioning_bits(ns[-1] + 1))
        payload = {
            "quantity": quantity,
            "alpha": format_real(params.alpha, digits),
            "t": format_real(params.t, digits),
            "n": list(ns),
            "regime": regime,
            "slope": None if slope is None else format_real(slope, digits),
            "abs_error": [format_real(err, digits) for _, _, _, err, _ in rows],
            "running_slope": [
                None if s is None else format_real(s, digits) for s in slopes
            ],
        }
        payload.update(config_payload(config, bits))
        tag = _pair_tag(params, digits)
        artifacts.append((f"{tag}.csv", "\n".join(csv_lines) + "\n"))
        artifacts.append((f"{tag}.json", json.dumps(payload, indent=2) + "\n"))
        if regime == "exponential":
            print(
                f"exponential regime: series error for {quantity} at "
                f"alpha={format_real(params.alpha, 8)} sits at the precision "
                f"floor; no algebraic slope to fit",
                file=sys.stderr,
            )
    return artifacts, 0


# --------------------------------------------------------------------------
# riccati
# --------------------------------------------------------------------------
def cmd_riccati(config: RunConfig) -> list[tuple[str, str]]:
    """Integrate the coupled flow and compare its endpoint to the pipeline."""
    t_start, t_end, points = config.grid
    digits = _digits(config)
    n = config.n_max
    artifacts = []
    for alpha in config.alphas:
        params = WeightParams(alpha, t_start)
        R_fn, r_fn = riccati_integrate(
            params, n, t_start, t_end, config.ctx, points=points
        )
        end_params = WeightParams(alpha, t_end)
        end_table = _table(end_params, n + 1, config.ctx)
        R_true = (
            2 * n + 1 + 2 * alpha
            - 2 * t_end * (end_table.beta[n] + end_table.beta[n + 1])
        )
        r_true = n - 2 * t_end * end_table.beta[n]
        idx_end = len(R_fn.t_grid) - 1 if t_end >= t_start else 0
        err_R = abs(R_fn.values[idx_end] - R_true)
        err_r = abs(r_fn.values[idx_end] - r_true)
        tag = _pair_tag(WeightParams(alpha, t_end), digits)
        if config.fmt == "csv":
            lines = [
                f"# alpha={format_real(alpha, digits)},n={n},"
                f"endpoint_abs_error_R={format_real(err_R, digits)},"
                f"endpoint_abs_error_r={format_real(err_r, digits)}",
                "t,R,r",
            ]
            for t, R, r in zip(R_fn.t_grid, R_fn.values, r_fn.values):
                lines.append(
                    ",".join(
                        (
                            format_real(t, digits),
                            format_real(R, digits),
                            format_real(r, digits),
                        )
                    )
                )
            artifacts.append((f"{tag}.csv", "\n".join(lines) + "\n"))
        else:
            payload = {
                "alpha": format_real(alpha, digits),
                "n": n,
                "t": [format_real(t, digits) for t in R_fn.t_grid],
                "R": [format_real(v, digits) for v in R_fn.values],
                "r": [format_real(v, digits) for v in r_fn.values],
                "endpoint_abs_error_R": format_real(err_R, digits),
                "endpoint_abs_error_r": format_real(err_r, digits),
            }
            payload.update(config_payload(config, end_table.mantissa_bits))
            artifacts.append((f"{tag}.json", json.dumps(payload, indent=2) + "\n"))
    return artifacts


# --------------------------------------------------------------------------
# iterate
# --------------------------------------------------------------------------
def cmd_iterate(config: RunConfig) -> list[tuple[str, str]]:
    """Forward-iterate the beta difference equation against the oracle."""
    digits = _digits(config)
    artifacts = []
    for params in _pairs(config):
        trace = iterate_beta(params, config.n_max, config.ctx)
        table = _table(params, config.n_max, config.ctx)
        tag = _pair_tag(params, digits)
        artifacts.append((f"{tag}.csv", iterate_comparison_csv(trace, table, digits)))
    return artifacts


# --------------------------------------------------------------------------
# argument parsing and dispatch
# --------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting directly."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="semijacobi",
        description=(
            "Extended-precision tables and verification suites for the "
            "symmetric semi-classical Jacobi weight (1-x^2)^a exp(-t x^2)"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_max_default):
        p.add_argument(
            "--alpha", action="append", default=None,
            help="weight exponent, repeatable (must exceed -1)",
        )
        p.add_argument(
            "--t", action="append", default=None,
            help="deformation parameter, repeatable",
        )
        p.add_argument("--n-max", type=int, default=n_max_default)
        p.add_argument("--mantissa-bits", type=int, default=None)
        p.add_argument("--agreement-digits", type=int, default=None)
        p.add_argument("--output", default=None, help="output path stem")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def grid_args(p, start, end, points):
        p.add_argument("--t-start", default=start)
        p.add_argument("--t-end", default=end)
        p.add_argument("--points", type=int, default=points)

    p = sub.add_parser("table", help="orthogonal-polynomial and ladder tables")
    common(p, 40)

    p = sub.add_parser("verify", help="run a residual suite, exit 0 iff it passes")
    p.add_argument("suite", choices=VERIFY_SUITES)
    common(p, 40)
    grid_args(p, "0.5", "1.5", 5)
    p.add_argument(
        "--corrupt", default=None, metavar="N:DELTA",
        help="verification hook: shift beta_N by DELTA before checking",
    )

    p = sub.add_parser("asymptotics", help="pipeline-vs-series error ladder")
    p.add_argument("quantity", choices=ASYM_QUANTITIES)
    common(p, 128)
    p.add_argument(
        "--ladder-points", type=int, default=LADDER_POINTS_MIN,
        help="length of the n-doubling ladder ending at n_max",
    )

    p = sub.add_parser("riccati", help="integrate the coupled (R_n, r_n) flow")
    common(p, 4)
    grid_args(p, "0.1", "1", 33)

    p = sub.add_parser("iterate", help="forward-iterate the beta recurrence")
    common(p, 20)
    return parser


def _parse_reals(values, fallback) -> tuple:
    raw = values if values is not None else fallback
    return tuple(mpmath.mpf(str(v)) for v in raw)


def _config_from_args(args) -> RunConfig:
    overrides = {}
    if args.mantissa_bits is not None:
        overrides["mantissa_bits"] = args.mantissa_bits
    if args.agreement_digits is not None:
        overrides["agreement_digits"] = args.agreement_digits
    ctx = PrecisionContext.from_env(**overrides)
    with mp.workprec(max(ctx.mantissa_bits, 64)):
        alphas = _parse_reals(args.alpha, ("0.5", "1.5"))
        if args.command == "verify" and getattr(args, "suite", None) in FD_SUITES:
            default_t = ()
        else:
            default_t = ("0.1", "1", "5") if args.command in ("table", "verify") else ("1",)
        ts = _parse_reals(args.t, default_t)
        grid = None
        if hasattr(args, "t_start"):
            grid = (
                mpmath.mpf(str(args.t_start)),
                mpmath.mpf(str(args.t_end)),
                args.points,
            )
    return RunConfig(
        command=args.command,
        alphas=alphas,
        ts=ts,
        n_max=args.n_max,
        ctx=ctx,
        grid=grid,
        output=args.output,
        fmt=args.format,
    )


def _parse_corrupt(raw: str | None) -> tuple | None:
    if raw is None:
        return None
    try:
        n_text, delta_text = raw.split(":", 1)
        return int(n_text), mpmath.mpf(delta_text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"corrupt must be N:DELTA (got {raw!r})") from exc


def _emit(artifacts: list[tuple[str, str]], output: str | None) -> None:
    """Write artifacts to files under the output stem, or print them."""
    if output is None:
        for _, text in artifacts:
            sys.stdout.write(text)
        return
    base = Path(output)
    stem = base.parent / base.stem if base.suffix else base
    for name, text in artifacts:
        if len(artifacts) == 1 and base.suffix:
            path = base
        else:
            path = Path(f"{stem}.{name}")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path}", file=sys.stderr)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)
    suite = getattr(args, "suite", None)
    validate_config(config, suite)
    with mp.workprec(max(config.ctx.mantissa_bits, 64)):
        if args.command == "table":
            _emit(cmd_table(config), config.output)
            return 0
        if args.command == "verify":
            text, code = cmd_verify(config, suite, _parse_corrupt(args.corrupt))
            _emit([("report.json", text)], config.output)
            if code != 0:
                report = json.loads(text)
                for entry in report["results"]:
                    if mpf(entry["max_residual"]) > mpf(report["tolerance"]):
                        print(
                            f"FAIL {entry['name']}: max_residual="
                            f"{entry['max_residual']} at {entry['argmax']}",
                            file=sys.stderr,
                        )
            return code
        if args.command == "asymptotics":
            artifacts, code = cmd_asymptotics(config, args.quantity, args.ladder_points)
            _emit(artifacts, config.output)
            return code
        if args.command == "riccati":
            _emit(cmd_riccati(config), config.output)
            return 0
        _emit(cmd_iterate(config), config.output)
        return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SemiJacobiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
