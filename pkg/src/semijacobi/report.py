"""Residual reports and deterministic serialization.

Every verification suite reduces to the same shape: a named family of
scaled residuals over a parameter grid, a tolerance, and a pass flag.
Numbers are serialized as decimal strings (agreement_digits+5 digits by
default) so that extended precision survives the format layer, and no
timestamps enter data files - identical configurations produce
byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf


def format_real(x, digits: int) -> str:
    """Deterministic decimal-string rendering of a real value."""
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(mpmath.mpmathify(x), digits)


def scaled_residual(delta, terms: Sequence) -> mpf:
    """|delta| divided by the largest constituent term (floor 1).

    Dividing by the dominant term keeps a single tolerance meaningful
    across n (raw residuals of the quadratic identities grow polynomially).
    The floor of 1 makes the residual absolute when every term is small.
    """
    scale = mpf(1)
    for term in terms:
        scale = max(scale, abs(term))
    return abs(delta) / scale


@dataclass(frozen=True)
class ResidualEntry:
    """Maximum scaled residual of one named identity over a grid."""

    name: str
    max_residual: mpf
    argmax: dict  # {"alpha": mpf, "t": mpf, "n": int}


@dataclass
class ResidualReport:
    """A verification suite's outcome over a parameter grid."""

    suite: str
    grid: dict
    tolerance: mpf
    results: list[ResidualEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.max_residual <= self.tolerance for e in self.results)

    def worst(self) -> ResidualEntry | None:
        return max(self.results, key=lambda e: e.max_residual, default=None)

    def failing(self) -> list[ResidualEntry]:
        return [e for e in self.results if e.max_residual > self.tolerance]


def merge_entries(groups: Iterable[Sequence[ResidualEntry]]) -> list[ResidualEntry]:
    """Combine per-grid-point entries, keeping the worst case per name."""
    best: dict[str, ResidualEntry] = {}
    order: list[str] = []
    for entries in groups:
        for e in entries:
            if e.name not in best:
                best[e.name] = e
                order.append(e.name)
            elif e.max_residual > best[e.name].max_residual:
                best[e.name] = e
    return [best[name] for name in order]


def _jsonable(x, digits: int):
    if isinstance(x, (mpf, float)):
        return format_real(x, digits)
    if isinstance(x, dict):
        return {k: _jsonable(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, digits) for v in x]
    return x


def report_to_json(report: ResidualReport, digits: int) -> str:
    """The shared machine-readable schema used by the verify command."""
    payload = {
        "suite": report.suite,
        "grid": _jsonable(report.grid, digits),
        "tolerance": format_real(report.tolerance, digits),
        "results": [
            {
                "name": e.name,
                "max_residual": format_real(e.max_residual, digits),
                "argmax": _jsonable(e.argmax, digits),
            }
            for e in report.results
        ],
        "pass": report.passed,
    }
    return json.dumps(payload, indent=2) + "\n"


def identity_map_json(report: ResidualReport, digits: int) -> str:
    """Ladder-suite flavor: {identity_name: {max_residual, argmax_n, grid}}."""
    payload = {
        e.name: {
            "max_residual": format_real(e.max_residual, digits),
            "argmax_n": e.argmax.get("n"),
            "grid": _jsonable(report.grid, digits),
        }
        for e in report.results
    }
    return json.dumps(payload, indent=2) + "\n"


def grid_function_csv(t_values: Sequence, values: Sequence, digits: int) -> str:
    """Two-column t,value CSV for a sampled function of t."""
    lines = ["t,value"]
    for t, v in zip(t_values, values):
        lines.append(f"{format_real(t, digits)},{format_real(v, digits)}")
    return "\n".join(lines) + "\n"
