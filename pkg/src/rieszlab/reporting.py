"""Named residual reports with tolerances and pass/fail verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping


@dataclass(frozen=True)
class CheckReport:
    """One named residual check: pass holds iff residual <= tolerance."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)


def make_report(name, residual, tolerance, details=None, provenance=None) -> CheckReport:
    residual = float(residual)
    tolerance = float(tolerance)
    return CheckReport(
        name=name,
        residual=residual,
        tolerance=tolerance,
        passed=bool(residual <= tolerance),
        details=dict(details or {}),
        provenance=dict(provenance or {}),
    )


def error_report(name, exc: Exception, tolerance: float, provenance=None) -> CheckReport:
    """A failed report standing in for a check that raised."""
    return CheckReport(
        name=name,
        residual=math.inf,
        tolerance=float(tolerance),
        passed=False,
        details={"error": type(exc).__name__, "message": str(exc)},
        provenance=dict(provenance or {}),
    )


def with_provenance(report: CheckReport, provenance: Mapping) -> CheckReport:
    return replace(report, provenance=dict(provenance))


def format_quantity(value) -> object:
    """17-significant-digit decimal string for floats; other values pass through."""
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return value
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return format(float(value), ".17g")


def report_as_dict(report: CheckReport) -> dict:
    return {
        "name": report.name,
        "residual": format_quantity(report.residual),
        "tolerance": format_quantity(report.tolerance),
        "pass": report.passed,
        "details": {k: format_quantity(v) for k, v in sorted(report.details.items())},
        "provenance": report.provenance,
    }
