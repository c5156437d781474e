"""Run configuration: JSON parsing with path-pointing diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import ParseError

SCHEMA = "rieszlab/1"

OPERATOR_KINDS = ("diagonal", "dense", "hermite-x", "upper-unipotent")
ALPHA_KINDS = ("sqrt_n", "linear", "custom")

# Checks runnable for every operator, in report order.
GENERAL_CHECKS = (
    "adjoint_relations",
    "biorthogonality",
    "ccr",
    "clause_i3",
    "domain_mapping",
    "eigen",
    "frame_bounds",
    "hamiltonian_agreement",
    "k_relations",
    "ladder",
    "onb_reconstruction",
    "polar",
    "product_identities",
    "quasi_basis",
    "representation",
)
# Checks that need the dimension-extensible Hermite model.
HERMITE_CHECKS = ("frame_bound_growth", "hermite_oracle", "tail_dichotomy")
KNOWN_CHECKS = tuple(sorted(GENERAL_CHECKS + HERMITE_CHECKS))


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    values: tuple = ()          # diagonal entries or flat row-major dense entries
    off_diagonal: float = 0.0   # upper-unipotent superdiagonal value


@dataclass(frozen=True)
class AlphaSpec:
    kind: str
    values: tuple = ()
    gap_bound_r: float | None = None


@dataclass(frozen=True)
class RunConfig:
    dimension: int
    operator: OperatorSpec
    alpha: AlphaSpec
    tolerance: float
    interior_margin: int
    seed: int
    checks: tuple[str, ...]


def default_checks(operator_kind: str, alpha_kind: str) -> tuple[str, ...]:
    names = [c for c in GENERAL_CHECKS if c != "ccr" or alpha_kind == "sqrt_n"]
    if operator_kind == "hermite-x":
        names.extend(HERMITE_CHECKS)
    return tuple(sorted(names))


def _expect(condition: bool, path: str, reason: str) -> None:
    if not condition:
        raise ParseError(path, reason)


def _as_number(value: Any, path: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool), path, "must be a number")
    return float(value)


def _as_complex(value: Any, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(_as_number(value[0], path), _as_number(value[1], path))
    raise ParseError(path, "must be a number or a [re, im] pair")


def _parse_operator(raw: Any, dimension: int) -> OperatorSpec:
    _expect(isinstance(raw, dict), "/operator", "must be an object")
    kind = raw.get("kind")
    _expect(kind in OPERATOR_KINDS, "/operator/kind", f"must be one of {list(OPERATOR_KINDS)}")
    allowed = {"kind"}
    if kind == "diagonal":
        allowed.add("values")
        values = raw.get("values")
        _expect(isinstance(values, list), "/operator/values", "must be a list of numbers")
        _expect(
            len(values) == dimension,
            "/operator/values",
            f"needs exactly {dimension} entries, got {len(values)}",
        )
        spec = OperatorSpec(kind, values=tuple(_as_complex(v, f"/operator/values/{i}") for i, v in enumerate(values)))
    elif kind == "dense":
        allowed.add("entries")
        entries = raw.get("entries")
        _expect(isinstance(entries, list), "/operator/entries", "must be a flat row-major list")
        _expect(
            len(entries) == dimension * dimension,
            "/operator/entries",
            f"needs exactly {dimension * dimension} entries, got {len(entries)}",
        )
        spec = OperatorSpec(kind, values=tuple(_as_complex(v, f"/operator/entries/{i}") for i, v in enumerate(entries)))
    elif kind == "upper-unipotent":
        allowed.add("off_diagonal")
        spec = OperatorSpec(kind, off_diagonal=_as_number(raw.get("off_diagonal", 1.0), "/operator/off_diagonal"))
    else:
        spec = OperatorSpec(kind)
    for key in raw:
        _expect(key in allowed, f"/operator/{key}", f"unknown field for kind {kind!r}")
    return spec


def _parse_alpha(raw: Any, dimension: int) -> AlphaSpec:
    if raw is None:
        return AlphaSpec("sqrt_n", gap_bound_r=1.0)
    _expect(isinstance(raw, dict), "/alpha", "must be an object")
    kind = raw.get("kind")
    _expect(kind in ALPHA_KINDS, "/alpha/kind", f"must be one of {list(ALPHA_KINDS)}")
    r = raw.get("r")
    if r is not None:
        r = _as_number(r, "/alpha/r")
        _expect(r > 0, "/alpha/r", "must be positive")
    allowed = {"kind", "r"}
    if kind == "custom":
        allowed.add("values")
        values = raw.get("values")
        _expect(isinstance(values, list), "/alpha/values", "must be a list")
        _expect(
            len(values) >= dimension,
            "/alpha/values",
            f"needs at least {dimension} entries, got {len(values)}",
        )
        spec = AlphaSpec(kind, values=tuple(_as_complex(v, f"/alpha/values/{i}") for i, v in enumerate(values)), gap_bound_r=r)
    else:
        spec = AlphaSpec(kind, gap_bound_r=1.0 if r is None else r)
    for key in raw:
        _expect(key in allowed, f"/alpha/{key}", f"unknown field for kind {kind!r}")
    return spec


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration.

    Raises ParseError carrying the JSON path of the first offence.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("/", f"invalid JSON: {exc}") from exc
    _expect(isinstance(raw, dict), "/", "top level must be an object")

    known = {"schema", "dimension", "operator", "alpha", "tolerance", "interior_margin", "seed", "checks"}
    for key in raw:
        _expect(key in known, f"/{key}", "unknown field")

    schema = raw.get("schema")
    _expect(schema is None or schema == SCHEMA, "/schema", f"must be {SCHEMA!r}")

    dimension = raw.get("dimension")
    _expect(isinstance(dimension, int) and not isinstance(dimension, bool), "/dimension", "must be an integer")
    _expect(dimension >= 2, "/dimension", "must be >= 2")

    _expect("operator" in raw, "/operator", "is required")
    operator = _parse_operator(raw["operator"], dimension)
    alpha = _parse_alpha(raw.get("alpha"), dimension)

    tolerance = raw.get("tolerance", 1e-8)
    tolerance = _as_number(tolerance, "/tolerance")
    _expect(tolerance > 0, "/tolerance", "must be positive")

    margin = raw.get("interior_margin", dimension // 2)
    _expect(isinstance(margin, int) and not isinstance(margin, bool), "/interior_margin", "must be an integer")
    _expect(0 <= margin < dimension, "/interior_margin", "must satisfy 0 <= margin < dimension")

    seed = raw.get("seed", 0)
    _expect(isinstance(seed, int) and not isinstance(seed, bool), "/seed", "must be an integer")
    _expect(seed >= 0, "/seed", "must be nonnegative")

    checks_raw = raw.get("checks")
    if checks_raw is None:
        checks = default_checks(operator.kind, alpha.kind)
    else:
        _expect(isinstance(checks_raw, list), "/checks", "must be a list of check names")
        _expect(len(checks_raw) > 0, "/checks", "must not be empty")
        for i, name in enumerate(checks_raw):
            _expect(name in KNOWN_CHECKS, f"/checks/{i}", "unknown check")
            if name in HERMITE_CHECKS:
                _expect(
                    operator.kind == "hermite-x",
                    f"/checks/{i}",
                    f"check {name!r} requires the hermite-x operator",
                )
            if name == "ccr":
                _expect(alpha.kind == "sqrt_n", f"/checks/{i}", "ccr requires the sqrt_n alpha kind")
        checks = tuple(dict.fromkeys(checks_raw))

    return RunConfig(
        dimension=dimension,
        operator=operator,
        alpha=alpha,
        tolerance=tolerance,
        interior_margin=margin,
        seed=seed,
        checks=checks,
    )


def _complex_json(value: complex):
    if value.imag == 0.0:
        return value.real
    return [value.real, value.imag]


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical JSON-ready echo of a validated configuration."""
    operator: dict[str, Any] = {"kind": cfg.operator.kind}
    if cfg.operator.kind == "diagonal":
        operator["values"] = [_complex_json(v) for v in cfg.operator.values]
    elif cfg.operator.kind == "dense":
        operator["entries"] = [_complex_json(v) for v in cfg.operator.values]
    elif cfg.operator.kind == "upper-unipotent":
        operator["off_diagonal"] = cfg.operator.off_diagonal
    alpha: dict[str, Any] = {"kind": cfg.alpha.kind}
    if cfg.alpha.kind == "custom":
        alpha["values"] = [_complex_json(v) for v in cfg.alpha.values]
    if cfg.alpha.gap_bound_r is not None:
        alpha["r"] = cfg.alpha.gap_bound_r
    return {
        "schema": SCHEMA,
        "dimension": cfg.dimension,
        "operator": operator,
        "alpha": alpha,
        "tolerance": cfg.tolerance,
        "interior_margin": cfg.interior_margin,
        "seed": cfg.seed,
        "checks": list(cfg.checks),
    }
