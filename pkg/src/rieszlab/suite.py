"""Check orchestration and deterministic report emission."""

from __future__ import annotations

import json
import logging

import numpy as np

from . import forms, hermite, operators, sampling, systems
from .config import KNOWN_CHECKS, RunConfig, config_to_dict
from .linalg import LinearMap, adjoint, from_diagonal, invert
from .reporting import CheckReport, error_report, make_report, report_as_dict, with_provenance

log = logging.getLogger("rieszlab")

SAMPLE_COUNT = 100
_STREAMS = {name: i for i, name in enumerate(KNOWN_CHECKS)}


def build_operator(cfg: RunConfig) -> LinearMap:
    dim = cfg.dimension
    kind = cfg.operator.kind
    if kind == "diagonal":
        return from_diagonal(cfg.operator.values)
    if kind == "dense":
        return LinearMap(np.asarray(cfg.operator.values, dtype=np.complex128).reshape(dim, dim))
    if kind == "upper-unipotent":
        return LinearMap(np.eye(dim) + cfg.operator.off_diagonal * np.eye(dim, k=1))
    if kind == "hermite-x":
        return hermite.build_X(dim)
    raise ValueError(f"unknown operator kind {kind!r}")


def build_alpha(cfg: RunConfig) -> operators.AlphaSequence:
    kind = cfg.alpha.kind
    if kind == "sqrt_n":
        return operators.AlphaSequence.sqrt_n(cfg.dimension)
    if kind == "linear":
        return operators.AlphaSequence.linear(cfg.dimension)
    return operators.AlphaSequence.custom(cfg.alpha.values, gap_bound_r=cfg.alpha.gap_bound_r)


class _SuiteContext:
    """Lazily built shared objects for one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._cache: dict[str, object] = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def operator(self) -> LinearMap:
        return self._get("operator", lambda: build_operator(self.cfg))

    def pair(self) -> systems.ConstructingPair:
        return self._get("pair", lambda: systems.ConstructingPair(self.operator()))

    def system(self) -> systems.BiorthogonalSystem:
        return self._get(
            "system", lambda: systems.build_system(self.pair(), tolerance=self.cfg.tolerance)
        )

    def frame_ops(self) -> systems.FrameOperators:
        return self._get("frame_ops", lambda: systems.build_frame_operators(self.system()))

    def alpha(self) -> operators.AlphaSequence:
        return self._get("alpha", lambda: build_alpha(self.cfg))

    def opset(self) -> operators.OperatorSet:
        return self._get("opset", lambda: operators.build_operator_set(self.pair(), self.alpha()))

    def interior_indices(self):
        # Truncations of an infinite-dimensional operator are edge-polluted;
        # restrict per-index residual checks to the interior there.
        if self.cfg.operator.kind == "hermite-x":
            return range(self.cfg.dimension - self.cfg.interior_margin)
        return None

    def rng(self, check: str) -> np.random.Generator:
        return sampling.stream_rng(self.cfg.seed, _STREAMS[check])


def _check_biorthogonality(ctx: _SuiteContext) -> CheckReport:
    return systems.check_biorthogonality(ctx.system(), tolerance=ctx.cfg.tolerance)


def _check_k_relations(ctx: _SuiteContext) -> CheckReport:
    return systems.verify_K_relations(
        ctx.system(), ctx.frame_ops(), tolerance=ctx.cfg.tolerance, indices=ctx.interior_indices()
    )


def _check_onb_reconstruction(ctx: _SuiteContext) -> CheckReport:
    _, _, report = systems.reconstruct_onb(ctx.system(), ctx.frame_ops(), tolerance=ctx.cfg.tolerance)
    return report


def _check_clause_i3(ctx: _SuiteContext) -> CheckReport:
    samples = sampling.random_kets(ctx.cfg.dimension, SAMPLE_COUNT, ctx.rng("clause_i3"))
    return systems.verify_clause_i3(
        ctx.system(), ctx.frame_ops(), samples, tolerance=ctx.cfg.tolerance
    )


def _check_representation(ctx: _SuiteContext) -> CheckReport:
    pairs = sampling.random_ket_pairs(ctx.cfg.dimension, SAMPLE_COUNT, ctx.rng("representation"))
    worst = {"phi": 0.0, "psi": 0.0}
    for family, k_sqrt, tag in (
        (ctx.system().phi, ctx.frame_ops().k_phi_sqrt, "phi"),
        (ctx.system().psi, ctx.frame_ops().k_psi_sqrt, "psi"),
    ):
        for x, y in pairs:
            lhs = forms.omega(x, y, family).value
            rhs = np.vdot(k_sqrt.entries @ x.coeffs, k_sqrt.entries @ y.coeffs)
            worst[tag] = max(worst[tag], abs(lhs - rhs) / (1.0 + abs(lhs)))
    return make_report(
        "representation",
        max(worst.values()),
        ctx.cfg.tolerance,
        details={"phi_family": worst["phi"], "psi_family": worst["psi"], "samples": len(pairs)},
    )


def _check_quasi_basis(ctx: _SuiteContext) -> CheckReport:
    pairs = sampling.random_ket_pairs(ctx.cfg.dimension, SAMPLE_COUNT, ctx.rng("quasi_basis"))
    return forms.quasi_basis_residual(ctx.system(), pairs, tolerance=ctx.cfg.tolerance)


def _check_frame_bounds(ctx: _SuiteContext) -> CheckReport:
    c, big_c = forms.frame_bounds(ctx.frame_ops().k_phi)
    kets = sampling.random_kets(ctx.cfg.dimension, SAMPLE_COUNT, ctx.rng("frame_bounds"))
    worst = 0.0
    for x in kets:
        sq = float(np.linalg.norm(x.coeffs)) ** 2
        value = forms.omega(x, x, ctx.system().phi).value.real
        violation = max(0.0, c * sq - value, value - big_c * sq)
        worst = max(worst, violation / max(value, 1e-300))
    return make_report(
        "frame_bounds",
        worst,
        ctx.cfg.tolerance,
        details={"lower": c, "upper": big_c, "samples": len(kets)},
    )


def _check_polar(ctx: _SuiteContext) -> CheckReport:
    pair = ctx.pair()
    normalized, f_basis = systems.normalize_pair(pair)
    t = pair.matrix.entries
    rebuilt = normalized.T.entries @ f_basis.entries
    norms = np.maximum(1.0, np.linalg.norm(t, axis=0))
    reassembly = float((np.linalg.norm(rebuilt - t, axis=0) / norms).max())
    gram = float(
        np.abs(f_basis.entries.conj().T @ f_basis.entries - np.eye(pair.dim)).max()
    )
    return make_report(
        "polar",
        max(reassembly, gram),
        ctx.cfg.tolerance,
        details={"reassembly": reassembly, "f_basis_gram": gram},
    )


def _check_hamiltonian_agreement(ctx: _SuiteContext) -> CheckReport:
    summed = operators.sum_form_hamiltonian(ctx.system(), ctx.alpha())
    conjugated = ctx.opset().h_phi_psi
    residual = float(
        np.linalg.norm(summed.entries - conjugated.entries)
        / max(np.linalg.norm(conjugated.entries), 1e-300)
    )
    return make_report("hamiltonian_agreement", residual, ctx.cfg.tolerance)


def _check_eigen(ctx: _SuiteContext) -> CheckReport:
    cond = ctx.pair().matrix.cond_estimate
    tol = ctx.cfg.tolerance * cond
    indices = ctx.interior_indices()
    phi_side = operators.eigen_check(
        ctx.opset().h_phi_psi, ctx.system().phi, ctx.alpha(), tolerance=tol, indices=indices
    )
    psi_side = operators.eigen_check(
        ctx.opset().h_psi_phi, ctx.system().psi, ctx.alpha(), tolerance=tol, indices=indices
    )
    return make_report(
        "eigen",
        max(phi_side.residual, psi_side.residual),
        tol,
        details={"phi_family": phi_side.residual, "psi_family": psi_side.residual, "cond": cond},
    )


def _check_ladder(ctx: _SuiteContext) -> CheckReport:
    opset = ctx.opset()
    phi_side = operators.ladder_check(
        opset.a_phi_psi, opset.b_phi_psi, ctx.system().phi, ctx.alpha(), tolerance=ctx.cfg.tolerance
    )
    psi_side = operators.ladder_check(
        opset.a_psi_phi, opset.b_psi_phi, ctx.system().psi, ctx.alpha(), tolerance=ctx.cfg.tolerance
    )
    details = {f"phi_{k}": v for k, v in phi_side.details.items()}
    details.update({f"psi_{k}": v for k, v in psi_side.details.items()})
    return make_report(
        "ladder", max(phi_side.residual, psi_side.residual), ctx.cfg.tolerance, details=details
    )


def _check_adjoint_relations(ctx: _SuiteContext) -> CheckReport:
    return operators.adjoint_relation_check(ctx.opset(), tolerance=ctx.cfg.tolerance)


def _check_product_identities(ctx: _SuiteContext) -> CheckReport:
    worst: CheckReport | None = None
    for m in range(5):
        for l in range(5 - m):
            report = operators.product_identity_check(ctx.opset(), m, l, tolerance=ctx.cfg.tolerance)
            if worst is None or report.residual > worst.residual:
                worst = report
    assert worst is not None
    return make_report("product_identities", worst.residual, ctx.cfg.tolerance, details=worst.details)


def _check_ccr(ctx: _SuiteContext) -> CheckReport:
    return operators.ccr_check(
        ctx.alpha(), ctx.cfg.dimension, constructing=ctx.pair().matrix, tolerance=ctx.cfg.tolerance
    )


def _check_domain_mapping(ctx: _SuiteContext) -> CheckReport:
    t = ctx.pair().matrix
    h_e = ctx.opset().h_e
    sides = {
        side: operators.domain_mapping_check(t, h_e, side, tolerance=ctx.cfg.tolerance)
        for side in ("phi_psi", "psi_phi")
    }
    return make_report(
        "domain_mapping",
        max(r.residual for r in sides.values()),
        ctx.cfg.tolerance,
        details={side: r.residual for side, r in sides.items()} | {"amplification": t.cond_estimate},
    )


def _check_hermite_oracle(ctx: _SuiteContext) -> CheckReport:
    model = hermite.build_model(ctx.cfg.dimension)
    identities = hermite.verify_K_psi(
        ctx.cfg.dimension,
        margin=ctx.cfg.interior_margin,
        tolerance=ctx.cfg.tolerance,
        seed=ctx.cfg.seed,
    )
    details = dict(identities.details)
    details["entry_oracle"] = model.oracle_residual
    details["rational_convergence"] = model.rational_convergence
    residual = max(identities.residual, model.oracle_residual, model.rational_convergence)
    return make_report("hermite_oracle", residual, ctx.cfg.tolerance, details=details)


def _check_frame_bound_growth(ctx: _SuiteContext) -> CheckReport:
    sizes = (16, 32, 64)
    lower, upper = {}, {}
    for n in sizes:
        k_phi = systems.frame_operator(hermite.tail_family(n))
        lower[n], upper[n] = forms.frame_bounds(k_phi)
    ratio = upper[64] / upper[32]
    residual = max(
        0.0,
        1.0 - min(lower.values()),
        3.0 - ratio,
        upper[16] - upper[32],
        upper[32] - upper[64],
    )
    details = {f"c_{n}": lower[n] for n in sizes}
    details.update({f"C_{n}": upper[n] for n in sizes})
    details["ratio_64_32"] = ratio
    return make_report("frame_bound_growth", residual, 0.0, details=details)


def _check_tail_dichotomy(ctx: _SuiteContext) -> CheckReport:
    grid = forms.DEFAULT_TAIL_GRID
    verdicts = {}
    details: dict = {}
    for label, coeff in (
        ("harmonic", lambda n: 1.0 / (n + 1.0)),
        ("geometric", lambda n: 2.0**-n),
    ):
        diag = forms.tail_diagnostic(
            lambda n: hermite.tail_coefficient_vector(coeff, n),
            hermite.tail_family,
            grid=grid,
        )
        verdicts[label] = diag.classification
        details[f"{label}_classification"] = diag.classification
        details[f"{label}_growth_exponent"] = diag.growth_exponent
        details[f"{label}_final_sum"] = diag.partial_sums[-1]
    ok = verdicts["harmonic"] == "divergent" and verdicts["geometric"] == "convergent"
    return make_report("tail_dichotomy", 0.0 if ok else 1.0, 0.0, details=details)


_CHECKS = {
    "biorthogonality": _check_biorthogonality,
    "k_relations": _check_k_relations,
    "onb_reconstruction": _check_onb_reconstruction,
    "clause_i3": _check_clause_i3,
    "representation": _check_representation,
    "quasi_basis": _check_quasi_basis,
    "frame_bounds": _check_frame_bounds,
    "polar": _check_polar,
    "hamiltonian_agreement": _check_hamiltonian_agreement,
    "eigen": _check_eigen,
    "ladder": _check_ladder,
    "adjoint_relations": _check_adjoint_relations,
    "product_identities": _check_product_identities,
    "ccr": _check_ccr,
    "domain_mapping": _check_domain_mapping,
    "hermite_oracle": _check_hermite_oracle,
    "frame_bound_growth": _check_frame_bound_growth,
    "tail_dichotomy": _check_tail_dichotomy,
}


def run_suite(cfg: RunConfig) -> list[CheckReport]:
    """Run the configured checks; failures become reports, never crashes."""
    ctx = _SuiteContext(cfg)
    provenance = {"config": config_to_dict(cfg)}
    reports = []
    for name in sorted(cfg.checks):
        try:
            report = _CHECKS[name](ctx)
        except Exception as exc:  # totality: surface as a failed report
            log.info("check %s raised %s: %s", name, type(exc).__name__, exc)
            report = error_report(name, exc, ctx.cfg.tolerance)
        report = with_provenance(report, provenance)
        log.info("check %s: residual %.3e vs tolerance %.3e -> %s",
                 report.name, report.residual, report.tolerance,
                 "pass" if report.passed else "FAIL")
        reports.append(report)
    return reports


def emit_report(reports, fmt: str = "json", config: dict | None = None) -> str:
    """Serialize reports deterministically (JSON document or CSV table)."""
    ordered = sorted(reports, key=lambda r: r.name)
    if fmt == "json":
        doc = {
            "schema": "rieszlab/1",
            "config": config,
            "reports": [report_as_dict(r) for r in ordered],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        lines = ["name,residual,tolerance,pass"]
        for r in ordered:
            lines.append(
                f"{r.name},{format(r.residual, '.17g')},{format(r.tolerance, '.17g')},"
                f"{str(r.passed).lower()}"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'json' or 'csv'")
