"""Biorthogonal vector systems built from constructing pairs.

A constructing pair (an invertible map T together with an orthonormal
basis) produces the family phi_n = T e_n and its canonical dual
psi_n = (T^-1)* e_n.  This module builds such systems, computes their
frame operators K = sum of outer products, reconstructs the orthonormal
basis hidden inside any verified system, and certifies the identities
tying all of these together.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    KetVector,
    LinearMap,
    adjoint,
    invert,
    operator_sqrt,
    polar_decompose,
)
from .reporting import CheckReport, make_report

DEFAULT_TOLERANCE = 1e-8
UNITARY_RTOL = 1e-10


def family_matrix(vectors: Sequence[KetVector]) -> np.ndarray:
    """Stack a vector family into columns, enforcing a common dimension."""
    vecs = list(vectors)
    if not vecs:
        raise DimensionMismatch("empty vector family")
    dim = vecs[0].dim
    if any(v.dim != dim for v in vecs):
        raise DimensionMismatch("vector family mixes dimensions")
    return np.column_stack([v.coeffs for v in vecs])


def _columns(matrix: np.ndarray) -> tuple[KetVector, ...]:
    return tuple(KetVector(matrix[:, k].copy()) for k in range(matrix.shape[1]))


@dataclass(frozen=True, eq=False)
class ConstructingPair:
    """Invertible map plus the orthonormal basis it transforms.

    basis None selects the reference basis; otherwise basis is a unitary
    whose columns are the basis vectors.
    """

    T: LinearMap
    basis: LinearMap | None = None

    def __post_init__(self):
        if self.basis is not None:
            v = self.basis
            if v.dim != self.T.dim:
                raise DimensionMismatch("basis dimension differs from operator dimension")
            defect = np.linalg.norm(v.entries.conj().T @ v.entries - np.eye(v.dim))
            if defect > UNITARY_RTOL * np.sqrt(v.dim):
                raise ValueError(f"explicit basis is not unitary (defect {defect:.3e})")
        effective = self.T if self.basis is None else LinearMap(self.T.entries @ self.basis.entries)
        object.__setattr__(self, "_matrix", effective)

    @property
    def dim(self) -> int:
        return self.T.dim

    @property
    def matrix(self) -> LinearMap:
        """Effective constructing matrix in reference coordinates."""
        return self._matrix  # type: ignore[attr-defined]


@dataclass(frozen=True, eq=False)
class BiorthogonalSystem:
    """Paired families {phi_n}, {psi_n} with their biorthogonality residual."""

    phi: tuple[KetVector, ...]
    psi: tuple[KetVector, ...]
    pair: ConstructingPair | None
    biorth_residual: float
    verified: bool

    @property
    def dim(self) -> int:
        return self.phi[0].dim

    def phi_matrix(self) -> np.ndarray:
        return family_matrix(self.phi)

    def psi_matrix(self) -> np.ndarray:
        return family_matrix(self.psi)


@dataclass(frozen=True, eq=False)
class FrameOperators:
    """Frame operators of both families and their positive square roots."""

    k_phi: LinearMap
    k_psi: LinearMap
    k_phi_sqrt: LinearMap
    k_psi_sqrt: LinearMap


def _biorth_residual(phi_m: np.ndarray, psi_m: np.ndarray) -> tuple[float, int, int]:
    gram = phi_m.conj().T @ psi_m
    dev = np.abs(gram - np.eye(gram.shape[0]))
    k, l = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[k, l]), int(k), int(l)


def build_system(pair: ConstructingPair, tolerance: float = DEFAULT_TOLERANCE) -> BiorthogonalSystem:
    """phi_n = T e_n and psi_n = (T^-1)* e_n from a constructing pair."""
    m = pair.matrix
    m_inv = invert(m)
    phi_m = m.entries.copy()
    psi_m = m_inv.entries.conj().T
    residual, _, _ = _biorth_residual(phi_m, psi_m)
    return BiorthogonalSystem(
        phi=_columns(phi_m),
        psi=_columns(psi_m),
        pair=pair,
        biorth_residual=residual,
        verified=residual <= tolerance,
    )


def system_from_families(
    phi: Sequence[KetVector],
    psi: Sequence[KetVector],
    tolerance: float = DEFAULT_TOLERANCE,
) -> BiorthogonalSystem:
    """Wrap user-supplied families; no constructing pair is recorded."""
    phi_m = family_matrix(phi)
    psi_m = family_matrix(psi)
    if phi_m.shape != psi_m.shape:
        raise DimensionMismatch("phi and psi families differ in shape")
    residual, _, _ = _biorth_residual(phi_m, psi_m)
    return BiorthogonalSystem(
        phi=tuple(phi),
        psi=tuple(psi),
        pair=None,
        biorth_residual=residual,
        verified=residual <= tolerance,
    )


def check_biorthogonality(sys: BiorthogonalSystem, tolerance: float = DEFAULT_TOLERANCE) -> CheckReport:
    """Max deviation of <phi_k, psi_l> from the Kronecker delta."""
    residual, k, l = _biorth_residual(sys.phi_matrix(), sys.psi_matrix())
    return make_report(
        "biorthogonality",
        residual,
        tolerance,
        details={"worst_row": k, "worst_col": l},
    )


def frame_operator(vectors: Sequence[KetVector]) -> LinearMap:
    """K = sum over the family of outer products v_k v_k*; positive by construction."""
    m = family_matrix(vectors)
    k = m @ m.conj().T
    return LinearMap((k + k.conj().T) / 2.0)


def build_frame_operators(sys: BiorthogonalSystem) -> FrameOperators:
    k_phi = frame_operator(sys.phi)
    k_psi = frame_operator(sys.psi)
    return FrameOperators(
        k_phi=k_phi,
        k_psi=k_psi,
        k_phi_sqrt=operator_sqrt(k_phi),
        k_psi_sqrt=operator_sqrt(k_psi),
    )


def _column_residuals(actual: np.ndarray, expected: np.ndarray) -> np.ndarray:
    norms = np.maximum(1.0, np.linalg.norm(expected, axis=0))
    return np.linalg.norm(actual - expected, axis=0) / norms


def verify_K_relations(
    sys: BiorthogonalSystem,
    ops: FrameOperators,
    tolerance: float = DEFAULT_TOLERANCE,
    indices: Sequence[int] | None = None,
) -> CheckReport:
    """phi_k = K_phi psi_k, psi_k = K_psi phi_k, the round trips, and K_phi K_psi = 1."""
    phi_m = sys.phi_matrix()
    psi_m = sys.psi_matrix()
    sel = np.arange(sys.dim) if indices is None else np.asarray(list(indices), dtype=int)
    k_phi = ops.k_phi.entries
    k_psi = ops.k_psi.entries
    details = {
        "phi_from_psi": float(_column_residuals((k_phi @ psi_m)[:, sel], phi_m[:, sel]).max()),
        "psi_from_phi": float(_column_residuals((k_psi @ phi_m)[:, sel], psi_m[:, sel]).max()),
        "psi_roundtrip": float(_column_residuals((k_psi @ (k_phi @ psi_m))[:, sel], psi_m[:, sel]).max()),
        "phi_roundtrip": float(_column_residuals((k_phi @ (k_psi @ phi_m))[:, sel], phi_m[:, sel]).max()),
        "product_identity": float(
            np.linalg.norm(k_phi @ k_psi - np.eye(sys.dim)) / np.sqrt(sys.dim)
        ),
    }
    return make_report("k_relations", max(details.values()), tolerance, details=details)


def reconstruct_onb(
    sys: BiorthogonalSystem,
    ops: FrameOperators,
    tolerance: float = 1e-9,
) -> tuple[tuple[KetVector, ...], tuple[KetVector, ...], CheckReport]:
    """Recover the orthonormal basis e_n = K_phi^(1/2) psi_n = K_psi^(1/2) phi_n."""
    e_from_psi = ops.k_phi_sqrt.entries @ sys.psi_matrix()
    e_from_phi = ops.k_psi_sqrt.entries @ sys.phi_matrix()
    eye = np.eye(sys.dim)
    details = {
        "gram_from_psi": float(np.abs(e_from_psi.conj().T @ e_from_psi - eye).max()),
        "gram_from_phi": float(np.abs(e_from_phi.conj().T @ e_from_phi - eye).max()),
        "cross_agreement": float(np.linalg.norm(e_from_psi - e_from_phi, axis=0).max()),
    }
    report = make_report("onb_reconstruction", max(details.values()), tolerance, details=details)
    return _columns(e_from_psi), _columns(e_from_phi), report


def verify_clause_i3(
    sys: BiorthogonalSystem,
    ops: FrameOperators,
    samples: Sequence[KetVector],
    tolerance: float = 1e-9,
) -> CheckReport:
    """Residual of (K_phi^(1/2))* K_psi^(1/2) x = x over the sample set."""
    if not samples:
        raise ValueError("clause (i)3 check needs a nonempty sample set")
    r = adjoint(ops.k_phi_sqrt).entries @ ops.k_psi_sqrt.entries
    worst = 0.0
    for x in samples:
        nrm = float(np.linalg.norm(x.coeffs))
        if nrm == 0.0:
            continue
        worst = max(worst, float(np.linalg.norm(r @ x.coeffs - x.coeffs)) / nrm)
    return make_report("clause_i3", worst, tolerance, details={"samples": len(samples)})


def normalize_pair(pair: ConstructingPair) -> tuple[ConstructingPair, LinearMap]:
    """Swap a constructing pair for the equivalent one with a positive operator.

    Returns the normalized pair (positive factor P acting on the rotated
    basis f_n = U e_n) along with the unitary U; P (U e_n) = T e_n.
    """
    factors = polar_decompose(pair.matrix)
    normalized = ConstructingPair(T=factors.positive_part, basis=factors.unitary_part)
    return normalized, factors.unitary_part
