"""Dense complex linear algebra with certified structure flags.

Everything downstream is an N x N complex matrix.  A LinearMap certifies
self-adjointness (by residual) and positivity (by smallest eigenvalue) at
construction time, so callers can demand the structure they need instead
of trusting whoever built the matrix.  A condition estimate is computed
lazily from the extreme singular values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositive, NotSelfAdjoint, NumericallySingular

# Certification thresholds.
SELF_ADJOINT_RTOL = 1e-12   # max|A - A*| <= rtol * max|A|
POSITIVE_RTOL = 1e-10       # lambda_min >= -rtol * lambda_max
SINGULARITY_FLOOR = 1e-12   # invertible iff sigma_min > floor * sigma_max


def _as_square_complex(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


class LinearMap:
    """Square complex matrix with certified self_adjoint/positive flags."""

    __slots__ = ("entries", "self_adjoint", "positive", "_cond")

    def __init__(self, entries):
        a = _as_square_complex(entries)
        scale = float(np.abs(a).max())
        self_adjoint = float(np.abs(a - a.conj().T).max()) <= SELF_ADJOINT_RTOL * scale
        positive = False
        if self_adjoint:
            lam = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
            positive = bool(lam[0] >= -POSITIVE_RTOL * max(float(lam[-1]), 0.0))
        a.setflags(write=False)
        self.entries = a
        self.self_adjoint = self_adjoint
        self.positive = positive
        self._cond: float | None = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def cond_estimate(self) -> float:
        """Ratio of extreme singular values (inf when singular)."""
        if self._cond is None:
            s = np.linalg.svd(self.entries, compute_uv=False)
            self._cond = float(s[0] / s[-1]) if s[-1] > 0.0 else float("inf")
        return self._cond

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            if other.dim != self.dim:
                raise DimensionMismatch(f"cannot compose dim {self.dim} with dim {other.dim}")
            return LinearMap(self.entries @ other.entries)
        if isinstance(other, KetVector):
            if other.dim != self.dim:
                raise DimensionMismatch(f"cannot apply dim {self.dim} map to dim {other.dim} vector")
            return KetVector(self.entries @ other.coeffs)
        return NotImplemented

    def __repr__(self) -> str:
        return (
            f"LinearMap(dim={self.dim}, self_adjoint={self.self_adjoint}, "
            f"positive={self.positive})"
        )


@dataclass(frozen=True, eq=False)
class KetVector:
    """Coordinate vector in the reference orthonormal basis."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.shape[0] == 0:
            raise ValueError(f"expected a nonempty 1-d coefficient array, got shape {c.shape}")
        if not np.isfinite(c).all():
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class PolarFactors:
    """Factors of the left polar decomposition T = P U."""

    unitary_part: LinearMap
    positive_part: LinearMap


def identity(dim: int) -> LinearMap:
    return LinearMap(np.eye(dim))


def from_diagonal(values) -> LinearMap:
    return LinearMap(np.diag(np.asarray(values, dtype=np.complex128)))


def basis_vector(index: int, dim: int) -> KetVector:
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return KetVector(e)


def inner(x: KetVector, y: KetVector) -> complex:
    """Inner product <x, y>, antilinear in the first slot."""
    if x.dim != y.dim:
        raise DimensionMismatch(f"inner product of dim {x.dim} with dim {y.dim}")
    return complex(np.vdot(x.coeffs, y.coeffs))


def adjoint(a: LinearMap) -> LinearMap:
    """Conjugate transpose; an exact involution."""
    return LinearMap(a.entries.conj().T)


def hermitian_eig(a: LinearMap) -> tuple[np.ndarray, LinearMap]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of a self-adjoint map."""
    if not a.self_adjoint:
        raise NotSelfAdjoint("hermitian_eig requires a certified self-adjoint map")
    w, v = np.linalg.eigh((a.entries + a.entries.conj().T) / 2.0)
    return w, LinearMap(v)


def operator_sqrt(a: LinearMap) -> LinearMap:
    """Positive square root of a certified positive map.

    Eigenvalues in [-POSITIVE_RTOL * lambda_max, 0] are clamped to zero
    before taking the root; anything lower fails certification upstream.
    """
    if not a.positive:
        raise NotPositive("operator_sqrt requires a certified positive map")
    w, v = np.linalg.eigh((a.entries + a.entries.conj().T) / 2.0)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return LinearMap((root + root.conj().T) / 2.0)


def invert(a: LinearMap, floor: float = SINGULARITY_FLOOR) -> LinearMap:
    """SVD-based inverse with a scale-invariant singularity floor."""
    u, s, vh = np.linalg.svd(a.entries)
    if s[-1] <= floor * s[0]:
        raise NumericallySingular(s[-1], s[0])
    out = LinearMap((vh.conj().T * (1.0 / s)) @ u.conj().T)
    out._cond = float(s[0] / s[-1])
    return out


def polar_decompose(t: LinearMap, floor: float = SINGULARITY_FLOOR) -> PolarFactors:
    """Left polar decomposition T = P U with P = (T T*)^(1/2) and U unitary.

    The left convention makes the positive factor act on the rotated basis:
    P (U e_n) = T e_n, column by column.
    """
    u, s, vh = np.linalg.svd(t.entries)
    if s[-1] <= floor * s[0]:
        raise NumericallySingular(s[-1], s[0])
    pos = (u * s) @ u.conj().T
    return PolarFactors(
        unitary_part=LinearMap(u @ vh),
        positive_part=LinearMap((pos + pos.conj().T) / 2.0),
    )
