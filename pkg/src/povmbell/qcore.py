"""Dense complex linear algebra and state primitives for small Hilbert spaces.

Operators are plain numpy complex128 matrices, pure states are amplitude
vectors, mixed states are density operators. The intended dimensions are 2
(single-photon polarization) and 4 (photon pairs), but nothing here is
hardcoded to them. Arrays handed out by this module are frozen (read-only)
so shared references cannot be mutated behind a caller's back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, ShapeMismatchError

ComplexMatrix = NDArray[np.complex128]

__all__ = [
    "ComplexMatrix",
    "NumericPolicy",
    "DEFAULT_POLICY",
    "PolarizationAngle",
    "StateDescriptor",
    "as_angle",
    "as_matrix",
    "expectation",
    "hermiticity_defect",
    "identity",
    "is_hermitian",
    "kron",
    "matmul",
    "projector_from_angle",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
]


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances for double-precision checks.

    atol_algebra bounds direct algebraic identities (hermiticity,
    completeness, idempotence, norms). atol_positivity bounds quantities that
    pass through an eigensolver or accumulate across sums (eigenvalue floors,
    probability dust), which pick up more rounding than direct identities.
    """

    atol_algebra: float = 1e-12
    atol_positivity: float = 1e-10


DEFAULT_POLICY = NumericPolicy()


def as_matrix(values: object) -> ComplexMatrix:
    """Copy `values` into an immutable complex128 matrix."""
    mat = np.array(values, dtype=np.complex128)
    if mat.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    mat.setflags(write=False)
    return mat


def identity(dim: int) -> ComplexMatrix:
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    return as_matrix(np.eye(dim))


def matmul(a: object, b: object) -> ComplexMatrix:
    """Matrix product with explicit shape checking."""
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[1] != bm.shape[0]:
        raise ShapeMismatchError(f"cannot multiply {am.shape} by {bm.shape}")
    out = am @ bm
    out.setflags(write=False)
    return out


def kron(a: object, b: object) -> ComplexMatrix:
    """Tensor (Kronecker) product; row-major composite index order."""
    out = np.kron(as_matrix(a), as_matrix(b))
    out.setflags(write=False)
    return out


def hermiticity_defect(mat: object) -> float:
    """Largest entry-wise deviation of a square matrix from its adjoint."""
    m = as_matrix(mat)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"hermiticity is defined for square matrices, got {m.shape}")
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(mat: object, atol: float = DEFAULT_POLICY.atol_algebra) -> bool:
    return hermiticity_defect(mat) <= atol


@dataclass(frozen=True)
class PolarizationAngle:
    """Analyzer orientation in radians, canonical in [0, pi).

    Polarization directions are pi-periodic: theta and theta + pi select the
    same transmission axis, so construction reduces modulo pi.
    """

    theta: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise DomainError(f"polarization angle must be finite, got {theta!r}")
        theta = theta % math.pi
        if theta == math.pi:  # inputs a hair below a multiple of pi round up
            theta = 0.0
        object.__setattr__(self, "theta", theta)


def as_angle(theta: float | PolarizationAngle) -> PolarizationAngle:
    if isinstance(theta, PolarizationAngle):
        return theta
    return PolarizationAngle(float(theta))


class StateDescriptor:
    """A pure state vector or a density operator, validated on construction.

    Build with :meth:`pure` (amplitude vector, unit norm) or :meth:`density`
    (Hermitian, unit trace, positive semidefinite). Both representations are
    kept as frozen numpy arrays; `expectation` dispatches on which one is set.
    """

    __slots__ = ("_vector", "_matrix")

    def __init__(
        self,
        vector: object | None = None,
        matrix: object | None = None,
        *,
        policy: NumericPolicy = DEFAULT_POLICY,
    ):
        if (vector is None) == (matrix is None):
            raise DomainError("provide exactly one of vector= or matrix=")
        if vector is not None:
            vec = np.array(vector, dtype=np.complex128)
            if vec.ndim != 1 or vec.size == 0:
                raise ShapeMismatchError("pure state must be a nonempty 1-D amplitude vector")
            if not np.all(np.isfinite(vec)):
                raise DomainError("pure state amplitudes must be finite")
            norm_sq = float(np.real(np.vdot(vec, vec)))
            if abs(norm_sq - 1.0) > policy.atol_algebra:
                raise DomainError(
                    f"pure state squared norm is {norm_sq!r}; must equal 1 "
                    f"within {policy.atol_algebra}"
                )
            vec.setflags(write=False)
            self._vector: ComplexMatrix | None = vec
            self._matrix: ComplexMatrix | None = None
        else:
            rho = as_matrix(matrix)
            if rho.shape[0] != rho.shape[1]:
                raise ShapeMismatchError(f"density operator must be square, got {rho.shape}")
            defect = hermiticity_defect(rho)
            if defect > policy.atol_algebra:
                raise DomainError(f"density operator is not Hermitian (max deviation {defect:.3e})")
            trace = complex(np.trace(rho))
            if abs(trace - 1.0) > policy.atol_algebra:
                raise DomainError(f"density operator trace is {trace!r}; must equal 1")
            lowest = float(np.linalg.eigvalsh(rho)[0])
            if lowest < -policy.atol_positivity:
                raise DomainError(f"density operator has negative eigenvalue {lowest!r}")
            self._vector = None
            self._matrix = rho

    @classmethod
    def pure(cls, amplitudes: object, *, policy: NumericPolicy = DEFAULT_POLICY) -> "StateDescriptor":
        return cls(vector=amplitudes, policy=policy)

    @classmethod
    def density(cls, rho: object, *, policy: NumericPolicy = DEFAULT_POLICY) -> "StateDescriptor":
        return cls(matrix=rho, policy=policy)

    @property
    def is_pure(self) -> bool:
        return self._vector is not None

    @property
    def vector(self) -> ComplexMatrix:
        if self._vector is None:
            raise DomainError("state was built as a density operator; no amplitude vector")
        return self._vector

    @property
    def matrix(self) -> ComplexMatrix:
        if self._matrix is None:
            raise DomainError("state was built as a pure vector; no density matrix stored")
        return self._matrix

    @property
    def dim(self) -> int:
        if self._vector is not None:
            return int(self._vector.shape[0])
        assert self._matrix is not None
        return int(self._matrix.shape[0])

    def to_density(self) -> ComplexMatrix:
        """Density-operator form regardless of representation."""
        if self._matrix is not None:
            return self._matrix
        assert self._vector is not None
        rho = np.outer(self._vector, self._vector.conj())
        rho.setflags(write=False)
        return rho

    def __repr__(self) -> str:
        kind = "pure" if self.is_pure else "density"
        return f"StateDescriptor({kind}, dim={self.dim})"


def expectation(state: StateDescriptor, op: object) -> complex:
    """Born-rule expectation value: <psi|A|psi> for pure states, Tr(rho A) else."""
    mat = as_matrix(op)
    dim = state.dim
    if mat.shape != (dim, dim):
        raise ShapeMismatchError(f"operator shape {mat.shape} does not match state dimension {dim}")
    if state.is_pure:
        vec = state.vector
        return complex(np.vdot(vec, mat @ vec))
    return complex(np.trace(state.matrix @ mat))


def projector_from_angle(theta: float | PolarizationAngle) -> ComplexMatrix:
    """Rank-1 projector onto the linear-polarization direction (cos t, sin t)."""
    t = as_angle(theta).theta
    vec = np.array([math.cos(t), math.sin(t)], dtype=np.complex128)
    proj = np.outer(vec, vec.conj())
    proj.setflags(write=False)
    return proj


PAULI_X = as_matrix([[0, 1], [1, 0]])
PAULI_Y = as_matrix([[0, -1j], [1j, 0]])
PAULI_Z = as_matrix([[1, 0], [0, -1]])
