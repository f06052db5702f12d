"""Generalized measurements: effects, POVM/PVM validation, Born-rule distributions.

A measurement is a labeled collection of positive operators (effects) summing
to the identity. `validate_povm` is the single gate every measurement object
passes through; it returns the sharper `Pvm` type when the effects turn out
to be mutually orthogonal projectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvariantViolationError,
    NotCompleteError,
    NotHermitianError,
    NotPositiveError,
    ShapeMismatchError,
)
from .qcore import (
    DEFAULT_POLICY,
    ComplexMatrix,
    NumericPolicy,
    PolarizationAngle,
    StateDescriptor,
    as_matrix,
    expectation,
    hermiticity_defect,
    identity,
    projector_from_angle,
)

__all__ = [
    "Effect",
    "Povm",
    "Pvm",
    "OutcomeDistribution",
    "validate_povm",
    "born_probabilities",
    "polarization_pvm",
]


@dataclass(frozen=True)
class Effect:
    """One positive operator of a measurement, tagged with its outcome label."""

    matrix: ComplexMatrix
    label: str

    def __post_init__(self) -> None:
        mat = as_matrix(self.matrix)
        if mat.shape[0] != mat.shape[1]:
            raise ShapeMismatchError(f"effect must be square, got {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "label", str(self.label))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class Povm:
    """A validated positive-operator-valued measure. Build via validate_povm()."""

    effects: tuple[Effect, ...]

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.effects)

    def effect(self, label: str) -> Effect:
        for e in self.effects:
            if e.label == label:
                return e
        raise DomainError(f"no effect labeled {label!r}")

    def __len__(self) -> int:
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)


@dataclass(frozen=True)
class Pvm(Povm):
    """A POVM whose effects are mutually orthogonal projectors (a sharp measurement)."""


def validate_povm(
    effects: object,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Povm:
    """Check the POVM axioms and classify the result.

    Accepts Effect objects or (matrix, label) pairs. Raises NotHermitianError,
    NotPositiveError, or NotCompleteError with the worst deviation in the
    message; returns a Pvm when every effect is an idempotent projector and
    distinct effects are orthogonal, otherwise a plain Povm.
    """
    items: list[Effect] = []
    for entry in effects:
        if isinstance(entry, Effect):
            items.append(entry)
        else:
            matrix, label = entry
            items.append(Effect(matrix, label))
    if not items:
        raise DomainError("a measurement needs at least one effect")

    dim = items[0].dim
    for e in items:
        if e.dim != dim:
            raise ShapeMismatchError(
                f"effect {e.label!r} has dimension {e.dim}, expected {dim}"
            )
    labels = [e.label for e in items]
    if len(set(labels)) != len(labels):
        raise DomainError(f"outcome labels must be unique, got {labels}")

    for e in items:
        defect = hermiticity_defect(e.matrix)
        if defect > policy.atol_algebra:
            raise NotHermitianError(
                f"effect {e.label!r} is not Hermitian (max deviation {defect:.3e})",
                deviation=defect,
            )
    for e in items:
        eigs = np.linalg.eigvalsh(e.matrix)
        low, high = float(eigs[0]), float(eigs[-1])
        if low < -policy.atol_positivity or high > 1.0 + policy.atol_positivity:
            worst = max(-low, high - 1.0)
            raise NotPositiveError(
                f"effect {e.label!r} has eigenvalues in [{low:.6e}, {high:.6e}], "
                f"outside [0, 1] (deviation {worst:.3e})",
                deviation=worst,
            )

    total = np.zeros((dim, dim), dtype=np.complex128)
    for e in items:
        total = total + e.matrix
    completeness_defect = float(np.max(np.abs(total - np.eye(dim))))
    if completeness_defect > policy.atol_algebra:
        raise NotCompleteError(
            f"effects sum to identity only within {completeness_defect:.3e} "
            f"(allowed {policy.atol_algebra:.1e})",
            deviation=completeness_defect,
        )

    sharp = True
    for e in items:
        if float(np.max(np.abs(e.matrix @ e.matrix - e.matrix))) > policy.atol_algebra:
            sharp = False
            break
    if sharp:
        for i, a in enumerate(items):
            for b in items[i + 1 :]:
                if float(np.max(np.abs(a.matrix @ b.matrix))) > policy.atol_algebra:
                    sharp = False
                    break
            if not sharp:
                break

    cls = Pvm if sharp else Povm
    return cls(effects=tuple(items))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over a fixed ordered label set; sums to one."""

    labels: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.shape[0] != len(self.labels):
            raise ShapeMismatchError(
                f"got {probs.shape} probabilities for {len(self.labels)} labels"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_values(
        cls,
        labels: object,
        values: object,
        *,
        policy: NumericPolicy = DEFAULT_POLICY,
    ) -> "OutcomeDistribution":
        """Clamp floating-point dust, renormalize, and validate.

        Values below -atol_positivity or a total off from 1 by more than
        atol_positivity are treated as genuine contract violations, not noise.
        """
        probs = np.array(values, dtype=np.float64)
        lowest = float(probs.min())
        if lowest < -policy.atol_positivity:
            raise InvariantViolationError(
                f"probability {lowest!r} is negative beyond tolerance {policy.atol_positivity}"
            )
        total = float(probs.sum())
        if abs(total - 1.0) > policy.atol_positivity:
            raise InvariantViolationError(
                f"probabilities sum to {total!r}; must equal 1 within {policy.atol_positivity}"
            )
        probs = np.clip(probs, 0.0, 1.0)
        probs = probs / probs.sum()
        return cls(labels=tuple(labels), probs=probs)

    def prob(self, label: str) -> float:
        for lbl, p in zip(self.labels, self.probs):
            if lbl == label:
                return float(p)
        raise DomainError(f"no outcome labeled {label!r}")

    def as_dict(self) -> dict[str, float]:
        return {lbl: float(p) for lbl, p in zip(self.labels, self.probs)}


def born_probabilities(
    state: StateDescriptor,
    povm: Povm,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> OutcomeDistribution:
    """Outcome distribution of `povm` in `state` via the Born rule.

    Expectation values of validated effects are real up to rounding; a
    residual imaginary part beyond tolerance means the inputs broke contract.
    """
    raw: list[float] = []
    for e in povm.effects:
        value = expectation(state, e.matrix)
        if abs(value.imag) > policy.atol_positivity:
            raise InvariantViolationError(
                f"effect {e.label!r} produced non-real probability {value!r}"
            )
        raw.append(value.real)
    return OutcomeDistribution.from_values(povm.labels, raw, policy=policy)


def polarization_pvm(
    theta: float | PolarizationAngle,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Pvm:
    """Ideal two-outcome polarization measurement along `theta`.

    Labels "+" (transmitted by the analyzer) and "-" (absorbed/deflected).
    """
    plus = projector_from_angle(theta)
    minus = identity(2) - plus
    povm = validate_povm([(plus, "+"), (minus, "-")], policy=policy)
    if not isinstance(povm, Pvm):
        raise InvariantViolationError("polarization projectors failed sharpness classification")
    return povm
