"""Joint nonideal measurement of two incompatible polarization directions.

A beam splitter with transmissivity gamma routes each photon either to a
polarization analyzer along theta (transmitted branch, detector D) or to one
along theta_prime (reflected branch, detector D'). Both branches are watched
at once, so a single run yields a bivariate outcome (m, n): m is the click
record of D and n the click record of D', with "+" meaning the detector
fired. The photon takes one branch only, hence both detectors can never fire
together and the "++" effect is the zero operator.

The measured marginal in each branch is a column-stochastic smearing of the
ideal sharp measurement along that branch's axis; `marginals_and_nonideality`
returns those smearing matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantViolationError, ShapeMismatchError
from .measurement import OutcomeDistribution, Povm, born_probabilities, polarization_pvm, validate_povm
from .qcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    PolarizationAngle,
    StateDescriptor,
    as_angle,
    identity,
    projector_from_angle,
)

__all__ = [
    "WW_LABELS",
    "WhichWayConfig",
    "BivariateWhichWay",
    "NonidealityMatrix",
    "build_whichway",
    "joint_distribution",
    "measured_marginals",
    "marginals_and_nonideality",
    "certainty_check",
]

# outcome order is fixed: (D, D') click pattern, "+" = fired
WW_LABELS = ("++", "+-", "-+", "--")


@dataclass(frozen=True)
class WhichWayConfig:
    """Beam-splitter transmissivity and the two analyzer orientations."""

    gamma: float
    theta: PolarizationAngle
    theta_prime: PolarizationAngle

    def __post_init__(self) -> None:
        gamma = float(self.gamma)
        if not math.isfinite(gamma) or not 0.0 <= gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "theta", as_angle(self.theta))
        object.__setattr__(self, "theta_prime", as_angle(self.theta_prime))


@dataclass(frozen=True)
class BivariateWhichWay:
    """A which-way configuration together with its validated 4-outcome POVM."""

    config: WhichWayConfig
    povm: Povm


def build_whichway(
    config: WhichWayConfig,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> BivariateWhichWay:
    """Construct and validate the 4-effect which-way POVM.

    Effects, in WW_LABELS order:
      ++ : 0                            (both branches firing is impossible)
      +- : gamma * E+(theta)            (transmitted, analyzer passes)
      -+ : (1-gamma) * E+(theta')       (reflected, analyzer passes)
      -- : rest of the identity         (no detector fires)
    The last effect equals gamma*E-(theta) + (1-gamma)*E-(theta'), a convex
    combination of projectors, so positivity holds for every valid config.
    """
    gamma = config.gamma
    e_theta = projector_from_angle(config.theta)
    e_prime = projector_from_angle(config.theta_prime)
    effects = [
        (np.zeros((2, 2), dtype=np.complex128), "++"),
        (gamma * e_theta, "+-"),
        ((1.0 - gamma) * e_prime, "-+"),
        (identity(2) - gamma * e_theta - (1.0 - gamma) * e_prime, "--"),
    ]
    return BivariateWhichWay(config=config, povm=validate_povm(effects, policy=policy))


def joint_distribution(
    whichway: BivariateWhichWay,
    state: StateDescriptor,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> OutcomeDistribution:
    """Bivariate outcome probabilities in WW_LABELS order."""
    return born_probabilities(state, whichway.povm, policy=policy)


def measured_marginals(
    whichway: BivariateWhichWay,
    state: StateDescriptor,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[np.ndarray, np.ndarray]:
    """Marginal (+, -) distributions of the D branch and the D' branch."""
    p = joint_distribution(whichway, state, policy=policy).as_dict()
    transmitted = np.array([p["++"] + p["+-"], p["-+"] + p["--"]])
    reflected = np.array([p["++"] + p["-+"], p["+-"] + p["--"]])
    return transmitted, reflected


@dataclass(frozen=True)
class NonidealityMatrix:
    """Column-stochastic map from ideal sharp probabilities to measured marginals."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2:
            raise ShapeMismatchError(f"nonideality matrix must be 2-D, got ndim={entries.ndim}")
        if float(entries.min()) < 0.0:
            raise DomainError(f"nonideality entries must be nonnegative, got min {entries.min()!r}")
        col_sums = entries.sum(axis=0)
        worst = float(np.max(np.abs(col_sums - 1.0)))
        if worst > DEFAULT_POLICY.atol_algebra:
            raise DomainError(
                f"columns must each sum to 1, worst deviation {worst:.3e}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n_measured(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_ideal(self) -> int:
        return int(self.entries.shape[1])

    def apply(self, ideal_probs: object) -> np.ndarray:
        probs = np.asarray(ideal_probs, dtype=np.float64)
        if probs.shape != (self.n_ideal,):
            raise ShapeMismatchError(
                f"expected {self.n_ideal} ideal probabilities, got shape {probs.shape}"
            )
        return self.entries @ probs


def _probe_states() -> tuple[StateDescriptor, ...]:
    # fixed grid of pure states, real and complex, used for self-checks
    states = []
    for k in range(8):
        t = k * math.pi / 8.0
        for phase in (0.0, math.pi / 2.0):
            states.append(
                StateDescriptor.pure([math.cos(t), cmath.exp(1j * phase) * math.sin(t)])
            )
    return tuple(states)


def marginals_and_nonideality(
    whichway: BivariateWhichWay,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[NonidealityMatrix, NonidealityMatrix]:
    """Nonideality matrices (lambda, mu) of the two branch marginals.

    lambda maps ideal probabilities along theta to the measured D marginal;
    mu maps ideal probabilities along theta_prime to the measured D' marginal.
    Both are verified numerically against the built POVM on a fixed grid of
    probe states before being returned.
    """
    gamma = whichway.config.gamma
    lam = NonidealityMatrix(np.array([[gamma, 0.0], [1.0 - gamma, 1.0]]))
    mu = NonidealityMatrix(np.array([[1.0 - gamma, 0.0], [gamma, 1.0]]))

    pvm_theta = polarization_pvm(whichway.config.theta, policy=policy)
    pvm_prime = polarization_pvm(whichway.config.theta_prime, policy=policy)
    for state in _probe_states():
        measured_t, measured_r = measured_marginals(whichway, state, policy=policy)
        ideal_t = born_probabilities(state, pvm_theta, policy=policy).probs
        ideal_r = born_probabilities(state, pvm_prime, policy=policy).probs
        dev_lam = float(np.max(np.abs(measured_t - lam.apply(ideal_t))))
        dev_mu = float(np.max(np.abs(measured_r - mu.apply(ideal_r))))
        if dev_lam > policy.atol_algebra or dev_mu > policy.atol_algebra:
            raise InvariantViolationError(
                f"marginal reconstruction failed: lambda deviation {dev_lam:.3e}, "
                f"mu deviation {dev_mu:.3e}"
            )
    return lam, mu


def certainty_check(
    whichway: BivariateWhichWay,
    state: StateDescriptor,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Probability that D' stays silent (outcomes "+-" and "--").

    Equals 1 exactly when gamma = 1: with the reflected branch dead, the D'
    record is deterministically "-" for every input state.
    """
    p = joint_distribution(whichway, state, policy=policy).as_dict()
    return p["+-"] + p["--"]
