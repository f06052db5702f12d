"""Generalized two-photon correlation experiments and CHSH statistics.

Each arm of a photon pair runs its own which-way measurement, so a single
run of the joint experiment reads out four detectors at once: D1 and D1' on
arm 1 (analyzers along theta1 and theta1'), D2 and D2' on arm 2. The joint
POVM is the tensor product of the arm POVMs, with 16 outcome labels
"m1 n1,m2 n2" (arm 1 first). Encoding a detector's record as +1 for a click
and -1 for silence gives four pairwise correlations, one per (arm-1, arm-2)
detector pair, all estimated from the same quadrivariate distribution.

Two CHSH-style statistics are distinguished deliberately:

* `chsh_single_run` combines the four correlations of ONE joint measurement.
  Its value is bounded by 2 as a matter of arithmetic, for every state and
  configuration: the four detector signs exist jointly in each run, and
  s1*(s2 - s2') + s1'*(s2 + s2') is +-2 pointwise.
* `chsh_aspect` pools correlations from FOUR runs at the extreme beam
  splitter settings (each arm fully transmitting or fully reflecting), one
  detector pair per run. Nothing bounds that combination by 2, and entangled
  states push it to 2*sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ShapeMismatchError
from .measurement import OutcomeDistribution, Povm, born_probabilities, validate_povm
from .qcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    PolarizationAngle,
    StateDescriptor,
    kron,
)
from .whichway import WW_LABELS, WhichWayConfig, build_whichway

__all__ = [
    "QUAD_LABELS",
    "CHSH_PAIRS",
    "BellConfig",
    "QuadrivariateBell",
    "ChshReport",
    "build_bell",
    "quad_distribution",
    "correlation_from_distribution",
    "detector_correlation",
    "chsh_report_from_distribution",
    "chsh_single_run",
    "chsh_aspect",
    "singlet_state",
]

QUAD_LABELS = tuple(f"{m1n1},{m2n2}" for m1n1 in WW_LABELS for m2n2 in WW_LABELS)

# position of each detector's +/- character inside a "m1n1,m2n2" label
_DETECTOR_CHAR = {"D1": 0, "D1'": 1, "D2": 3, "D2'": 4}
_ARM1_DETECTORS = ("D1", "D1'")
_ARM2_DETECTORS = ("D2", "D2'")

CHSH_PAIRS = (("D1", "D2"), ("D1", "D2'"), ("D1'", "D2"), ("D1'", "D2'"))


@dataclass(frozen=True)
class BellConfig:
    """Two which-way arm configurations and a shared two-photon state."""

    arm1: WhichWayConfig
    arm2: WhichWayConfig
    state: StateDescriptor

    def __post_init__(self) -> None:
        if self.state.dim != 4:
            raise ShapeMismatchError(
                f"two-photon state must have dimension 4, got {self.state.dim}"
            )


@dataclass(frozen=True)
class QuadrivariateBell:
    """A Bell configuration together with its validated 16-outcome POVM."""

    config: BellConfig
    povm: Povm


def build_bell(
    config: BellConfig,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> QuadrivariateBell:
    """Tensor the two arm POVMs into one 16-effect POVM and validate it."""
    arm1 = build_whichway(config.arm1, policy=policy)
    arm2 = build_whichway(config.arm2, policy=policy)
    effects = [
        (kron(e1.matrix, e2.matrix), f"{e1.label},{e2.label}")
        for e1 in arm1.povm.effects
        for e2 in arm2.povm.effects
    ]
    return QuadrivariateBell(config=config, povm=validate_povm(effects, policy=policy))


def quad_distribution(
    bell: QuadrivariateBell,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> OutcomeDistribution:
    """Joint 16-outcome probabilities of the configured state."""
    return born_probabilities(bell.config.state, bell.povm, policy=policy)


def _validate_pair(pair: tuple[str, str]) -> tuple[int, int]:
    if len(pair) != 2 or pair[0] not in _ARM1_DETECTORS or pair[1] not in _ARM2_DETECTORS:
        raise DomainError(
            f"detector pair must combine one of {_ARM1_DETECTORS} with one of "
            f"{_ARM2_DETECTORS}, got {pair!r}"
        )
    return _DETECTOR_CHAR[pair[0]], _DETECTOR_CHAR[pair[1]]


def correlation_from_distribution(
    dist: OutcomeDistribution,
    pair: tuple[str, str],
) -> float:
    """Expected product of two detectors' +-1 click signs under `dist`."""
    pos_a, pos_b = _validate_pair(pair)
    if set(dist.labels) != set(QUAD_LABELS):
        raise DomainError("distribution does not carry quadrivariate outcome labels")
    total = 0.0
    for label, p in zip(dist.labels, dist.probs):
        sign_a = 1.0 if label[pos_a] == "+" else -1.0
        sign_b = 1.0 if label[pos_b] == "+" else -1.0
        total += float(p) * sign_a * sign_b
    return total


def detector_correlation(
    bell: QuadrivariateBell,
    pair: tuple[str, str],
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    return correlation_from_distribution(quad_distribution(bell, policy=policy), pair)


@dataclass(frozen=True)
class ChshReport:
    """Four detector correlations and their CHSH combination."""

    correlations: dict[str, float]
    s_value: float
    violates: bool
    s_symmetric_max: float


def _combine(values: list[float], *, policy: NumericPolicy) -> ChshReport:
    # canonical combination puts the minus on the (D1, D2') term
    s_value = values[0] - values[1] + values[2] + values[3]
    s_symmetric_max = 0.0
    for minus_at in range(4):
        signed = sum(-v if i == minus_at else v for i, v in enumerate(values))
        s_symmetric_max = max(s_symmetric_max, abs(signed))
    correlations = {f"{a},{b}": v for (a, b), v in zip(CHSH_PAIRS, values)}
    return ChshReport(
        correlations=correlations,
        s_value=s_value,
        violates=abs(s_value) > 2.0 + policy.atol_positivity,
        s_symmetric_max=s_symmetric_max,
    )


def chsh_report_from_distribution(
    dist: OutcomeDistribution,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ChshReport:
    """CHSH statistics of one quadrivariate distribution (single-run form)."""
    values = [correlation_from_distribution(dist, pair) for pair in CHSH_PAIRS]
    return _combine(values, policy=policy)


def chsh_single_run(
    bell: QuadrivariateBell,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ChshReport:
    """CHSH combination of the four correlations of one joint measurement.

    |s_value| <= 2 for every configuration and state; see the module
    docstring for why. `s_symmetric_max` additionally maximizes over the
    eight sign-symmetric CHSH forms, and obeys the same bound here.
    """
    return chsh_report_from_distribution(quad_distribution(bell, policy=policy), policy=policy)


def chsh_aspect(
    state: StateDescriptor,
    theta1: float | PolarizationAngle,
    theta1_prime: float | PolarizationAngle,
    theta2: float | PolarizationAngle,
    theta2_prime: float | PolarizationAngle,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ChshReport:
    """CHSH combination pooled from four extreme-transmissivity runs.

    Corner (gamma1, gamma2) = (1, 1) makes D1 and D2 the only live detectors
    and contributes E(D1, D2); the other corners contribute the remaining
    pairs. Each correlation comes from a DIFFERENT measurement context, so
    the single-run bound of 2 does not apply; a singlet state at analyzer
    angles (0, 45, 22.5, 67.5 degrees) reaches |s_value| = 2*sqrt(2).
    """
    corners = (
        (1.0, 1.0, ("D1", "D2")),
        (1.0, 0.0, ("D1", "D2'")),
        (0.0, 1.0, ("D1'", "D2")),
        (0.0, 0.0, ("D1'", "D2'")),
    )
    values = []
    for gamma1, gamma2, pair in corners:
        config = BellConfig(
            arm1=WhichWayConfig(gamma1, theta1, theta1_prime),
            arm2=WhichWayConfig(gamma2, theta2, theta2_prime),
            state=state,
        )
        values.append(detector_correlation(build_bell(config, policy=policy), pair, policy=policy))
    return _combine(values, policy=policy)


def singlet_state() -> StateDescriptor:
    """Antisymmetric two-photon polarization state (|01> - |10>)/sqrt(2)."""
    amp = 1.0 / math.sqrt(2.0)
    return StateDescriptor.pure([0.0, amp, -amp, 0.0])
