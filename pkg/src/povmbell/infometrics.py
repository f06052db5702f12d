"""Information-theoretic quality measures for nonideal joint measurements.

The average row entropy of a nonideality matrix quantifies how much a
measured marginal smears the ideal sharp measurement it approximates (0 for
a faithful measurement, ln N for a completely uninformative one). For a
which-way measurement the two row entropies cannot both be small: their sum
is bounded below by the Martens complementarity bound, which depends only on
the overlap of the two ideal measurements. The Heisenberg preparation
relation bounds products of standard deviations and is logically independent
of that measurement-quality tradeoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvariantViolationError
from .measurement import born_probabilities, polarization_pvm
from .qcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    PolarizationAngle,
    StateDescriptor,
    as_angle,
    as_matrix,
    expectation,
    hermiticity_defect,
    matmul,
)
from .whichway import BivariateWhichWay, NonidealityMatrix, marginals_and_nonideality

__all__ = [
    "MartensReport",
    "HeisenbergCheck",
    "row_entropy",
    "martens_bound",
    "martens_check",
    "heisenberg_check",
]


def row_entropy(
    matrix: NonidealityMatrix | object,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Average row entropy of a column-stochastic matrix, in nats.

    J = -(1/N) * sum_{m,k} L[m,k] * ln(L[m,k] / r_m)  with r_m the m-th row
    sum, N the number of ideal outcomes (columns), and 0 ln 0 = 0. J is 0
    exactly when every row has at most one nonzero entry (the measured
    marginal reproduces the ideal distribution up to relabeling) and reaches
    ln N when all columns are identical.
    """
    if not isinstance(matrix, NonidealityMatrix):
        matrix = NonidealityMatrix(matrix)
    entries = matrix.entries
    n_ideal = matrix.n_ideal
    total = 0.0
    for row in entries:
        row_sum = float(row.sum())
        for value in row:
            v = float(value)
            if v > 0.0:
                total += v * math.log(v / row_sum)
    result = -total / n_ideal + 0.0  # never hand back -0.0
    upper = math.log(n_ideal)
    if result < 0.0:
        if result < -policy.atol_positivity:
            raise InvariantViolationError(f"row entropy came out negative: {result!r}")
        result = 0.0
    if result > upper:
        if result > upper + policy.atol_positivity:
            raise InvariantViolationError(
                f"row entropy {result!r} exceeds ln(N) = {upper!r}"
            )
        result = upper
    return result


def martens_bound(
    theta: float | PolarizationAngle,
    theta_prime: float | PolarizationAngle,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Lower bound on the summed row entropies of a joint measurement.

    Computed as -ln of the largest trace overlap between effects of the two
    ideal polarization measurements. For axes separated by delta this equals
    -ln(max(cos^2 delta, sin^2 delta)): zero for parallel or perpendicular
    axes, maximal (ln 2) at 45 degrees where the measurements are mutually
    unbiased.
    """
    pvm_a = polarization_pvm(as_angle(theta), policy=policy)
    pvm_b = polarization_pvm(as_angle(theta_prime), policy=policy)
    overlap = max(
        float(np.real(np.trace(ea.matrix @ eb.matrix)))
        for ea in pvm_a.effects
        for eb in pvm_b.effects
    )
    if overlap > 1.0 + policy.atol_positivity:
        raise InvariantViolationError(f"effect overlap {overlap!r} exceeds 1")
    overlap = min(overlap, 1.0)
    if overlap <= 0.0:
        raise InvariantViolationError(f"maximal effect overlap {overlap!r} is not positive")
    return -math.log(overlap) + 0.0


@dataclass(frozen=True)
class MartensReport:
    """Entropic tradeoff of one which-way measurement against its lower bound."""

    j_lambda: float
    j_mu: float
    bound: float
    slack: float
    satisfied: bool


def martens_check(
    whichway: BivariateWhichWay,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> MartensReport:
    """Evaluate j_lambda + j_mu >= bound for one which-way configuration."""
    lam, mu = marginals_and_nonideality(whichway, policy=policy)
    j_lambda = row_entropy(lam, policy=policy)
    j_mu = row_entropy(mu, policy=policy)
    bound = martens_bound(
        whichway.config.theta, whichway.config.theta_prime, policy=policy
    )
    slack = j_lambda + j_mu - bound
    return MartensReport(
        j_lambda=j_lambda,
        j_mu=j_mu,
        bound=bound,
        slack=slack,
        satisfied=slack >= -policy.atol_positivity,
    )


class HeisenbergCheck(NamedTuple):
    lhs: float
    rhs: float
    satisfied: bool


def heisenberg_check(
    state: StateDescriptor,
    op_a: object,
    op_b: object,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> HeisenbergCheck:
    """Preparation uncertainty: std(A) * std(B) >= |<[A, B]>| / 2.

    Both operators must be Hermitian. Variances are clamped at zero before
    the square root; eigenstates make <A^2> - <A>^2 a difference of nearly
    equal doubles that can round slightly negative.
    """
    mat_a = as_matrix(op_a)
    mat_b = as_matrix(op_b)
    for name, mat in (("first", mat_a), ("second", mat_b)):
        defect = hermiticity_defect(mat)
        if defect > policy.atol_algebra:
            raise DomainError(
                f"{name} operator is not Hermitian (max deviation {defect:.3e})"
            )

    def std(mat: np.ndarray) -> float:
        mean = expectation(state, mat).real
        mean_sq = expectation(state, matmul(mat, mat)).real
        return math.sqrt(max(mean_sq - mean * mean, 0.0))

    commutator = matmul(mat_a, mat_b) - matmul(mat_b, mat_a)
    lhs = std(mat_a) * std(mat_b)
    rhs = 0.5 * abs(expectation(state, commutator))
    return HeisenbergCheck(lhs=lhs, rhs=rhs, satisfied=lhs >= rhs - policy.atol_positivity)
