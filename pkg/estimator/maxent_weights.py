"""
Maximum-entropy weights for the weighted Nadaraya-Watson estimator.

Among all probability vectors p with sum(p_i * a_i) = 0, where
a_i = (Y_i - y) * K_h(Y_i - y), the entropy maximiser has the exponential form
p_i = exp(-1 + k + lambda * a_i). lambda is the root of the strictly increasing
function g(lambda) = sum(a_i * exp(lambda * a_i)) and k normalises the weights.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple
import numpy as np
from scipy.special import logsumexp, softmax
from config import (SOLVER_RESIDUAL_TOL, SOLVER_BRACKET_TOL,
                    SOLVER_MAX_ITER, SOLVED_RESIDUAL_LIMIT)
from .errors import EmptyInput, LengthMismatch
from .estimator_utils import log
from .kernel import KernelSpec, kernel_scaled
from .series import LaggedSample

ORIGIN = 'maxent-weights'


class WeightStatus(str, Enum):
    SOLVED = "solved"
    DEGENERATE_ALL_ZERO = "degenerate_all_zero"
    NO_INTERIOR_ROOT = "no_interior_root"


@dataclass(frozen=True, eq=False)
class ConstraintVector:
    a: np.ndarray # (Y_i - y) * K_h(Y_i - y)
    y: float
    kernel_mass: Optional[np.ndarray] = None # K_h(Y_i - y); None when built from raw constraint values

    @classmethod
    def from_values(cls, a, y: float = 0.0) -> "ConstraintVector":
        return cls(np.asarray(a, dtype=float).reshape(-1), float(y))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Boolean mask of indices with positive kernel mass."""
        if self.kernel_mass is None:
            return np.ones(self.n, dtype=bool)
        return self.kernel_mass > 0

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.support | (self.a != 0)))

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.a)))) if self.n else 1.0


@dataclass(frozen=True, eq=False)
class MaxEntWeights:
    p: np.ndarray
    lam: float
    k: float
    residual: float
    status: WeightStatus
    iterations: int = 0

    @property
    def entropy(self) -> float:
        positive = self.p[self.p > 0]
        return float(-np.sum(positive * np.log(positive)))


@dataclass(frozen=True)
class ConstraintReport:
    min_p: float
    sum_residual: float # |sum(p) - 1|
    constraint_residual: float # |sum(p_i * a_i)|


def build_constraint_vector(samples: LaggedSample, y: float, spec: KernelSpec) -> ConstraintVector:
    """
    Build a_i = (Y_i - y) * K_h(Y_i - y) for every regressor, order preserved.

    raises:
        EmptyInput - If the sample has no pairs
    """
    if samples.n == 0:
        raise EmptyInput("cannot build constraints from an empty sample")

    d = samples.Y - float(y)
    mass = np.asarray(kernel_scaled(spec, d), dtype=float).reshape(-1)
    return ConstraintVector(a=d * mass, y=float(y), kernel_mass=mass)


def _uniform_over(mask: np.ndarray) -> np.ndarray:
    if not mask.any():
        mask = np.ones_like(mask)
    return mask / np.count_nonzero(mask)


def _moments(lam: float, a: np.ndarray) -> Tuple[float, float]:
    """
    Return (g, g') divided by sum(exp(lambda * a)); signs and the Newton ratio are unchanged.
    """
    p = softmax(lam * a)
    return float(p @ a), float(p @ (a * a))


def _bracket(a: np.ndarray, tol: float) -> Tuple[float, float]:
    # The normalised g tends to min(a) < 0 and max(a) > 0 at -inf and +inf
    width = 1.0 / float(np.max(np.abs(a)))
    lo, hi = -width, width
    while _moments(lo, a)[0] > tol:
        lo *= 2.0
    while _moments(hi, a)[0] < -tol:
        hi *= 2.0
    return lo, hi


def solve_lambda(cv: ConstraintVector) -> MaxEntWeights:
    """
    Solve the maximum-entropy weight problem for a constraint vector.

    Safeguarded Newton on g with an expanding bisection bracket. Weights are computed
    in the softmax (log-sum-exp) form so large |lambda * a_i| cannot overflow.

    params:
        cv - The constraint vector

    returns:
        MaxEntWeights with status SOLVED, DEGENERATE_ALL_ZERO (all a_i = 0) or
        NO_INTERIOR_ROOT (all nonzero a_i share a sign, uniform fallback over the kernel support)

    raises:
        EmptyInput - If the constraint vector is empty
    """
    if cv.n == 0:
        raise EmptyInput("cannot solve for weights of an empty constraint vector")

    a = cv.a
    nonzero = a != 0

    if not nonzero.any():
        p = _uniform_over(cv.support)
        return MaxEntWeights(p=p, lam=0.0, k=1.0 + float(np.log(p.max())),
                             residual=0.0, status=WeightStatus.DEGENERATE_ALL_ZERO)

    if (a[nonzero] > 0).all() or (a[nonzero] < 0).all():
        p = _uniform_over(cv.support)
        residual = abs(float(p @ a))
        log(type='warning',
            message=f'no interior root at y={cv.y}: all nonzero constraint values share one sign, using uniform weights over {int(np.count_nonzero(p))} points',
            origin_name=ORIGIN)
        return MaxEntWeights(p=p, lam=0.0, k=1.0 + float(np.log(p.max())),
                             residual=residual, status=WeightStatus.NO_INTERIOR_ROOT)

    tol = SOLVER_RESIDUAL_TOL * cv.scale
    lo, hi = _bracket(a, tol)
    lam = 0.0
    iterations = 0
    for iterations in range(1, SOLVER_MAX_ITER + 1):
        g, dg = _moments(lam, a)
        if abs(g) <= tol:
            break
        # Shrink the bracket around the root
        if g < 0:
            lo = lam
        else:
            hi = lam
        if hi - lo <= SOLVER_BRACKET_TOL * (1.0 + abs(lam)):
            break
        candidate = lam - g / dg if dg > 0 else 0.5 * (lo + hi)
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        lam = candidate

    scaled = lam * a
    p = softmax(scaled)
    k = 1.0 - float(logsumexp(scaled))
    residual = abs(float(p @ a))
    if residual > SOLVED_RESIDUAL_LIMIT * cv.scale:
        log(type='warning',
            message=f'weight solver stopped at y={cv.y} with residual {residual:.3e} after {iterations} iterations',
            origin_name=ORIGIN)

    return MaxEntWeights(p=p, lam=float(lam), k=k, residual=residual,
                         status=WeightStatus.SOLVED, iterations=iterations)


def verify_constraints(w: MaxEntWeights, cv: ConstraintVector) -> ConstraintReport:
    """
    Restate the three weight constraints as residuals.

    raises:
        LengthMismatch - If the weights and the constraint vector differ in length
    """
    if w.p.shape[0] != cv.n:
        raise LengthMismatch(f"{w.p.shape[0]} weights for {cv.n} constraint values")

    return ConstraintReport(min_p=float(np.min(w.p)),
                            sum_residual=abs(float(np.sum(w.p)) - 1.0),
                            constraint_residual=abs(float(w.p @ cv.a)))
