"""
Conditional quantiles, pinball loss and prediction intervals from a fitted conditional CDF.
"""
from dataclasses import dataclass
from typing import Iterable, Union
import numpy as np
from .cond_dist import ConditionalCDF
from .errors import EmptyGrid, InvalidAlpha, InvalidTau

ArrayLike = Union[float, np.ndarray]


def _check_tau(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise InvalidTau(tau)
    return float(tau)


@dataclass(frozen=True)
class QuantileRequest:
    tau: float
    f: ConditionalCDF

    def __post_init__(self):
        _check_tau(self.tau)


@dataclass(frozen=True)
class PredictionInterval:
    lower: float
    upper: float
    level: float
    alpha: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return bool(self.lower <= value <= self.upper)


def quantile(f: ConditionalCDF, tau: float) -> float:
    """
    Return inf{z : F(z) >= tau}, the first atom whose cumulative weight reaches tau.

    The cumulative weights are inverted directly; evaluating F exactly at an atom
    excludes that atom's mass under the strict indicator.

    raises:
        InvalidTau - If tau is outside (0, 1)
    """
    request = QuantileRequest(tau, f)
    index = int(np.searchsorted(f.cum_w, request.tau, side='left'))
    return float(f.sorted_z[min(index, f.sorted_z.shape[0] - 1)])


def point_forecast(f: ConditionalCDF) -> float:
    """Conditional median."""
    return quantile(f, 0.5)


def prediction_interval(f: ConditionalCDF, alpha: float) -> PredictionInterval:
    """
    Return [q(alpha / 2), q(1 - alpha / 2)] at nominal level 1 - alpha.

    raises:
        InvalidAlpha - If alpha is outside (0, 1)
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(alpha)

    return PredictionInterval(lower=quantile(f, alpha / 2.0),
                              upper=quantile(f, 1.0 - alpha / 2.0),
                              level=1.0 - alpha,
                              alpha=float(alpha))


def pinball_loss(tau: float, z: ArrayLike, g: ArrayLike) -> ArrayLike:
    """
    L(z, g) = tau * (z - g) * I(z > g) + (1 - tau) * (g - z) * I(g >= z)
    """
    tau = _check_tau(tau)
    diff = np.asarray(z, dtype=float) - np.asarray(g, dtype=float)
    loss = np.where(diff > 0, tau * diff, (tau - 1.0) * diff)
    return float(loss) if loss.ndim == 0 else loss


def argmin_check(f: ConditionalCDF, tau: float, candidates: Iterable[float]) -> float:
    """
    Return the candidate minimising the expected pinball loss under the fitted weights.
    Flat objectives resolve to the smallest minimiser.

    raises:
        EmptyGrid - If no candidates are given
    """
    grid = np.sort(np.asarray(list(candidates), dtype=float))
    if grid.size == 0:
        raise EmptyGrid("argmin_check needs at least one candidate")

    risk = pinball_loss(tau, f.sorted_z[None, :], grid[:, None]) @ f.atom_weights
    best = float(np.min(risk))
    return float(grid[np.argmax(risk <= best + 1e-12 * max(1.0, abs(best)))])
