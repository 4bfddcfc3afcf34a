"""
Weighted Nadaraya-Watson estimator of the conditional distribution function.

F(z | y) = sum(p_i * I(Z_i < z) * K_h(Y_i - y)) / sum(p_i * K_h(Y_i - y))

with p the maximum-entropy weights. The fit caches the normalised effective
weights as atoms so that evaluation is a binary search.
"""
from dataclasses import dataclass
from typing import Iterable, List, Tuple, Union
import numpy as np
from config import SOLVED_RESIDUAL_LIMIT, WIDEN_FACTOR, WIDEN_MAX_STEPS
from .errors import NoLocalData, TooShort, UnsortedGrid
from .estimator_utils import log
from .kernel import KernelSpec
from .maxent_weights import (MaxEntWeights, WeightStatus,
                             build_constraint_vector, solve_lambda)
from .series import LaggedSample, TimeSeries

ORIGIN = 'cond-dist'


@dataclass(frozen=True, eq=False)
class ConditionalCDF:
    y: float
    sorted_z: np.ndarray # unique atoms with positive effective weight
    cum_w: np.ndarray # cumulative normalised weight at each atom
    weights_meta: MaxEntWeights
    spec: KernelSpec
    effective_n: float

    @property
    def h(self) -> float:
        return self.spec.h

    @property
    def atom_weights(self) -> np.ndarray:
        return np.diff(self.cum_w, prepend=0.0)

    @property
    def status(self) -> WeightStatus:
        return self.weights_meta.status


def lag_embed(series: Union[TimeSeries, np.ndarray], m: int = 1) -> LaggedSample:
    """
    Build the pairs (Y_i, Z_i) = (z_i, z_{i+m}) from a series, order preserved.

    raises:
        TooShort - If fewer than two pairs can be formed
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    if m < 1:
        raise TooShort(f"horizon must be at least 1, got {m}")
    if values.shape[0] < m + 2:
        raise TooShort(f"series of length {values.shape[0]} yields fewer than 2 pairs at horizon {m}")

    return LaggedSample(values[:-m], values[m:])


def fit_cdf(samples: LaggedSample, y: float, spec: KernelSpec) -> ConditionalCDF:
    """
    Fit the conditional CDF of Z given Y = y.

    params:
        samples - The embedded pairs
        y - The conditioning point
        spec - Kernel family and bandwidth

    returns:
        The fitted ConditionalCDF

    raises:
        NoLocalData - If no regressor lies within the bandwidth of y
    """
    cv = build_constraint_vector(samples, y, spec)
    weights = solve_lambda(cv)

    effective = weights.p * cv.kernel_mass
    total = float(effective.sum())
    if not total > 0:
        raise NoLocalData(float(y), spec.h)
    effective = effective / total

    # Local linearity re-checked after the fit
    if weights.status is WeightStatus.SOLVED:
        drift = abs(float(weights.p @ cv.a))
        if drift > SOLVED_RESIDUAL_LIMIT * cv.scale:
            log(type='warning',
                message=f'local linearity residual {drift:.3e} at y={y} exceeds tolerance',
                origin_name=ORIGIN)

    # Merge tied responses into atoms, dropping points without weight
    keep = effective > 0
    atoms, inverse = np.unique(samples.Z[keep], return_inverse=True)
    mass = np.bincount(inverse, weights=effective[keep], minlength=atoms.shape[0])
    cum_w = np.cumsum(mass)
    cum_w = np.clip(cum_w / cum_w[-1], 0.0, 1.0)
    cum_w[-1] = 1.0

    atoms.setflags(write=False)
    cum_w.setflags(write=False)
    return ConditionalCDF(y=float(y), sorted_z=atoms, cum_w=cum_w, weights_meta=weights,
                          spec=spec, effective_n=1.0 / float(np.sum(effective ** 2)))


def fit_cdf_widening(samples: LaggedSample, y: float, spec: KernelSpec,
                     factor: float = WIDEN_FACTOR, max_steps: int = WIDEN_MAX_STEPS) -> ConditionalCDF:
    """
    Fit at y, multiplying the bandwidth by factor until some regressor carries kernel weight.
    The returned fit holds the bandwidth actually used (f.h > spec.h when it was widened).

    raises:
        NoLocalData - If the fit still has no local data after max_steps widenings
    """
    for step in range(max_steps + 1):
        try:
            f = fit_cdf(samples, y, spec)
        except NoLocalData:
            if step == max_steps:
                raise
            spec = KernelSpec(spec.family, spec.h * factor)
            continue
        if step:
            log(type='debug', message=f'bandwidth widened {step} times to {spec.h} at y={y}', origin_name=ORIGIN)
        return f


def fit_cdf_many(samples: LaggedSample, ys: Iterable[float], spec: KernelSpec) -> List[ConditionalCDF]:
    """Fit the conditional CDF at several conditioning points."""
    return [fit_cdf(samples, y, spec) for y in ys]


def cdf_eval(f: ConditionalCDF, z: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluate F(z | y) = total weight of atoms strictly below z.
    """
    below = np.searchsorted(f.sorted_z, z, side='left')
    values = np.concatenate(([0.0], f.cum_w))[below]
    return float(values) if np.ndim(values) == 0 else values


def cdf_curve(f: ConditionalCDF, zs: Iterable[float]) -> List[Tuple[float, float]]:
    """
    Evaluate the fitted CDF on a sorted grid, returning (z, F) pairs.

    raises:
        UnsortedGrid - If the grid is not nondecreasing
    """
    grid = np.asarray(list(zs), dtype=float)
    if grid.size == 0:
        return []
    if np.any(np.diff(grid) < 0):
        raise UnsortedGrid("evaluation grid must be sorted in nondecreasing order")

    values = np.asarray(cdf_eval(f, grid))
    return [(float(z), float(v)) for z, v in zip(grid, values)]
