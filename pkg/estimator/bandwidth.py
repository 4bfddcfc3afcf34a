"""
Bandwidth selection for the conditional quantile estimator.

The asymptotic mean square error of the quantile estimate is

    MSE(h) = [h^2 k2 F'' / (2 f)]^2 + v0 tau (1 - tau) / (n h f^2 g)

with F'' the second derivative of the conditional CDF at the quantile,
f the conditional density at the quantile and g the marginal density of the
regressor at the conditioning point. Its minimiser is the plug-in bandwidth.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Optional, Tuple
import numpy as np
from scipy.stats import iqr
from config import (ROT_CONSTANT, IQR_TO_SD, FD_STEP_FACTOR, FD_SMOOTHING_POINTS,
                    CV_VALIDATION_FRACTION, CV_MIN_POINTS, ROT_MIN_POINTS, CV_GRID_FACTORS,
                    INTERVAL_ROT_FACTOR, MONTECARLO_WORKERS, DEFAULT_KERNEL)
from .cond_dist import fit_cdf, cdf_eval
from .errors import (DegenerateScale, EmptyGrid, InvalidBandwidth, InvalidComponents,
                     NoLocalData, TooFewPoints, ZeroCurvature)
from .estimator_utils import log
from .kernel import KernelFamily, KernelSpec, kernel_moments, kernel_scaled
from .quantile import _check_tau, pinball_loss, quantile
from .series import LaggedSample

ORIGIN = 'bandwidth'


class BandwidthMethod(str, Enum):
    PLUGIN = "plugin"
    RULE_OF_THUMB = "rot"
    CROSS_VALIDATION = "cv"


@dataclass(frozen=True)
class PlugInComponents:
    k2: float
    v0: float
    Fpp: float # second derivative of F(. | y) at the quantile
    f_qy: float # conditional density at the quantile
    g_q: float # marginal density of the regressor at the conditioning point

    def as_dict(self) -> Dict[str, float]:
        return {"k2": self.k2, "v0": self.v0, "Fpp": self.Fpp, "f_qy": self.f_qy, "g_q": self.g_q}


@dataclass(frozen=True)
class BandwidthPlan:
    method: BandwidthMethod
    h: float
    components: Optional[PlugInComponents] = None
    losses: Dict[float, float] = field(default_factory=dict) # cross-validation loss per grid point

    def as_dict(self) -> Dict:
        out = {"method": self.method.value, "h": self.h}
        if self.components is not None:
            out["components"] = self.components.as_dict()
        if self.losses:
            out["losses"] = [{"h": h, "loss": loss} for h, loss in sorted(self.losses.items())]
        return out


def robust_scale(values: np.ndarray) -> float:
    """
    min(sample std, IQR / 1.349); the std alone when the IQR vanishes.
    """
    values = np.asarray(values, dtype=float)
    sd = float(np.std(values, ddof=1)) if values.shape[0] > 1 else 0.0
    spread = float(iqr(values)) / IQR_TO_SD
    return min(sd, spread) if spread > 0 else sd


def _validate_components(h: float, n: int, tau: float, comps: PlugInComponents) -> None:
    values = np.array([comps.k2, comps.v0, comps.Fpp, comps.f_qy, comps.g_q], dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidComponents(f"non-finite plug-in components {comps}")
    if comps.k2 <= 0 or comps.v0 <= 0 or comps.f_qy <= 0 or comps.g_q <= 0:
        raise InvalidComponents(f"k2, v0, f_qy and g_q must be positive, got {comps}")
    if not np.isfinite(h) or h <= 0:
        raise InvalidComponents(f"bandwidth must be positive, got {h}")
    if n < 1:
        raise InvalidComponents(f"sample size must be at least 1, got {n}")
    _check_tau(tau)


def mse_decomposition(h: float, n: int, tau: float, comps: PlugInComponents) -> Tuple[float, float]:
    """
    Return (squared bias, variance) of the quantile estimate at bandwidth h.

    raises:
        InvalidComponents - If the components or arguments are out of range
    """
    _validate_components(h, n, tau, comps)
    bias = h * h * comps.k2 * comps.Fpp / (2.0 * comps.f_qy)
    variance = comps.v0 * tau * (1.0 - tau) / (n * h * comps.f_qy ** 2 * comps.g_q)
    return bias * bias, variance


def mse_quantile(h: float, n: int, tau: float, comps: PlugInComponents) -> float:
    squared_bias, variance = mse_decomposition(h, n, tau, comps)
    return squared_bias + variance


def h_opt_plugin(n: int, tau: float, comps: PlugInComponents) -> BandwidthPlan:
    """
    Return the minimiser of mse_quantile over h:

        h = [v0 tau (1 - tau) / (g (k2 F'')^2)]^(1/5) n^(-1/5)

    raises:
        ZeroCurvature - If F'' = 0 (no interior minimum; use another method)
        InvalidComponents - If any other component is out of range
    """
    if comps.Fpp == 0:
        raise ZeroCurvature("zero curvature leaves the mean square error without an interior minimum")
    _validate_components(1.0, n, tau, comps)

    h = (comps.v0 * tau * (1.0 - tau) / (comps.g_q * (comps.k2 * comps.Fpp) ** 2)) ** 0.2 * n ** -0.2
    return BandwidthPlan(method=BandwidthMethod.PLUGIN, h=float(h), components=comps)


def h_rule_of_thumb(samples: LaggedSample) -> BandwidthPlan:
    """
    h = 1.06 * s * n^(-1/5), s = min(std(Y), IQR(Y) / 1.349).

    raises:
        TooFewPoints - If fewer than 10 pairs are available
        DegenerateScale - If the regressors have no spread
    """
    if samples.n < ROT_MIN_POINTS:
        raise TooFewPoints(f"rule of thumb needs at least {ROT_MIN_POINTS} pairs, got {samples.n}")

    scale = robust_scale(samples.Y)
    if not scale > 0:
        raise DegenerateScale("regressors have zero spread, no positive bandwidth exists")

    return BandwidthPlan(method=BandwidthMethod.RULE_OF_THUMB, h=ROT_CONSTANT * scale * samples.n ** -0.2)


def _smoothed_cdf(f, z: float, window: float) -> float:
    offsets = np.linspace(-0.5 * window, 0.5 * window, FD_SMOOTHING_POINTS)
    return float(np.mean(cdf_eval(f, z + offsets)))


def estimate_plugin_components(samples: LaggedSample, y: float, tau: float, pilot_h: float,
                               family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                               step_factor: float = FD_STEP_FACTOR) -> PlugInComponents:
    """
    Estimate the unknown quantities of the plug-in bandwidth from a pilot fit.

    F'' and f are the second and first central differences in z of the
    window-smoothed pilot CDF around the pilot quantile; g is a kernel density
    estimate of the regressor at y.

    raises:
        NoLocalData - Propagated from the pilot fits
    """
    tau = _check_tau(tau)
    spec = KernelSpec(family, pilot_h)
    moments = kernel_moments(spec)

    pilot = fit_cdf(samples, y, spec)
    q = quantile(pilot, tau)

    delta = step_factor * pilot_h * robust_scale(samples.Z)
    if not delta > 0:
        delta = step_factor * pilot_h
    above = _smoothed_cdf(pilot, q + delta, delta)
    centre = _smoothed_cdf(pilot, q, delta)
    below = _smoothed_cdf(pilot, q - delta, delta)
    f_qy = (above - below) / (2.0 * delta)
    Fpp = (above - 2.0 * centre + below) / (delta * delta)

    g_q = float(np.mean(kernel_scaled(spec, samples.Y - y)))

    log(type='debug',
        message=f'plug-in components at y={y}, tau={tau}: q={q}, Fpp={Fpp}, f={f_qy}, g={g_q}',
        origin_name=ORIGIN)
    return PlugInComponents(k2=moments.k2, v0=moments.v0, Fpp=float(Fpp), f_qy=float(f_qy), g_q=g_q)


def h_plugin_from_data(samples: LaggedSample, y: float, tau: float,
                       family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL)) -> BandwidthPlan:
    """Plug-in bandwidth with a rule-of-thumb pilot."""
    pilot_h = h_rule_of_thumb(samples).h
    comps = estimate_plugin_components(samples, y, tau, pilot_h, family=family)
    return h_opt_plugin(samples.n, tau, comps)


def _rolling_origin_loss(samples: LaggedSample, tau: float, h: float, horizon: int,
                         family: KernelFamily, validation_fraction: float) -> float:
    spec = KernelSpec(family, h)
    start = samples.n - max(1, int(round(validation_fraction * samples.n)))
    total = 0.0
    for t in range(start, samples.n):
        # Pair i = (z_i, z_{i+m}) is known at time t only when i + m <= t
        training = samples.head(t - horizon + 1)
        try:
            f = fit_cdf(training, samples.Y[t], spec)
        except NoLocalData:
            return float('inf')
        total += pinball_loss(tau, samples.Z[t], quantile(f, tau))
    return float(total)


def h_cross_validate(samples: LaggedSample, tau: float, grid: Iterable[float], horizon: int = 1,
                     family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                     validation_fraction: float = CV_VALIDATION_FRACTION,
                     workers: int = MONTECARLO_WORKERS) -> BandwidthPlan:
    """
    Rolling-origin cross-validation of the pinball loss over a bandwidth grid.

    Each validation pair is predicted from the pairs observable before it. A bandwidth
    leaving any validation point without local data scores infinity. Ties go to the
    smaller bandwidth, so the choice does not depend on grid order or scheduling.

    raises:
        EmptyGrid - If the grid is empty
        InvalidBandwidth - If a grid value is not positive
        TooFewPoints - If fewer than 30 pairs are available
        NoLocalData - If every bandwidth fails
    """
    tau = _check_tau(tau)
    candidates = sorted(set(float(h) for h in grid))
    if not candidates:
        raise EmptyGrid("bandwidth grid is empty")
    for h in candidates:
        if not np.isfinite(h) or h <= 0:
            raise InvalidBandwidth(h)
    if samples.n < CV_MIN_POINTS:
        raise TooFewPoints(f"cross-validation needs at least {CV_MIN_POINTS} pairs, got {samples.n}")

    def evaluate(h: float) -> float:
        return _rolling_origin_loss(samples, tau, h, horizon, family, validation_fraction)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        losses = dict(zip(candidates, pool.map(evaluate, candidates)))

    best_h = min(candidates, key=lambda h: (losses[h], h))
    if not np.isfinite(losses[best_h]):
        raise NoLocalData(float(samples.Y[-1]), best_h)

    log(type='info',
        message=f'cross-validation selected h={best_h} among {len(candidates)} candidates',
        origin_name=ORIGIN)
    return BandwidthPlan(method=BandwidthMethod.CROSS_VALIDATION, h=best_h, losses=losses)


def select_bandwidth(samples: LaggedSample, y: float, method: BandwidthMethod,
                     family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                     tau: float = 0.5, horizon: int = 1) -> float:
    """
    Bandwidth for a fit at y targeting the tau quantile. Cross-validation runs over
    the rule of thumb times CV_GRID_FACTORS, validating at the given horizon.
    """
    if method is BandwidthMethod.PLUGIN:
        return h_plugin_from_data(samples, y, tau, family=family).h
    if method is BandwidthMethod.CROSS_VALIDATION:
        grid = h_rule_of_thumb(samples).h * np.array(CV_GRID_FACTORS)
        return h_cross_validate(samples, tau, grid, horizon=horizon, family=family).h
    return h_rule_of_thumb(samples).h


def interval_bandwidth(samples: LaggedSample, y: float, alpha: float,
                       method: BandwidthMethod = BandwidthMethod.RULE_OF_THUMB,
                       family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                       horizon: int = 1) -> float:
    """
    Bandwidth for a 1 - alpha prediction interval at y.

    Plug-in and cross-validation target the upper endpoint tau = 1 - alpha / 2. The rule
    of thumb is scaled by INTERVAL_ROT_FACTOR; for a Gaussian AR(1) the mean square error
    of the 0.975 quantile is smallest near twice the rule of thumb.
    """
    if method is BandwidthMethod.RULE_OF_THUMB:
        return INTERVAL_ROT_FACTOR * h_rule_of_thumb(samples).h
    return select_bandwidth(samples, y, method, family, tau=1.0 - alpha / 2.0, horizon=horizon)
