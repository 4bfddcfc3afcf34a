"""
AR(1) generators and the Monte Carlo harness used to check interval coverage,
asymptotic normality of the conditional CDF estimate and consistency of the
conditional quantile estimate.

Replication r of an experiment seeded with s draws from SeedSequence(s, spawn_key=(..., r)),
so results do not depend on execution order or on the number of worker threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import numpy as np
from scipy.signal import lfilter
from scipy.stats import kstest, norm
from config import (DEFAULT_BURN_IN, MIN_BURN_IN, MONTECARLO_WORKERS, ROT_CONSTANT,
                    MAX_SKIPPED_SHARE, DEFAULT_KERNEL)
from .bandwidth import BandwidthMethod, interval_bandwidth
from .cond_dist import cdf_eval, fit_cdf, fit_cdf_widening, lag_embed
from .errors import EstimatorError, InvalidAlpha, InvalidSpec
from .estimator_utils import log
from .kernel import KernelFamily, KernelSpec, kernel_moments
from .quantile import _check_tau, prediction_interval, quantile
from .series import TimeSeries

ORIGIN = 'montecarlo'


class InnovationKind(str, Enum):
    GAUSSIAN = "gaussian"
    STUDENT_T = "student_t"


@dataclass(frozen=True)
class Innovation:
    kind: InnovationKind = InnovationKind.GAUSSIAN
    scale: float = 1.0 # standard deviation (Gaussian) or scale (Student t)
    df: Optional[float] = None

    @classmethod
    def gaussian(cls, sd: float = 1.0) -> "Innovation":
        return cls(InnovationKind.GAUSSIAN, sd)

    @classmethod
    def student_t(cls, df: float, scale: float = 1.0) -> "Innovation":
        return cls(InnovationKind.STUDENT_T, scale, df)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind is InnovationKind.GAUSSIAN:
            return rng.normal(0.0, self.scale, size)
        return self.scale * rng.standard_t(self.df, size)


@dataclass(frozen=True)
class Ar1Spec:
    phi: float = 0.76
    innovation: Innovation = field(default_factory=Innovation.gaussian)
    n: int = 500
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 0

    def __post_init__(self):
        if not abs(self.phi) < 1:
            raise InvalidSpec(f"|phi| must be below 1 for stationarity, got {self.phi}")
        if self.innovation.kind is InnovationKind.STUDENT_T and not (self.innovation.df or 0) > 0:
            raise InvalidSpec(f"Student t innovations need df > 0, got {self.innovation.df}")
        if not self.innovation.scale > 0:
            raise InvalidSpec(f"innovation scale must be positive, got {self.innovation.scale}")
        if self.burn_in < MIN_BURN_IN:
            raise InvalidSpec(f"burn_in must be at least {MIN_BURN_IN}, got {self.burn_in}")
        if self.n < 1:
            raise InvalidSpec(f"n must be positive, got {self.n}")
        if self.seed < 0:
            raise InvalidSpec(f"seed must be unsigned, got {self.seed}")

    @property
    def is_gaussian(self) -> bool:
        return self.innovation.kind is InnovationKind.GAUSSIAN

    def conditional_law(self, y: float) -> Tuple[float, float]:
        """Mean and sd of Z | Y = y for Gaussian innovations."""
        return self.phi * y, self.innovation.scale

    def stationary_sd(self) -> float:
        return self.innovation.scale / np.sqrt(1.0 - self.phi ** 2)


@dataclass(frozen=True)
class CoverageReport:
    replications: int
    nominal: float
    empirical_coverage: float
    mean_width: float
    std_error: float
    per_step_coverage: List[float]
    skipped: int # held-out steps whose fit failed
    hits: int
    trials: int
    widened: int = 0 # steps refitted with a widened bandwidth
    raw: List[Dict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.skipped <= MAX_SKIPPED_SHARE * (self.trials + self.skipped)

    def as_dict(self) -> Dict:
        return {"replications": self.replications, "nominal": self.nominal,
                "empirical_coverage": self.empirical_coverage, "mean_width": self.mean_width,
                "std_error": self.std_error, "per_step_coverage": self.per_step_coverage,
                "skipped": self.skipped, "widened": self.widened, "hits": self.hits, "trials": self.trials,
                "valid": self.valid}


@dataclass(frozen=True)
class NormalityReport:
    sample_count: int
    standardized_errors: np.ndarray
    mean: float
    variance: float
    ks_statistic: float
    h: float
    skipped: int = 0

    def as_dict(self) -> Dict:
        return {"sample_count": self.sample_count, "mean": self.mean, "variance": self.variance,
                "ks_statistic": self.ks_statistic, "h": self.h, "skipped": self.skipped}


@dataclass(frozen=True)
class ConsistencyReport:
    ns: List[int]
    errors: List[float] # RMSE of the quantile (or mean absolute CDF deviation) per n
    target: Optional[float]
    nonincreasing: bool
    skipped: int = 0

    def as_dict(self) -> Dict:
        return {"ns": self.ns, "errors": self.errors, "target": self.target,
                "nonincreasing": self.nonincreasing, "skipped": self.skipped}


def replication_seed(seed: int, *key: int) -> int:
    """Derive the seed of one replication; independent of scheduling."""
    return int(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)).generate_state(1)[0])


def simulate_ar1(spec: Ar1Spec) -> TimeSeries:
    """
    Simulate y_t = phi * y_{t-1} + e_t, discarding the first burn_in draws.
    Deterministic given spec.seed.
    """
    rng = np.random.default_rng(spec.seed)
    shocks = spec.innovation.draw(rng, spec.n + spec.burn_in)
    path = lfilter([1.0], [1.0, -spec.phi], shocks)
    return TimeSeries(path[spec.burn_in:], name=f"ar1(phi={spec.phi})")


def _run(replications: int, task: Callable[[int], Dict], workers: int) -> List[Dict]:
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(task, range(replications)))


def _default_h(spec: Ar1Spec, n: int) -> float:
    # Rule of thumb evaluated on the stationary law, fixed across replications
    return ROT_CONSTANT * spec.stationary_sd() * n ** -0.2


def coverage_experiment(spec: Ar1Spec, alpha: float, holdout: int, replications: int,
                        bw: BandwidthMethod = BandwidthMethod.RULE_OF_THUMB,
                        family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                        h: Optional[float] = None,
                        workers: int = MONTECARLO_WORKERS) -> CoverageReport:
    """
    Per replication simulate n + holdout points, then for each held-out step fit on the
    observations before it, condition on the previous observation and record whether the
    interval contains the realised value.

    A conditioning point without local data is refitted with a widened bandwidth and
    counted in 'widened'. Steps failing for any other reason are skipped and tallied.

    params:
        spec - The AR(1) design; spec.n is the training length
        alpha - Nominal miscoverage
        holdout - Number of held-out steps per replication
        replications - Number of independent replications
        bw - Bandwidth method used at every step (ignored when h is given)
        family - Kernel family
        h - Optional fixed bandwidth
        workers - Threads running replications

    returns:
        CoverageReport pooled over replications and steps
    """
    if holdout < 1 or replications < 1:
        raise InvalidSpec("holdout and replications must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(alpha)

    def one(r: int) -> Dict:
        rep = replace(spec, n=spec.n + holdout, seed=replication_seed(spec.seed, r))
        values = simulate_ar1(rep).values
        outcome = {"replication": r, "hits": [], "widths": [], "widened": 0, "errors": []}
        for j in range(holdout):
            index = spec.n + j
            try:
                samples = lag_embed(values[:index], 1)
                y = values[index - 1]
                bandwidth = h if h is not None else interval_bandwidth(samples, y, alpha, bw, family)
                f = fit_cdf_widening(samples, y, KernelSpec(family, bandwidth))
                interval = prediction_interval(f, alpha)
            except EstimatorError as ex:
                outcome["hits"].append(np.nan)
                outcome["widths"].append(np.nan)
                outcome["errors"].append(f'step {j + 1}: {ex}')
                continue
            outcome["widened"] += int(f.h > bandwidth)
            outcome["hits"].append(float(interval.contains(values[index])))
            outcome["widths"].append(interval.width)
        return outcome

    outcomes = _run(replications, one, workers)
    for o in outcomes:
        for error in o["errors"]:
            log(type='warning', message=f'coverage replication {o["replication"]} {error} skipped', origin_name=ORIGIN)

    hits = np.array([o["hits"] for o in outcomes], dtype=float)
    widths = np.array([o["widths"] for o in outcomes], dtype=float)
    fitted = ~np.isnan(hits)
    trials = int(fitted.sum())
    if not trials:
        raise InvalidSpec("every held-out step failed; the design leaves no local data")

    coverage = float(hits[fitted].mean())
    per_step = [float(hits[fitted[:, j], j].mean()) if fitted[:, j].any() else float('nan') for j in range(holdout)]
    report = CoverageReport(replications=replications, nominal=1.0 - alpha,
                            empirical_coverage=coverage, mean_width=float(widths[fitted].mean()),
                            std_error=float(np.sqrt(coverage * (1.0 - coverage) / trials)),
                            per_step_coverage=per_step,
                            skipped=hits.size - trials, hits=int(hits[fitted].sum()), trials=trials,
                            widened=sum(o["widened"] for o in outcomes),
                            raw=[{"replication": o["replication"], "hits": int(np.nansum(o["hits"])),
                                  "mean_width": float(np.nanmean(o["widths"])) if len(o["errors"]) < holdout else float('nan'),
                                  "skipped": len(o["errors"])} for o in outcomes])
    log(type='info',
        message=f'coverage {report.empirical_coverage:.4f} over {trials} intervals '
                f'(nominal {report.nominal}, skipped {report.skipped}, widened {report.widened})',
        origin_name=ORIGIN)
    if not report.valid:
        log(type='warning', message=f'{report.skipped} of {hits.size} held-out steps skipped, experiment not valid', origin_name=ORIGIN)
    return report


def true_conditional_cdf(spec: Ar1Spec, y: float, z: float) -> Tuple[float, float, float]:
    """
    Return (F, F'', f_Y(y)) for the Gaussian AR(1): Z | Y = y ~ N(phi y, sigma^2),
    F'' taken in z, f_Y the stationary density of the regressor.
    """
    mean, sd = spec.conditional_law(y)
    u = (z - mean) / sd
    F = float(norm.cdf(u))
    Fpp = float(-u * norm.pdf(u) / sd ** 2)
    f_y = float(norm.pdf(y, scale=spec.stationary_sd()))
    return F, Fpp, f_y


def normality_experiment(spec: Ar1Spec, y: float, z: float, replications: int,
                         family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                         h: Optional[float] = None,
                         workers: int = MONTECARLO_WORKERS) -> NormalityReport:
    """
    Standardise sqrt(n h) [F_hat(z|y) - F(z|y) - h^2 k2 F''(z|y) / 2] by sqrt(v0 omega^2),
    omega^2 = F (1 - F) / f_Y(y), across replications and compare it with N(0, 1).

    raises:
        InvalidSpec - If the innovations are not Gaussian (no closed-form truth)
    """
    if not spec.is_gaussian:
        raise InvalidSpec("normality experiment needs Gaussian innovations")
    if replications < 2:
        raise InvalidSpec("normality experiment needs at least 2 replications")

    n_pairs = spec.n - 1
    bandwidth = h if h is not None else _default_h(spec, n_pairs)
    kspec = KernelSpec(family, bandwidth)
    moments = kernel_moments(kspec)
    F, Fpp, f_y = true_conditional_cdf(spec, y, z)
    omega2 = F * (1.0 - F) / f_y
    bias = 0.5 * bandwidth ** 2 * moments.k2 * Fpp
    scale = np.sqrt(moments.v0 * omega2)

    def one(r: int) -> Dict:
        series = simulate_ar1(replace(spec, seed=replication_seed(spec.seed, r)))
        try:
            f = fit_cdf(lag_embed(series, 1), y, kspec)
        except EstimatorError as ex:
            return {"error": str(ex)}
        return {"stat": np.sqrt(n_pairs * bandwidth) * (cdf_eval(f, z) - F - bias) / scale}

    outcomes = _run(replications, one, workers)
    stats = np.array([o["stat"] for o in outcomes if "stat" in o], dtype=float)
    if stats.size < 2:
        raise InvalidSpec("too few successful replications for a normality summary")

    return NormalityReport(sample_count=int(stats.size), standardized_errors=stats,
                           mean=float(stats.mean()), variance=float(stats.var(ddof=1)),
                           ks_statistic=float(kstest(stats, 'norm').statistic),
                           h=bandwidth, skipped=replications - int(stats.size))


def _check_ns(ns: Sequence[int]) -> List[int]:
    ns = [int(n) for n in ns]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InvalidSpec(f"sample sizes must be a nonempty increasing sequence, got {ns}")
    return ns


def consistency_experiment(spec: Ar1Spec, tau: float, ns: Sequence[int], replications: int,
                           y: float = 0.0,
                           family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                           tolerance: float = 0.0,
                           workers: int = MONTECARLO_WORKERS) -> ConsistencyReport:
    """
    RMSE of the conditional quantile estimate at y against phi y + sigma Phi^-1(tau), per n.

    raises:
        InvalidSpec - If the innovations are not Gaussian or ns is not increasing
    """
    tau = _check_tau(tau)
    if not spec.is_gaussian:
        raise InvalidSpec("consistency experiment needs Gaussian innovations")
    ns = _check_ns(ns)
    mean, sd = spec.conditional_law(y)
    target = float(mean + sd * norm.ppf(tau))

    errors, skipped = [], 0
    for i, n in enumerate(ns):
        kspec = KernelSpec(family, _default_h(spec, n - 1))

        def one(r: int) -> Dict:
            series = simulate_ar1(replace(spec, n=n, seed=replication_seed(spec.seed, i, r)))
            try:
                return {"q": quantile(fit_cdf(lag_embed(series, 1), y, kspec), tau)}
            except EstimatorError as ex:
                return {"error": str(ex)}

        estimates = np.array([o["q"] for o in _run(replications, one, workers) if "q" in o])
        skipped += replications - estimates.size
        errors.append(float(np.sqrt(np.mean((estimates - target) ** 2))))

    return ConsistencyReport(ns=ns, errors=errors, target=target,
                             nonincreasing=all(b <= a + tolerance for a, b in zip(errors, errors[1:])),
                             skipped=skipped)


def cdf_consistency_experiment(spec: Ar1Spec, y: float, ns: Sequence[int], replications: int,
                               zs: Optional[Sequence[float]] = None,
                               family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL),
                               workers: int = MONTECARLO_WORKERS) -> ConsistencyReport:
    """
    Mean absolute deviation between F_hat(.|y) and the true Gaussian conditional CDF on a z grid, per n.
    """
    if not spec.is_gaussian:
        raise InvalidSpec("consistency experiment needs Gaussian innovations")
    ns = _check_ns(ns)
    mean, sd = spec.conditional_law(y)
    grid = np.asarray(zs if zs is not None else mean + sd * np.linspace(-2.5, 2.5, 51), dtype=float)
    truth = norm.cdf(grid, loc=mean, scale=sd)

    errors, skipped = [], 0
    for i, n in enumerate(ns):
        kspec = KernelSpec(family, _default_h(spec, n - 1))

        def one(r: int) -> Dict:
            series = simulate_ar1(replace(spec, n=n, seed=replication_seed(spec.seed, i, r)))
            try:
                f = fit_cdf(lag_embed(series, 1), y, kspec)
            except EstimatorError as ex:
                return {"error": str(ex)}
            return {"mad": float(np.mean(np.abs(cdf_eval(f, grid) - truth)))}

        mads = np.array([o["mad"] for o in _run(replications, one, workers) if "mad" in o])
        skipped += replications - mads.size
        errors.append(float(mads.mean()))

    return ConsistencyReport(ns=ns, errors=errors, target=None,
                             nonincreasing=all(b <= a for a, b in zip(errors, errors[1:])),
                             skipped=skipped)
