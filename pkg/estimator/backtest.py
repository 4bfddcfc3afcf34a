"""
Hold-out backtest: prediction intervals for the last observations of a series,
each fitted only on the observations before it and conditioned on the observed lag.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import numpy as np
from config import (DEFAULT_ALPHA, DEFAULT_HOLDOUT, DEFAULT_HORIZON,
                    DEFAULT_KERNEL, BACKTEST_MIN_TRAINING)
from .bandwidth import BandwidthMethod, interval_bandwidth
from .cond_dist import fit_cdf, lag_embed
from .errors import EstimatorError, InvalidConfig, TooShort
from .estimator_utils import log
from .kernel import KernelFamily, KernelSpec
from .quantile import prediction_interval
from .series import TimeSeries

ORIGIN = 'backtest'
ROW_COLUMNS = ("index", "true_value", "lower", "upper", "contained", "h", "status")


@dataclass(frozen=True)
class BacktestConfig:
    holdout: int = DEFAULT_HOLDOUT
    alpha: float = DEFAULT_ALPHA
    horizon: int = DEFAULT_HORIZON
    family: KernelFamily = KernelFamily.parse(DEFAULT_KERNEL)
    h: Optional[float] = None # fixed bandwidth; None selects one per step
    method: BandwidthMethod = BandwidthMethod.RULE_OF_THUMB

    def __post_init__(self):
        try:
            object.__setattr__(self, "method", BandwidthMethod(self.method))
        except ValueError:
            raise InvalidConfig(f"unknown bandwidth method {self.method!r}, expected one of {[m.value for m in BandwidthMethod]}")
        if self.holdout < 1:
            raise InvalidConfig(f"holdout must be at least 1, got {self.holdout}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.horizon < 1:
            raise InvalidConfig(f"horizon must be at least 1, got {self.horizon}")
        if self.h is not None and not (np.isfinite(self.h) and self.h > 0):
            raise InvalidConfig(f"bandwidth must be positive, got {self.h}")


@dataclass(frozen=True)
class BacktestRow:
    index: int # 1-based position in the series
    true_value: float
    lower: float
    upper: float
    contained: bool
    h: float
    status: str

    def as_tuple(self) -> tuple:
        return (self.index, self.true_value, self.lower, self.upper, self.contained, self.h, self.status)


@dataclass(frozen=True)
class BacktestResult:
    rows: List[BacktestRow]
    hit_rate: float
    mean_width: float
    failures: int
    summary: Dict = field(default_factory=dict)


def backtest(series: TimeSeries, cfg: BacktestConfig) -> BacktestResult:
    """
    For each of the last cfg.holdout observations fit on everything before it, condition
    on the observation cfg.horizon steps earlier and emit the 1 - alpha interval.

    raises:
        TooShort - If the series is not longer than holdout + horizon + 10
    """
    values = series.values
    T = values.shape[0]
    if T <= cfg.holdout + cfg.horizon + BACKTEST_MIN_TRAINING:
        raise TooShort(f"series of length {T} too short for holdout {cfg.holdout} at horizon {cfg.horizon}")

    rows: List[BacktestRow] = []
    for j in range(cfg.holdout):
        index = T - cfg.holdout + j
        # Only observations strictly before the held-out index are read
        training = values[:index]
        y = training[index - cfg.horizon]
        try:
            samples = lag_embed(training, cfg.horizon)
            h = cfg.h if cfg.h is not None else interval_bandwidth(samples, y, cfg.alpha, cfg.method,
                                                                    cfg.family, horizon=cfg.horizon)
            interval = prediction_interval(fit_cdf(samples, y, KernelSpec(cfg.family, h)), cfg.alpha)
        except EstimatorError as ex:
            log(type='warning', message=f'backtest step {index + 1} failed: {ex}', origin_name=ORIGIN)
            rows.append(BacktestRow(index + 1, float(values[index]), float('nan'), float('nan'),
                                    False, float('nan'), type(ex).__name__))
            continue
        rows.append(BacktestRow(index + 1, float(values[index]), interval.lower, interval.upper,
                                interval.contains(values[index]), float(h), "ok"))

    fitted = [row for row in rows if row.status == "ok"]
    hit_rate = float(np.mean([row.contained for row in fitted])) if fitted else float('nan')
    mean_width = float(np.mean([row.upper - row.lower for row in fitted])) if fitted else float('nan')
    summary = {"hit_rate": hit_rate, "mean_width": mean_width, "holdout": cfg.holdout,
               "alpha": cfg.alpha, "level": 1.0 - cfg.alpha, "horizon": cfg.horizon,
               "kernel": cfg.family.value, "method": cfg.method.value, "failures": len(rows) - len(fitted)}
    log(type='info', message=f'backtest of {series.name or "series"}: hit rate {hit_rate} over {len(fitted)} steps', origin_name=ORIGIN)
    return BacktestResult(rows=rows, hit_rate=hit_rate, mean_width=mean_width,
                          failures=len(rows) - len(fitted), summary=summary)
