"""
Maximum-entropy weighted Nadaraya-Watson estimation of conditional distributions
and quantiles for stationary time series.
"""
from .kernel import KernelFamily, KernelSpec, KernelMoments, kernel_eval, kernel_scaled, kernel_moments
from .series import TimeSeries, LaggedSample
from .maxent_weights import (ConstraintVector, MaxEntWeights, WeightStatus, ConstraintReport,
                             build_constraint_vector, solve_lambda, verify_constraints)
from .cond_dist import ConditionalCDF, lag_embed, fit_cdf, fit_cdf_many, fit_cdf_widening, cdf_eval, cdf_curve
from .quantile import (QuantileRequest, PredictionInterval, quantile, point_forecast,
                       prediction_interval, pinball_loss, argmin_check)
from .bandwidth import (BandwidthMethod, BandwidthPlan, PlugInComponents, mse_quantile,
                        mse_decomposition, h_opt_plugin, h_rule_of_thumb, h_cross_validate,
                        estimate_plugin_components, h_plugin_from_data,
                        select_bandwidth, interval_bandwidth)
from .montecarlo import (Ar1Spec, Innovation, InnovationKind, CoverageReport, NormalityReport,
                         ConsistencyReport, simulate_ar1, coverage_experiment, normality_experiment,
                         consistency_experiment, cdf_consistency_experiment)
from .data_io import read_csv, emit_plot_data
from .backtest import BacktestConfig, BacktestResult, backtest
