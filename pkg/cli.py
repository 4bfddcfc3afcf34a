import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from config import (CLI_NAME_IN_LOG, DEFAULT_ALPHA, DEFAULT_HOLDOUT, DEFAULT_HORIZON,
                    DEFAULT_KERNEL, DEFAULT_BURN_IN, EXIT_CODES, MONTECARLO_WORKERS, CV_GRID_FACTORS)
from estimator import (Ar1Spec, BacktestConfig, BandwidthMethod, Innovation, KernelFamily,
                       KernelSpec, LaggedSample, backtest, build_constraint_vector, cdf_curve,
                       consistency_experiment, coverage_experiment, emit_plot_data, fit_cdf,
                       h_cross_validate, h_plugin_from_data, h_rule_of_thumb, interval_bandwidth, lag_embed,
                       normality_experiment, prediction_interval, quantile, read_csv,
                       simulate_ar1, solve_lambda)
from estimator.backtest import ROW_COLUMNS
from estimator.data_io import to_csv_text, to_json_text
from estimator.errors import EmitError, EstimatorError
from estimator.estimator_utils import Logger, log

BANDWIDTH_EXPLANATION = (
    "Bandwidth: 'auto' uses the rule of thumb h = 1.06 * min(std, IQR/1.349) * n^(-1/5) on the lagged regressors, "
    "doubled for the tail quantiles of prediction intervals and backtests. "
    "The method this estimator comes from does not state how its bandwidths were chosen, so this default is a "
    "convention; use the 'bandwidth' command (plugin or cv) or pass --bandwidth <h> to override it."
)


# Argument parsing helpers
def parse_bandwidth(text: str) -> Optional[float]:
    if text == 'auto':
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be 'auto' or a positive number, got {text!r}")
    if not np.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"bandwidth must be positive, got {text!r}")
    return value


def parse_grid(text: str) -> np.ndarray:
    """
    Parse lo:hi:steps into an evenly spaced grid.
    """
    try:
        lo, hi, steps = text.split(':')
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like lo:hi:steps, got {text!r}")
    if steps < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"grid needs steps >= 1 and lo <= hi, got {text!r}")
    return np.linspace(lo, hi, steps)


def parse_column(text: str):
    return int(text) if text.lstrip('-').isdigit() else text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--kernel', choices=[f.value for f in KernelFamily], default=DEFAULT_KERNEL)
    common.add_argument('--bandwidth', type=parse_bandwidth, default=None, metavar='{auto|h}',
                        help="kernel bandwidth, or 'auto' for the rule of thumb (default)")
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--output', default=None, help='write the result to this path instead of stdout')
    common.add_argument('--format', choices=['csv', 'json'], default=None)
    common.add_argument('--explain', action='store_true', help='explain how the bandwidth was chosen')
    common.add_argument('-v', '--verbose', action='count', default=0)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument('--input', required=True, help='UTF-8 CSV file holding the series')
    data.add_argument('--column', type=parse_column, default=0, help='column index or header name')
    data.add_argument('--horizon', type=int, default=DEFAULT_HORIZON)

    ar1 = argparse.ArgumentParser(add_help=False)
    ar1.add_argument('--phi', type=float, default=0.76)
    ar1.add_argument('--innov', choices=['gaussian', 't'], default='gaussian')
    ar1.add_argument('--df', type=float, default=2.5, help='degrees of freedom of t innovations')
    ar1.add_argument('--scale', type=float, default=1.0)
    ar1.add_argument('--n', type=int, default=500)
    ar1.add_argument('--burn-in', type=int, default=DEFAULT_BURN_IN)
    ar1.add_argument('--workers', type=int, default=MONTECARLO_WORKERS)

    parser = argparse.ArgumentParser(
        prog='cli.py',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description='Maximum-entropy weighted Nadaraya-Watson conditional distributions, quantiles and prediction intervals.')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('simulate', parents=[common, ar1], help='simulate an AR(1) series')

    fit = commands.add_parser('fit-cdf', parents=[common, data], help='conditional CDF on a grid')
    fit.add_argument('--at', type=float, nargs='+', required=True, help='conditioning value(s)')
    fit.add_argument('--grid', type=parse_grid, default=None, help='lo:hi:steps (default: atom range)')

    weights = commands.add_parser('weights', parents=[common, data], help='maximum-entropy weights')
    weights.add_argument('--at', type=float, required=True)

    q = commands.add_parser('quantile', parents=[common, data], help='conditional quantile')
    q.add_argument('--at', type=float, required=True)
    q.add_argument('--tau', type=float, default=0.5)

    interval = commands.add_parser('interval', parents=[common, data], help='prediction interval')
    interval.add_argument('--at', type=float, required=True)
    interval.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)

    bt = commands.add_parser('backtest', parents=[common, data], help='hold-out interval backtest')
    bt.add_argument('--holdout', type=int, default=DEFAULT_HOLDOUT)
    bt.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)
    bt.add_argument('--method', choices=[m.value for m in BandwidthMethod], default=BandwidthMethod.RULE_OF_THUMB.value,
                    help='per-step bandwidth rule when --bandwidth is auto')

    bw = commands.add_parser('bandwidth', parents=[common, data], help='bandwidth selection')
    bw.add_argument('--method', choices=[m.value for m in BandwidthMethod], default=BandwidthMethod.RULE_OF_THUMB.value)
    bw.add_argument('--tau', type=float, default=0.5)
    bw.add_argument('--at', type=float, default=None, help='conditioning value for the plug-in rule (default: last observation)')
    bw.add_argument('--grid', type=parse_grid, default=None, help='cross-validation grid lo:hi:steps')

    cov = commands.add_parser('coverage', parents=[common, ar1], help='Monte Carlo interval coverage')
    cov.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)
    cov.add_argument('--holdout', type=int, default=DEFAULT_HOLDOUT)
    cov.add_argument('--reps', type=int, default=400)
    cov.add_argument('--method', choices=[m.value for m in BandwidthMethod], default=BandwidthMethod.RULE_OF_THUMB.value)
    cov.add_argument('--raw-csv', default=None, help='write per-replication statistics here')

    norm = commands.add_parser('normality', parents=[common, ar1], help='Monte Carlo normality check of the CDF estimate')
    norm.add_argument('--reps', type=int, default=500)
    norm.add_argument('--at-y', type=float, default=0.0)
    norm.add_argument('--at-z', type=float, default=None, help='default: conditional median + 0.5 sd')
    norm.add_argument('--raw-csv', default=None)

    cons = commands.add_parser('consistency', parents=[common, ar1], help='Monte Carlo consistency of the quantile estimate')
    cons.add_argument('--ns', type=int, nargs='+', default=[200, 800, 3200])
    cons.add_argument('--tau', type=float, default=0.5)
    cons.add_argument('--reps', type=int, default=100)
    cons.add_argument('--at-y', type=float, default=0.0)

    return parser


# Output helpers
def write_output(text: str, path: Optional[str]) -> None:
    """
    raises:
        EmitError - If the output file cannot be written
    """
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    except OSError as ex:
        raise EmitError(f"cannot write output to {path}: {ex}")


def render_record(record: Dict, fmt: Optional[str]) -> str:
    """One result as a single CSV row under a header, or as one-line JSON (the default)."""
    if fmt == 'csv':
        return to_csv_text([tuple(record.values())], tuple(record))
    return to_json_text(record) + '\n'


def load_samples(args) -> Tuple[np.ndarray, LaggedSample]:
    series = read_csv(args.input, args.column)
    return series.values, lag_embed(series, args.horizon)


def resolve_spec(args, samples: LaggedSample, alpha: Optional[float] = None) -> KernelSpec:
    family = KernelFamily.parse(args.kernel)
    if args.bandwidth is not None:
        h = args.bandwidth
    elif alpha is not None:
        h = interval_bandwidth(samples, args.at, alpha, family=family, horizon=args.horizon)
    else:
        h = h_rule_of_thumb(samples).h
    if args.explain:
        sys.stderr.write(BANDWIDTH_EXPLANATION + f" Selected h = {h!r}.\n")
    return KernelSpec(family, h)


def ar1_spec(args) -> Ar1Spec:
    innovation = Innovation.gaussian(args.scale) if args.innov == 'gaussian' else Innovation.student_t(args.df, args.scale)
    return Ar1Spec(phi=args.phi, innovation=innovation, n=args.n, burn_in=args.burn_in, seed=args.seed)


# Commands
def cmd_simulate(args) -> str:
    series = simulate_ar1(ar1_spec(args))
    if args.format == 'json':
        return to_json_text({"name": series.name, "values": series.values}) + '\n'
    return to_csv_text(((v,) for v in series.values), ("value",))


def cmd_fit_cdf(args) -> str:
    _, samples = load_samples(args)
    spec = resolve_spec(args, samples)
    rows: List[Tuple[float, float, float]] = []
    for y in args.at:
        f = fit_cdf(samples, y, spec)
        grid = args.grid if args.grid is not None else np.linspace(f.sorted_z[0] - spec.h, f.sorted_z[-1] + spec.h, 101)
        rows.extend((y, z, F) for z, F in cdf_curve(f, grid))
    metadata = {"kernel": spec.family.value, "h": spec.h, "y": list(args.at), "n": samples.n}
    if args.output is not None:
        emit_plot_data(rows, args.output, metadata, columns=("y", "z", "Fhat"))
        return ''
    if args.format == 'json':
        return to_json_text({**metadata, "curve": [{"y": y, "z": z, "Fhat": F} for y, z, F in rows]}) + '\n'
    return to_csv_text(rows, ("y", "z", "Fhat"))


def cmd_weights(args) -> str:
    _, samples = load_samples(args)
    spec = resolve_spec(args, samples)
    cv = build_constraint_vector(samples, args.at, spec)
    w = solve_lambda(cv)
    footer = {"lambda": w.lam, "k": w.k, "residual": w.residual, "status": w.status.value}
    if args.format == 'json':
        return to_json_text({**footer, "Y": samples.Y, "a": cv.a, "p": w.p}) + '\n'
    rows = zip(range(samples.n), samples.Y, cv.a, w.p)
    return to_csv_text(rows, ("index", "Y", "a", "p")) + to_json_text(footer) + '\n'


def cmd_quantile(args) -> str:
    _, samples = load_samples(args)
    f = fit_cdf(samples, args.at, resolve_spec(args, samples))
    return render_record({"tau": args.tau, "value": quantile(f, args.tau), "effective_n": f.effective_n,
                          "h": f.h, "status": f.status.value}, args.format)


def cmd_interval(args) -> str:
    _, samples = load_samples(args)
    f = fit_cdf(samples, args.at, resolve_spec(args, samples, alpha=args.alpha))
    interval = prediction_interval(f, args.alpha)
    return render_record({"alpha": args.alpha, "lower": interval.lower, "upper": interval.upper,
                          "level": interval.level, "effective_n": f.effective_n, "h": f.h,
                          "status": f.status.value}, args.format)


def cmd_backtest(args) -> str:
    series = read_csv(args.input, args.column)
    cfg = BacktestConfig(holdout=args.holdout, alpha=args.alpha, horizon=args.horizon,
                         family=KernelFamily.parse(args.kernel), h=args.bandwidth,
                         method=BandwidthMethod(args.method))
    if args.explain and args.bandwidth is None:
        sys.stderr.write(BANDWIDTH_EXPLANATION + " Selected per step on the training data.\n")
    result = backtest(series, cfg)
    if args.format == 'json':
        return to_json_text({"rows": [dict(zip(ROW_COLUMNS, row.as_tuple())) for row in result.rows],
                             "summary": result.summary}) + '\n'
    return to_csv_text((row.as_tuple() for row in result.rows), ROW_COLUMNS) + to_json_text(result.summary) + '\n'


def cmd_bandwidth(args) -> str:
    values, samples = load_samples(args)
    method = BandwidthMethod(args.method)
    family = KernelFamily.parse(args.kernel)
    if method is BandwidthMethod.PLUGIN:
        y = args.at if args.at is not None else float(values[-1])
        plan = h_plugin_from_data(samples, y, args.tau, family=family)
    elif method is BandwidthMethod.CROSS_VALIDATION:
        grid = args.grid if args.grid is not None else h_rule_of_thumb(samples).h * np.array(CV_GRID_FACTORS)
        plan = h_cross_validate(samples, args.tau, grid, horizon=args.horizon, family=family)
    else:
        plan = h_rule_of_thumb(samples)
    return to_json_text(plan.as_dict()) + '\n'


def cmd_coverage(args) -> str:
    report = coverage_experiment(ar1_spec(args), args.alpha, args.holdout, args.reps,
                                 bw=BandwidthMethod(args.method), family=KernelFamily.parse(args.kernel),
                                 h=args.bandwidth, workers=args.workers)
    if args.raw_csv:
        write_output(to_csv_text(([r["replication"], r["hits"], r["mean_width"]] for r in report.raw),
                                 ("replication", "hits", "mean_width")), args.raw_csv)
    return to_json_text(report.as_dict()) + '\n'


def cmd_normality(args) -> str:
    spec = ar1_spec(args)
    z = args.at_z if args.at_z is not None else spec.phi * args.at_y + 0.5 * spec.innovation.scale
    report = normality_experiment(spec, args.at_y, z, args.reps, family=KernelFamily.parse(args.kernel),
                                  h=args.bandwidth, workers=args.workers)
    if args.raw_csv:
        write_output(to_csv_text(enumerate(report.standardized_errors), ("replication", "standardized_error")), args.raw_csv)
    return to_json_text({**report.as_dict(), "y": args.at_y, "z": z}) + '\n'


def cmd_consistency(args) -> str:
    report = consistency_experiment(ar1_spec(args), args.tau, args.ns, args.reps, y=args.at_y,
                                    family=KernelFamily.parse(args.kernel), workers=args.workers)
    return to_json_text(report.as_dict()) + '\n'


COMMANDS = {
    'simulate': cmd_simulate,
    'fit-cdf': cmd_fit_cdf,
    'weights': cmd_weights,
    'quantile': cmd_quantile,
    'interval': cmd_interval,
    'backtest': cmd_backtest,
    'bandwidth': cmd_bandwidth,
    'coverage': cmd_coverage,
    'normality': cmd_normality,
    'consistency': cmd_consistency,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logger = Logger(console_level=level)
    try:
        text = COMMANDS[args.command](args)
        if text:
            write_output(text, args.output)
    except EstimatorError as ex:
        log(type='error', message=f'{args.command} failed: {ex}', origin_name=CLI_NAME_IN_LOG)
        sys.stderr.write(to_json_text({"error": type(ex).__name__, "message": str(ex)}) + '\n')
        return EXIT_CODES[ex.category]
    finally:
        logger.close()

    return EXIT_CODES["ok"]


if __name__ == '__main__':
    sys.exit(main())
