from os.path import basename as os_path_basename
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import DEFAULT_ALPHA, DEFAULT_HOLDOUT, DEFAULT_HORIZON, DEFAULT_KERNEL, STATUS_CODES
from estimator import BacktestConfig, BandwidthMethod, KernelFamily, backtest
from estimator.backtest import ROW_COLUMNS
from .blueprints_utils import (create_response, get_float, get_int, get_json_body,
                               handle_estimator_errors, log, parse_series)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
backtest_bp = Blueprint(BP_NAME, __name__)
api = Api(backtest_bp)

class Backtest(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Prediction intervals for the last 'holdout' observations of 'series', each fitted on
        the observations before it.
        """
        # Gather parameters
        data = get_json_body()
        series = parse_series(data)
        bandwidth = data.get('bandwidth', 'auto')
        cfg = BacktestConfig(holdout=get_int(data, 'holdout', DEFAULT_HOLDOUT),
                             alpha=get_float(data, 'alpha', DEFAULT_ALPHA),
                             horizon=get_int(data, 'horizon', DEFAULT_HORIZON),
                             family=KernelFamily.parse(data.get('kernel', DEFAULT_KERNEL)),
                             h=None if bandwidth in (None, 'auto') else get_float(data, 'bandwidth'),
                             method=data.get('method', BandwidthMethod.RULE_OF_THUMB.value))

        result = backtest(series, cfg)

        # Log the request
        log(type='info', message=f'backtest over {cfg.holdout} steps ({cfg.method.value} bandwidth) with hit rate {result.hit_rate}')

        return create_response(message={'rows': [dict(zip(ROW_COLUMNS, row.as_tuple())) for row in result.rows],
                                        'summary': result.summary},
                               status_code=STATUS_CODES["ok"])

api.add_resource(Backtest, f'/{BP_NAME}')
