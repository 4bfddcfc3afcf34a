from os.path import basename as os_path_basename
import numpy as np
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import CV_GRID_FACTORS, DEFAULT_HORIZON, DEFAULT_KERNEL, STATUS_CODES
from estimator import (BandwidthMethod, KernelFamily, h_cross_validate, h_plugin_from_data,
                       h_rule_of_thumb, lag_embed)
from .blueprints_utils import (RequestError, create_response, get_float, get_int, get_json_body,
                               handle_estimator_errors, log, parse_series)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
bandwidth_bp = Blueprint(BP_NAME, __name__)
api = Api(bandwidth_bp)

class Bandwidth(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Select a bandwidth with the plug-in rule ('plugin'), the rule of thumb ('rot') or
        rolling-origin cross-validation ('cv').
        """
        # Gather parameters
        data = get_json_body()
        series = parse_series(data)
        horizon = get_int(data, 'horizon', DEFAULT_HORIZON)
        samples = lag_embed(series, horizon)
        family = KernelFamily.parse(data.get('kernel', DEFAULT_KERNEL))
        try:
            method = BandwidthMethod(data.get('method', BandwidthMethod.RULE_OF_THUMB.value))
        except ValueError:
            raise RequestError(f"method must be one of {[m.value for m in BandwidthMethod]}")
        tau = get_float(data, 'tau', 0.5)

        if method is BandwidthMethod.PLUGIN:
            y = get_float(data, 'at', float(series.values[-1]))
            plan = h_plugin_from_data(samples, y, tau, family=family)
        elif method is BandwidthMethod.CROSS_VALIDATION:
            grid = data.get('grid')
            if grid is None:
                grid = (h_rule_of_thumb(samples).h * np.array(CV_GRID_FACTORS)).tolist()
            if not isinstance(grid, list):
                raise RequestError('grid parameter must be a list of bandwidths')
            plan = h_cross_validate(samples, tau, grid, horizon=horizon, family=family)
        else:
            plan = h_rule_of_thumb(samples)

        # Log the request
        log(type='info', message=f'bandwidth {plan.h} selected with method {method.value}')

        return create_response(message=plan.as_dict(), status_code=STATUS_CODES["ok"])

api.add_resource(Bandwidth, f'/{BP_NAME}')
