from os.path import basename as os_path_basename
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import DEFAULT_ALPHA, STATUS_CODES
from estimator import prediction_interval, quantile
from .blueprints_utils import (cached_fit, create_response, get_float, get_json_body,
                               handle_estimator_errors, log, parse_fit_request)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
quantile_bp = Blueprint(BP_NAME, __name__)
api = Api(quantile_bp)

class Quantile(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Conditional quantile at a conditioning value.
        The request body must contain 'series', 'at' and 'tau'.
        """
        # Gather parameters
        data = get_json_body()
        fit = parse_fit_request(data)
        y = get_float(data, 'at')
        tau = get_float(data, 'tau', 0.5)

        f, from_cache = cached_fit(fit, y)
        value = quantile(f, tau)

        # Log the request
        log(type='info', message=f'quantile tau={tau} at y={y} (cached fit: {from_cache})')

        return create_response(message={'tau': tau, 'value': value, 'effective_n': f.effective_n,
                                        'h': f.h, 'status': f.status.value},
                               status_code=STATUS_CODES["ok"])

class Interval(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Prediction interval [q(alpha/2), q(1 - alpha/2)] at a conditioning value.
        The request body must contain 'series', 'at' and optionally 'alpha'.
        """
        # Gather parameters
        data = get_json_body()
        y = get_float(data, 'at')
        alpha = get_float(data, 'alpha', DEFAULT_ALPHA)
        fit = parse_fit_request(data, alpha=alpha)

        f, from_cache = cached_fit(fit, y)
        interval = prediction_interval(f, alpha)

        # Log the request
        log(type='info', message=f'interval alpha={alpha} at y={y} (cached fit: {from_cache})')

        return create_response(message={'alpha': alpha, 'lower': interval.lower, 'upper': interval.upper,
                                        'level': interval.level, 'effective_n': f.effective_n,
                                        'h': f.h, 'status': f.status.value},
                               status_code=STATUS_CODES["ok"])

api.add_resource(Quantile, f'/{BP_NAME}')
api.add_resource(Interval, '/interval')
