from os.path import basename as os_path_basename
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import STATUS_CODES
from estimator import cdf_curve
from .blueprints_utils import (RequestError, cached_fit, create_response, get_json_body,
                               handle_estimator_errors, log, parse_fit_request)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
cdf_bp = Blueprint(BP_NAME, __name__)
api = Api(cdf_bp)

class ConditionalDistribution(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Evaluate the conditional CDF at one or more conditioning values.
        The request body must contain 'series', 'at' (number or list) and 'grid' (sorted list of z values).
        """
        # Gather parameters
        data = get_json_body()
        fit = parse_fit_request(data)
        at = data.get('at')
        ys = at if isinstance(at, list) else [at]
        grid = data.get('grid')
        if not ys or any(not isinstance(y, (int, float)) for y in ys):
            raise RequestError('at parameter must be a number or a list of numbers')
        if not isinstance(grid, list):
            raise RequestError('grid parameter must be a list of numbers')

        curves = []
        for y in ys:
            f, _ = cached_fit(fit, float(y))
            curves.append({'y': float(y), 'effective_n': f.effective_n, 'status': f.status.value,
                           'curve': [{'z': z, 'Fhat': F} for z, F in cdf_curve(f, grid)]})

        # Log the request
        log(type='info', message=f'conditional CDF evaluated at {len(ys)} conditioning value(s)')

        return create_response(message={'kernel': fit.spec.family.value, 'h': fit.spec.h,
                                        'n': fit.samples.n, 'curves': curves},
                               status_code=STATUS_CODES["ok"])

api.add_resource(ConditionalDistribution, f'/{BP_NAME}')
