from os.path import basename as os_path_basename
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import STATUS_CODES
from estimator import build_constraint_vector, solve_lambda, verify_constraints
from .blueprints_utils import (create_response, get_float, get_json_body,
                               handle_estimator_errors, log, parse_fit_request)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
weights_bp = Blueprint(BP_NAME, __name__)
api = Api(weights_bp)

class Weights(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Solve the maximum-entropy weights at a conditioning value.
        The request body must be a JSON object with 'series' and 'at'.
        """
        # Gather parameters
        data = get_json_body()
        fit = parse_fit_request(data)
        y = get_float(data, 'at')

        # Solve the weights
        cv = build_constraint_vector(fit.samples, y, fit.spec)
        weights = solve_lambda(cv)
        report = verify_constraints(weights, cv)

        # Log the request
        log(type='info', message=f'weights solved at y={y} with status {weights.status.value}')

        return create_response(message={'Y': fit.samples.Y, 'a': cv.a, 'p': weights.p,
                                        'lambda': weights.lam, 'k': weights.k,
                                        'residual': weights.residual, 'status': weights.status.value,
                                        'h': fit.spec.h,
                                        'constraints': {'min_p': report.min_p,
                                                        'sum_residual': report.sum_residual,
                                                        'constraint_residual': report.constraint_residual}},
                               status_code=STATUS_CODES["ok"])

api.add_resource(Weights, f'/{BP_NAME}')
