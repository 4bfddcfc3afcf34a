from os.path import basename as os_path_basename
from flask import Blueprint, Response
from flask_restful import Api, Resource
from config import DEFAULT_BURN_IN, STATUS_CODES
from estimator import Ar1Spec, Innovation, simulate_ar1
from .blueprints_utils import (RequestError, create_response, get_float, get_int, get_json_body,
                               handle_estimator_errors, log)

# Define constants
BP_NAME = os_path_basename(__file__).replace('_bp.py', '')

# Create the blueprint and API
simulate_bp = Blueprint(BP_NAME, __name__)
api = Api(simulate_bp)

class Simulate(Resource):
    @handle_estimator_errors
    def post(self) -> Response:
        """
        Simulate an AR(1) series with Gaussian or Student t innovations.
        """
        # Gather parameters
        data = get_json_body()
        innov = data.get('innov', 'gaussian')
        scale = get_float(data, 'scale', 1.0)
        if innov == 'gaussian':
            innovation = Innovation.gaussian(scale)
        elif innov == 't':
            innovation = Innovation.student_t(get_float(data, 'df', 2.5), scale)
        else:
            raise RequestError("innov parameter must be 'gaussian' or 't'")

        spec = Ar1Spec(phi=get_float(data, 'phi', 0.76), innovation=innovation,
                       n=get_int(data, 'n', 500), burn_in=get_int(data, 'burn_in', DEFAULT_BURN_IN),
                       seed=get_int(data, 'seed', 0))
        series = simulate_ar1(spec)

        # Log the request
        log(type='info', message=f'simulated {spec.n} AR(1) observations with seed {spec.seed}')

        return create_response(message={'values': series.values, 'name': series.name},
                               status_code=STATUS_CODES["ok"])

api.add_resource(Simulate, f'/{BP_NAME}')
