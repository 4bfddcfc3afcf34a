import threading
from dataclasses import dataclass
from functools import wraps
from typing import Any, Dict, Optional, Tuple
import numpy as np
from flask import jsonify, make_response, request, Response
from cachetools import TTLCache
from config import (API_SERVER_HOST, API_SERVER_PORT, API_SERVER_NAME_IN_LOG,
                    API_CACHE_SIZE, API_CACHE_TTL, DEFAULT_HORIZON, DEFAULT_KERNEL,
                    STATUS_CODES, ERROR_CATEGORY_STATUS)
from estimator import (ConditionalCDF, KernelFamily, KernelSpec, LaggedSample, TimeSeries,
                       fit_cdf, h_rule_of_thumb, interval_bandwidth, lag_embed)
from estimator.errors import EstimatorError, InvalidConfig, NonFiniteValue
from estimator.estimator_utils import log as estimator_log


class RequestError(ValueError):
    """A request parameter is missing or malformed."""


# Response related
def create_response(message: Dict, status_code: int) -> Response:
    """
    Create a response with a message and status code.

    params:
        message - The message to include in the response
        status_code - The HTTP status code to return

    returns:
        Response object with the message and status code

    raises:
        TypeError - If the message is not a dictionary
    """

    if not isinstance(message, Dict):
        raise TypeError("Message must be a dictionary")

    return make_response(jsonify(to_builtin(message)), status_code)


def to_builtin(value: Any) -> Any:
    """
    Convert numpy scalars and arrays (also nested in dicts and lists) to plain Python values.
    """
    if isinstance(value, dict):
        return {key: to_builtin(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(item) for item in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


# Log server related
def log(type: str, message: str) -> None:
    """
    Log a message on behalf of the API server.
    """
    estimator_log(type=type,
                  message=message,
                  origin_name=f"{API_SERVER_NAME_IN_LOG} ({API_SERVER_HOST}:{API_SERVER_PORT})")


# Error handling related
def handle_estimator_errors(func: callable) -> callable:
    """
    Decorator turning request and estimator errors into JSON error responses.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except RequestError as ex:
            return create_response(message={'error': str(ex)}, status_code=STATUS_CODES["bad_request"])
        except EstimatorError as ex:
            log(type='warning', message=f'{request.path} failed with {type(ex).__name__}: {ex}')
            return create_response(message={'error': type(ex).__name__, 'message': str(ex)},
                                   status_code=STATUS_CODES[ERROR_CATEGORY_STATUS[ex.category]])
        except Exception as ex:
            log(type='error', message=f'{request.path} failed with unexpected error: {ex}')
            return create_response(message={'error': 'internal server error'}, status_code=STATUS_CODES["internal_error"])
    return wrapper


# Request parsing related
def get_json_body() -> Dict[str, Any]:
    """
    Return the JSON body of the current request.

    raises:
        RequestError - If the body is missing or not a JSON object
    """
    data = request.get_json(silent=True)
    if not request.is_json or not isinstance(data, dict):
        raise RequestError('Request body must be valid JSON with Content-Type: application/json')
    return data


def get_float(data: Dict[str, Any], key: str, default: Optional[float] = None) -> float:
    value = data.get(key, default)
    if value is None:
        raise RequestError(f'{key} parameter is required')
    try:
        return float(value)
    except (TypeError, ValueError):
        raise RequestError(f'invalid {key} parameter')


def get_int(data: Dict[str, Any], key: str, default: Optional[int] = None) -> int:
    value = data.get(key, default)
    if value is None:
        raise RequestError(f'{key} parameter is required')
    try:
        return int(value)
    except (TypeError, ValueError):
        raise RequestError(f'invalid {key} parameter')


def parse_series(data: Dict[str, Any]) -> TimeSeries:
    """
    Read the 'series' array of a request body, rejecting non-finite values.
    """
    raw = data.get('series')
    if not isinstance(raw, list) or not raw:
        raise RequestError('series parameter must be a nonempty list of numbers')
    try:
        values = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise RequestError('series parameter must contain only numbers')
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NonFiniteValue(int(bad[0]))
    return TimeSeries(values, name=data.get('name'))


@dataclass(frozen=True, eq=False)
class FitRequest:
    series: TimeSeries
    samples: LaggedSample
    spec: KernelSpec
    horizon: int


def parse_fit_request(data: Dict[str, Any], alpha: Optional[float] = None) -> FitRequest:
    """
    Parse series, horizon, kernel and bandwidth ('auto' or a positive number) of a request.
    With alpha given, 'auto' selects the prediction interval bandwidth at the 'at' value.
    """
    series = parse_series(data)
    horizon = get_int(data, 'horizon', DEFAULT_HORIZON)
    samples = lag_embed(series, horizon)
    family = KernelFamily.parse(data.get('kernel', DEFAULT_KERNEL))

    bandwidth = data.get('bandwidth', 'auto')
    if bandwidth in (None, 'auto'):
        if alpha is None:
            h = h_rule_of_thumb(samples).h
        else:
            h = interval_bandwidth(samples, get_float(data, 'at'), alpha, family=family, horizon=horizon)
    else:
        try:
            h = float(bandwidth)
        except (TypeError, ValueError):
            raise InvalidConfig(f"bandwidth must be 'auto' or a positive number, got {bandwidth!r}")
    return FitRequest(series=series, samples=samples, spec=KernelSpec(family, h), horizon=horizon)


# Fit cache related
# | Fitted conditional CDFs are immutable, so they can be shared across requests
fit_cache: TTLCache = TTLCache(maxsize=API_CACHE_SIZE, ttl=API_CACHE_TTL)
fit_cache_lock = threading.Lock()


def cached_fit(fit: FitRequest, y: float) -> Tuple[ConditionalCDF, bool]:
    """
    Return the fitted CDF for (series, horizon, y, kernel, h) and whether it came from the cache.
    """
    key = (fit.series.digest(), fit.horizon, float(y), fit.spec.family.value, fit.spec.h)
    with fit_cache_lock:
        cached = fit_cache.get(key)
    if cached is not None:
        return cached, True

    f = fit_cdf(fit.samples, y, fit.spec)
    with fit_cache_lock:
        fit_cache[key] = f
    return f, False
