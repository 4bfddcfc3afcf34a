from typing import Dict, Tuple

# Define log server host, port and server name in log files
LOG_SERVER_HOST: str = 'localhost' # The host of the log server
LOG_SERVER_PORT: int = 5001 # The port of the log server
LOG_FILE_NAME: str = 'maxent_nw_log.txt'
LOG_SERVER_DEBUG_MODE = True
LOG_TO_SERVER: bool = False # Ship log records to the log server (off for offline CLI runs)
LOGGER_NAME: str = 'maxent_nw'

# Define host and port of the API server
API_SERVER_HOST = 'localhost' # The host of the API server
API_SERVER_PORT = 5000 # The port of the API server
API_SERVER_NAME_IN_LOG = 'api-server' # The name of the server in the log messages
API_SERVER_DEBUG_MODE = True
API_CACHE_SIZE: int = 256 # Maximum number of fitted conditional CDFs kept in memory
API_CACHE_TTL: int = 600 # In seconds

# Name of the command line tool in the log messages
CLI_NAME_IN_LOG = 'cli'

# Kernel defaults
DEFAULT_KERNEL: str = 'epanechnikov'

# Max-entropy weight solver
SOLVER_RESIDUAL_TOL: float = 1e-12 # Relative to max(1, max|a_i|)
SOLVER_BRACKET_TOL: float = 1e-14 # Relative to 1 + |lambda|
SOLVER_MAX_ITER: int = 200
SOLVED_RESIDUAL_LIMIT: float = 1e-10 # Residual above this (relative) is reported as a warning

# Bandwidth selection
ROT_CONSTANT: float = 1.06
IQR_TO_SD: float = 1.349
FD_STEP_FACTOR: float = 0.5 # Finite difference step = FD_STEP_FACTOR * pilot_h * scale(Z)
FD_SMOOTHING_POINTS: int = 21 # Points averaged over the z-window when smoothing the pilot CDF
CV_VALIDATION_FRACTION: float = 0.25 # Trailing share of the sample used for rolling-origin validation
CV_MIN_POINTS: int = 30
ROT_MIN_POINTS: int = 10
CV_GRID_FACTORS: Tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0) # Default cross-validation grid, in multiples of the rule of thumb
INTERVAL_ROT_FACTOR: float = 2.0 # Rule of thumb multiplier for the tail quantiles of prediction intervals
WIDEN_FACTOR: float = 2.0 # Bandwidth multiplier applied when a conditioning point has no local data
WIDEN_MAX_STEPS: int = 12

# Prediction intervals and backtests
DEFAULT_ALPHA: float = 0.05
DEFAULT_HOLDOUT: int = 5
DEFAULT_HORIZON: int = 1
BACKTEST_MIN_TRAINING: int = 10

# Monte Carlo harness
DEFAULT_BURN_IN: int = 500
MIN_BURN_IN: int = 100
MONTECARLO_WORKERS: int = 1 # Threads used to run replications
MAX_SKIPPED_SHARE: float = 0.02 # An experiment with more skipped replications is flagged invalid

# Output formatting
FLOAT_FORMAT: str = '%.17g' # 17 significant digits, round-trippable

# HTTP status codes
STATUS_CODES = {
    "not_found": 404,
    "forbidden": 403,
    "bad_request": 400,
    "unprocessable": 422,
    "ok": 200,
    "internal_error": 500,
}

# Command line exit codes (stable contract for scripting)
EXIT_CODES: Dict[str, int] = {
    "ok": 0,
    "usage": 2,
    "data": 3,
    "numerical": 4,
}

# Error category to HTTP status
ERROR_CATEGORY_STATUS: Dict[str, str] = {
    "usage": "bad_request",
    "data": "bad_request",
    "numerical": "unprocessable",
}
