"""
Errors raised by the estimator.

Every error carries a category (usage, data or numerical) that the command line
maps to an exit code and the HTTP surface maps to a status code.
"""
from typing import Optional, Union


class EstimatorError(Exception):
    """Base error for the estimator package."""

    category: str = "numerical"


# Usage errors
class InvalidTau(EstimatorError, ValueError):
    category = "usage"

    def __init__(self, tau: float):
        super().__init__(f"tau must lie in (0, 1), got {tau}")
        self.tau = tau


class InvalidAlpha(EstimatorError, ValueError):
    category = "usage"

    def __init__(self, alpha: float):
        super().__init__(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = alpha


class InvalidBandwidth(EstimatorError, ValueError):
    category = "usage"

    def __init__(self, h: float):
        super().__init__(f"bandwidth must be a finite positive number, got {h}")
        self.h = h


class InvalidSpec(EstimatorError, ValueError):
    category = "usage"


class InvalidConfig(EstimatorError, ValueError):
    category = "usage"


class UnsortedGrid(EstimatorError, ValueError):
    category = "usage"


class EmptyGrid(EstimatorError, ValueError):
    category = "usage"


GridEmpty = EmptyGrid


# Data errors
class EmptyInput(EstimatorError, ValueError):
    category = "data"


class LengthMismatch(EstimatorError, ValueError):
    category = "data"


class TooShort(EstimatorError, ValueError):
    category = "data"


class TooFewPoints(EstimatorError, ValueError):
    category = "data"


class DegenerateScale(TooFewPoints):
    category = "data"


class ParseError(EstimatorError, ValueError):
    category = "data"

    def __init__(self, row: int, column: Union[int, str], value: Optional[str] = None):
        super().__init__(f"cannot parse value {value!r} at row {row}, column {column}")
        self.row = row
        self.column = column
        self.value = value


class NonFiniteValue(EstimatorError, ValueError):
    category = "data"

    def __init__(self, row: int):
        super().__init__(f"non-finite value at row {row}")
        self.row = row


class DataFileNotFound(EstimatorError, FileNotFoundError):
    category = "data"


class EmitError(EstimatorError, OSError):
    category = "data"


# Numerical errors
class NoLocalData(EstimatorError):
    category = "numerical"

    def __init__(self, y: float, h: float):
        super().__init__(f"no regressor within bandwidth {h} of conditioning point {y}; enlarge the bandwidth")
        self.y = y
        self.h = h


class InvalidComponents(EstimatorError, ValueError):
    category = "numerical"


class ZeroCurvature(EstimatorError):
    category = "numerical"
