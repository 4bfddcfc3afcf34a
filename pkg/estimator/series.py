from dataclasses import dataclass
from typing import Optional, Sequence, Union
import hashlib
import numpy as np
from .errors import LengthMismatch


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """
    Ordered real-valued observations. Finiteness is enforced at ingestion (read_csv),
    not here, so that test harnesses can poison values that must never be read.
    """
    values: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def head(self, stop: int) -> "TimeSeries":
        return TimeSeries(self.values[:stop], self.name)

    def digest(self) -> str:
        return hashlib.sha1(self.values.tobytes()).hexdigest()


@dataclass(frozen=True, eq=False)
class LaggedSample:
    """
    Embedded pairs (Y_i, Z_i): Y holds the lagged regressors, Z the responses.
    """
    Y: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        Y = np.array(self.Y, dtype=float).reshape(-1)
        Z = np.array(self.Z, dtype=float).reshape(-1)
        if Y.shape != Z.shape:
            raise LengthMismatch(f"Y has {Y.shape[0]} values but Z has {Z.shape[0]}")
        Y.setflags(write=False)
        Z.setflags(write=False)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    @classmethod
    def from_pairs(cls, Y: Union[Sequence[float], np.ndarray], Z: Union[Sequence[float], np.ndarray]) -> "LaggedSample":
        return cls(np.asarray(Y, dtype=float), np.asarray(Z, dtype=float))

    def head(self, stop: int) -> "LaggedSample":
        return LaggedSample(self.Y[:stop], self.Z[:stop])
