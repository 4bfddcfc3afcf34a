"""
Compactly supported kernels, bandwidth scaling and kernel moment constants.

All kernels are symmetric probability densities supported on (-1, 1).
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Union
import numpy as np
from config import DEFAULT_KERNEL
from .errors import InvalidBandwidth, InvalidSpec

ArrayLike = Union[float, np.ndarray]


class KernelFamily(str, Enum):
    EPANECHNIKOV = "epanechnikov"
    TRIWEIGHT = "triweight"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, name: Union[str, "KernelFamily"]) -> "KernelFamily":
        try:
            return cls(str(name.value if isinstance(name, cls) else name).lower())
        except ValueError:
            raise InvalidSpec(f"unknown kernel family {name!r}, expected one of {[f.value for f in cls]}")


@dataclass(frozen=True)
class KernelMoments:
    k2: float # second moment of K
    v0: float # integral of K squared


# Closed-form moments of the unscaled kernels
_MOMENTS: Dict[KernelFamily, KernelMoments] = {
    KernelFamily.EPANECHNIKOV: KernelMoments(k2=1.0 / 5.0, v0=3.0 / 5.0),
    KernelFamily.TRIWEIGHT: KernelMoments(k2=1.0 / 9.0, v0=350.0 / 429.0),
    KernelFamily.UNIFORM: KernelMoments(k2=1.0 / 3.0, v0=1.0 / 2.0),
}


@dataclass(frozen=True)
class KernelSpec:
    family: KernelFamily
    h: float

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily.parse(self.family))
        if not np.isfinite(self.h) or self.h <= 0:
            raise InvalidBandwidth(self.h)
        object.__setattr__(self, "h", float(self.h))

    @classmethod
    def default(cls, h: float) -> "KernelSpec":
        return cls(KernelFamily.parse(DEFAULT_KERNEL), h)

    def with_bandwidth(self, h: float) -> "KernelSpec":
        return KernelSpec(self.family, h)


def kernel_eval(spec: KernelSpec, u: ArrayLike) -> ArrayLike:
    """
    Evaluate the unscaled kernel K(u). Zero outside (-1, 1).

    params:
        spec - The kernel specification (only the family is used)
        u - Scalar or array of evaluation points

    returns:
        K(u) with the same shape as u
    """
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    if spec.family is KernelFamily.EPANECHNIKOV:
        values = 0.75 * (1.0 - u * u)
    elif spec.family is KernelFamily.TRIWEIGHT:
        values = (35.0 / 32.0) * (1.0 - u * u) ** 3
    else:
        values = np.full_like(u, 0.5)
    out = np.where(inside, values, 0.0)
    return float(out) if out.ndim == 0 else out


def kernel_scaled(spec: KernelSpec, d: ArrayLike) -> ArrayLike:
    """
    Evaluate K_h(d) = K(d / h) / h.
    """
    out = np.asarray(kernel_eval(spec, np.asarray(d, dtype=float) / spec.h)) / spec.h
    return float(out) if out.ndim == 0 else out


def kernel_moments(spec: KernelSpec) -> KernelMoments:
    """
    Return (k2, v0) of the unscaled kernel; independent of the bandwidth.
    """
    return _MOMENTS[spec.family]
