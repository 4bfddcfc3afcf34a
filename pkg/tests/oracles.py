"""Independent reference computations shared by the tests."""
import numpy as np
from scipy.special import softmax


def bisection_lambda(a, lo=-50.0, hi=50.0, iterations=400):
    """Root of sum(a * exp(lambda * a)) by plain bisection on the normalised form."""
    a = np.asarray(a, dtype=float)
    g = lambda lam: float(softmax(lam * a) @ a)
    while g(lo) > 0:
        lo *= 2.0
    while g(hi) < 0:
        hi *= 2.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def epanechnikov(d, h):
    u = np.asarray(d, dtype=float) / h
    return np.where(np.abs(u) < 1.0, 0.75 * (1.0 - u * u), 0.0) / h
