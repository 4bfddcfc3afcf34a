import numpy as np
import pytest
from estimator import KernelFamily, KernelSpec, LaggedSample


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def epa():
    return lambda h: KernelSpec(KernelFamily.EPANECHNIKOV, h)


@pytest.fixture
def random_samples(rng):
    def make(n, noise=1.0):
        Y = rng.normal(size=n)
        Z = 0.6 * Y + noise * rng.normal(size=n)
        return LaggedSample(Y, Z)
    return make


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name="series.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
