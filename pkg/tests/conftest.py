import numpy as np
import pytest

from ridgeframe.ridge_radon import GridField, field_from_function


@pytest.fixture(scope="session")
def unit_gaussian_field():
    """Centered Gaussian on Q, unit L2 norm, boundary below 1e-13."""
    f = field_from_function(lambda x, y: np.exp(-np.pi * (x**2 + y**2) / 0.09), 256)
    return GridField(f.values / f.norm())


@pytest.fixture(scope="session")
def benchmark_field():
    """Offset anisotropic Gaussian used by the decomposition benchmarks."""
    return field_from_function(
        lambda x, y: np.exp(-np.pi * ((x - 0.15) ** 2 + 1.3 * (y + 0.1) ** 2) * 16.0),
        256)


def rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
