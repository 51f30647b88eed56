import numpy as np
import pytest

from cpfgate import CqedParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_params(rng, n, kappa_int_floor=1e-3):
    """Log-uniform draws over the physically sensible decades."""
    g = 10.0 ** rng.uniform(-1, 3, n)
    kappa_ext = 10.0 ** rng.uniform(-2, 3, n)
    kappa_int = 10.0 ** rng.uniform(np.log10(kappa_int_floor), 3, n)
    gamma = 10.0 ** rng.uniform(-1, 1, n)
    return [CqedParams(*row) for row in zip(g, kappa_ext, kappa_int, gamma)]
