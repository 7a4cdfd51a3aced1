import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_density(dim, rng):
    """Full-rank random density matrix (Wishart normalized to unit trace)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
