"""Random instances shared by the test modules."""
import numpy as np

from corrmap.rand import random_density
from corrmap.tensor_core import DimSpec, partial_trace


def random_correlation(dims, rng, scale=1.0):
    """Traceless-marginal correlation matrix from a random joint state."""
    sigma = random_density(dims.total, rng)
    eta = partial_trace(sigma, dims, "S")
    tau = partial_trace(sigma, dims, "E")
    return scale * (sigma - np.kron(eta, tau))


def random_basis_pair(dims, rng, scale=0.5):
    """Random linearly independent states P_i and consistent Hermitian R_i."""
    n = dims.d_s ** 2
    P = [random_density(dims.d_s, rng) for _ in range(n)]
    R = [np.kron(p, random_density(dims.d_e, rng)) + random_correlation(dims, rng, scale)
         for p in P]
    return P, R


def bloch_state(theta, phi):
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


QUBIT = DimSpec(2, 2, 1)
