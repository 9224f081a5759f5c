"""Seeded random states, unitaries and Hermitian matrices."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_state(d: int, rng=None) -> np.ndarray:
    rng = rng_from(rng)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(d: int, rng=None) -> np.ndarray:
    rng = rng_from(rng)
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(d, random_state=rng)


def random_density(d: int, rng=None, rank: int | None = None) -> np.ndarray:
    """Density matrix from the induced (Ginibre) measure."""
    rng = rng_from(rng)
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, rng=None, scale: float = 1.0) -> np.ndarray:
    rng = rng_from(rng)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (g + g.conj().T)
