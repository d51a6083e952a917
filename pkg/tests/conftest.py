"""Shared fixtures and random-state helpers for the test suite."""

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=30)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def haar_state(rng, dim):
    """Uniformly random pure state of the given dimension."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_unitary(rng, dim):
    """Haar-ish unitary via QR of a complex Gaussian matrix."""
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(mat)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_density(rng, dim, rank=None):
    """Random mixed state as a uniform mixture of Haar pure states."""
    rank = dim if rank is None else rank
    rho = np.zeros((dim, dim), dtype=complex)
    for _ in range(rank):
        psi = haar_state(rng, dim)
        rho += np.outer(psi, psi.conj())
    return rho / rank
