"""Shared helpers for seeded randomized tests."""

from fractions import Fraction

import numpy as np

from ketsim import RngStream, StateVector
from ketsim.inequalities import EventDistribution


def rand_state(num_qubits: int, rng: RngStream) -> StateVector:
    """Random state from normalized complex Gaussian amplitudes."""
    dim = 1 << num_qubits
    amps = np.empty(dim, dtype=np.complex128)
    for i in range(dim):
        re, im = rng.normal()
        amps[i] = complex(re, im)
    return StateVector(amps / np.linalg.norm(amps))


def rand_distribution(num_events: int, rng: RngStream, resolution: int = 64) -> EventDistribution:
    """Random exact-rational distribution over the 2**n atoms."""
    dim = 1 << num_events
    weights = [rng.next_u64() % resolution for _ in range(dim)]
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return EventDistribution(num_events, tuple(Fraction(w, total) for w in weights))


def kron_chain(*matrices: np.ndarray) -> np.ndarray:
    """Independent Kronecker-product oracle for dense expectations."""
    out = np.array([[1.0 + 0.0j]])
    for m in matrices:
        out = np.kron(out, m)
    return out
