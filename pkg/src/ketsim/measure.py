"""Projective measurement with collapse, and reproducible shot sampling.

Outcomes are drawn by an inverse-CDF walk over branch weights in index
order, which makes tie handling deterministic.  Branch weights below
1e-15 are treated as exactly zero so that floating-point dust never
produces an impossible outcome or a near-null collapsed vector.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput
from .rng import RngStream
from .state import StateVector, index_to_bits, probabilities

ZERO_BRANCH_EPS = 1e-15


@dataclass(frozen=True)
class MeasurementOutcome:
    """One observed result: the classical bits, their pre-measurement Born
    weight, and the normalized post-measurement state."""

    bits: tuple[int, ...]
    probability: float
    collapsed: StateVector


@dataclass(frozen=True)
class Histogram:
    """Counts of measured bit patterns over a fixed number of shots."""

    shots: int
    seed: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise InvalidInput("histogram counts must sum to shots")

    def to_json_dict(self) -> dict:
        return {"shots": self.shots, "seed": self.seed, "counts": dict(self.counts)}


def _branch_cdf(weights: np.ndarray) -> tuple[np.ndarray, int]:
    """Cumulative weights with sub-threshold branches zeroed.

    Returns the CDF and the last index carrying real weight, used to
    absorb draws that land beyond the accumulated total by rounding.
    """
    live = weights >= ZERO_BRANCH_EPS
    if not live.any():
        raise InvalidInput("state has no branch with nonzero weight")
    cdf = np.cumsum(np.where(live, weights, 0.0))
    return cdf, int(np.nonzero(live)[0][-1])


def _draw(cdf: np.ndarray, last_live: int, u: float) -> int:
    return min(int(np.searchsorted(cdf, u, side="right")), last_live)


def measure_all(s: StateVector, rng: RngStream) -> MeasurementOutcome:
    """Measure every qubit; the state collapses onto one basis ket."""
    weights = probabilities(s)
    cdf, last_live = _branch_cdf(weights)
    index = _draw(cdf, last_live, rng.uniform())
    collapsed = np.zeros_like(s.amplitudes)
    collapsed[index] = 1.0
    return MeasurementOutcome(
        bits=index_to_bits(index, s.num_qubits),
        probability=float(weights[index]),
        collapsed=StateVector(collapsed),
    )


def measure_subset(s: StateVector, qubits: Sequence[int], rng: RngStream) -> MeasurementOutcome:
    """Measure the listed qubits jointly; unmeasured qubits stay quantum.

    The outcome pattern packs the listed qubits' bits with the first
    listed qubit most significant.  The collapsed state is the
    renormalized projection of ``s`` onto the observed pattern.
    """
    qubits = list(qubits)
    n = s.num_qubits
    if not qubits:
        raise InvalidInput("measure_subset needs at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise InvalidInput("measured qubits must be distinct")
    for q in qubits:
        if not 0 <= q < n:
            raise InvalidInput(f"qubit index {q} out of range for {n} qubits")

    idx = np.arange(s.dim)
    pattern = np.zeros(s.dim, dtype=np.intp)
    for q in qubits:
        pattern = (pattern << 1) | ((idx >> (n - 1 - q)) & 1)
    weights = np.zeros(1 << len(qubits))
    np.add.at(weights, pattern, np.abs(s.amplitudes) ** 2)

    cdf, last_live = _branch_cdf(weights)
    outcome = _draw(cdf, last_live, rng.uniform())
    projected = np.where(pattern == outcome, s.amplitudes, 0.0)
    projected /= math.sqrt(weights[outcome])
    return MeasurementOutcome(
        bits=index_to_bits(outcome, len(qubits)),
        probability=float(weights[outcome]),
        collapsed=StateVector(projected),
    )


def sample(s: StateVector, shots: int, seed: int) -> Histogram:
    """Histogram of ``shots`` independent full measurements of copies of ``s``.

    Each shot consumes exactly one uniform from a fresh stream seeded with
    ``seed``, so results are reproducible bit for bit.  Keys are bit
    patterns with qubit 0 leftmost, sorted ascending.
    """
    if shots < 1:
        raise InvalidInput("shots must be at least 1")
    weights = probabilities(s)
    cdf, last_live = _branch_cdf(weights)
    rng = RngStream(seed)
    draws = np.array([rng.uniform() for _ in range(shots)])
    indices = np.minimum(np.searchsorted(cdf, draws, side="right"), last_live)
    values, freqs = np.unique(indices, return_counts=True)
    counts = {
        format(int(v), f"0{s.num_qubits}b"): int(c) for v, c in zip(values, freqs)
    }
    return Histogram(shots=shots, seed=seed, counts=counts)
