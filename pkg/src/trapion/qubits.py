"""Qubit-only state vectors for gate-level simulation (no Aux level, no phonon)."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadTargets, NonUnitaryMatrix, ShapeMismatch
from .gates import is_unitary

MAX_QUBITS = 26


class QubitState:
    """``2**n`` amplitudes, qubit 0 is the most significant bit of the index."""

    def __init__(self, num_qubits: int, amplitudes=None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
        self.num_qubits = num_qubits
        if amplitudes is None:
            amplitudes = np.zeros(2**num_qubits, dtype=complex)
            amplitudes[0] = 1.0
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != 2**num_qubits:
            raise ShapeMismatch(f"expected {2**num_qubits} amplitudes, got {amplitudes.size}")
        self.amplitudes = amplitudes.copy()

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> QubitState:
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_bits(cls, bits: str) -> QubitState:
        return cls.basis(len(bits), int(bits, 2))

    def copy(self) -> QubitState:
        return QubitState(self.num_qubits, self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_json(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }

    def __repr__(self):
        return f"QubitState(num_qubits={self.num_qubits})"


def _check_targets(n: int, targets: Sequence[int]):
    if len(set(targets)) != len(targets):
        raise BadTargets(f"repeated target in {list(targets)}")
    for t in targets:
        if not 0 <= t < n:
            raise BadTargets(f"target {t} outside register of {n} qubits")


def apply_qubit_gate(qstate: QubitState, targets: Sequence[int], matrix, atol: float = 1e-10) -> QubitState:
    """Apply a ``2^k x 2^k`` unitary to ``targets`` (first target most significant), in place."""
    targets = [int(t) for t in targets]
    n = qstate.num_qubits
    _check_targets(n, targets)
    matrix = np.asarray(matrix, dtype=complex)
    k = len(targets)
    if matrix.shape != (2**k, 2**k):
        raise BadTargets(f"matrix shape {matrix.shape} does not match {k} targets")
    if not is_unitary(matrix, atol):
        raise NonUnitaryMatrix("gate matrix is not unitary within tolerance")
    psi = qstate.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(psi, targets, range(k)).reshape(2**k, -1)
    psi = (matrix @ psi).reshape((2,) * n)
    psi = np.moveaxis(psi, range(k), targets)
    qstate.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return qstate


def apply_permutation(qstate: QubitState, perm: np.ndarray) -> QubitState:
    """Send basis state ``i`` to ``perm[i]``."""
    new = np.empty_like(qstate.amplitudes)
    new[perm] = qstate.amplitudes
    qstate.amplitudes = new
    return qstate


def marginal_probabilities(qstate: QubitState, qubits: Sequence[int]) -> np.ndarray:
    """Distribution of the sub-register ``qubits`` (first listed most significant)."""
    n = qstate.num_qubits
    _check_targets(n, qubits)
    p = qstate.probabilities().reshape((2,) * n)
    rest = [q for q in range(n) if q not in qubits]
    p = p.sum(axis=tuple(rest)) if rest else p
    # sum() keeps the kept axes in ascending order; reorder to the requested order
    order = sorted(qubits)
    p = np.moveaxis(p, [order.index(q) for q in qubits], range(len(qubits)))
    return p.reshape(-1)


class QubitMeasurement(NamedTuple):
    bits: str
    value: int
    state: QubitState


def measure_qubits(qstate: QubitState, rng: np.random.Generator, qubits: Sequence[int] | None = None) -> QubitMeasurement:
    """Projective Z measurement of ``qubits`` (all by default) with collapse."""
    n = qstate.num_qubits
    qubits = list(range(n)) if qubits is None else [int(q) for q in qubits]
    probs = marginal_probabilities(qstate, qubits)
    value = int(rng.choice(probs.size, p=probs / probs.sum()))
    bits = format(value, f"0{len(qubits)}b")
    idx = np.arange(2**n)
    keep = np.ones(2**n, dtype=bool)
    for q, b in zip(qubits, bits):
        keep &= ((idx >> (n - 1 - q)) & 1) == int(b)
    amps = np.where(keep, qstate.amplitudes, 0)
    amps = amps / np.linalg.norm(amps)
    return QubitMeasurement(bits, value, QubitState(n, amps))


def sample_qubit_counts(qstate: QubitState, shots: int, rng: np.random.Generator) -> dict[str, int]:
    probs = qstate.probabilities()
    draws = rng.choice(probs.size, size=shots, p=probs / probs.sum())
    counts = np.bincount(draws, minlength=probs.size)
    return {format(int(i), f"0{qstate.num_qubits}b"): int(counts[i]) for i in np.flatnonzero(counts)}
