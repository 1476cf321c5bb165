"""Reference gate matrices in the computational basis (first qubit most significant)."""

import math

import numpy as np

NOT = np.array([[0, 1], [1, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
CSF = np.diag([1, 1, 1, -1]).astype(complex)
CCNOT = np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 5, 7, 6]]


def v_matrix(theta: float, phi: float) -> np.ndarray:
    """Carrier rotation on {|0>, |1>}; column j is the image of |j>."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -1j * np.exp(-1j * phi) * s],
            [-1j * np.exp(1j * phi) * s, c],
        ]
    )


def phase_gate(alpha: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * alpha)])


def controlled_phase(alpha: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(1j * alpha)])


def is_unitary(matrix: np.ndarray, atol: float = 1e-10) -> bool:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol, rtol=0))
