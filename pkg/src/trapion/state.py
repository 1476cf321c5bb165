"""Exact state-vector simulation of a string of three-level ions on a phonon bus.

Each ion carries the levels ``|0>``, ``|1>`` and ``|aux>``; all ions share one
centre-of-mass vibrational mode truncated to Fock states ``0 .. d-1``.
Amplitudes are stored flat with the ion-level word in base 3 (ion 0 most
significant) followed by the phonon occupation, i.e.::

    index = word * d + n

Sideband pulses are applied as exact 2x2 block rotations on each
Jaynes-Cummings pair, so no matrix exponentials are involved.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionOverflow, IndexOutOfRange, ShapeMismatch, TruncationLeakage

MAX_AMPLITUDES = 2**26
DEFAULT_LEAK_TOL = 1e-9


class IonLevel(enum.IntEnum):
    ZERO = 0
    ONE = 1
    AUX = 2


class PulseKind(str, enum.Enum):
    V = "V"
    U = "U"
    UAUX = "UAux"


@dataclass(frozen=True)
class RegisterShape:
    num_ions: int
    phonon_dim: int = 2

    def __post_init__(self):
        if self.num_ions < 1:
            raise ValueError(f"num_ions must be >= 1, got {self.num_ions}")
        if self.phonon_dim < 2:
            raise ValueError(f"phonon_dim must be >= 2, got {self.phonon_dim}")

    @property
    def dim(self) -> int:
        return 3**self.num_ions * self.phonon_dim

    def index(self, levels, phonon: int = 0) -> int:
        """Flat index of the basis state with the given ion levels and Fock number."""
        if len(levels) != self.num_ions:
            raise ShapeMismatch(f"expected {self.num_ions} levels, got {len(levels)}")
        if not 0 <= phonon < self.phonon_dim:
            raise IndexOutOfRange(f"phonon number {phonon} outside 0..{self.phonon_dim - 1}")
        word = 0
        for lev in levels:
            word = 3 * word + int(lev)
        return word * self.phonon_dim + phonon


@dataclass(frozen=True)
class Pulse:
    kind: PulseKind
    ion: int
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PulseKind(self.kind))
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("pulse angles must be finite")
        if self.theta < 0:
            raise ValueError(f"pulse area must be >= 0, got {self.theta}")
        if self.ion < 0:
            raise IndexOutOfRange(f"negative ion index {self.ion}")

    @property
    def is_sideband(self) -> bool:
        return self.kind is not PulseKind.V

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "ion": self.ion, "theta": self.theta, "phi": self.phi}


class StateVector:
    """Amplitudes over ``L`` three-level ions times a truncated Fock space.

    ``leak_tol`` bounds the probability a sideband pulse may find on the top
    Fock level it would couple upward; ``max_leakage`` records the largest such
    probability seen so far.
    """

    def __init__(self, shape: RegisterShape, amplitudes=None, leak_tol: float = DEFAULT_LEAK_TOL):
        self.shape = shape
        if amplitudes is None:
            amplitudes = np.zeros(shape.dim, dtype=complex)
            amplitudes[0] = 1.0
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != shape.dim:
            raise ShapeMismatch(f"expected {shape.dim} amplitudes, got {amplitudes.size}")
        self.amplitudes = amplitudes.copy()
        self.leak_tol = leak_tol
        self.max_leakage = 0.0

    @classmethod
    def from_levels(cls, shape: RegisterShape, levels, phonon: int = 0, **kw) -> StateVector:
        amps = np.zeros(shape.dim, dtype=complex)
        amps[shape.index(levels, phonon)] = 1.0
        return cls(shape, amps, **kw)

    @property
    def num_ions(self) -> int:
        return self.shape.num_ions

    @property
    def phonon_dim(self) -> int:
        return self.shape.phonon_dim

    def copy(self) -> StateVector:
        out = StateVector(self.shape, self.amplitudes, self.leak_tol)
        out.max_leakage = self.max_leakage
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((3,) * self.num_ions + (self.phonon_dim,))

    def _ion_view(self, m: int) -> np.ndarray:
        if not 0 <= m < self.num_ions:
            raise IndexOutOfRange(f"ion {m} outside register of {self.num_ions}")
        L, d = self.num_ions, self.phonon_dim
        return self.amplitudes.reshape(3**m, 3, 3 ** (L - m - 1), d)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def level_populations(self, ion: int) -> np.ndarray:
        """Reduced populations of ``ion`` over (Zero, One, Aux)."""
        p = np.abs(self._ion_view(ion)) ** 2
        return p.sum(axis=(0, 2, 3))

    def population(self, ion: int, level: IonLevel) -> float:
        return float(self.level_populations(ion)[int(level)])

    def phonon_populations(self) -> np.ndarray:
        return self.probabilities().reshape(-1, self.phonon_dim).sum(axis=0)

    def aux_population(self) -> float:
        return float(sum(self.population(m, IonLevel.AUX) for m in range(self.num_ions)))

    def qubit_amplitudes(self, phonon: int = 0) -> np.ndarray:
        """Amplitudes restricted to ion levels {0, 1} at a fixed Fock number.

        The result is indexed like a ``QubitState`` of ``num_ions`` qubits.
        """
        t = self.tensor()[(slice(0, 2),) * self.num_ions + (phonon,)]
        return t.reshape(-1).copy()

    def to_json(self) -> dict:
        return {
            "num_ions": self.num_ions,
            "phonon_dim": self.phonon_dim,
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> StateVector:
        shape = RegisterShape(int(obj["num_ions"]), int(obj["phonon_dim"]))
        amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
        return cls(shape, amps)

    def __repr__(self):
        return f"StateVector(num_ions={self.num_ions}, phonon_dim={self.phonon_dim})"


def new_ground_state(shape: RegisterShape, max_amplitudes: int = MAX_AMPLITUDES, **kw) -> StateVector:
    """All ions in ``|0>`` and the bus in its motional ground state."""
    if shape.dim > max_amplitudes:
        raise DimensionOverflow(
            f"3^{shape.num_ions} * {shape.phonon_dim} = {shape.dim} amplitudes exceeds {max_amplitudes}"
        )
    return StateVector(shape, **kw)


def _check_angles(theta, phi):
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise ValueError("pulse angles must be finite")


def apply_v_pulse(state: StateVector, m: int, theta: float, phi: float) -> StateVector:
    """Carrier rotation on ion ``m`` between ``|0>`` and ``|1>``; Aux and phonon untouched."""
    _check_angles(theta, phi)
    v = state._ion_view(m)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    a0 = v[:, 0].copy()
    a1 = v[:, 1].copy()
    v[:, 0] = c * a0 - 1j * np.exp(-1j * phi) * s * a1
    v[:, 1] = c * a1 - 1j * np.exp(1j * phi) * s * a0
    return state


def _check_leak(state: StateVector, top: np.ndarray, theta: float, leak_tol):
    tol = state.leak_tol if leak_tol is None else leak_tol
    p = float(np.sum(np.abs(top) ** 2))
    if theta != 0 and p > 0:
        if p > tol:
            raise TruncationLeakage(
                f"population {p:.3e} on Fock level {state.phonon_dim - 1} would couple past the "
                f"cutoff (tolerance {tol:.1e}); increase phonon_dim"
            )
        state.max_leakage = max(state.max_leakage, p)


def _ladder(theta: float, d: int):
    half = 0.5 * theta * np.sqrt(np.arange(1, d))
    return np.cos(half), np.sin(half)


def _sideband(state, m, theta, phi, lower_level, leak_tol):
    # Couples |lower, n> with |0, n+1> for n = 0 .. d-2.
    _check_angles(theta, phi)
    v = state._ion_view(m)
    d = state.phonon_dim
    _check_leak(state, v[:, lower_level, :, d - 1], theta, leak_tol)
    c, s = _ladder(theta, d)
    lo = v[:, lower_level, :, :-1].copy()
    hi = v[:, 0, :, 1:].copy()
    v[:, lower_level, :, :-1] = c * lo - 1j * np.exp(1j * phi) * s * hi
    v[:, 0, :, 1:] = c * hi - 1j * np.exp(-1j * phi) * s * lo
    return state


def apply_u_pulse(state: StateVector, m: int, theta: float, phi: float, leak_tol=None) -> StateVector:
    """Red-sideband pulse on ion ``m``: ``|1,n> <-> |0,n+1>`` with area ``theta*sqrt(n+1)``.

    Raises TruncationLeakage if ``|1, d-1>`` carries more than the tolerated
    population, since that amplitude would couple to a Fock state we do not hold.
    """
    return _sideband(state, m, theta, phi, IonLevel.ONE, leak_tol)


def apply_uaux_pulse(state: StateVector, m: int, theta: float, phi: float, leak_tol=None) -> StateVector:
    """Red-sideband pulse on ion ``m`` through the auxiliary level: ``|aux,n> <-> |0,n+1>``."""
    return _sideband(state, m, theta, phi, IonLevel.AUX, leak_tol)


_DISPATCH = {
    PulseKind.V: lambda st, p, tol: apply_v_pulse(st, p.ion, p.theta, p.phi),
    PulseKind.U: lambda st, p, tol: apply_u_pulse(st, p.ion, p.theta, p.phi, tol),
    PulseKind.UAUX: lambda st, p, tol: apply_uaux_pulse(st, p.ion, p.theta, p.phi, tol),
}


def apply_pulse(state: StateVector, pulse: Pulse, leak_tol=None) -> StateVector:
    return _DISPATCH[pulse.kind](state, pulse, leak_tol)


class Measurement(NamedTuple):
    bits: str
    state: StateVector
    aux_leak: bool


_LEVEL_CHAR = "01x"


def _word_levels(word: int, num_ions: int) -> list[int]:
    levels = []
    for _ in range(num_ions):
        word, r = divmod(word, 3)
        levels.append(r)
    return levels[::-1]


def measure_all(state: StateVector, rng: np.random.Generator) -> Measurement:
    """Projective fluorescence readout of every ion; the phonon mode is not read.

    An ion found in Aux is reported as ``'x'`` and sets ``aux_leak``.
    """
    d = state.phonon_dim
    word_probs = state.probabilities().reshape(-1, d).sum(axis=1)
    word_probs = word_probs / word_probs.sum()
    word = int(rng.choice(word_probs.size, p=word_probs))
    levels = _word_levels(word, state.num_ions)
    amps = np.zeros_like(state.amplitudes)
    block = state.amplitudes[word * d:(word + 1) * d]
    amps[word * d:(word + 1) * d] = block / np.linalg.norm(block)
    collapsed = StateVector(state.shape, amps, state.leak_tol)
    bits = "".join(_LEVEL_CHAR[lev] for lev in levels)
    return Measurement(bits, collapsed, IonLevel.AUX in levels)


def sample_counts(state: StateVector, shots: int, rng: np.random.Generator) -> dict[str, int]:
    """Histogram of ``shots`` independent readouts of identically prepared registers."""
    d = state.phonon_dim
    word_probs = state.probabilities().reshape(-1, d).sum(axis=1)
    word_probs = word_probs / word_probs.sum()
    draws = rng.choice(word_probs.size, size=shots, p=word_probs)
    counts = np.bincount(draws, minlength=word_probs.size)
    out = {}
    for word in np.flatnonzero(counts):
        key = "".join(_LEVEL_CHAR[lev] for lev in _word_levels(int(word), state.num_ions))
        out[key] = int(counts[word])
    return dict(sorted(out.items()))


def _as_array(x) -> np.ndarray:
    return np.asarray(getattr(x, "amplitudes", x), dtype=complex).reshape(-1)


def fidelity_up_to_global_phase(a, b) -> float:
    """``|<a|b>|^2`` for normalised states (arrays or state objects)."""
    va, vb = _as_array(a), _as_array(b)
    if va.shape != vb.shape:
        raise ShapeMismatch(f"states of size {va.size} and {vb.size}")
    f = abs(np.vdot(va, vb)) ** 2
    return float(min(1.0, max(0.0, f)))
