"""Lowering of gate circuits to laser-pulse schedules on the phonon bus.

Operator products such as ``U_c(pi,0) U_t^aux(2pi,0) U_c(pi,0)`` are read
right to left; schedules list pulses in the order they are fired.

Phase conventions (all verified against the ideal matrices in the tests):

* CSF is exact: ``diag(1, 1, 1, -1)`` with no global phase.
* CNOT fires ``V_t(pi/2, -pi/2)``, CSF, ``V_t(pi/2, +pi/2)``, which is exactly
  the CNOT matrix. Using ``phi = pi/2`` for both carrier pulses would leave the
  target rotated by ``Y`` when the control is ``|0>``.
* NOT lowers to ``V(pi, 0) = -i NOT``.
* CCNOT uses the six-CNOT Toffoli network; its one-qubit factors are
  synthesised from carrier pulses and hold up to a global phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import gates as G
from .circuit import Ccnot, Cnot, Csf, GateCircuit, Not, V
from .errors import IndexOutOfRange, InputFormatError, ShapeMismatch
from .state import Pulse, PulseKind, RegisterShape, StateVector, apply_pulse

PI = math.pi

CNOT_PRE_PHI = -PI / 2
CNOT_POST_PHI = PI / 2

_T = G.phase_gate(PI / 4)
_TDG = G.phase_gate(-PI / 4)


@dataclass(frozen=True)
class LaserParams:
    rabi_frequency: float
    lamb_dicke: float
    num_ions: int

    def __post_init__(self):
        if not self.rabi_frequency > 0:
            raise ValueError("Rabi frequency must be positive")
        if not 0 < self.lamb_dicke < 1:
            raise ValueError("Lamb-Dicke parameter must lie in (0, 1)")
        if self.num_ions < 1:
            raise ValueError("need at least one ion")

    def u_pulse_time(self, theta: float) -> float:
        """Sideband coupling is eta*Omega/(2 sqrt(L)), so area theta takes theta*sqrt(L)/(eta*Omega)."""
        return theta * math.sqrt(self.num_ions) / (self.lamb_dicke * self.rabi_frequency)

    def v_pulse_time(self, theta: float) -> float:
        return theta / self.rabi_frequency


@dataclass(frozen=True)
class PulseSchedule:
    shape: RegisterShape
    pulses: tuple = ()
    # gate k owns pulses[gate_boundaries[k]:gate_boundaries[k + 1]]
    gate_boundaries: tuple = field(default=(0,))

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        object.__setattr__(self, "gate_boundaries", tuple(self.gate_boundaries))
        for p in self.pulses:
            if p.ion >= self.shape.num_ions:
                raise IndexOutOfRange(f"pulse on ion {p.ion} outside register of {self.shape.num_ions}")

    @property
    def num_gates(self) -> int:
        return len(self.gate_boundaries) - 1

    def gate_pulses(self, k: int) -> tuple:
        return self.pulses[self.gate_boundaries[k]:self.gate_boundaries[k + 1]]

    def to_json(self) -> dict:
        return {
            "num_ions": self.shape.num_ions,
            "pulses": [p.to_dict() for p in self.pulses],
            "u_pulse_count": count_u_pulses(self),
            "gate_boundaries": list(self.gate_boundaries),
        }

    @classmethod
    def from_json(cls, obj, phonon_dim: int = 2) -> PulseSchedule:
        if not isinstance(obj, dict):
            raise InputFormatError("schedule document must be a JSON object")
        n = obj.get("num_ions")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise InputFormatError(f"schedule: field 'num_ions' must be a positive integer, got {n!r}")
        raw = obj.get("pulses")
        if not isinstance(raw, list):
            raise InputFormatError("schedule: field 'pulses' must be a list")
        pulses = []
        for k, p in enumerate(raw):
            where = f"pulses[{k}]"
            if not isinstance(p, dict):
                raise InputFormatError(f"{where}: expected an object")
            try:
                kind = PulseKind(p.get("kind"))
            except ValueError:
                raise InputFormatError(f"{where}: field 'kind' must be one of V, U, UAux") from None
            ion = p.get("ion")
            if isinstance(ion, bool) or not isinstance(ion, int) or not 0 <= ion < n:
                raise InputFormatError(f"{where}: field 'ion' must be an ion index below {n}")
            vals = []
            for key in ("theta", "phi"):
                v = p.get(key)
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise InputFormatError(f"{where}: field '{key}' must be a finite number")
                vals.append(float(v))
            if vals[0] < 0:
                raise InputFormatError(f"{where}: field 'theta' must be >= 0")
            pulses.append(Pulse(kind, ion, vals[0], vals[1]))
        bounds = obj.get("gate_boundaries", [0, len(pulses)])
        if (
            not isinstance(bounds, list)
            or not bounds
            or bounds[0] != 0
            or bounds[-1] != len(pulses)
            or any(b > a for a, b in zip(bounds[1:], bounds))
        ):
            raise InputFormatError("schedule: field 'gate_boundaries' must rise from 0 to the pulse count")
        return cls(RegisterShape(n, phonon_dim), pulses, bounds)


def csf_pulses(control: int, target: int) -> list[Pulse]:
    return [
        Pulse(PulseKind.U, control, PI, 0.0),
        Pulse(PulseKind.UAUX, target, 2 * PI, 0.0),
        Pulse(PulseKind.U, control, PI, 0.0),
    ]


def cnot_pulses(control: int, target: int) -> list[Pulse]:
    return [
        Pulse(PulseKind.V, target, PI / 2, CNOT_PRE_PHI),
        *csf_pulses(control, target),
        Pulse(PulseKind.V, target, PI / 2, CNOT_POST_PHI),
    ]


def _rz_pulses(ion: int, alpha: float) -> list[Pulse]:
    # V(pi, a/2) V(pi, 0) = -Rz(a)
    alpha = math.remainder(alpha, 2 * PI)
    if abs(alpha) < 1e-15:
        return []
    return [Pulse(PulseKind.V, ion, PI, 0.0), Pulse(PulseKind.V, ion, PI, alpha / 2)]


def _ry_pulses(ion: int, gamma: float) -> list[Pulse]:
    # V(g, pi/2) = Ry(g)
    gamma = math.remainder(gamma, 4 * PI)
    if abs(gamma) < 1e-15:
        return []
    if gamma > 0:
        return [Pulse(PulseKind.V, ion, gamma, PI / 2)]
    return [Pulse(PulseKind.V, ion, -gamma, -PI / 2)]


def single_qubit_pulses(ion: int, matrix) -> list[Pulse]:
    """Carrier pulses reproducing a 2x2 unitary up to global phase (Z-Y-Z Euler angles)."""
    u = np.asarray(matrix, dtype=complex)
    u = u / cmath.sqrt(np.linalg.det(u))
    a, b = u[0, 0], u[1, 0]
    gamma = 2 * math.atan2(abs(b), abs(a))
    arg_a = cmath.phase(a) if abs(a) > 1e-12 else 0.0
    arg_b = cmath.phase(b) if abs(b) > 1e-12 else 0.0
    # u = Rz(beta) Ry(gamma) Rz(delta)
    beta = arg_b - arg_a
    delta = -arg_a - arg_b
    return _rz_pulses(ion, delta) + _ry_pulses(ion, gamma) + _rz_pulses(ion, beta)


def toffoli_network(a: int, b: int, t: int) -> list[tuple]:
    """Six-CNOT Toffoli network as ('1q', ion, matrix) / ('cnot', c, t) steps."""
    h = G.HADAMARD
    return [
        ("1q", t, h),
        ("cnot", b, t),
        ("1q", t, _TDG),
        ("cnot", a, t),
        ("1q", t, _T),
        ("cnot", b, t),
        ("1q", t, _TDG),
        ("cnot", a, t),
        ("1q", b, _T),
        ("1q", t, _T),
        ("1q", t, h),
        ("cnot", a, b),
        ("1q", a, _T),
        ("1q", b, _TDG),
        ("cnot", a, b),
    ]


def ccnot_pulses(a: int, b: int, t: int) -> list[Pulse]:
    pulses: list[Pulse] = []
    pending: dict[int, np.ndarray] = {}

    def flush(ion):
        if ion in pending:
            pulses.extend(single_qubit_pulses(ion, pending.pop(ion)))

    for step in toffoli_network(a, b, t):
        if step[0] == "1q":
            _, ion, m = step
            pending[ion] = m @ pending.get(ion, np.eye(2))
        else:
            _, c, tt = step
            flush(c)
            flush(tt)
            pulses.extend(cnot_pulses(c, tt))
    for ion in sorted(pending):
        flush(ion)
    return pulses


def lower_gate(gate) -> list[Pulse]:
    if isinstance(gate, Csf):
        return csf_pulses(gate.control, gate.target)
    if isinstance(gate, Cnot):
        return cnot_pulses(gate.control, gate.target)
    if isinstance(gate, Not):
        return [Pulse(PulseKind.V, gate.ion, PI, 0.0)]
    if isinstance(gate, V):
        if gate.theta < 0:
            return [Pulse(PulseKind.V, gate.ion, -gate.theta, gate.phi + PI)]
        return [Pulse(PulseKind.V, gate.ion, gate.theta, gate.phi)]
    if isinstance(gate, Ccnot):
        return ccnot_pulses(gate.control1, gate.control2, gate.target)
    raise TypeError(f"cannot lower {gate!r}")


NOT_PHASE = -1j
CCNOT_PHASE = cmath.exp(-1j * PI / 8)


def lowering_phase(gate) -> complex:
    """Global phase of a gate's pulse lowering relative to its ideal matrix.

    ``V(pi, 0)`` is ``-i`` times NOT; the Toffoli network's Euler-angle
    synthesis leaves ``exp(-i pi/8)``; every other lowering is exact.
    """
    if isinstance(gate, Not):
        return NOT_PHASE
    if isinstance(gate, Ccnot):
        return CCNOT_PHASE
    return 1.0 + 0j


def compile_circuit(circuit: GateCircuit, phonon_dim: int = 2) -> PulseSchedule:
    pulses: list[Pulse] = []
    bounds = [0]
    for g in circuit.gates:
        pulses.extend(lower_gate(g))
        bounds.append(len(pulses))
    return PulseSchedule(RegisterShape(circuit.num_ions, phonon_dim), pulses, bounds)


def count_u_pulses(schedule: PulseSchedule) -> int:
    return sum(1 for p in schedule.pulses if p.is_sideband)


def _check_laser(schedule, laser):
    if laser.num_ions != schedule.shape.num_ions:
        raise ShapeMismatch(f"laser set up for {laser.num_ions} ions, schedule has {schedule.shape.num_ions}")


def schedule_duration(schedule: PulseSchedule, laser: LaserParams) -> float:
    """Wall-clock seconds of the sideband pulses; carrier pulses are not counted."""
    _check_laser(schedule, laser)
    return sum(laser.u_pulse_time(p.theta) for p in schedule.pulses if p.is_sideband)


def v_pulse_duration(schedule: PulseSchedule, laser: LaserParams) -> float:
    """Diagnostic carrier-pulse time, ``theta / Omega`` per V pulse."""
    _check_laser(schedule, laser)
    return sum(laser.v_pulse_time(p.theta) for p in schedule.pulses if not p.is_sideband)


def execute(schedule: PulseSchedule, state: StateVector, gates: int | None = None) -> StateVector:
    """Fire the schedule's pulses on ``state`` in place.

    ``gates`` limits execution to the first that many source gates.
    """
    if state.shape.num_ions != schedule.shape.num_ions:
        raise ShapeMismatch(f"state has {state.num_ions} ions, schedule needs {schedule.shape.num_ions}")
    stop = len(schedule.pulses) if gates is None else schedule.gate_boundaries[gates]
    for p in schedule.pulses[:stop]:
        apply_pulse(state, p)
    return state
