"""Trapped-ion quantum computer simulator, Shor demonstrator and factoring resource models."""

from .circuit import Ccnot, Cnot, Csf, GateCircuit, Not, V, run_gates
from .compiler import LaserParams, PulseSchedule, compile_circuit, count_u_pulses, execute, schedule_duration
from .errors import TrapionError
from .qubits import QubitState, apply_qubit_gate
from .state import Pulse, PulseKind, RegisterShape, StateVector, measure_all, new_ground_state

__all__ = [
    "Ccnot",
    "Cnot",
    "Csf",
    "GateCircuit",
    "LaserParams",
    "Not",
    "Pulse",
    "PulseKind",
    "PulseSchedule",
    "QubitState",
    "RegisterShape",
    "StateVector",
    "TrapionError",
    "V",
    "apply_qubit_gate",
    "compile_circuit",
    "count_u_pulses",
    "execute",
    "measure_all",
    "new_ground_state",
    "run_gates",
    "schedule_duration",
]
