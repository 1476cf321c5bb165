"""Hardware-independent gate circuits and their gate-level execution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import gates as G
from .errors import IndexOutOfRange, InputFormatError
from .qubits import QubitState, apply_qubit_gate


@dataclass(frozen=True)
class Not:
    ion: int

    @property
    def ions(self):
        return (self.ion,)


@dataclass(frozen=True)
class V:
    ion: int
    theta: float
    phi: float

    @property
    def ions(self):
        return (self.ion,)


@dataclass(frozen=True)
class Csf:
    control: int
    target: int

    @property
    def ions(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    @property
    def ions(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class Ccnot:
    control1: int
    control2: int
    target: int

    @property
    def ions(self):
        return (self.control1, self.control2, self.target)


Gate = Union[Not, V, Csf, Cnot, Ccnot]


def gate_matrix(gate: Gate) -> np.ndarray:
    """Ideal unitary of ``gate`` on its ``ions`` (in that order)."""
    if isinstance(gate, Not):
        return G.NOT
    if isinstance(gate, V):
        return G.v_matrix(gate.theta, gate.phi)
    if isinstance(gate, Csf):
        return G.CSF
    if isinstance(gate, Cnot):
        return G.CNOT
    if isinstance(gate, Ccnot):
        return G.CCNOT
    raise TypeError(f"not a gate: {gate!r}")


@dataclass(frozen=True)
class GateCircuit:
    num_ions: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.num_ions < 1:
            raise ValueError("a circuit needs at least one ion")
        object.__setattr__(self, "gates", tuple(self.gates))
        for k, g in enumerate(self.gates):
            ions = g.ions
            if len(set(ions)) != len(ions):
                raise IndexOutOfRange(f"gate {k} ({type(g).__name__}) repeats an ion: {ions}")
            for i in ions:
                if not 0 <= i < self.num_ions:
                    raise IndexOutOfRange(f"gate {k} ({type(g).__name__}) uses ion {i} >= {self.num_ions}")

    def __len__(self):
        return len(self.gates)

    def to_json(self) -> dict:
        return {"num_ions": self.num_ions, "gates": [gate_to_json(g) for g in self.gates]}

    @classmethod
    def from_json(cls, obj) -> GateCircuit:
        if not isinstance(obj, dict):
            raise InputFormatError("circuit document must be a JSON object")
        n = _int_field(obj, "num_ions", "circuit")
        raw = obj.get("gates")
        if not isinstance(raw, list):
            raise InputFormatError("field 'gates' must be a list")
        gates = [gate_from_json(g, f"gates[{k}]") for k, g in enumerate(raw)]
        try:
            return cls(n, gates)
        except (IndexOutOfRange, ValueError) as exc:
            raise InputFormatError(str(exc)) from exc


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Not):
        return {"op": "NOT", "ion": g.ion}
    if isinstance(g, V):
        return {"op": "V", "ion": g.ion, "theta": g.theta, "phi": g.phi}
    if isinstance(g, Csf):
        return {"op": "CSF", "control": g.control, "target": g.target}
    if isinstance(g, Cnot):
        return {"op": "CNOT", "control": g.control, "target": g.target}
    return {"op": "CCNOT", "controls": [g.control1, g.control2], "target": g.target}


def _int_field(obj, key, where):
    if key not in obj:
        raise InputFormatError(f"{where}: missing field '{key}'")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise InputFormatError(f"{where}: field '{key}' must be an integer, got {val!r}")
    return val


def _float_field(obj, key, where):
    if key not in obj:
        raise InputFormatError(f"{where}: missing field '{key}'")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise InputFormatError(f"{where}: field '{key}' must be a finite number, got {val!r}")
    return float(val)


def gate_from_json(obj, where: str = "gate") -> Gate:
    if not isinstance(obj, dict):
        raise InputFormatError(f"{where}: expected an object")
    op = obj.get("op")
    if not isinstance(op, str):
        raise InputFormatError(f"{where}: missing or non-string field 'op'")
    op = op.upper()
    if op == "NOT":
        return Not(_int_field(obj, "ion", where))
    if op == "V":
        return V(_int_field(obj, "ion", where), _float_field(obj, "theta", where), _float_field(obj, "phi", where))
    if op in ("CSF", "CNOT"):
        cls = Csf if op == "CSF" else Cnot
        return cls(_int_field(obj, "control", where), _int_field(obj, "target", where))
    if op == "CCNOT":
        controls = obj.get("controls")
        if not (isinstance(controls, list) and len(controls) == 2):
            raise InputFormatError(f"{where}: field 'controls' must be a list of two ion indices")
        c1 = _int_field({"controls[0]": controls[0]}, "controls[0]", where)
        c2 = _int_field({"controls[1]": controls[1]}, "controls[1]", where)
        return Ccnot(c1, c2, _int_field(obj, "target", where))
    raise InputFormatError(f"{where}: unknown value for field 'op': {obj.get('op')!r}")


def run_gates(circuit: GateCircuit, qstate: QubitState | None = None) -> QubitState:
    """Execute ``circuit`` on the gate-level backend."""
    if qstate is None:
        qstate = QubitState(circuit.num_ions)
    elif qstate.num_qubits != circuit.num_ions:
        raise IndexOutOfRange(f"state has {qstate.num_qubits} qubits, circuit needs {circuit.num_ions}")
    for g in circuit.gates:
        apply_qubit_gate(qstate, g.ions, gate_matrix(g))
    return qstate
