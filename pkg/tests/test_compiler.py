import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import embed_gate
from trapion import gates as G
from trapion.circuit import Ccnot, Cnot, Csf, GateCircuit, Not, V
from trapion.compiler import (
    CNOT_POST_PHI,
    CNOT_PRE_PHI,
    LaserParams,
    PulseSchedule,
    compile_circuit,
    count_u_pulses,
    execute,
    lowering_phase,
    schedule_duration,
    single_qubit_pulses,
    v_pulse_duration,
)
from trapion.errors import InputFormatError, ShapeMismatch
from trapion.state import IonLevel, Pulse, PulseKind, RegisterShape, StateVector, apply_pulse

PI = math.pi


def compiled_operator(circuit):
    """Columns: compiled schedule applied to each qubit basis state, read back on Fock 0."""
    L = circuit.num_ions
    schedule = compile_circuit(circuit)
    cols = []
    for k in range(2**L):
        bits = [(k >> (L - 1 - q)) & 1 for q in range(L)]
        s = execute(schedule, StateVector.from_levels(RegisterShape(L), bits))
        cols.append(s.qubit_amplitudes())
    return np.array(cols).T


def test_csf_lowering():
    s = compile_circuit(GateCircuit(2, [Csf(0, 1)]))
    assert s.pulses == (
        Pulse(PulseKind.U, 0, PI, 0.0),
        Pulse(PulseKind.UAUX, 1, 2 * PI, 0.0),
        Pulse(PulseKind.U, 0, PI, 0.0),
    )


def test_cnot_lowering():
    s = compile_circuit(GateCircuit(2, [Cnot(0, 1)]))
    assert [p.kind for p in s.pulses] == [PulseKind.V, PulseKind.U, PulseKind.UAUX, PulseKind.U, PulseKind.V]
    assert [p.theta for p in s.pulses] == [PI / 2, PI, 2 * PI, PI, PI / 2]
    assert [p.ion for p in s.pulses] == [1, 0, 1, 0, 1]
    assert (s.pulses[0].phi, s.pulses[-1].phi) == (CNOT_PRE_PHI, CNOT_POST_PHI)


def test_not_lowering():
    assert compile_circuit(GateCircuit(1, [Not(0)])).pulses == (Pulse(PulseKind.V, 0, PI, 0.0),)
    np.testing.assert_allclose(G.v_matrix(PI, 0), -1j * G.NOT, atol=1e-15)


def test_u_pulse_counts():
    assert count_u_pulses(compile_circuit(GateCircuit(2, [Csf(0, 1)]))) == 3
    assert count_u_pulses(compile_circuit(GateCircuit(2, [Cnot(0, 1)]))) == 3
    assert count_u_pulses(compile_circuit(GateCircuit(2, []))) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(["csf", "cnot", "not", "ccnot"]), max_size=8))
def test_u_pulse_count_is_additive(ops):
    make = {"csf": Csf(0, 1), "cnot": Cnot(1, 2), "not": Not(2), "ccnot": Ccnot(0, 1, 2)}
    gates = [make[o] for o in ops]
    whole = count_u_pulses(compile_circuit(GateCircuit(3, gates)))
    parts = sum(count_u_pulses(compile_circuit(GateCircuit(3, [g]))) for g in gates)
    assert whole == parts
    assert whole >= 3 * sum(o in ("csf", "cnot") for o in ops)


def test_durations():
    laser = LaserParams(1e8, 0.1, 10)
    one_u = PulseSchedule(RegisterShape(10), [Pulse(PulseKind.U, 0, PI, 0.0)])
    t_pi = schedule_duration(one_u, laser)
    assert t_pi == pytest.approx(PI * math.sqrt(10) / 1e7, rel=1e-12)
    assert t_pi == pytest.approx(9.93e-7, rel=1e-3)
    csf = compile_circuit(GateCircuit(10, [Csf(0, 1)]))
    assert schedule_duration(csf, laser) == pytest.approx(3.97e-6, rel=1e-3)
    assert schedule_duration(csf, LaserParams(2e8, 0.1, 10)) == pytest.approx(schedule_duration(csf, laser) / 2)


def test_v_duration_is_diagnostic_only():
    laser = LaserParams(1e8, 0.1, 2)
    cnot = compile_circuit(GateCircuit(2, [Cnot(0, 1)]))
    assert v_pulse_duration(cnot, laser) == pytest.approx(PI / 1e8)
    assert schedule_duration(cnot, laser) == pytest.approx(4 * PI * math.sqrt(2) / 1e7)


def test_duration_needs_matching_ion_count():
    with pytest.raises(ShapeMismatch):
        schedule_duration(compile_circuit(GateCircuit(2, [Csf(0, 1)])), LaserParams(1e8, 0.1, 3))


def test_csf_truth_table():
    for c in (0, 1):
        for t in (0, 1):
            s = execute(compile_circuit(GateCircuit(2, [Csf(0, 1)])), StateVector.from_levels(RegisterShape(2), [c, t]))
            expected = -1 if (c, t) == (1, 1) else 1
            assert abs(s.amplitudes[s.shape.index([c, t], 0)] - expected) < 1e-10
            assert s.phonon_populations()[0] == pytest.approx(1, abs=1e-12)
            assert s.aux_population() < 1e-12


def test_cnot_golden_matrix():
    m = compiled_operator(GateCircuit(2, [Cnot(0, 1)]))
    np.testing.assert_allclose(m, G.CNOT, atol=1e-12)


def test_cnot_twice_is_identity():
    m = compiled_operator(GateCircuit(2, [Cnot(0, 1), Cnot(0, 1)]))
    np.testing.assert_allclose(m, np.eye(4), atol=1e-12)


def test_literal_equal_phase_cnot_is_not_cnot():
    # both V pulses at phi = +pi/2 only reach CNOT up to conditional phases
    s = StateVector.from_levels(RegisterShape(2), [0, 0])
    for p in [Pulse(PulseKind.V, 1, PI / 2, PI / 2), *compile_circuit(GateCircuit(2, [Csf(0, 1)])).pulses,
              Pulse(PulseKind.V, 1, PI / 2, PI / 2)]:
        apply_pulse(s, p)
    assert abs(s.qubit_amplitudes()[0]) < 0.5


@pytest.mark.parametrize("ions", [(0, 1, 2), (2, 0, 1), (1, 2, 0)])
def test_ccnot_matches_toffoli(ions):
    m = compiled_operator(GateCircuit(3, [Ccnot(*ions)]))
    np.testing.assert_allclose(m, lowering_phase(Ccnot(*ions)) * embed_gate(3, list(ions), G.CCNOT), atol=1e-12)


def test_ccnot_pulses_stay_on_the_two_level_bus():
    s = StateVector.from_levels(RegisterShape(3), [1, 1, 0])
    for p in compile_circuit(GateCircuit(3, [Ccnot(0, 1, 2)])).pulses:
        apply_pulse(s, p)
        assert s.max_leakage < 1e-30
    assert s.population(2, IonLevel.ONE) == pytest.approx(1, abs=1e-12)
    assert s.aux_population() < 1e-12


def test_single_qubit_synthesis():
    rng = np.random.default_rng(5)
    for _ in range(200):
        u, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        acc = np.eye(2, dtype=complex)
        for p in single_qubit_pulses(0, u):
            acc = G.v_matrix(p.theta, p.phi) @ acc
        assert abs(np.trace(acc.conj().T @ u)) / 2 == pytest.approx(1, abs=1e-10)


def test_execute_csf_examples():
    sched = compile_circuit(GateCircuit(2, [Csf(0, 1)]))
    s = execute(sched, StateVector.from_levels(RegisterShape(2), [1, 1]))
    assert s.amplitudes[s.shape.index([1, 1])] == pytest.approx(-1)
    s = execute(sched, StateVector.from_levels(RegisterShape(2), [0, 1]))
    assert s.amplitudes[s.shape.index([0, 1])] == pytest.approx(1)


def test_execute_stepping_by_gate():
    sched = compile_circuit(GateCircuit(2, [Not(0), Cnot(0, 1)]))
    s = execute(sched, StateVector(RegisterShape(2)), gates=1)
    assert s.population(0, IonLevel.ONE) == pytest.approx(1)
    assert s.population(1, IonLevel.ONE) == pytest.approx(0)
    assert sched.num_gates == 2
    assert len(sched.gate_pulses(1)) == 5


def test_negative_v_angle_is_normalised():
    s = compile_circuit(GateCircuit(1, [V(0, -1.0, 0.2)]))
    p = s.pulses[0]
    np.testing.assert_allclose(G.v_matrix(p.theta, p.phi), G.v_matrix(-1.0, 0.2), atol=1e-15)


def test_schedule_json_roundtrip():
    sched = compile_circuit(GateCircuit(3, [Cnot(0, 1), Ccnot(0, 1, 2)]))
    doc = json.loads(json.dumps(sched.to_json()))
    assert doc["u_pulse_count"] == count_u_pulses(sched)
    assert PulseSchedule.from_json(doc) == sched


@pytest.mark.parametrize(
    "doc,needle",
    [
        ({"num_ions": 2}, "pulses"),
        ({"num_ions": 2, "pulses": [{"kind": "W", "ion": 0, "theta": 1, "phi": 0}]}, "kind"),
        ({"num_ions": 2, "pulses": [{"kind": "U", "ion": 0, "phi": 0}]}, "theta"),
        ({"num_ions": 2, "pulses": [{"kind": "U", "ion": 4, "theta": 1, "phi": 0}]}, "ion"),
    ],
)
def test_schedule_json_errors(doc, needle):
    with pytest.raises(InputFormatError) as exc:
        PulseSchedule.from_json(doc)
    assert needle in str(exc.value)
