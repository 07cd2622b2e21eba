from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import circuit_matrix, circuit_state
from qutes.qir import Circuit
from qutes.qir.circuit import CircuitHandler, RegisterHandle, cx, h, measure, reset, x
from qutes.simulator import (
    QubitCapExceeded,
    ShotHistogram,
    SimulationError,
    StateVector,
    apply_gate,
    normalize_phase,
    run,
    shot_rng,
    statevector_of,
)
from strategies import circuits


def unitary_of(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    cols = []
    for i in range(1 << n):
        s = StateVector.zero(n)
        s.amplitudes[:] = 0
        s.amplitudes[i] = 1
        for op in circuit.ops:
            apply_gate(s, op, circuit.layout())
        cols.append(s.amplitudes)
    return np.array(cols).T


def bell(measured=True):
    hd = CircuitHandler()
    q = hd.declare_register("q", 2)
    hd.push_op(h(q[0]))
    hd.push_op(cx(q[0], q[1]))
    if measured:
        hd.push_measure(q.qubits)
    return hd.assemble()


@given(circuits(max_qubits=4, max_ops=30))
def test_matches_kronecker_oracle(circuit):
    assert np.allclose(statevector_of(circuit).amplitudes, circuit_state(circuit), atol=1e-9)


@given(circuits(max_qubits=3, max_ops=15))
def test_unitary_matches_oracle_and_is_unitary(circuit):
    u = unitary_of(circuit)
    assert np.allclose(u, circuit_matrix(circuit.ops, circuit.num_qubits), atol=1e-9)
    assert np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-9)


@given(circuits(max_qubits=6, max_ops=40))
def test_norm_preserved(circuit):
    assert abs(statevector_of(circuit).norm() - 1) < 1e-9


def test_qubit_zero_is_least_significant():
    c = Circuit((RegisterHandle(0, "r", 3),), (x(RegisterHandle(0, "r", 3)[0]),), ())
    assert np.argmax(np.abs(statevector_of(c).amplitudes)) == 1


def test_layout_places_registers_consecutively():
    a, b = RegisterHandle(0, "a", 2), RegisterHandle(1, "b", 1)
    c = Circuit((a, b), (x(b[0]),), ())
    assert np.argmax(np.abs(statevector_of(c).amplitudes)) == 4


def test_bell_histogram():
    hist = run(bell(), shots=2000, seed=5)
    assert set(hist.counts) == {"00", "11"}
    assert abs(hist.probability("00") - 0.5) < 0.05 and hist.shots == 2000


def test_x_is_deterministic():
    hd = CircuitHandler()
    q = hd.declare_register("q", 1)
    hd.push_op(x(q[0]))
    hd.push_measure(q.qubits)
    assert run(hd.assemble(), shots=50).counts == {"1": 50}


def test_hadamard_statistics():
    hd = CircuitHandler()
    q = hd.declare_register("q", 1)
    hd.push_op(h(q[0]))
    hd.push_measure(q.qubits)
    n = 10_000
    ones = run(hd.assemble(), shots=n, seed=11).counts.get("1", 0)
    assert abs(ones - n / 2) <= 4 * math.sqrt(n / 4)


def test_seeded_runs_are_identical():
    assert run(bell(), 300, seed=9).counts == run(bell(), 300, seed=9).counts
    assert run(bell(), 300, seed=9).counts != run(bell(), 300, seed=10).counts


def test_mid_circuit_measurement_path():
    # reset forces the per-shot path; outcomes must still be consistent
    hd = CircuitHandler()
    q = hd.declare_register("q", 2)
    hd.push_op(h(q[0]))
    hd.push_measure([q[0]])
    hd.push_op(cx(q[0], q[1]))
    hd.push_op(reset(q[0]))
    hd.push_measure([q[1]])
    hist = run(hd.assemble(), 400, seed=3)
    assert set(hist.counts) == {"00", "11"}


def test_slots_key_order():
    hd = CircuitHandler()
    q = hd.declare_register("q", 2)
    hd.push_op(x(q[1]))
    hd.push_measure([q[0]])
    hd.push_measure([q[1]])
    assert run(hd.assemble(), 3).counts == {"10": 3}


def test_qubit_cap():
    big = Circuit((RegisterHandle(0, "r", 30),), (), ())
    with pytest.raises(QubitCapExceeded):
        run(big, 1)
    with pytest.raises(QubitCapExceeded):
        StateVector.zero(5, cap=4)
    s = StateVector.zero(3, cap=4)
    with pytest.raises(QubitCapExceeded):
        s.extend(2, cap=4)


def test_statevector_of_rejects_measurement():
    with pytest.raises(SimulationError):
        statevector_of(bell())
    assert np.allclose(np.abs(statevector_of(bell(False)).amplitudes) ** 2, [0.5, 0, 0, 0.5])


def test_measure_op_needs_run():
    r = RegisterHandle(0, "r", 1)
    with pytest.raises(SimulationError):
        apply_gate(StateVector.zero(1), measure([r[0]], 0))


def test_extend_keeps_amplitudes():
    s = StateVector.zero(1)
    apply_gate(s, h(RegisterHandle(0, "r", 1)[0]))
    s.extend(1)
    assert s.n == 2 and np.allclose(s.amplitudes, [1 / math.sqrt(2)] * 2 + [0, 0])


def test_marginal_and_definite_value():
    s = statevector_of(bell(False))
    assert np.allclose(s.marginal([0]), [0.5, 0.5])
    assert np.allclose(s.marginal([1, 0]), [0.5, 0, 0, 0.5])
    assert s.definite_value([0]) is None
    t = StateVector.zero(2)
    apply_gate(t, x(RegisterHandle(0, "r", 2)[1]))
    assert t.definite_value([0, 1]) == 2


@given(st.integers(0, 2**32), st.integers(0, 100))
def test_measurement_collapses(seed, shot):
    s = statevector_of(bell(False))
    bits = s.measure([0], shot_rng(seed, shot))
    assert s.definite_value([0, 1]) == (3 if bits == [1] else 0)
    assert abs(s.norm() - 1) < 1e-12


def test_histogram_merge():
    a = ShotHistogram({"0": 3, "1": 1}, 4)
    b = ShotHistogram({"1": 2}, 2)
    m = a.merge(b)
    assert m.counts == {"0": 3, "1": 3} and m.shots == 6 and m.probability("1") == 0.5
    assert ShotHistogram().probability("0") == 0.0


def test_normalize_phase():
    v = np.array([0, 1j, 1j]) / math.sqrt(2)
    assert np.allclose(normalize_phase(v), [0, 1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(normalize_phase(np.zeros(2)), 0)


def test_shot_rng_streams_differ_by_shot():
    assert shot_rng(1, 0).random() != shot_rng(1, 1).random()
    assert shot_rng(1, 0).random() == shot_rng(1, 0).random()
