from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from qutes.qir import Circuit, export_qasm
from qutes.qir.circuit import CircuitHandler, RegisterHandle, cx, h, mcp, mcx, reset, swap, x
from qutes.qir.qasm import HEADER, QasmParseError, qasm_names, read_qasm
from qutes.simulator import statevector_of
from strategies import circuits


def body(text):
    return text.splitlines()[len(HEADER):]


def test_x_then_measure():
    hd = CircuitHandler()
    q = hd.declare_register("q", 1)
    hd.push_op(x(q[0]))
    hd.push_measure(q.qubits)
    assert body(export_qasm(hd.assemble())) == ["qubit[1] q;", "bit[1] c;", "x q[0];", "c[0] = measure q[0];"]


def test_multi_controlled_syntax():
    hd = CircuitHandler()
    a = hd.declare_register("a", 3)
    hd.push_op(mcx([a[0], a[1]], a[2]))
    hd.push_op(mcp([a[0]], a[2], 0.5))
    hd.push_op(cx(a[0], a[1]))
    hd.push_op(swap(a[0], a[2]))
    lines = body(export_qasm(hd.assemble()))
    assert "ctrl(2) @ x a[0], a[1], a[2];" in lines
    assert "ctrl(1) @ p(0.5) a[0], a[2];" in lines
    assert "cx a[0], a[1];" in lines and "swap a[0], a[2];" in lines


def test_empty_circuit_is_header_only():
    assert export_qasm(Circuit()) == "\n".join(HEADER) + "\n"


def test_names_are_mangled_and_unique():
    c = Circuit((RegisterHandle(0, "x", 1), RegisterHandle(1, "x_", 1), RegisterHandle(2, "1a", 1),
                 RegisterHandle(3, "π", 1)))
    regs, _ = qasm_names(c)
    names = list(regs.values())
    assert len(set(names)) == 4
    assert names[0] != "x" and names[2].startswith("_")
    assert all(n.isidentifier() and n.isascii() for n in names)


def test_export_is_deterministic():
    hd = CircuitHandler()
    a = hd.declare_register("a", 2)
    hd.push_op(h(a[0]))
    c = hd.assemble()
    assert export_qasm(c) == export_qasm(c)


def test_round_trip_with_measure_and_reset():
    hd = CircuitHandler()
    a = hd.declare_register("a", 2)
    hd.push_op(h(a[0]))
    hd.push_measure(a.qubits)
    hd.push_op(reset(a[1]))
    c = hd.assemble()
    back = read_qasm(export_qasm(c))
    assert back.ops == c.ops and [s.width for s in back.slots] == [2]


@pytest.mark.parametrize("text", [
    "",
    "qubit[1] q;",
    "OPENQASM 3.0; qubit[1] q; foo q[0];",
    "OPENQASM 3.0; qubit[1] q; x q[1];",
    "OPENQASM 3.0; qubit[1] q; x r[0];",
    "OPENQASM 3.0; qubit[2] q; ctrl(2) @ x q[0], q[1];",
    "OPENQASM 3.0; qubit[2] q; bit[2] c; c[0] = measure q[0];",
])
def test_reader_errors(text):
    with pytest.raises(QasmParseError):
        read_qasm(text)


@given(circuits(max_qubits=4, max_ops=25))
def test_round_trip_preserves_ops_and_state(circuit):
    text = export_qasm(circuit)
    back = read_qasm(text)
    assert export_qasm(back) == text
    a = statevector_of(circuit).amplitudes
    b = statevector_of(back).amplitudes
    assert np.allclose(a, b, atol=1e-9)
