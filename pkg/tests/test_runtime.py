from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import find_all, rotate_left, rotate_right
from qutes.diagnostics import CompileError
from qutes.pipeline import run_source
from qutes.qir.circuit import Gate
from qutes.runtime import RunConfig


def run(source, seed=0, **kw):
    return run_source(source, RunConfig(seed=seed, **kw), "t.qut")


def out(source, seed=0, **kw):
    result = run(source, seed, **kw)
    assert result.exit == 0, result.error and result.error.render()
    return result.stdout


def fails(source, code):
    result = run(source)
    assert result.exit == 2 and result.error.code == code, result.error and result.error.render()
    return result


# -- worked examples --------------------------------------------------------


def test_seeded_superposition_measurement():
    result = run("qubit q = [0, 1]q; bool b = q; print b;", seed=42)
    assert result.stdout == "true"
    (m,) = result.measurements
    assert m.register == "q" and m.bits == "1" and m.value is True


def test_arithmetic_and_printing():
    assert out("println 1 + 2 * 3; print -7 / 2; print 7 % -3;") == "7\n-31"
    assert out("println 1.5 * 2; println 2 ** 10; println true; println [1, 2];") == "3.0\n1024\ntrue\n[1, 2]\n"
    assert out('println "ab" + "c";') == "abc\n"


def test_while_until_measured_zero():
    assert out("qubit c = 1q; int n = 0; while c { c = 0q; n = n + 1; } print n;") == "1"


def test_quantum_addition():
    assert out("quint a = 1q; quint b = 2q; quint c = a + b; int r = c; print r;") == "3"
    assert out("quint a = 2q; a = a + 1; int r = a; print r;") == "3"
    assert out("quint a = 3q; quint b = a + 4; int r = b; print r;") == "7"
    # the sum register is as wide as the widest operand, so addition wraps
    assert out("quint a = 3q; quint b = a + 2; int r = b; print r;") == "1"


def test_shifts():
    assert out("quint a = 13q; a = a << 1; int r = a; print r;") == "11"
    assert out("quint a = 13q; a = a >> 1; int r = a; print r;") == "14"
    assert out('qustring s = "0011"q; s = s << 3; string r = s; print r;') == "1001"


def test_substring_search():
    assert out('qustring t = "0010110"q; int i = "101" in t; print i;') == "2"
    assert out('qustring t = "0010110"q; int i = "000" in t; print i;') == "-1"
    assert out('qustring t = "01"q; int i = "0101" in t; print i;') == "-1"
    assert out('string t = "0110"; int i = "11" in t; print i;') == "1"


def test_functions_and_recursion():
    src = "int fact(int n) { if n <= 1 { return 1; } return n * fact(n - 1); } print fact(10);"
    assert out(src) == "3628800"
    assert out("void f(qubit b) { not b; } qubit q = 0q; f(q); bool r = q; print r;") == "true"


def test_foreach_and_arrays():
    assert out("int s = 0; foreach x in [1, 2, 3] { s = s + x; } print s;") == "6"
    assert out("int[] a = [1, 2]; a[1] = 5; print a;") == "[1, 5]"
    assert out("int[][] m = [[1], [2, 3]]; print m[1][0];") == "2"


def test_short_circuit():
    assert out("int[] a = [1]; bool b = false and a[5] == 1; print b;") == "false"
    assert out("int[] a = [1]; bool b = true or a[5] == 1; print b;") == "true"


def test_classical_conversions():
    assert out("float f = 3; print f;") == "3.0"
    assert out("int i = true; print i;") == "1"


def test_bell_pairs_agree_over_seeds():
    for seed in range(40):
        a, b = out("qubit a = 0q; qubit b = 0q; hadamard a; mcx(a, b); bool x = a; bool y = b; println x; println y;",
                   seed).splitlines()
        assert a == b


# -- runtime errors ---------------------------------------------------------


def test_runtime_errors():
    fails("print 1 / 0;", "R007")
    fails("print 1 % 0;", "R007")
    fails("int[] a = [1]; print a[3];", "R004")
    fails("print 9223372036854775807 + 1;", "R003")
    fails("print 2 ** -1;", "R001")
    fails("int f(int n) { return f(n); } print f(1);", "R005")
    fails("int f(int n) { if n > 0 { return 1; } } print f(0);", "R006")


def test_qubit_cap_is_a_runtime_error():
    result = run("quint a = 255q;", qubit_cap=4)
    assert result.exit == 2 and result.error.code == "R002"


def test_output_before_error_is_kept():
    result = fails("print 1; print 1 / 0;", "R007")
    assert result.stdout == "1"


def test_compile_errors_raise():
    with pytest.raises(CompileError):
        run("int x = ;")


# -- invariants -------------------------------------------------------------


def test_classical_program_uses_no_qubits():
    result = run("int s = 0; int i = 0; while i < 5 { s = s + i; i = i + 1; } print s;")
    assert result.circuit.num_qubits == 0 and result.circuit.ops == () and result.measurements == []


def test_one_measurement_per_quantum_read():
    result = run("qubit a = 1q; qubit b = 0q; bool x = a; bool y = b; bool z = a;")
    assert len(result.measurements) == 3
    measures = [op for op in result.circuit.ops if op.gate is Gate.MEASURE]
    assert len(measures) == 3 and [m.slot for m in result.measurements] == [0, 1, 2]


@given(st.integers(0, 2**63))
@settings(max_examples=30)
def test_repeated_measurement_is_consistent(seed):
    result = run("quint a = [0, 1, 2, 3]q; int x = a; int y = a; print x; print y;", seed)
    x, y = result.measurements
    assert x.value == y.value


@given(st.integers(0, 2**63))
@settings(max_examples=20)
def test_runs_are_deterministic_per_seed(seed):
    src = "quint a = [0, 5, 6]q; qubit b = [0, 1]q; hadamard b; int x = a; bool y = b; print x; print y;"
    r1, r2 = run(src, seed), run(src, seed)
    assert r1.stdout == r2.stdout and r1.circuit == r2.circuit
    assert [m.to_json() for m in r1.measurements] == [m.to_json() for m in r2.measurements]


def test_superposition_outcomes_cover_the_support():
    seen = {run("quint a = [1, 4, 6]q; int x = a; print x;", s).stdout for s in range(60)}
    assert seen == {"1", "4", "6"}


def test_op_ledger_records_program_gates():
    result = run("qubit a = 0q; qubit b = 0q; hadamard a; mcx(a, b); pauliz b;")
    gates = [op.gate for op in result.circuit.ops]
    assert gates == [Gate.H, Gate.MCX, Gate.Z]
    assert [r.name for r in result.circuit.registers] == ["a", "b"]


@given(st.integers(1, 5).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, 2**w - 1), st.integers(0, 12))))
@settings(max_examples=40)
def test_quint_rotation_program(case):
    w, v, k = case
    for op, ref in (("<<", rotate_left), (">>", rotate_right)):
        src = f"quint a = {2**w - 1}q; a = {v}q; a = a {op} {k}; int r = a; print r;"
        assert out(src) == str(ref(v, k, w))


@given(st.text("01", min_size=2, max_size=7).flatmap(
    lambda t: st.tuples(st.just(t), st.integers(1, len(t)).flatmap(
        lambda m: st.integers(0, len(t) - m).map(lambda i: t[i:i + m])))))
@settings(max_examples=25)
def test_in_returns_a_match_position(case):
    text, pattern = case
    result = out(f'qustring t = "{text}"q; int i = "{pattern}" in t; print i;')
    pos = int(result)
    matches = find_all(text, pattern)
    assert pos in matches or (pos == -1 and len(matches) > 1)


def test_foreach_over_qubits_logs_one_gate_each():
    result = run("qubit[] qs = [0q, 0q, 0q]; foreach b in qs { hadamard b; }")
    assert [op.gate for op in result.circuit.ops] == [Gate.H] * 3
    assert len({op.targets[0] for op in result.circuit.ops}) == 3
