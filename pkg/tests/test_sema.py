from __future__ import annotations

import pytest
from hypothesis import given

from qutes.frontend import ast, parse_program
from qutes.qir.circuit import BasisValue, UniformSuperposition
from qutes.sema import analyze, build_symbol_table
from qutes.sema.symbols import ResolveError, ScopeKind, SymbolKind, resolve
from qutes.sema.types import BOOL, INT, QUBIT, QUINT, QUSTRING, STRING
from strategies import programs


def parsed(source):
    program, diags = parse_program(source, "t.qut")
    assert not diags
    return program


def table_of(source):
    return build_symbol_table(parsed(source))


def checked(source):
    typed, diags = analyze(parsed(source))
    return typed, [d.code for d in diags]


def clean(source):
    typed, codes = checked(source)
    assert codes == []
    return typed


def decl(typed, name):
    return next(n for n in ast.walk(typed.program) if isinstance(n, ast.VarDecl) and n.name == name)


# -- symbol table -----------------------------------------------------------


def test_qubit_register_width_one():
    t = table_of("qubit q = 1q;")
    sym = t.root.bindings["q"]
    assert sym.declared_type == QUBIT
    assert sym.register.width == 1 and sym.register.initial_state == BasisValue(1)


def test_quint_literal_width_from_bit_length():
    t = table_of("quint a = 3q;")
    assert t.root.bindings["a"].register.width == 2


def test_superposition_register():
    t = table_of("quint a = [0, 5]q; qustring s = \"0110\"q;")
    a = t.root.bindings["a"].register
    assert a.width == 3 and a.initial_state == UniformSuperposition((0, 5))
    s = t.root.bindings["s"].register
    assert s.width == 4 and s.initial_state == BasisValue(6)


def test_classical_types_have_no_register():
    t = table_of("int a = 3; string s = \"x\";")
    assert t.root.bindings["a"].register is None and t.root.bindings["s"].register is None


def test_duplicate_in_same_scope():
    codes = [d.code for d in table_of("int x = 1; int x = 2;").diagnostics]
    assert codes == ["S001"]


def test_shadowing_in_nested_block_is_allowed():
    t = table_of("int x = 1; { int x = 2; }")
    assert t.diagnostics == []


def test_function_visible_from_nested_block_before_definition():
    typed = clean("void g() { { f(1); } } void f(int a) { }")
    call = next(n for n in ast.walk(typed.program) if isinstance(n, ast.Call))
    assert typed.symbol_of(call).kind is SymbolKind.FUNCTION


def test_use_before_declaration_is_unresolved():
    _, codes = checked("int y = x; int x = 1;")
    assert codes == ["S002"]


def test_self_reference_in_initializer_is_unresolved():
    _, codes = checked("int x = x + 1;")
    assert codes == ["S002"]


def test_resolve_picks_innermost():
    program = parsed("int x = 1; void f(bool x) { print x; }")
    t = build_symbol_table(program)
    fn = program.items[1]
    scope = t.scope_of(fn)
    assert resolve("x", scope).kind is SymbolKind.PARAMETER
    assert resolve("x", t.root).kind is SymbolKind.VARIABLE
    with pytest.raises(ResolveError):
        resolve("nope", scope)


def test_void_variable_and_unknown_names():
    _, codes = checked("void v;")
    assert codes == ["S003"]
    _, codes = checked("print y;")
    assert codes == ["S002"]


# -- type checking ----------------------------------------------------------


def test_quantum_to_classical_inserts_measurement():
    typed = clean("qubit q = 1q; bool b = q;")
    init = decl(typed, "b").init
    co = typed.coercion_of(init)
    assert co.measure and co.src == QUBIT and co.dst == BOOL


def test_bool_into_quint_promotes_without_measurement():
    typed = clean("quint a = true;")
    co = typed.coercion_of(decl(typed, "a").init)
    assert co is not None and not co.measure and co.dst == QUINT


def test_quint_to_int():
    typed = clean("quint a = 3q; int r = a;")
    co = typed.coercion_of(decl(typed, "r").init)
    assert co.measure and co.dst == INT


def test_qustring_to_string_and_back():
    typed = clean('string s = "01"; qustring q = s; string t = q;')
    assert typed.coercion_of(decl(typed, "q").init).dst == QUSTRING
    assert typed.coercion_of(decl(typed, "t").init).dst == STRING


def test_mismatch_is_t001():
    _, codes = checked('int x = "a";')
    assert codes == ["T001"]
    _, codes = checked("int x = 1.5;")
    assert codes == ["T001"]


def test_condition_must_be_bool_like():
    _, codes = checked('if "s" { }')
    assert codes == ["T002"]
    clean("qubit q = 1q; if q { }")


def test_arity_and_mc_operands():
    _, codes = checked("void f(int a) { } f(1, 2);")
    assert codes == ["T003"]
    _, codes = checked("qubit a = 0q; mcx(a);")
    assert codes == ["T003"]


def test_gate_on_classical_is_t004():
    _, codes = checked("int a = 1; hadamard a;")
    assert codes == ["T004"]


def test_index_errors():
    _, codes = checked("int a = 1; int b = a[0];")
    assert codes == ["T005"]
    typed = clean("quint a = 5q; qubit b = a[0];")
    assert typed.type_of(decl(typed, "b").init) == QUBIT


def test_return_checks():
    _, codes = checked("int f() { return; }")
    assert codes == ["T006"]
    _, codes = checked("void f() { return 1; }")
    assert codes == ["T006"]
    _, codes = checked("return 1;")
    assert codes == ["T006"]


def test_quantum_addition_is_quint():
    typed = clean("quint a = 1q; quint b = 2q; quint c = a + b + 1;")
    assert typed.type_of(decl(typed, "c").init) == QUINT


def test_in_yields_int():
    typed = clean('qustring s = "0110"q; int i = "11" in s;')
    assert typed.type_of(decl(typed, "i").init) == INT


def test_foreach_element_type():
    typed = clean("int[] xs = [1, 2]; foreach e in xs { int y = e; }")
    loop = next(n for n in ast.walk(typed.program) if isinstance(n, ast.Foreach))
    sym = typed.table.symbol_declared_by(loop)
    assert sym.kind is SymbolKind.LOOP and sym.declared_type == INT


def test_corpus_is_clean(corpus_dir):
    for f in sorted(corpus_dir.glob("*.qut")):
        program, diags = parse_program(f.read_text(), str(f))
        _, sdiags = analyze(program)
        assert sdiags == [], (f, [d.render() for d in sdiags])


def test_diagnostics_are_sorted():
    _, diags = analyze(parsed("print b;\nint x = \"s\";\nprint a;"))
    keys = [(d.span.start_line, d.span.start_col) for d in diags]
    assert keys == sorted(keys) and len(keys) == 3


# -- properties -------------------------------------------------------------


@given(programs)
def test_analysis_is_deterministic(program):
    a, da = analyze(program)
    b, db = analyze(program)
    assert list(a.annotations()) == list(b.annotations())
    assert [d.render() for d in da] == [d.render() for d in db]


@given(programs)
def test_scopes_chain_to_root(program):
    table = build_symbol_table(program)
    for scope in table.scopes.values():
        chain = list(scope.ancestors())
        assert chain[-1] is table.root and table.root.kind is ScopeKind.GLOBAL
        assert scope.is_within(table.root)
        for sym in scope.bindings.values():
            assert sym.scope is scope


@given(programs)
def test_resolved_symbols_are_visible_from_use(program):
    typed, _ = analyze(program)
    for node in ast.walk(program):
        if isinstance(node, ast.Identifier) and id(node) in typed.symbols:
            sym = typed.symbols[id(node)]
            if sym.kind is SymbolKind.VARIABLE and sym.span is not None and node.span is not None:
                assert sym.span.end <= node.span.start
