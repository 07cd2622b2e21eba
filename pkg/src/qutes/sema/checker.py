"""Type checking over the symbol table: the second half of semantic analysis.

Every expression gets a type; every identifier and call gets its symbol; every
implicit conversion is recorded as a :class:`Coercion`, flagged when it has to
measure a quantum value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from ..builtins.encoding import EncodingError
from ..diagnostics import Diagnostic, Span, error
from ..frontend import ast
from .symbols import (
    ResolveError,
    ScopeNode,
    Symbol,
    SymbolTable,
    build_symbol_table,
    literal_register,
    resolve,
)
from .types import (
    BOOL,
    FLOAT,
    INT,
    QUBIT,
    QUINT,
    QUSTRING,
    STRING,
    VOID,
    QutesType,
    array_of,
    can_promote,
    demote,
    numeric_join,
    requires_measurement,
)

COMPARISONS = frozenset({"==", "!=", "<", "<=", ">", ">="})
ARITHMETIC = frozenset({"-", "*", "/", "%", "**"})
GATE_OPS = frozenset({"hadamard", "pauliy", "pauliz"})
# operand types a quantum `+` accepts
_ADDABLE = frozenset({QUINT, QUBIT, INT, BOOL})


@dataclass(frozen=True)
class Coercion:
    src: QutesType
    dst: QutesType
    measure: bool
    via: Optional[QutesType] = None

    def __str__(self) -> str:
        if self.measure:
            hop = f" -> {self.via}" if self.via is not None and self.via != self.dst else ""
            return f"measure {self.src}{hop} -> {self.dst}"
        return f"{self.src} -> {self.dst}"


@dataclass
class TypedAst:
    """The checked program plus side tables keyed by node identity."""

    program: ast.Program
    table: SymbolTable
    types: dict[int, QutesType]
    symbols: dict[int, Symbol]
    coercions: dict[int, Coercion]

    @property
    def root(self) -> ScopeNode:
        return self.table.root

    def type_of(self, node: ast.Node) -> QutesType:
        return self.types[id(node)]

    def symbol_of(self, node: ast.Node) -> Symbol:
        return self.symbols[id(node)]

    def coercion_of(self, node: ast.Node) -> Optional[Coercion]:
        return self.coercions.get(id(node))

    def annotations(self) -> Iterator[tuple]:
        """Span-free annotation stream in pre-order; equal for equal programs."""
        for node in ast.walk(self.program):
            ty = self.types.get(id(node))
            sym = self.symbols.get(id(node))
            co = self.coercions.get(id(node))
            yield (
                type(node).__name__,
                str(ty) if ty is not None else None,
                (sym.name, str(sym.declared_type), sym.kind.value) if sym is not None else None,
                str(co) if co is not None else None,
            )


class _Checker:
    def __init__(self, table: SymbolTable):
        self.table = table
        self.types: dict[int, QutesType] = {}
        self.symbols: dict[int, Symbol] = {}
        self.coercions: dict[int, Coercion] = {}
        self.diagnostics: list[Diagnostic] = []
        self.returns: list[QutesType] = []

    def err(self, code: str, message: str, span: Span) -> None:
        self.diagnostics.append(error(code, message, span))

    # -- conversions ------------------------------------------------------

    def coerce(self, node: ast.Expr, src: QutesType | None, dst: QutesType, what: str = "value") -> bool:
        if src is None:
            return False
        if src == dst:
            return True
        if can_promote(src, dst):
            self.coercions[id(node)] = Coercion(src, dst, False)
            return True
        if requires_measurement(src, dst):
            self.coercions[id(node)] = Coercion(src, dst, True, demote(src))
            return True
        self.err("T001", f"cannot convert {src} to {dst} for {what}", node.span)
        return False

    def measured(self, node: ast.Expr, ty: QutesType | None) -> QutesType | None:
        """Record an auto-measurement of a quantum scalar; classical types pass through."""
        if ty is None or not ty.is_quantum:
            return ty
        if ty.is_array:
            self.err("T001", f"cannot measure a whole {ty} here", node.span)
            return None
        dst = demote(ty)
        self.coercions[id(node)] = Coercion(ty, dst, True, dst)
        return dst

    # -- statements -------------------------------------------------------

    def program(self, prog: ast.Program) -> None:
        root = self.table.scope_of(prog)
        for item in prog.items:
            self.stmt(root, item)

    def stmts(self, scope: ScopeNode, block: ast.Block) -> None:
        inner = self.table.scope_of(block)
        for s in block.stmts:
            self.stmt(inner, s)

    def stmt(self, scope: ScopeNode, node: ast.Stmt) -> None:
        if isinstance(node, ast.VarDecl):
            sym = self.table.symbol_declared_by(node)
            if sym is not None:
                self.symbols[id(node)] = sym
            if node.init is not None:
                want = sym.declared_type if sym is not None else None
                t = self.expr(scope, node.init, want)
                if want is not None:
                    self.coerce(node.init, t, want, f"the initializer of {node.name!r}")
        elif isinstance(node, ast.Assign):
            t_target = self.expr(scope, node.target)
            if isinstance(node.target, ast.Identifier):
                sym = self.symbols.get(id(node.target))
                if sym is not None and sym.is_function:
                    self.err("T001", f"cannot assign to function {sym.name!r}", node.target.span)
                    t_target = None
            t_value = self.expr(scope, node.value, t_target)
            if t_target is not None:
                self.coerce(node.value, t_value, t_target, "the assignment")
        elif isinstance(node, ast.ExprStmt):
            self.expr(scope, node.expr)
        elif isinstance(node, ast.Block):
            self.stmts(scope, node)
        elif isinstance(node, ast.If):
            self.condition(scope, node.cond)
            self.stmts(scope, node.then)
            if node.otherwise is not None:
                self.stmt(scope, node.otherwise)
        elif isinstance(node, ast.While):
            self.condition(scope, node.cond)
            self.stmts(scope, node.body)
        elif isinstance(node, ast.Foreach):
            t = self.expr(scope, node.iterable)
            loop = self.table.scope_of(node)
            sym = self.table.symbol_declared_by(node)
            elem: QutesType | None = None
            if t is not None:
                if t.is_array:
                    elem = t.element
                elif t in (QUINT, QUSTRING, QUBIT):
                    elem = QUBIT
                elif t == STRING:
                    elem = STRING
                else:
                    self.err("T005", f"cannot iterate over {t}", node.iterable.span)
            if sym is not None:
                sym.declared_type = elem if elem is not None else BOOL
                self.symbols[id(node)] = sym
            self.stmts(loop, node.body)
        elif isinstance(node, ast.Return):
            if not self.returns:
                self.err("T006", "return outside a function", node.span)
                if node.value is not None:
                    self.expr(scope, node.value)
                return
            want = self.returns[-1]
            if node.value is None:
                if want != VOID:
                    self.err("T006", f"missing return value of type {want}", node.span)
            elif want == VOID:
                self.expr(scope, node.value)
                self.err("T006", "void function cannot return a value", node.value.span)
            else:
                t = self.expr(scope, node.value, want)
                self.coerce(node.value, t, want, "the return value")
        elif isinstance(node, ast.FuncDecl):
            sym = self.table.symbol_declared_by(node)
            if sym is not None:
                self.symbols[id(node)] = sym
            fscope = self.table.scope_of(node)
            for p in node.params:
                ps = self.table.symbol_declared_by(p)
                if ps is not None:
                    self.symbols[id(p)] = ps
            ret = sym.declared_type if sym is not None else VOID
            self.returns.append(ret)
            try:
                self.stmts(fscope, node.body)
            finally:
                self.returns.pop()
        else:  # pragma: no cover
            raise TypeError(f"unexpected statement {type(node).__name__}")

    def condition(self, scope: ScopeNode, cond: ast.Expr) -> None:
        t = self.expr(scope, cond)
        if t is None:
            return
        if t == BOOL:
            return
        if t.is_quantum and not t.is_array:
            self.coercions[id(cond)] = Coercion(t, BOOL, True, demote(t))
            return
        self.err("T002", f"condition must be bool or quantum, found {t}", cond.span)

    # -- expressions ------------------------------------------------------

    def expr(self, scope: ScopeNode, node: ast.Expr, expected: QutesType | None = None) -> QutesType | None:
        t = self._expr(scope, node, expected)
        if t is not None:
            self.types[id(node)] = t
        return t

    def _expr(self, scope: ScopeNode, node: ast.Expr, expected: QutesType | None) -> QutesType | None:
        if isinstance(node, ast.Literal):
            v = node.value
            if isinstance(v, bool):
                return BOOL
            if isinstance(v, int):
                return INT
            if isinstance(v, float):
                return FLOAT
            return STRING
        if isinstance(node, ast.QuantumLiteral):
            return self.quantum_literal(node, expected)
        if isinstance(node, ast.Identifier):
            try:
                sym = resolve(node.name, scope, node.span)
            except ResolveError:
                self.err("S002", f"unresolved identifier {node.name!r}", node.span)
                return None
            self.symbols[id(node)] = sym
            if sym.is_function:
                self.err("T001", f"function {node.name!r} used as a value", node.span)
                return None
            return sym.declared_type
        if isinstance(node, ast.Index):
            return self.index(scope, node)
        if isinstance(node, ast.Call):
            return self.call(scope, node)
        if isinstance(node, ast.ArrayLiteral):
            return self.array(scope, node, expected)
        if isinstance(node, ast.Unary):
            return self.unary(scope, node)
        if isinstance(node, ast.Binary):
            return self.binary(scope, node)
        if isinstance(node, ast.MultiControlled):
            return self.multi_controlled(scope, node)
        if isinstance(node, ast.InMatch):
            return self.in_match(scope, node)
        raise TypeError(f"unexpected expression {type(node).__name__}")  # pragma: no cover

    def quantum_literal(self, node: ast.QuantumLiteral, expected: QutesType | None) -> QutesType | None:
        strings = all(isinstance(v, str) for v in node.values)
        if strings:
            ty = QUSTRING
        elif expected == QUBIT and all(isinstance(v, int) and v in (0, 1) for v in node.values):
            ty = QUBIT
        else:
            ty = QUINT
        try:
            literal_register("_", ty, node)
        except EncodingError as exc:
            self.err("T001", f"invalid quantum literal: {exc}", node.span)
            return None
        return ty

    def index(self, scope: ScopeNode, node: ast.Index) -> QutesType | None:
        t = self.expr(scope, node.target)
        ti = self.expr(scope, node.index)
        if ti is not None:
            if ti.is_quantum or not can_promote(ti, INT):
                self.err("T005", f"index must be a classical int, found {ti}", node.index.span)
            elif ti != INT:
                self.coercions[id(node.index)] = Coercion(ti, INT, False)
        if t is None:
            return None
        if t.is_array:
            return t.element
        if t in (QUBIT, QUINT, QUSTRING):
            return QUBIT
        if t == STRING:
            return STRING
        self.err("T005", f"cannot index a value of type {t}", node.target.span)
        return None

    def call(self, scope: ScopeNode, node: ast.Call) -> QutesType | None:
        try:
            sym = resolve(node.name, scope, node.span)
        except ResolveError:
            self.err("S002", f"unresolved function {node.name!r}", node.span)
            for a in node.args:
                self.expr(scope, a)
            return None
        self.symbols[id(node)] = sym
        if not sym.is_function:
            self.err("T001", f"{node.name!r} is not a function", node.span)
            return None
        sig = sym.function_signature
        if sig is None:
            return None
        if len(node.args) != len(sig.params):
            self.err("T003", f"{node.name} expects {len(sig.params)} argument(s), got {len(node.args)}", node.span)
        for i, arg in enumerate(node.args):
            want = sig.params[i][1] if i < len(sig.params) else None
            t = self.expr(scope, arg, want)
            if want is not None:
                self.coerce(arg, t, want, f"argument {i + 1} of {node.name}")
        return sig.return_type

    def array(self, scope: ScopeNode, node: ast.ArrayLiteral, expected: QutesType | None) -> QutesType | None:
        want = expected.element if expected is not None and expected.is_array else None
        types = [self.expr(scope, e, want) for e in node.elems]
        if want is not None:
            ok = all(self.coerce(e, t, want, "an array element") for e, t in zip(node.elems, types))
            return expected if ok else None
        if not types:
            return array_of(INT)
        if any(t is None for t in types):
            return None
        if VOID in types:
            self.err("T001", "array elements must have a value", node.span)
            return None
        elem = _join(types)
        if elem is None:
            self.err("T001", "array elements have no common type: " + ", ".join(sorted({str(t) for t in types})),
                     node.span)
            return None
        for e, t in zip(node.elems, types):
            self.coerce(e, t, elem, "an array element")
        return array_of(elem)

    def unary(self, scope: ScopeNode, node: ast.Unary) -> QutesType | None:
        op = node.op
        t = self.expr(scope, node.operand)
        if t is None:
            return VOID if op in ("print", "println") else None
        if op in ("print", "println"):
            if t == VOID:
                self.err("T001", "cannot print a void value", node.operand.span)
            elif t.is_quantum and not t.is_array:
                self.measured(node.operand, t)
            elif t.is_quantum:
                self.err("T001", f"cannot print a whole {t}; index its elements", node.operand.span)
            return VOID
        if op in GATE_OPS or op == "measure":
            if not t.is_quantum:
                self.err("T004", f"{op} needs a quantum operand, found {t}", node.operand.span)
                return None
            if op == "measure":
                if t.is_array:
                    self.err("T004", f"measure needs a quantum scalar, found {t}", node.operand.span)
                    return None
                return demote(t)
            return t
        if op == "not":
            if t == BOOL or (t.is_quantum and not t.is_array):
                return t
            self.err("T001", f"not needs a bool or quantum operand, found {t}", node.operand.span)
            return None
        # unary + and -
        c = self.measured(node.operand, t)
        if c is None or not c.is_numeric:
            self.err("T001", f"unary {op} needs a number, found {t}", node.operand.span)
            return None
        return INT if c == BOOL else c

    def binary(self, scope: ScopeNode, node: ast.Binary) -> QutesType | None:
        op = node.op
        if op in ("and", "or"):
            lt = self.expr(scope, node.lhs)
            rt = self.expr(scope, node.rhs)
            ok = self._to_bool(node.lhs, lt, op) & self._to_bool(node.rhs, rt, op)
            return BOOL if ok else None
        lt = self.expr(scope, node.lhs)
        rt = self.expr(scope, node.rhs)
        if lt is None or rt is None:
            return None
        if lt.is_array or rt.is_array:
            self.err("T001", f"operator {op} does not apply to arrays", node.span)
            return None
        if op == "+" and (lt.is_quantum or rt.is_quantum):
            if lt in _ADDABLE and rt in _ADDABLE:
                return QUINT
            self.err("T001", f"quantum addition needs quint-compatible operands, found {lt} and {rt}", node.span)
            return None
        if op in COMPARISONS:
            if lt.is_quantum and rt.is_quantum:
                self.err("T001", "comparison between two quantum values is not supported", node.span)
                return None
            lc, rc = self.measured(node.lhs, lt), self.measured(node.rhs, rt)
            if (lc.is_numeric and rc.is_numeric) or (lc == rc == STRING):
                return BOOL
            self.err("T001", f"cannot compare {lt} with {rt}", node.span)
            return None
        if op in ("<<", ">>"):
            if lt in (QUINT, QUSTRING, QUBIT):
                if rt.is_quantum or not can_promote(rt, INT):
                    self.err("T001", f"shift amount must be a classical int, found {rt}", node.rhs.span)
                    return None
                if rt != INT:
                    self.coercions[id(node.rhs)] = Coercion(rt, INT, False)
                return lt
            lc, rc = self.measured(node.lhs, lt), self.measured(node.rhs, rt)
            if lc in (INT, BOOL) and rc in (INT, BOOL):
                return INT
            self.err("T001", f"cannot shift {lt} by {rt}", node.span)
            return None
        lc, rc = self.measured(node.lhs, lt), self.measured(node.rhs, rt)
        if op == "+" and lc == rc == STRING:
            return STRING
        if lc.is_numeric and rc.is_numeric:
            if op == "%" and FLOAT in (lc, rc):
                self.err("T001", "% needs integer operands", node.span)
                return None
            return numeric_join(lc, rc)
        self.err("T001", f"operator {op} does not apply to {lt} and {rt}", node.span)
        return None

    def _to_bool(self, node: ast.Expr, t: QutesType | None, op: str) -> bool:
        if t is None:
            return False
        if t == BOOL:
            return True
        if t.is_quantum and not t.is_array:
            self.coercions[id(node)] = Coercion(t, BOOL, True, demote(t))
            return True
        self.err("T001", f"operand of {op} must be bool, found {t}", node.span)
        return False

    def multi_controlled(self, scope: ScopeNode, node: ast.MultiControlled) -> QutesType | None:
        ok = True
        for operand in node.operands:
            t = self.expr(scope, operand)
            if t is not None and (not t.is_quantum or t.is_array):
                self.err("T004", f"{node.op} operands must be quantum registers, found {t}", operand.span)
                ok = False
        if len(node.operands) < 2:
            self.err("T003", f"{node.op} needs at least two quantum operands", node.span)
            ok = False
        if node.phase is not None:
            pt = self.expr(scope, node.phase, FLOAT)
            ok = self.coerce(node.phase, pt, FLOAT, "the phase") and ok
        return VOID if ok else None

    def in_match(self, scope: ScopeNode, node: ast.InMatch) -> QutesType | None:
        pt = self.expr(scope, node.pattern)
        tt = self.expr(scope, node.target)
        ok = True
        if pt is not None:
            if pt == QUSTRING:
                self.coercions[id(node.pattern)] = Coercion(QUSTRING, STRING, True, STRING)
            elif pt != STRING:
                self.err("T001", f"pattern must be a string or qustring, found {pt}", node.pattern.span)
                ok = False
        if tt is not None and tt not in (STRING, QUSTRING):
            self.err("T001", f"search target must be a qustring, found {tt}", node.target.span)
            ok = False
        return INT if ok and pt is not None and tt is not None else None


def _join(types: list[QutesType]) -> QutesType | None:
    """Least type every element promotes to, if any."""
    uniq = list(dict.fromkeys(types))
    for cand in uniq + [INT, FLOAT, QUINT]:
        if all(can_promote(t, cand) for t in uniq):
            return cand
    return None


def typecheck(program: ast.Program, table: SymbolTable) -> tuple[TypedAst, list[Diagnostic]]:
    """Type every expression of ``program``; diagnostics are sorted by position."""
    c = _Checker(table)
    c.program(program)
    diags = sorted(c.diagnostics, key=lambda d: (d.span.start, d.code))
    return TypedAst(program, table, c.types, c.symbols, c.coercions), diags


def analyze(program: ast.Program) -> tuple[TypedAst, list[Diagnostic]]:
    """Both semantic passes; the symbol table's diagnostics come first on ties."""
    table = build_symbol_table(program)
    typed, diags = typecheck(program, table)
    merged = sorted(table.diagnostics + diags, key=lambda d: (d.span.start, d.code))
    return typed, merged
