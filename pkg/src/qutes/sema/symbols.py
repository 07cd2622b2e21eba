"""Scopes, symbols and the declaration pass over the syntax tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..builtins.encoding import EncodingError, quint_width
from ..diagnostics import Diagnostic, Span, error
from ..frontend import ast
from ..qir.circuit import BasisValue, InitialState, UniformSuperposition, Zero
from .types import (
    BOOL,
    QUBIT,
    QUINT,
    QUSTRING,
    VOID,
    QutesType,
    QutesTypeError,
    from_name,
)


class ScopeKind(str, Enum):
    GLOBAL = "global"
    FUNCTION = "function"
    BLOCK = "block"


class SymbolKind(str, Enum):
    VARIABLE = "variable"
    PARAMETER = "parameter"
    LOOP = "loop"
    FUNCTION = "function"


@dataclass(frozen=True)
class RegisterTemplate:
    """Register shape for a quantum declaration whose width is known statically."""

    name: str
    width: int
    initial_state: InitialState = field(default_factory=Zero)


@dataclass(frozen=True)
class FunctionSignature:
    params: tuple[tuple[str, QutesType], ...]
    return_type: QutesType

    def __str__(self) -> str:
        args = ", ".join(f"{t} {n}" for n, t in self.params)
        return f"{self.return_type}({args})"


@dataclass(eq=False)
class Symbol:
    name: str
    declared_type: QutesType
    scope: ScopeNode
    kind: SymbolKind = SymbolKind.VARIABLE
    register: Optional[RegisterTemplate] = None
    function_signature: Optional[FunctionSignature] = None
    span: Span = field(default=None, repr=False)
    node: Optional[ast.Node] = field(default=None, repr=False)

    @property
    def is_function(self) -> bool:
        return self.kind is SymbolKind.FUNCTION

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}, {self.declared_type}, {self.kind.value})"


@dataclass(eq=False)
class ScopeNode:
    kind: ScopeKind
    parent: Optional[ScopeNode] = None
    bindings: dict[str, Symbol] = field(default_factory=dict)
    node: Optional[ast.Node] = field(default=None, repr=False)

    def lookup_local(self, name: str) -> Optional[Symbol]:
        return self.bindings.get(name)

    def ancestors(self):
        s: Optional[ScopeNode] = self
        while s is not None:
            yield s
            s = s.parent

    def is_within(self, other: ScopeNode) -> bool:
        return any(s is other for s in self.ancestors())


class ResolveError(LookupError):
    def __init__(self, name: str, span: Span | None = None):
        self.name = name
        self.span = span
        super().__init__(f"unresolved identifier {name!r}")


def _visible(sym: Symbol, at: tuple[int, int] | None) -> bool:
    # functions are hoisted; a variable exists only once its declaration,
    # initializer included, is complete
    if at is None or sym.kind is not SymbolKind.VARIABLE or sym.span is None:
        return True
    return sym.span.end <= at


def resolve(name: str, scope: ScopeNode, at: Span | None = None) -> Symbol:
    """Innermost binding of ``name`` visible from ``scope``.

    With ``at`` given, variables declared textually after that position are
    skipped, so a use never resolves to a later declaration.
    """
    pos = at.start if at is not None else None
    for s in scope.ancestors():
        sym = s.bindings.get(name)
        if sym is not None and _visible(sym, pos):
            return sym
    raise ResolveError(name, at)


# -- register sizing --------------------------------------------------------


def literal_register(name: str, ty: QutesType, lit: ast.QuantumLiteral) -> RegisterTemplate:
    """Width and initial state for a quantum literal stored into ``ty``."""
    values = lit.values
    if all(isinstance(v, str) for v in values):
        widths = {len(v) for v in values}
        if len(widths) != 1:
            raise EncodingError("bitstrings in a superposition must have equal length")
        ints = [int(v, 2) if v else 0 for v in values]
        width = widths.pop()
        if width == 0:
            raise EncodingError("empty bitstring")
    else:
        if any(isinstance(v, str) for v in values):
            raise EncodingError("superposition mixes integers and bitstrings")
        ints = [int(v) for v in values]
        width = max(quint_width(v) for v in ints)
    if ty == QUBIT and width > 1:
        raise EncodingError(f"value {max(ints)} does not fit in a qubit")
    if len(set(ints)) != len(ints):
        raise EncodingError("superposition values must be distinct")
    init: InitialState = BasisValue(ints[0]) if len(ints) == 1 else UniformSuperposition(ints)
    return RegisterTemplate(name, width, init)


def classical_register(name: str, ty: QutesType, value) -> Optional[RegisterTemplate]:
    """Register for a classical literal promoted into a quantum declaration."""
    if isinstance(value, bool):
        return RegisterTemplate(name, 1, BasisValue(int(value)))
    if isinstance(value, int) and ty == QUINT and value >= 0:
        return RegisterTemplate(name, quint_width(value), BasisValue(value))
    if isinstance(value, str) and ty == QUSTRING and value and set(value) <= {"0", "1"}:
        return RegisterTemplate(name, len(value), BasisValue(int(value, 2)))
    return None


def static_register(name: str, ty: QutesType, init: ast.Expr | None) -> Optional[RegisterTemplate]:
    if ty.is_array or not ty.is_quantum:
        return None
    if init is None:
        return RegisterTemplate(name, 1, Zero())
    try:
        if isinstance(init, ast.QuantumLiteral):
            return literal_register(name, ty, init)
        if isinstance(init, ast.Literal):
            return classical_register(name, ty, init.value)
    except EncodingError:
        return None
    if ty == QUBIT:
        return RegisterTemplate(name, 1, Zero())
    return None


# -- declaration pass -------------------------------------------------------


@dataclass
class SymbolTable:
    root: ScopeNode
    scopes: dict[int, ScopeNode]
    declarations: dict[int, Symbol]
    diagnostics: list[Diagnostic]

    def scope_of(self, node: ast.Node) -> ScopeNode:
        return self.scopes[id(node)]

    def symbol_declared_by(self, node: ast.Node) -> Optional[Symbol]:
        return self.declarations.get(id(node))


class _Builder:
    def __init__(self) -> None:
        self.scopes: dict[int, ScopeNode] = {}
        self.decls: dict[int, Symbol] = {}
        self.diagnostics: list[Diagnostic] = []
        self._keep: list[ast.Node] = []

    def _scope(self, kind: ScopeKind, parent: ScopeNode | None, node: ast.Node) -> ScopeNode:
        s = ScopeNode(kind, parent, node=node)
        self.scopes[id(node)] = s
        self._keep.append(node)
        return s

    def _type(self, texpr: ast.TypeExpr) -> QutesType | None:
        try:
            return from_name(texpr.base, texpr.array_depth)
        except (QutesTypeError, ValueError) as exc:
            self.diagnostics.append(error("S004", str(exc), texpr.span))
            return None

    def _bind(self, scope: ScopeNode, sym: Symbol, node: ast.Node) -> None:
        prev = scope.bindings.get(sym.name)
        if prev is not None:
            where = f" (first declared at line {prev.span.start_line})" if prev.span else ""
            self.diagnostics.append(error("S001", f"duplicate symbol {sym.name!r} in this scope{where}", sym.span))
            return
        scope.bindings[sym.name] = sym
        self.decls[id(node)] = sym

    def program(self, prog: ast.Program) -> ScopeNode:
        root = self._scope(ScopeKind.GLOBAL, None, prog)
        # hoist functions so calls may precede the definition
        for item in prog.items:
            if isinstance(item, ast.FuncDecl):
                self.function_symbol(root, item)
        for item in prog.items:
            self.stmt(root, item)
        return root

    def function_symbol(self, scope: ScopeNode, fn: ast.FuncDecl) -> None:
        ret = self._type(fn.return_type)
        params = []
        for p in fn.params:
            pt = self._type(p.type)
            if pt == VOID:
                self.diagnostics.append(error("S003", f"parameter {p.name!r} cannot be void", p.span))
                pt = None
            params.append((p.name, pt))
        ok = ret is not None and all(t is not None for _, t in params)
        sig = FunctionSignature(tuple(params), ret) if ok else None
        sym = Symbol(fn.name, ret if ret is not None else VOID, scope, SymbolKind.FUNCTION,
                     function_signature=sig, span=fn.span, node=fn)
        self._bind(scope, sym, fn)

    def stmt(self, scope: ScopeNode, node: ast.Stmt) -> None:
        if isinstance(node, ast.VarDecl):
            ty = self._type(node.type)
            if ty is None:
                return
            if ty == VOID:
                self.diagnostics.append(error("S003", f"variable {node.name!r} cannot be void", node.span))
                return
            reg = static_register(node.name, ty, node.init)
            sym = Symbol(node.name, ty, scope, SymbolKind.VARIABLE, register=reg, span=node.span, node=node)
            self._bind(scope, sym, node)
        elif isinstance(node, ast.FuncDecl):
            fscope = self._scope(ScopeKind.FUNCTION, scope, node)
            for p in node.params:
                pt = self._type(p.type)
                if pt is None or pt == VOID:
                    continue
                reg = RegisterTemplate(p.name, 1) if pt == QUBIT else None
                sym = Symbol(p.name, pt, fscope, SymbolKind.PARAMETER, register=reg, span=p.span, node=p)
                self._bind(fscope, sym, p)
            self.block(fscope, node.body)
        elif isinstance(node, ast.Block):
            self.block(scope, node)
        elif isinstance(node, ast.If):
            self.block(scope, node.then)
            if node.otherwise is not None:
                self.stmt(scope, node.otherwise)
        elif isinstance(node, ast.While):
            self.block(scope, node.body)
        elif isinstance(node, ast.Foreach):
            loop = self._scope(ScopeKind.BLOCK, scope, node)
            # element type is only known after typing the iterable; filled in later
            sym = Symbol(node.name, BOOL, loop, SymbolKind.LOOP, span=node.span, node=node)
            self._bind(loop, sym, node)
            self.block(loop, node.body)

    def block(self, parent: ScopeNode, block: ast.Block) -> None:
        scope = self._scope(ScopeKind.BLOCK, parent, block)
        for s in block.stmts:
            self.stmt(scope, s)


def build_symbol_table(program: ast.Program) -> SymbolTable:
    """First pass: a scope per program, function, block and loop, with declarations bound."""
    b = _Builder()
    root = b.program(program)
    diags = sorted(b.diagnostics, key=lambda d: (d.span.start, d.code))
    return SymbolTable(root, b.scopes, b.decls, diags)
