"""Semantic analysis: scopes and symbols, then type checking."""

from .checker import Coercion, TypedAst, analyze, typecheck
from .symbols import (
    FunctionSignature,
    RegisterTemplate,
    ResolveError,
    ScopeKind,
    ScopeNode,
    Symbol,
    SymbolKind,
    SymbolTable,
    build_symbol_table,
    resolve,
)
from .types import (
    BASE_TYPES,
    BOOL,
    FLOAT,
    INT,
    QUBIT,
    QUINT,
    QUSTRING,
    STRING,
    VOID,
    Kind,
    QutesType,
    QutesTypeError,
    array_of,
    can_promote,
    demote,
    from_name,
    promote_type,
    requires_measurement,
)

__all__ = [
    "BASE_TYPES", "BOOL", "FLOAT", "INT", "QUBIT", "QUINT", "QUSTRING", "STRING", "VOID",
    "Coercion", "FunctionSignature", "Kind", "QutesType", "QutesTypeError", "RegisterTemplate",
    "ResolveError", "ScopeKind", "ScopeNode", "Symbol", "SymbolKind", "SymbolTable", "TypedAst",
    "analyze", "array_of", "build_symbol_table", "can_promote", "demote", "from_name",
    "promote_type", "requires_measurement", "resolve", "typecheck",
]
