"""Syntax tree for Qutes programs.

Nodes compare by identity (``eq=False``) so later phases can key side tables
on them; use :func:`structure` for span-insensitive structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Optional, Union

from ..diagnostics import UNKNOWN_SPAN, Span


@dataclass(eq=False)
class Node:
    span: Span = field(default=UNKNOWN_SPAN, kw_only=True, repr=False)


@dataclass(eq=False)
class TypeExpr(Node):
    base: str
    array_depth: int = 0

    def __str__(self) -> str:
        return self.base + "[]" * self.array_depth


# -- expressions ------------------------------------------------------------


@dataclass(eq=False)
class Expr(Node):
    pass


@dataclass(eq=False)
class Literal(Expr):
    value: Union[bool, int, float, str]


@dataclass(eq=False)
class QuantumLiteral(Expr):
    """``5q``, ``"0110"q`` (basis) or ``[0, 3]q`` (uniform superposition)."""

    values: list[Union[int, str]]
    kind: str = "basis"


@dataclass(eq=False)
class Identifier(Expr):
    name: str


@dataclass(eq=False)
class Index(Expr):
    target: Expr
    index: Expr


@dataclass(eq=False)
class Call(Expr):
    name: str
    args: list[Expr]


@dataclass(eq=False)
class ArrayLiteral(Expr):
    elems: list[Expr]


@dataclass(eq=False)
class Unary(Expr):
    op: str
    operand: Expr


@dataclass(eq=False)
class Binary(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(eq=False)
class MultiControlled(Expr):
    """``mcx(c1, ..., target)``; ``mcp`` also carries a phase (``by <expr>``)."""

    op: str
    operands: list[Expr]
    phase: Optional[Expr] = None


@dataclass(eq=False)
class InMatch(Expr):
    pattern: Expr
    target: Identifier


# -- statements -------------------------------------------------------------


@dataclass(eq=False)
class Stmt(Node):
    pass


@dataclass(eq=False)
class Block(Stmt):
    stmts: list[Stmt]


@dataclass(eq=False)
class VarDecl(Stmt):
    type: TypeExpr
    name: str
    init: Optional[Expr] = None


@dataclass(eq=False)
class Param(Node):
    type: TypeExpr
    name: str


@dataclass(eq=False)
class FuncDecl(Stmt):
    return_type: TypeExpr
    name: str
    params: list[Param]
    body: Block


@dataclass(eq=False)
class If(Stmt):
    cond: Expr
    then: Block
    otherwise: Optional[Union[Block, "If"]] = None


@dataclass(eq=False)
class While(Stmt):
    cond: Expr
    body: Block


@dataclass(eq=False)
class Foreach(Stmt):
    name: str
    iterable: Expr
    body: Block


@dataclass(eq=False)
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass(eq=False)
class ExprStmt(Stmt):
    expr: Expr


@dataclass(eq=False)
class Assign(Stmt):
    target: Expr
    value: Expr


@dataclass(eq=False)
class Program(Node):
    items: list[Stmt]


def children(node: Node) -> list[Node]:
    out: list[Node] = []
    for f in fields(node):
        if f.name == "span":
            continue
        v = getattr(node, f.name)
        if isinstance(v, Node):
            out.append(v)
        elif isinstance(v, list):
            out.extend(x for x in v if isinstance(x, Node))
    return out


def walk(node: Node):
    """Pre-order traversal."""
    yield node
    for c in children(node):
        yield from walk(c)


def structure(node):
    """A span-free nested tuple describing ``node``; equal iff the trees match."""
    if isinstance(node, Node):
        return (type(node).__name__,) + tuple(
            (f.name, structure(getattr(node, f.name))) for f in fields(node) if f.name != "span"
        )
    if isinstance(node, list):
        return tuple(structure(x) for x in node)
    if isinstance(node, (bool, float)):
        # keep 1, 1.0 and True apart
        return (type(node).__name__, node)
    return node
