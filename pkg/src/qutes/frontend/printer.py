"""Source pretty-printer and the s-expression AST dump used by ``qutes emit ast``."""

from __future__ import annotations

import math

from . import ast

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\0": "\\0"}


def quote(s: str) -> str:
    return '"' + "".join(_STRING_ESCAPES.get(c, c) for c in s) + '"'


def _literal(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return quote(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "1e999"
        text = repr(value)
        return text if any(c in text for c in ".eE") else text + ".0"
    return str(value)


def format_expr(e: ast.Expr) -> str:
    """Render an expression fully parenthesized so it re-parses to the same tree."""
    if isinstance(e, ast.Literal):
        return _literal(e.value)
    if isinstance(e, ast.QuantumLiteral):
        if e.kind == "superposition":
            return "[" + ", ".join(_literal(v) for v in e.values) + "]q"
        return _literal(e.values[0]) + "q"
    if isinstance(e, ast.Identifier):
        return e.name
    if isinstance(e, ast.Index):
        return f"{format_expr(e.target)}[{format_expr(e.index)}]"
    if isinstance(e, ast.Call):
        return f"{e.name}(" + ", ".join(format_expr(a) for a in e.args) + ")"
    if isinstance(e, ast.ArrayLiteral):
        return "[" + ", ".join(format_expr(x) for x in e.elems) + "]"
    if isinstance(e, ast.Unary):
        return f"({e.op} {format_expr(e.operand)})"
    if isinstance(e, ast.Binary):
        return f"({format_expr(e.lhs)} {e.op} {format_expr(e.rhs)})"
    if isinstance(e, ast.MultiControlled):
        text = f"{e.op}(" + ", ".join(format_expr(x) for x in e.operands) + ")"
        if e.phase is not None:
            text += f" by {format_expr(e.phase)}"
        return f"({text})"
    if isinstance(e, ast.InMatch):
        return f"({format_expr(e.pattern)} in {e.target.name})"
    raise TypeError(f"not an expression: {e!r}")


def format_program(program: ast.Program, indent: str = "    ") -> str:
    lines: list[str] = []

    def block(b: ast.Block, depth: int) -> None:
        for s in b.stmts:
            stmt(s, depth)

    def stmt(s: ast.Stmt, depth: int) -> None:
        pad = indent * depth
        if isinstance(s, ast.VarDecl):
            init = f" = {format_expr(s.init)}" if s.init is not None else ""
            lines.append(f"{pad}{s.type} {s.name}{init};")
        elif isinstance(s, ast.FuncDecl):
            params = ", ".join(f"{p.type} {p.name}" for p in s.params)
            lines.append(f"{pad}{s.return_type} {s.name}({params}) {{")
            block(s.body, depth + 1)
            lines.append(pad + "}")
        elif isinstance(s, ast.Block):
            lines.append(pad + "{")
            block(s, depth + 1)
            lines.append(pad + "}")
        elif isinstance(s, ast.If):
            head = f"{pad}if {format_expr(s.cond)} {{"
            while True:
                lines.append(head)
                block(s.then, depth + 1)
                if s.otherwise is None:
                    lines.append(pad + "}")
                    break
                if isinstance(s.otherwise, ast.If):
                    s = s.otherwise
                    head = f"{pad}}} else if {format_expr(s.cond)} {{"
                    continue
                lines.append(pad + "} else {")
                block(s.otherwise, depth + 1)
                lines.append(pad + "}")
                break
        elif isinstance(s, ast.While):
            lines.append(f"{pad}while {format_expr(s.cond)} {{")
            block(s.body, depth + 1)
            lines.append(pad + "}")
        elif isinstance(s, ast.Foreach):
            lines.append(f"{pad}foreach {s.name} in {format_expr(s.iterable)} {{")
            block(s.body, depth + 1)
            lines.append(pad + "}")
        elif isinstance(s, ast.Return):
            value = f" {format_expr(s.value)}" if s.value is not None else ""
            lines.append(f"{pad}return{value};")
        elif isinstance(s, ast.Assign):
            lines.append(f"{pad}{format_expr(s.target)} = {format_expr(s.value)};")
        elif isinstance(s, ast.ExprStmt):
            lines.append(f"{pad}{format_expr(s.expr)};")
        else:
            raise TypeError(f"not a statement: {s!r}")

    for item in program.items:
        stmt(item, 0)
    return "\n".join(lines) + ("\n" if lines else "")


# -- s-expression dump --------------------------------------------------------


def _atom(value) -> str:
    if isinstance(value, str):
        return value if value and all(c.isalnum() or c == "_" for c in value) else quote(value)
    return _literal(value)


def _sexpr(node: ast.Node) -> tuple[str, list[str], list[ast.Node]]:
    """Split a node into (head, inline atoms, child nodes)."""
    if isinstance(node, ast.Program):
        return "program", [], list(node.items)
    if isinstance(node, ast.VarDecl):
        return "vardecl", [str(node.type), node.name], [node.init] if node.init else []
    if isinstance(node, ast.FuncDecl):
        return "funcdecl", [str(node.return_type), node.name], [*node.params, node.body]
    if isinstance(node, ast.Param):
        return "param", [str(node.type), node.name], []
    if isinstance(node, ast.Block):
        return "block", [], list(node.stmts)
    if isinstance(node, ast.If):
        kids: list[ast.Node] = [node.cond, node.then]
        if node.otherwise is not None:
            kids.append(node.otherwise)
        return "if", [], kids
    if isinstance(node, ast.While):
        return "while", [], [node.cond, node.body]
    if isinstance(node, ast.Foreach):
        return "foreach", [node.name], [node.iterable, node.body]
    if isinstance(node, ast.Return):
        return "return", [], [node.value] if node.value else []
    if isinstance(node, ast.ExprStmt):
        return "exprstmt", [], [node.expr]
    if isinstance(node, ast.Assign):
        return "assign", [], [node.target, node.value]
    if isinstance(node, ast.Literal):
        return "lit", [_literal(node.value)], []
    if isinstance(node, ast.QuantumLiteral):
        head = "qlit" if node.kind == "basis" else "qsuper"
        return head, [_literal(v) for v in node.values], []
    if isinstance(node, ast.Identifier):
        return "id", [_atom(node.name)], []
    if isinstance(node, ast.Index):
        return "index", [], [node.target, node.index]
    if isinstance(node, ast.Call):
        return "call", [node.name], list(node.args)
    if isinstance(node, ast.ArrayLiteral):
        return "array", [], list(node.elems)
    if isinstance(node, ast.Unary):
        return "unary", [node.op], [node.operand]
    if isinstance(node, ast.Binary):
        return "binary", [node.op], [node.lhs, node.rhs]
    if isinstance(node, ast.MultiControlled):
        kids = list(node.operands)
        if node.phase is not None:
            kids.append(node.phase)
        return node.op, [], kids
    if isinstance(node, ast.InMatch):
        return "in", [node.target.name], [node.pattern]
    raise TypeError(f"unknown node {node!r}")


def dump_ast(program: ast.Program, indent: str = "  ") -> str:
    """One node per line, indented by depth; closing parens trail the last child."""
    lines: list[str] = []

    def emit(node: ast.Node, depth: int) -> None:
        head, atoms, kids = _sexpr(node)
        lines.append(indent * depth + "(" + " ".join([head, *atoms]))
        for k in kids:
            emit(k, depth + 1)
        lines[-1] += ")"

    emit(program, 0)
    return "\n".join(lines) + "\n"
