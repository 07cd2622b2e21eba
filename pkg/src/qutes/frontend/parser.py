"""Recursive-descent parser with precedence climbing for binary operators."""

from __future__ import annotations

from ..diagnostics import Diagnostic, Span, error
from . import ast
from .lexer import decode_string, tokenize
from .tokens import MULTI_CONTROLLED, TYPE_KEYWORDS, Token, TokenKind

# (precedence, right-associative); higher binds tighter. `in` sits below all of
# these and is handled separately because its right operand must be a name.
BINARY_OPS: dict[str, tuple[int, bool]] = {
    "or": (2, False),
    "and": (3, False),
    "==": (4, False), "!=": (4, False),
    "<": (4, False), "<=": (4, False), ">": (4, False), ">=": (4, False),
    "<<": (5, False), ">>": (5, False),
    "+": (6, False), "-": (6, False),
    "*": (7, False), "/": (7, False), "%": (7, False),
    "**": (8, True),
}
IN_PRECEDENCE = 1

PREFIX_OPS = frozenset({"-", "+", "hadamard", "pauliy", "pauliz", "not", "measure"})
# print/println swallow a whole expression so `print x + 1;` prints the sum.
STATEMENT_LIKE_OPS = frozenset({"print", "println"})

MAX_NESTING = 150


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind is TokenKind.EOF else repr(tok.lexeme)


class Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind is not TokenKind.EOF:
            end = tokens[-1].span if tokens else Span("<input>", 1, 1, 1, 1)
            tokens = list(tokens) + [Token(TokenKind.EOF, "", end)]
        self.tokens = tokens
        self.pos = 0
        self.depth = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind is not TokenKind.EOF:
            self.pos += 1
        return t

    def _at(self, lexeme: str) -> bool:
        t = self.tok
        return t.lexeme == lexeme and t.kind in (TokenKind.PUNCT, TokenKind.OPERATOR, TokenKind.KEYWORD)

    def _accept(self, lexeme: str) -> Token | None:
        if self._at(lexeme):
            return self._advance()
        return None

    def _fail(self, message: str, tok: Token | None = None, code: str = "P001") -> ParseError:
        tok = tok or self.tok
        return ParseError(error(code, message, tok.span))

    def _expect(self, lexeme: str, context: str = "") -> Token:
        if self._at(lexeme):
            return self._advance()
        where = f" {context}" if context else ""
        code = "P002" if lexeme in ")]}" and self.tok.kind is TokenKind.EOF else "P001"
        raise self._fail(f"expected {lexeme!r}{where}, found {_describe(self.tok)}", code=code)

    def _expect_ident(self, what: str) -> Token:
        if self.tok.kind is TokenKind.IDENT:
            return self._advance()
        raise self._fail(f"expected {what}, found {_describe(self.tok)}")

    def _enter(self) -> None:
        if self.depth >= MAX_NESTING:
            raise self._fail("program nested too deeply", code="P004")
        self.depth += 1

    # -- recovery -----------------------------------------------------------

    def _synchronize(self, start: int) -> None:
        """Skip to the end of the broken statement.

        Stops after a `;` or after a balanced `}` closing a block opened inside
        the statement, and before a `}` that closes an enclosing block.
        """
        depth = 0
        while self.tok.kind is not TokenKind.EOF:
            t = self.tok
            if t.is_(TokenKind.PUNCT, "{"):
                depth += 1
            elif t.is_(TokenKind.PUNCT, "}"):
                if depth == 0:
                    break
                depth -= 1
                if depth == 0:
                    self._advance()
                    return
            elif t.is_(TokenKind.PUNCT, ";") and depth == 0:
                self._advance()
                return
            self._advance()
        if self.pos == start and self.tok.kind is not TokenKind.EOF and not self._at("}"):
            self._advance()

    # -- program and statements ---------------------------------------------

    def parse_program(self) -> ast.Program:
        first = self.tok.span
        items: list[ast.Stmt] = []
        while self.tok.kind is not TokenKind.EOF:
            if self._at("}"):
                t = self._advance()
                self.diagnostics.append(error("P002", "unbalanced '}'", t.span))
                continue
            stmt = self._statement(top_level=True)
            if stmt is not None:
                items.append(stmt)
        return ast.Program(items, span=first.to(self.tok.span))

    def _statement(self, top_level: bool = False) -> ast.Stmt | None:
        start = self.pos
        try:
            stmt = self._statement_inner(top_level)
        except ParseError as exc:
            self.diagnostics.append(exc.diagnostic)
            self._synchronize(start)
            return None
        return stmt

    def _statement_inner(self, top_level: bool) -> ast.Stmt:
        t = self.tok
        if t.kind is TokenKind.KEYWORD:
            if t.lexeme in TYPE_KEYWORDS:
                return self._declaration(top_level)
            if t.lexeme == "if":
                return self._if()
            if t.lexeme == "while":
                self._advance()
                cond = self.expression()
                body = self._block()
                return ast.While(cond, body, span=t.span.to(body.span))
            if t.lexeme == "foreach":
                return self._foreach()
            if t.lexeme == "return":
                self._advance()
                value = None
                if not self._at(";"):
                    value = self.expression()
                end = self._expect(";", "after return")
                return ast.Return(value, span=t.span.to(end.span))
        if self._at("{"):
            return self._block()
        expr = self.expression()
        if self._at("="):
            self._advance()
            if not isinstance(expr, (ast.Identifier, ast.Index)):
                raise ParseError(error("P001", "invalid assignment target", expr.span))
            value = self.expression()
            end = self._expect(";", "after assignment")
            return ast.Assign(expr, value, span=expr.span.to(end.span))
        end = self._expect(";", "after expression")
        return ast.ExprStmt(expr, span=expr.span.to(end.span))

    def _type(self) -> ast.TypeExpr:
        t = self.tok
        if not (t.kind is TokenKind.KEYWORD and t.lexeme in TYPE_KEYWORDS):
            raise self._fail(f"expected a type, found {_describe(t)}")
        self._advance()
        depth = 0
        end = t
        while self._at("[") and self._peek().is_(TokenKind.PUNCT, "]"):
            self._advance()
            end = self._advance()
            depth += 1
        return ast.TypeExpr(t.lexeme, depth, span=t.span.to(end.span))

    def _declaration(self, top_level: bool) -> ast.Stmt:
        ty = self._type()
        name = self._expect_ident("a name after the type")
        if self._at("("):
            func = self._function_rest(ty, name)
            if not top_level:
                raise ParseError(error("P003", "functions may only be declared at top level", func.span))
            return func
        init = None
        if self._accept("="):
            init = self.expression()
        end = self._expect(";", "after declaration")
        return ast.VarDecl(ty, name.lexeme, init, span=ty.span.to(end.span))

    def _function_rest(self, ret: ast.TypeExpr, name: Token) -> ast.FuncDecl:
        self._expect("(")
        params: list[ast.Param] = []
        if not self._at(")"):
            while True:
                pty = self._type()
                pname = self._expect_ident("a parameter name")
                params.append(ast.Param(pty, pname.lexeme, span=pty.span.to(pname.span)))
                if not self._accept(","):
                    break
        self._expect(")", "to close the parameter list")
        body = self._block()
        return ast.FuncDecl(ret, name.lexeme, params, body, span=ret.span.to(body.span))

    def _block(self) -> ast.Block:
        if not self._at("{"):
            raise self._fail(f"expected '{{', found {_describe(self.tok)}")
        open_ = self._advance()
        self._enter()
        stmts: list[ast.Stmt] = []
        while not self._at("}"):
            if self.tok.kind is TokenKind.EOF:
                self.depth -= 1
                raise ParseError(error("P002", "unbalanced '{': missing '}'", open_.span))
            before = self.pos
            stmt = self._statement()
            if stmt is not None:
                stmts.append(stmt)
            elif self.pos == before:
                self._advance()
        close = self._advance()
        self.depth -= 1
        return ast.Block(stmts, span=open_.span.to(close.span))

    def _if(self) -> ast.If:
        t = self._advance()
        cond = self.expression()
        then = self._block()
        otherwise: ast.Block | ast.If | None = None
        if self._accept("else"):
            otherwise = self._if() if self._at("if") else self._block()
        end = otherwise.span if otherwise is not None else then.span
        return ast.If(cond, then, otherwise, span=t.span.to(end))

    def _foreach(self) -> ast.Foreach:
        t = self._advance()
        name = self._expect_ident("a loop variable")
        self._expect("in", "in foreach")
        iterable = self.expression(IN_PRECEDENCE + 1)
        body = self._block()
        return ast.Foreach(name.lexeme, iterable, body, span=t.span.to(body.span))

    # -- expressions --------------------------------------------------------

    def expression(self, min_prec: int = 0) -> ast.Expr:
        self._enter()
        try:
            lhs = self._unary()
            while True:
                t = self.tok
                if t.is_(TokenKind.KEYWORD, "in") and IN_PRECEDENCE >= min_prec:
                    self._advance()
                    name = self._expect_ident("a variable name after 'in'")
                    target = ast.Identifier(name.lexeme, span=name.span)
                    lhs = ast.InMatch(lhs, target, span=lhs.span.to(name.span))
                    continue
                info = BINARY_OPS.get(t.lexeme) if t.kind in (TokenKind.OPERATOR, TokenKind.KEYWORD) else None
                if info is None or info[0] < min_prec:
                    return lhs
                prec, right = info
                self._advance()
                rhs = self.expression(prec if right else prec + 1)
                lhs = ast.Binary(t.lexeme, lhs, rhs, span=lhs.span.to(rhs.span))
        finally:
            self.depth -= 1

    def _unary(self) -> ast.Expr:
        t = self.tok
        if t.kind in (TokenKind.OPERATOR, TokenKind.KEYWORD):
            if t.lexeme in STATEMENT_LIKE_OPS:
                self._advance()
                operand = self.expression()
                return ast.Unary(t.lexeme, operand, span=t.span.to(operand.span))
            if t.lexeme in PREFIX_OPS:
                self._advance()
                self._enter()
                try:
                    operand = self._unary()
                finally:
                    self.depth -= 1
                return ast.Unary(t.lexeme, operand, span=t.span.to(operand.span))
        return self._postfix()

    def _postfix(self) -> ast.Expr:
        expr = self._primary()
        while self._at("["):
            self._advance()
            index = self.expression()
            close = self._expect("]", "to close the index")
            expr = ast.Index(expr, index, span=expr.span.to(close.span))
        return expr

    def _arguments(self) -> tuple[list[ast.Expr], Token]:
        self._expect("(")
        args: list[ast.Expr] = []
        if not self._at(")"):
            while True:
                args.append(self.expression())
                if not self._accept(","):
                    break
        close = self._expect(")", "to close the argument list")
        return args, close

    def _primary(self) -> ast.Expr:
        t = self.tok
        if t.kind is TokenKind.INT:
            self._advance()
            return ast.Literal(int(t.lexeme), span=t.span)
        if t.kind is TokenKind.FLOAT:
            self._advance()
            return ast.Literal(float(t.lexeme), span=t.span)
        if t.kind is TokenKind.STRING:
            self._advance()
            return ast.Literal(decode_string(t.lexeme), span=t.span)
        if t.kind is TokenKind.QUANTUM:
            if t.lexeme == "q":
                raise self._fail("quantum suffix 'q' must follow a literal")
            self._advance()
            if t.lexeme.startswith('"'):
                return ast.QuantumLiteral([decode_string(t.lexeme)], "basis", span=t.span)
            return ast.QuantumLiteral([int(t.lexeme[:-1])], "basis", span=t.span)
        if t.kind is TokenKind.KEYWORD:
            if t.lexeme in ("true", "false"):
                self._advance()
                return ast.Literal(t.lexeme == "true", span=t.span)
            if t.lexeme in MULTI_CONTROLLED:
                return self._multi_controlled()
        if t.kind is TokenKind.IDENT:
            self._advance()
            if self._at("("):
                args, close = self._arguments()
                return ast.Call(t.lexeme, args, span=t.span.to(close.span))
            return ast.Identifier(t.lexeme, span=t.span)
        if self._at("("):
            self._advance()
            inner = self.expression()
            self._expect(")", "to close the parenthesis")
            return inner
        if self._at("["):
            return self._array_literal()
        raise self._fail(f"expected an expression, found {_describe(t)}")

    def _array_literal(self) -> ast.Expr:
        open_ = self._advance()
        elems: list[ast.Expr] = []
        if not self._at("]"):
            while True:
                elems.append(self.expression())
                if not self._accept(","):
                    break
        close = self._expect("]", "to close the array literal")
        if self.tok.is_(TokenKind.QUANTUM, "q"):
            suffix = self._advance()
            span = open_.span.to(suffix.span)
            values: list[int | str] = []
            for e in elems:
                if not isinstance(e, ast.Literal) or isinstance(e.value, (bool, float)):
                    raise ParseError(
                        error("P005", "superposition elements must be integer or bitstring literals", e.span)
                    )
                values.append(e.value)
            if not values:
                raise ParseError(error("P005", "empty superposition literal", span))
            return ast.QuantumLiteral(values, "superposition", span=span)
        return ast.ArrayLiteral(elems, span=open_.span.to(close.span))

    def _multi_controlled(self) -> ast.Expr:
        t = self._advance()
        args, close = self._arguments()
        end = close.span
        phase = None
        if t.lexeme == "mcp":
            self._expect("by", "after mcp(...)")
            phase = self.expression()
            end = phase.span
        return ast.MultiControlled(t.lexeme, args, phase, span=t.span.to(end))


def parse(tokens: list[Token]) -> tuple[ast.Program, list[Diagnostic]]:
    """Parse a token stream; recovers at statement boundaries."""
    p = Parser(tokens)
    return p.parse_program(), p.diagnostics


def parse_program(source: str, file: str = "<input>") -> tuple[ast.Program, list[Diagnostic]]:
    tokens, lex_diags = tokenize(source, file)
    program, parse_diags = parse(tokens)
    diagnostics = sorted(lex_diags + parse_diags, key=lambda d: (d.span.start, d.code))
    return program, diagnostics
