"""Hand-written scanner for ``.qut`` source text."""

from __future__ import annotations

from ..diagnostics import Diagnostic, Span, error
from .tokens import KEYWORDS, OPERATORS, PUNCTUATION, Token, TokenKind

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", '"': '"', "0": "\0"}


def _ident_start(c: str) -> bool:
    return c.isascii() and (c.isalpha() or c == "_")


def _ident_char(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


def decode_string(lexeme: str) -> str:
    """Decode the body of a string token (quotes and optional ``q`` suffix included)."""
    body = lexeme[1:lexeme.rindex('"')]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


class Lexer:
    def __init__(self, source: str, file: str = "<input>"):
        self.src = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.diagnostics: list[Diagnostic] = []

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def _advance(self) -> str:
        c = self.src[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def _span_from(self, line: int, col: int) -> Span:
        return Span(self.file, line, col, self.line, self.col)

    def _emit(self, kind: TokenKind, start: int, line: int, col: int) -> None:
        self.tokens.append(Token(kind, self.src[start:self.pos], self._span_from(line, col)))

    def _error(self, code: str, message: str, line: int, col: int) -> None:
        self.diagnostics.append(error(code, message, self._span_from(line, col)))

    def _quantum_suffix_follows(self) -> bool:
        return self._peek() == "q" and not _ident_char(self._peek(1))

    def run(self) -> tuple[list[Token], list[Diagnostic]]:
        while self.pos < len(self.src):
            c = self._peek()
            start, line, col = self.pos, self.line, self.col
            if c in " \t\r\n\f\v" or c == "﻿":
                self._advance()
            elif c == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif c == "/" and self._peek(1) == "*":
                self._block_comment(line, col)
            elif _ident_start(c):
                while _ident_char(self._peek()):
                    self._advance()
                word = self.src[start:self.pos]
                kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENT
                self._emit(kind, start, line, col)
            elif c.isascii() and c.isdigit():
                self._number(start, line, col)
            elif c == '"':
                self._string(start, line, col)
            elif c in PUNCTUATION:
                self._advance()
                self._emit(TokenKind.PUNCT, start, line, col)
                if c == "]" and self._quantum_suffix_follows():
                    qs, ql, qc = self.pos, self.line, self.col
                    self._advance()
                    self._emit(TokenKind.QUANTUM, qs, ql, qc)
            else:
                for op in OPERATORS:
                    if self.src.startswith(op, self.pos):
                        for _ in op:
                            self._advance()
                        self._emit(TokenKind.OPERATOR, start, line, col)
                        break
                else:
                    self._advance()
                    self._error("L001", f"invalid character {c!r}", line, col)
        eof = Span(self.file, self.line, self.col, self.line, self.col)
        self.tokens.append(Token(TokenKind.EOF, "", eof))
        return self.tokens, self.diagnostics

    def _block_comment(self, line: int, col: int) -> None:
        self._advance()
        self._advance()
        while self.pos < len(self.src):
            if self._peek() == "*" and self._peek(1) == "/":
                self._advance()
                self._advance()
                return
            self._advance()
        self._error("L004", "unterminated block comment", line, col)

    def _digits(self) -> None:
        while self._peek().isascii() and self._peek().isdigit():
            self._advance()

    def _number(self, start: int, line: int, col: int) -> None:
        self._digits()
        kind = TokenKind.INT
        if self._peek() == "." and self._peek(1).isascii() and self._peek(1).isdigit():
            kind = TokenKind.FLOAT
            self._advance()
            self._digits()
        if self._peek() in ("e", "E") and (
            self._peek(1).isdigit() or (self._peek(1) in "+-" and self._peek(2).isdigit())
        ):
            kind = TokenKind.FLOAT
            self._advance()
            if self._peek() in "+-":
                self._advance()
            self._digits()
        if self._peek() == "q":
            self._advance()
            if _ident_char(self._peek()) or kind is TokenKind.FLOAT:
                while _ident_char(self._peek()):
                    self._advance()
                self._error(
                    "L003",
                    f"malformed quantum literal {self.src[start:self.pos]!r}",
                    line,
                    col,
                )
                return
            kind = TokenKind.QUANTUM
        self._emit(kind, start, line, col)

    def _string(self, start: int, line: int, col: int) -> None:
        self._advance()
        while True:
            c = self._peek()
            if c == "" or c == "\n":
                self.diagnostics.append(
                    error("L002", "unterminated string literal", Span(self.file, line, col, line, col + 1))
                )
                return
            self._advance()
            if c == "\\" and self._peek() not in ("", "\n"):
                self._advance()
            elif c == '"':
                break
        kind = TokenKind.STRING
        if self._quantum_suffix_follows():
            self._advance()
            kind = TokenKind.QUANTUM
        self._emit(kind, start, line, col)


def tokenize(source: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    """Scan ``source`` into tokens terminated by an EOF token.

    Lexical errors never abort the scan: the offending text is skipped and a
    diagnostic is recorded.
    """
    return Lexer(source, file).run()
