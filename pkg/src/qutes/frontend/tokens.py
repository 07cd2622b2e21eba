from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..diagnostics import Span


class TokenKind(str, Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    INT = "integer"
    FLOAT = "float"
    STRING = "string"
    QUANTUM = "quantum"
    OPERATOR = "operator"
    PUNCT = "punctuation"
    EOF = "eof"


TYPE_KEYWORDS = frozenset({"bool", "int", "float", "string", "qubit", "quint", "qustring", "void"})

# Quantum and I/O operators spelled as keywords; they bind as prefix operators.
UNARY_KEYWORDS = frozenset({"hadamard", "pauliy", "pauliz", "not", "measure", "print", "println"})

MULTI_CONTROLLED = frozenset({"mcx", "mcy", "mcz", "mcp"})

KEYWORDS = (
    TYPE_KEYWORDS
    | UNARY_KEYWORDS
    | MULTI_CONTROLLED
    | frozenset({"if", "else", "while", "foreach", "in", "return", "true", "false", "and", "or", "by"})
)

# Longest first so the lexer can match greedily.
OPERATORS = (
    "**", "<<", ">>", "<=", ">=", "==", "!=",
    "+", "-", "*", "/", "%", "<", ">", "=",
)

PUNCTUATION = ("(", ")", "[", "]", "{", "}", ",", ";")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span

    def is_(self, kind: TokenKind, lexeme: str | None = None) -> bool:
        return self.kind is kind and (lexeme is None or self.lexeme == lexeme)

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.lexeme!r}, {self.span.start_line}:{self.span.start_col})"
