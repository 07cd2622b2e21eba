"""Lexer, parser and printers for ``.qut`` source."""

from . import ast
from .lexer import tokenize
from .parser import parse, parse_program
from .printer import dump_ast, format_expr, format_program
from .tokens import Token, TokenKind

__all__ = [
    "Token",
    "TokenKind",
    "ast",
    "dump_ast",
    "format_expr",
    "format_program",
    "parse",
    "parse_program",
    "tokenize",
]
