"""Source-to-result helpers chaining the frontend, sema and runtime."""

from __future__ import annotations

from typing import Optional

from .diagnostics import CompileError, Diagnostic, Severity
from .frontend import parse_program
from .runtime import ProgramResult, RunConfig, interpret
from .sema import TypedAst, analyze


def check_source(source: str, file: str = "<input>") -> tuple[Optional[TypedAst], list[Diagnostic]]:
    """Parse and type-check; the typed tree is ``None`` when any error was reported."""
    program, diags = parse_program(source, file)
    if any(d.severity is Severity.ERROR for d in diags):
        return None, diags
    typed, sema_diags = analyze(program)
    diags = diags + sema_diags
    if any(d.severity is Severity.ERROR for d in diags):
        return None, diags
    return typed, diags


def compile_source(source: str, file: str = "<input>") -> TypedAst:
    typed, diags = check_source(source, file)
    if typed is None:
        raise CompileError(diags)
    return typed


def run_source(source: str, config: RunConfig | None = None, file: str = "<input>") -> ProgramResult:
    """Compile and run one trajectory; raises :class:`CompileError` on diagnostics."""
    return interpret(compile_source(source, file), config)
