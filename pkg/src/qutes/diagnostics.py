"""Source positions, diagnostics and the error types shared by every phase."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class Span:
    """A half-open character range in a source file.

    Lines and columns are 1-based; ``end_col`` points one past the last
    character. Columns count characters, not bytes.
    """

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span start after end: {self}")

    def to(self, other: Span) -> Span:
        """Return the span covering ``self`` through ``other``."""
        return Span(self.file, self.start_line, self.start_col, other.end_line, other.end_col)

    @property
    def start(self) -> tuple[int, int]:
        return (self.start_line, self.start_col)

    @property
    def end(self) -> tuple[int, int]:
        return (self.end_line, self.end_col)


UNKNOWN_SPAN = Span("<unknown>", 1, 1, 1, 1)


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    span: Span
    code: str

    def render(self) -> str:
        return (
            f"{self.span.file}:{self.span.start_line}:{self.span.start_col}: "
            f"{self.severity.value}[{self.code}]: {self.message}"
        )

    def __str__(self) -> str:
        return self.render()


def error(code: str, message: str, span: Span) -> Diagnostic:
    return Diagnostic(Severity.ERROR, message, span, code)


class QutesError(Exception):
    """Base class for errors raised by the toolchain."""


class CompileError(QutesError):
    """Raised when a phase reports error diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(d.render() for d in self.diagnostics))


class QutesRuntimeError(QutesError):
    """A failure while interpreting a checked program."""

    def __init__(self, message: str, span: Span | None = None, code: str = "R001"):
        self.message = message
        self.span = span
        self.code = code
        super().__init__(self.render())

    def render(self) -> str:
        if self.span is None:
            return f"runtime error[{self.code}]: {self.message}"
        s = self.span
        return f"{s.file}:{s.start_line}:{s.start_col}: runtime error[{self.code}]: {self.message}"
