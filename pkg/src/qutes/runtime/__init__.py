"""Interpreter for checked programs."""

from .interpreter import (
    DEFAULT_GROVER_RETRIES,
    DEFAULT_RECURSION_LIMIT,
    Interpreter,
    LiveState,
    MeasurementRecord,
    ProgramResult,
    RunConfig,
    interpret,
)
from .values import ArrayValue, QuantumRef, Value, decode, format_value

__all__ = [
    "DEFAULT_GROVER_RETRIES", "DEFAULT_RECURSION_LIMIT", "ArrayValue", "Interpreter", "LiveState",
    "MeasurementRecord", "ProgramResult", "QuantumRef", "RunConfig", "Value", "decode",
    "format_value", "interpret",
]
