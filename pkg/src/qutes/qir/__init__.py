"""Circuit IR, state preparation and OpenQASM 3 export."""

from .circuit import (
    BasisValue,
    Circuit,
    CircuitError,
    CircuitHandler,
    ClassicalSlot,
    Gate,
    GateOp,
    InitialState,
    QubitRef,
    RegisterHandle,
    UniformSuperposition,
    Zero,
)
from .qasm import export_qasm, read_qasm
from .stateprep import prepare, prepare_register

__all__ = [
    "BasisValue",
    "Circuit",
    "CircuitError",
    "CircuitHandler",
    "ClassicalSlot",
    "Gate",
    "GateOp",
    "InitialState",
    "QubitRef",
    "RegisterHandle",
    "UniformSuperposition",
    "Zero",
    "export_qasm",
    "prepare",
    "prepare_register",
    "read_qasm",
]
