"""Circuit synthesis for the language's high-level quantum operations."""

from .arithmetic import ShiftSpec, add_into, inverse, qft, synth_add, synth_cyclic_shift
from .encoding import (
    EncodingError,
    bitstring_value,
    encode_classical,
    quint_width,
    qubits_of,
    value_bitstring,
)
from .grover import (
    GroverPlan,
    char_qubit,
    diffusion,
    grover_iterations,
    index_width,
    plan_grover_substring,
    substring_oracle,
    substring_positions,
)

__all__ = [
    "EncodingError", "GroverPlan", "ShiftSpec", "add_into", "bitstring_value", "char_qubit",
    "diffusion", "encode_classical", "grover_iterations", "index_width", "inverse",
    "plan_grover_substring", "qft", "quint_width", "qubits_of", "substring_oracle",
    "substring_positions", "synth_add", "synth_cyclic_shift", "value_bitstring",
]
