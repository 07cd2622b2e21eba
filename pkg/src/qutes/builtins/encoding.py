"""Classical-to-quantum value encoding."""

from __future__ import annotations

from typing import Sequence, Union

from ..qir.circuit import GateOp, QubitRef, RegisterHandle, x

Target = Union[RegisterHandle, Sequence[QubitRef]]


class EncodingError(ValueError):
    pass


def qubits_of(target: Target) -> tuple[QubitRef, ...]:
    return target.qubits if isinstance(target, RegisterHandle) else tuple(target)


def bitstring_value(bits: str) -> int:
    """Integer read of a bitstring; the leftmost character is the highest qubit."""
    if not bits or any(c not in "01" for c in bits):
        raise EncodingError(f"{bits!r} is not a bitstring")
    return int(bits, 2)


def value_bitstring(value: int, width: int) -> str:
    return format(value, f"0{width}b")


def quint_width(value: int) -> int:
    """Qubits needed for a non-negative integer: max(1, ceil(log2(value + 1)))."""
    if value < 0:
        raise EncodingError(f"negative value {value} cannot be encoded")
    return max(1, value.bit_length())


def encode_classical(value: Union[bool, int, str], target: Target) -> list[GateOp]:
    """Gates mapping |0...0> on ``target`` to the basis state holding ``value``.

    Integers and bools are written LSB-first (qubit 0 is bit 0); a string must
    be a bitstring exactly as long as the target.
    """
    qubits = qubits_of(target)
    width = len(qubits)
    if isinstance(value, str):
        if len(value) != width:
            raise EncodingError(f"bitstring {value!r} needs {len(value)} qubits, target has {width}")
        value = bitstring_value(value)
    value = int(value)
    if value < 0 or value >> width:
        raise EncodingError(f"value {value} does not fit in {width} qubit(s)")
    return [x(q) for i, q in enumerate(qubits) if value >> i & 1]
