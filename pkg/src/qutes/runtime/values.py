"""Runtime values flowing through the interpreter."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..qir.circuit import QubitRef, RegisterHandle
from ..sema.types import QUBIT, QUINT, QUSTRING, QutesType

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class QuantumRef:
    """A quantum value: an ordered tuple of qubits read as ``type``.

    ``qubits[0]`` is the least significant bit for quint values and the last
    character for qustring values. ``register`` is set when the reference
    covers one whole register.
    """

    qubits: tuple[QubitRef, ...]
    type: QutesType
    register: Optional[RegisterHandle] = field(default=None, compare=False)

    @property
    def width(self) -> int:
        return len(self.qubits)

    def retyped(self, ty: QutesType) -> QuantumRef:
        return QuantumRef(self.qubits, ty, self.register)

    def qubit_for(self, index: int) -> QubitRef:
        """Qubit of element ``index``: bit ``index`` of a quint, character ``index`` of a qustring."""
        if not 0 <= index < self.width:
            raise IndexError(index)
        if self.type == QUSTRING:
            return self.qubits[self.width - 1 - index]
        return self.qubits[index]

    def element(self, index: int) -> QuantumRef:
        return QuantumRef((self.qubit_for(index),), QUBIT)

    def elements(self) -> list[QuantumRef]:
        return [self.element(i) for i in range(self.width)]


def register_ref(handle: RegisterHandle, ty: QutesType) -> QuantumRef:
    return QuantumRef(handle.qubits, ty, handle)


@dataclass(eq=False)
class ArrayValue:
    elements: list
    element_type: QutesType

    def copy(self) -> ArrayValue:
        return ArrayValue([e.copy() if isinstance(e, ArrayValue) else e for e in self.elements], self.element_type)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ArrayValue) and self.elements == other.elements


Value = Union[bool, int, float, str, ArrayValue, QuantumRef, None]


def decode(bits: list[int], ty: QutesType) -> Union[bool, int, str]:
    """Classical value of measured ``bits`` (``bits[0]`` from ``qubits[0]``)."""
    if ty == QUSTRING:
        return "".join(str(b) for b in reversed(bits))
    value = sum(b << i for i, b in enumerate(bits))
    if ty == QUBIT and len(bits) == 1:
        return bool(value)
    if ty in (QUINT, QUBIT):
        return value
    raise TypeError(f"cannot decode a measurement as {ty}")


def truthy(value: Value) -> bool:
    if isinstance(value, str):
        return "1" in value
    return bool(value)


def to_bool_value(value: Value) -> bool:
    if value is None or isinstance(value, (ArrayValue, QuantumRef)):
        raise TypeError(f"no bool value for {value!r}")
    return truthy(value)


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, ArrayValue):
        return "[" + ", ".join(format_value(v) for v in value.elements) + "]"
    if isinstance(value, QuantumRef):
        return f"<{value.type} x{value.width}>"
    if value is None:
        return "void"
    return str(value)


_DEFAULTS = {"bool": False, "int": 0, "float": 0.0, "string": ""}


def default_value(ty: QutesType) -> Value:
    """Initial value of a classical declaration without an initializer."""
    if ty.is_array:
        return ArrayValue([], ty.element)
    return _DEFAULTS.get(ty.kind.value)
