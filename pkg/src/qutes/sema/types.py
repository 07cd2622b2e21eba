"""The Qutes type lattice: classical and quantum base types, arrays, and void.

Implicit conversions come in two flavours:

* promotion, along ``bool -> int -> float``, ``bool -> qubit``, ``int -> quint``,
  ``string -> qustring`` and ``qubit -> quint`` (plus transitive closure);
* demotion, a measurement that turns ``qubit``/``quint``/``qustring`` into
  ``bool``/``int``/``string`` and may then promote classically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Kind(str, Enum):
    BOOL = "bool"
    INT = "int"
    FLOAT = "float"
    STRING = "string"
    QUBIT = "qubit"
    QUINT = "quint"
    QUSTRING = "qustring"
    VOID = "void"
    ARRAY = "array"


_CLASSICAL = frozenset({Kind.BOOL, Kind.INT, Kind.FLOAT, Kind.STRING})
_QUANTUM = frozenset({Kind.QUBIT, Kind.QUINT, Kind.QUSTRING})


class QutesTypeError(Exception):
    """No implicit conversion exists between two types."""


@dataclass(frozen=True)
class QutesType:
    kind: Kind
    element: Optional[QutesType] = None

    def __post_init__(self) -> None:
        if (self.kind is Kind.ARRAY) != (self.element is not None):
            raise ValueError("element type is required exactly for arrays")
        if self.element is not None and self.element.kind is Kind.VOID:
            raise ValueError("array elements must not be void")

    @property
    def is_array(self) -> bool:
        return self.kind is Kind.ARRAY

    @property
    def base(self) -> QutesType:
        t = self
        while t.element is not None:
            t = t.element
        return t

    @property
    def is_classical(self) -> bool:
        return self.base.kind in _CLASSICAL

    @property
    def is_quantum(self) -> bool:
        return self.base.kind in _QUANTUM

    @property
    def is_numeric(self) -> bool:
        return self.kind in (Kind.BOOL, Kind.INT, Kind.FLOAT)

    def __str__(self) -> str:
        if self.element is not None:
            return f"{self.element}[]"
        return self.kind.value


BOOL = QutesType(Kind.BOOL)
INT = QutesType(Kind.INT)
FLOAT = QutesType(Kind.FLOAT)
STRING = QutesType(Kind.STRING)
QUBIT = QutesType(Kind.QUBIT)
QUINT = QutesType(Kind.QUINT)
QUSTRING = QutesType(Kind.QUSTRING)
VOID = QutesType(Kind.VOID)

BASE_TYPES = (BOOL, INT, FLOAT, STRING, QUBIT, QUINT, QUSTRING, VOID)
_BY_NAME = {t.kind.value: t for t in BASE_TYPES}


def array_of(element: QutesType) -> QutesType:
    return QutesType(Kind.ARRAY, element)


def from_name(name: str, array_depth: int = 0) -> QutesType:
    try:
        t = _BY_NAME[name]
    except KeyError:
        raise QutesTypeError(f"unknown type {name!r}") from None
    for _ in range(array_depth):
        t = array_of(t)
    return t


_EDGES = {
    BOOL: (INT, QUBIT),
    INT: (FLOAT, QUINT),
    STRING: (QUSTRING,),
    QUBIT: (QUINT,),
}


def _closure() -> dict[QutesType, frozenset[QutesType]]:
    reach: dict[QutesType, frozenset[QutesType]] = {}
    for t in BASE_TYPES:
        seen = {t}
        stack = [t]
        while stack:
            for nxt in _EDGES.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        reach[t] = frozenset(seen)
    return reach


_PROMOTES_TO = _closure()

DEMOTION = {QUBIT: BOOL, QUINT: INT, QUSTRING: STRING}


def can_promote(src: QutesType, dst: QutesType) -> bool:
    if src == dst:
        return True
    if src.is_array and dst.is_array:
        return can_promote(src.element, dst.element)
    if src.is_array or dst.is_array:
        return False
    return dst in _PROMOTES_TO[src]


def promote_type(src: QutesType, dst: QutesType) -> QutesType:
    """Return ``dst`` when ``src`` converts to it without measurement."""
    if not can_promote(src, dst):
        raise QutesTypeError(f"no promotion from {src} to {dst}")
    return dst


def demote(t: QutesType) -> QutesType:
    """The classical type a measurement of ``t`` produces."""
    try:
        return DEMOTION[t]
    except KeyError:
        raise QutesTypeError(f"{t} is not a quantum type") from None


def requires_measurement(src: QutesType, dst: QutesType) -> bool:
    """True iff converting ``src`` to ``dst`` goes through a measurement.

    That is the case when ``src`` is a quantum base type and ``dst`` is a
    classical type reachable from its measured value. Any quantum value can
    become a ``bool`` (nonzero measurement means true).
    """
    if src not in DEMOTION or dst.is_array or not dst.is_classical:
        return False
    return dst == BOOL or can_promote(DEMOTION[src], dst)


def convertible(src: QutesType, dst: QutesType) -> bool:
    return can_promote(src, dst) or requires_measurement(src, dst)


_NUMERIC_RANK = {Kind.BOOL: 0, Kind.INT: 1, Kind.FLOAT: 2}


def numeric_join(a: QutesType, b: QutesType) -> QutesType:
    """The wider of two classical numeric types; ``bool op bool`` computes in int."""
    if not (a.is_numeric and b.is_numeric):
        raise QutesTypeError(f"operands {a} and {b} are not numeric")
    wide = max(_NUMERIC_RANK[a.kind], _NUMERIC_RANK[b.kind], 1)
    return (BOOL, INT, FLOAT)[wide]
