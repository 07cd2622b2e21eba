"""Gate-level circuit IR: registers, gate operations and the append-only op log.

Qubit 0 of a register is its least significant bit when the register holds an
integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union


class CircuitError(ValueError):
    pass


# -- initial states -------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class BasisValue:
    value: int


@dataclass(frozen=True)
class UniformSuperposition:
    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", tuple(values))


InitialState = Union[Zero, BasisValue, UniformSuperposition]


def check_initial_state(init: InitialState, width: int) -> None:
    limit = 1 << width
    if isinstance(init, BasisValue):
        if not 0 <= init.value < limit:
            raise CircuitError(f"basis value {init.value} does not fit in {width} qubit(s)")
    elif isinstance(init, UniformSuperposition):
        if not init.values:
            raise CircuitError("superposition needs at least one value")
        if len(set(init.values)) != len(init.values):
            raise CircuitError("superposition values must be distinct")
        bad = [v for v in init.values if not 0 <= v < limit]
        if bad:
            raise CircuitError(f"superposition value {bad[0]} does not fit in {width} qubit(s)")
    elif not isinstance(init, Zero):
        raise CircuitError(f"not an initial state: {init!r}")


# -- qubits and registers -------------------------------------------------------


@dataclass(frozen=True, order=True)
class QubitRef:
    register: int
    offset: int

    def __repr__(self) -> str:
        return f"r{self.register}[{self.offset}]"


@dataclass(frozen=True)
class RegisterHandle:
    id: int
    name: str
    width: int
    initial_state: InitialState = field(default_factory=Zero)

    def __post_init__(self) -> None:
        if self.width < 1:
            raise CircuitError(f"register {self.name!r} must have at least one qubit")
        check_initial_state(self.initial_state, self.width)

    def __getitem__(self, offset: int) -> QubitRef:
        if not 0 <= offset < self.width:
            raise IndexError(f"qubit {offset} out of range for {self.name}[{self.width}]")
        return QubitRef(self.id, offset)

    @property
    def qubits(self) -> tuple[QubitRef, ...]:
        return tuple(QubitRef(self.id, i) for i in range(self.width))


# -- gate operations ------------------------------------------------------------


class Gate(str, Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    P = "p"
    CX = "cx"
    SWAP = "swap"
    MCX = "mcx"
    MCY = "mcy"
    MCZ = "mcz"
    MCP = "mcp"
    MEASURE = "measure"
    RESET = "reset"
    BARRIER = "barrier"


SINGLE_QUBIT = frozenset({Gate.H, Gate.X, Gate.Y, Gate.Z, Gate.P, Gate.RESET})
MULTI_CONTROLLED = frozenset({Gate.MCX, Gate.MCY, Gate.MCZ, Gate.MCP})
PARAMETRIC = frozenset({Gate.P, Gate.MCP})


@dataclass(frozen=True)
class GateOp:
    """One circuit instruction.

    ``controls`` is non-empty only for ``CX`` (exactly one) and the
    multi-controlled kinds; ``slot`` is set only for ``MEASURE``.
    """

    gate: Gate
    targets: tuple[QubitRef, ...]
    controls: tuple[QubitRef, ...] = ()
    theta: Optional[float] = None
    slot: Optional[int] = None

    def __post_init__(self) -> None:
        g = self.gate
        if g in SINGLE_QUBIT and len(self.targets) != 1:
            raise CircuitError(f"{g.value} acts on exactly one qubit")
        if g is Gate.SWAP and len(self.targets) != 2:
            raise CircuitError("swap acts on exactly two qubits")
        if g in MULTI_CONTROLLED or g is Gate.CX:
            if len(self.targets) != 1:
                raise CircuitError(f"{g.value} has exactly one target")
            if g is Gate.CX and len(self.controls) != 1:
                raise CircuitError("cx has exactly one control")
        elif self.controls:
            raise CircuitError(f"{g.value} takes no controls")
        if g in (Gate.MEASURE, Gate.BARRIER) and not self.targets:
            raise CircuitError(f"{g.value} needs at least one qubit")
        if (g is Gate.MEASURE) != (self.slot is not None):
            raise CircuitError("a classical slot is required exactly for measure")
        if g in PARAMETRIC:
            if self.theta is None or not math.isfinite(self.theta):
                raise CircuitError(f"{g.value} needs a finite angle")
        elif self.theta is not None:
            raise CircuitError(f"{g.value} takes no angle")
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise CircuitError(f"repeated qubit operand in {g.value}")

    @property
    def qubits(self) -> tuple[QubitRef, ...]:
        return self.controls + self.targets

    def __repr__(self) -> str:
        parts = [self.gate.value]
        if self.theta is not None:
            parts.append(f"({self.theta!r})")
        if self.controls:
            parts.append(" " + ",".join(map(repr, self.controls)) + " ->")
        parts.append(" " + ",".join(map(repr, self.targets)))
        if self.slot is not None:
            parts.append(f" => c{self.slot}")
        return "GateOp<" + "".join(parts) + ">"


def h(q: QubitRef) -> GateOp:
    return GateOp(Gate.H, (q,))


def x(q: QubitRef) -> GateOp:
    return GateOp(Gate.X, (q,))


def y(q: QubitRef) -> GateOp:
    return GateOp(Gate.Y, (q,))


def z(q: QubitRef) -> GateOp:
    return GateOp(Gate.Z, (q,))


def p(q: QubitRef, theta: float) -> GateOp:
    return GateOp(Gate.P, (q,), theta=float(theta))


def cx(control: QubitRef, target: QubitRef) -> GateOp:
    return GateOp(Gate.CX, (target,), (control,))


def swap(a: QubitRef, b: QubitRef) -> GateOp:
    return GateOp(Gate.SWAP, (a, b))


# The multi-controlled constructors degrade to the plain gate without controls.


def mcx(controls: Sequence[QubitRef], target: QubitRef) -> GateOp:
    return GateOp(Gate.MCX, (target,), tuple(controls)) if controls else x(target)


def mcy(controls: Sequence[QubitRef], target: QubitRef) -> GateOp:
    return GateOp(Gate.MCY, (target,), tuple(controls)) if controls else y(target)


def mcz(controls: Sequence[QubitRef], target: QubitRef) -> GateOp:
    return GateOp(Gate.MCZ, (target,), tuple(controls)) if controls else z(target)


def mcp(controls: Sequence[QubitRef], target: QubitRef, theta: float) -> GateOp:
    if not controls:
        return p(target, theta)
    return GateOp(Gate.MCP, (target,), tuple(controls), theta=float(theta))


def measure(qubits: Sequence[QubitRef], slot: int) -> GateOp:
    return GateOp(Gate.MEASURE, tuple(qubits), slot=slot)


def reset(q: QubitRef) -> GateOp:
    return GateOp(Gate.RESET, (q,))


def barrier(qubits: Sequence[QubitRef]) -> GateOp:
    return GateOp(Gate.BARRIER, tuple(qubits))


# -- circuits -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalSlot:
    id: int
    name: str
    width: int


def slot_name(slot_id: int) -> str:
    return "c" if slot_id == 0 else f"c{slot_id}"


@dataclass(frozen=True)
class Circuit:
    registers: tuple[RegisterHandle, ...] = ()
    ops: tuple[GateOp, ...] = ()
    slots: tuple[ClassicalSlot, ...] = ()

    @property
    def num_qubits(self) -> int:
        return sum(r.width for r in self.registers)

    def layout(self) -> dict[int, int]:
        """Register id -> index of its qubit 0 in the global qubit order."""
        offsets = {}
        base = 0
        for r in self.registers:
            offsets[r.id] = base
            base += r.width
        return offsets

    def qubit_index(self, q: QubitRef) -> int:
        return self.layout()[q.register] + q.offset

    def without_measurements(self) -> Circuit:
        return Circuit(self.registers, tuple(op for op in self.ops if op.gate is not Gate.MEASURE), ())


class CircuitHandler:
    """Collects registers and logs quantum operations in program order."""

    def __init__(self) -> None:
        self._registers: list[RegisterHandle] = []
        self._by_id: dict[int, RegisterHandle] = {}
        self._names: set[str] = set()
        self._ops: list[GateOp] = []
        self._slots: list[ClassicalSlot] = []

    @property
    def registers(self) -> tuple[RegisterHandle, ...]:
        return tuple(self._registers)

    @property
    def ops(self) -> tuple[GateOp, ...]:
        return tuple(self._ops)

    @property
    def slots(self) -> tuple[ClassicalSlot, ...]:
        return tuple(self._slots)

    def register(self, register_id: int) -> RegisterHandle:
        return self._by_id[register_id]

    def fresh_name(self, base: str) -> str:
        if base not in self._names:
            return base
        i = 1
        while f"{base}_{i}" in self._names:
            i += 1
        return f"{base}_{i}"

    def declare_register(self, name: str, width: int, init: InitialState | None = None) -> RegisterHandle:
        if name in self._names:
            raise CircuitError(f"register {name!r} already declared")
        handle = RegisterHandle(len(self._registers), name, width, init if init is not None else Zero())
        self._registers.append(handle)
        self._by_id[handle.id] = handle
        self._names.add(name)
        return handle

    def new_slot(self, width: int) -> ClassicalSlot:
        if width < 1:
            raise CircuitError("classical slot must hold at least one bit")
        slot = ClassicalSlot(len(self._slots), slot_name(len(self._slots)), width)
        self._slots.append(slot)
        return slot

    def _check(self, op: GateOp) -> None:
        for q in op.qubits:
            reg = self._by_id.get(q.register)
            if reg is None:
                raise CircuitError(f"unknown register id {q.register}")
            if not 0 <= q.offset < reg.width:
                raise CircuitError(f"qubit {q.offset} out of range for register {reg.name!r}")
        if op.gate is Gate.MEASURE:
            if not 0 <= op.slot < len(self._slots):
                raise CircuitError(f"unknown classical slot {op.slot}")
            if self._slots[op.slot].width != len(op.targets):
                raise CircuitError("measured qubit count differs from slot width")

    def push_op(self, op: GateOp) -> None:
        self._check(op)
        self._ops.append(op)

    def extend(self, ops: Iterable[GateOp]) -> None:
        for op in ops:
            self.push_op(op)

    def push_measure(self, qubits: Sequence[QubitRef]) -> ClassicalSlot:
        slot = self.new_slot(len(qubits))
        self.push_op(measure(qubits, slot.id))
        return slot

    def assemble(self) -> Circuit:
        """State preparation for every register, in declaration order, then the log."""
        from .stateprep import prepare_register

        prep: list[GateOp] = []
        for r in self._registers:
            prep.extend(prepare_register(r))
        return Circuit(tuple(self._registers), tuple(prep) + tuple(self._ops), tuple(self._slots))
