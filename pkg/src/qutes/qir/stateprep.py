"""State preparation for register initial states, using only the IR gate set."""

from __future__ import annotations

import math
from typing import Sequence

from .circuit import (
    BasisValue,
    GateOp,
    InitialState,
    QubitRef,
    RegisterHandle,
    UniformSuperposition,
    Zero,
    h,
    mcp,
    mcx,
    p,
    x,
)


def basis_ops(qubits: Sequence[QubitRef], value: int) -> list[GateOp]:
    """X on every qubit whose bit is set in ``value`` (qubit 0 least significant)."""
    if value < 0 or value >> len(qubits):
        raise ValueError(f"value {value} does not fit in {len(qubits)} qubit(s)")
    return [x(q) for i, q in enumerate(qubits) if value >> i & 1]


def _phase_on(controls: Sequence[QubitRef], theta: float) -> list[GateOp]:
    """Multiply the all-controls-set subspace by e^{i theta}."""
    if not controls:
        return []
    if len(controls) == 1:
        return [p(controls[0], theta)]
    return [mcp(controls[:-1], controls[-1], theta)]


def controlled_ry(controls: Sequence[QubitRef], target: QubitRef, theta: float) -> list[GateOp]:
    """RY(theta) on ``target`` conditioned on every control being |1>.

    Uses RY = S H RZ H S^dagger with the controlled RZ written as a controlled
    phase plus a compensating phase on the controls. Without controls the
    result differs from RY by a global phase only.
    """
    return [
        p(target, -math.pi / 2),
        h(target),
        mcp(controls, target, theta),
        *_phase_on(controls, -theta / 2),
        h(target),
        p(target, math.pi / 2),
    ]


def _conditioned(prefix: list[tuple[QubitRef, int]], body: list[GateOp]) -> list[GateOp]:
    flips = [x(q) for q, bit in prefix if bit == 0]
    return flips + body + flips


def uniform_superposition_ops(qubits: Sequence[QubitRef], values: Sequence[int]) -> list[GateOp]:
    """Prepare an equal-weight superposition of ``values`` from |0...0>.

    Splits the value set on the most significant qubit first; at each node of
    the resulting binary tree a rotation conditioned on the prefix fixed so far
    distributes amplitude between the two halves in proportion to their sizes.
    """
    width = len(qubits)
    vals = sorted(set(values))
    if not vals:
        raise ValueError("superposition needs at least one value")
    if vals[0] < 0 or vals[-1] >> width:
        raise ValueError(f"superposition values do not fit in {width} qubit(s)")
    if len(vals) == 1 << width:
        return [h(q) for q in qubits]
    ops: list[GateOp] = []

    def split(bit: int, prefix: list[tuple[QubitRef, int]], subset: list[int]) -> None:
        if bit < 0:
            return
        target = qubits[bit]
        ones = [v for v in subset if v >> bit & 1]
        zeros = [v for v in subset if not v >> bit & 1]
        controls = [q for q, _ in prefix]
        if ones and zeros:
            theta = 2 * math.atan2(math.sqrt(len(ones)), math.sqrt(len(zeros)))
            ops.extend(_conditioned(prefix, controlled_ry(controls, target, theta)))
        elif ones:
            ops.extend(_conditioned(prefix, [mcx(controls, target)]))
        if zeros:
            split(bit - 1, prefix + [(target, 0)], zeros)
        if ones:
            split(bit - 1, prefix + [(target, 1)], ones)

    split(width - 1, [], vals)
    return ops


def prepare(qubits: Sequence[QubitRef], init: InitialState) -> list[GateOp]:
    if isinstance(init, Zero):
        return []
    if isinstance(init, BasisValue):
        return basis_ops(qubits, init.value)
    if isinstance(init, UniformSuperposition):
        if len(init.values) == 1:
            return basis_ops(qubits, init.values[0])
        return uniform_superposition_ops(qubits, init.values)
    raise TypeError(f"not an initial state: {init!r}")


def prepare_register(register: RegisterHandle) -> list[GateOp]:
    return prepare(register.qubits, register.initial_state)
