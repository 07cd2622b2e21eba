"""Quantum register arithmetic: Draper adder and cyclic shift."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

from ..qir.circuit import GateOp, QubitRef, h, mcp, swap
from .encoding import Target, qubits_of


def qft(qubits: Sequence[QubitRef]) -> list[GateOp]:
    """QFT without the final qubit reversal.

    Afterwards qubit ``j`` carries the phase ``2*pi*b / 2**(j+1)`` of the input
    basis value ``b``.
    """
    ops: list[GateOp] = []
    for j in reversed(range(len(qubits))):
        ops.append(h(qubits[j]))
        for k in reversed(range(j)):
            ops.append(mcp([qubits[k]], qubits[j], math.pi / (1 << (j - k))))
    return ops


def inverse(ops: Sequence[GateOp]) -> list[GateOp]:
    """Adjoint of a list of H and (multi-)controlled phase gates."""
    out = []
    for op in reversed(ops):
        if op.theta is None:
            out.append(op)
        else:
            out.append(mcp(op.controls, op.targets[0], -op.theta))
    return out


def add_into(a: Sequence[QubitRef], b: Sequence[QubitRef]) -> list[GateOp]:
    """|a>|b> -> |a>|(a + b) mod 2**len(b)>, for ``len(a) <= len(b)``."""
    if len(a) > len(b):
        raise ValueError("the addend register may not be wider than the accumulator")
    forward = qft(b)
    phases = [
        mcp([a[i]], b[j], math.pi / (1 << (j - i)))
        for j in range(len(b))
        for i in range(min(j + 1, len(a)))
    ]
    return forward + phases + inverse(forward)


def synth_add(a: Target, b: Target) -> list[GateOp]:
    """Modular superposition addition ``b <- a + b`` on equal-width registers."""
    qa, qb = qubits_of(a), qubits_of(b)
    if len(qa) != len(qb):
        raise ValueError(f"width mismatch: {len(qa)} vs {len(qb)}")
    return add_into(qa, qb)


@dataclass(frozen=True)
class ShiftSpec:
    register: Target
    k: int
    direction: Literal["left", "right"] = "left"


def _reflection(qubits: Sequence[QubitRef], axis: int) -> list[GateOp]:
    """Swap layer sending position i to (axis - i) mod w; depth one."""
    w = len(qubits)
    ops = []
    for i in range(w):
        j = (axis - i) % w
        if i < j:
            ops.append(swap(qubits[i], qubits[j]))
    return ops


def synth_cyclic_shift(spec: ShiftSpec) -> list[GateOp]:
    """Rotate qubit contents: a left shift by k moves position i to (i + k) mod w.

    A rotation is the product of two reflections (i -> -i, then i -> k - i), so
    the circuit is two layers of disjoint swaps whatever the width: at most w
    swaps, constant depth.
    """
    qubits = qubits_of(spec.register)
    w = len(qubits)
    if w == 0:
        return []
    k = spec.k % w if spec.direction == "left" else (-spec.k) % w
    if k == 0:
        return []
    return _reflection(qubits, 0) + _reflection(qubits, k)
