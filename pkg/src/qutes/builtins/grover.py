"""Grover search for a classical bitstring pattern inside a qustring register."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ..qir.circuit import CircuitHandler, GateOp, QubitRef, RegisterHandle, cx, h, mcz, x
from .encoding import Target, qubits_of

MIN_INDEX_WIDTH = 2


def grover_iterations(n: int, m: int = 1) -> int:
    """floor(pi/4 * sqrt(n/m)) for a search space of ``n`` with ``m`` marked items."""
    if n < 1:
        raise ValueError("search space must be non-empty")
    if not 1 <= m <= n:
        raise ValueError(f"marked count {m} must lie in [1, {n}]")
    return math.floor(math.pi / 4 * math.sqrt(n / m))


def substring_positions(target: str, pattern: str) -> list[int]:
    """Classical reference: every start index where ``pattern`` occurs in ``target``."""
    m = len(pattern)
    return [i for i in range(len(target) - m + 1) if target[i:i + m] == pattern]


def index_width(positions: int) -> int:
    # Two qubits at least: with a single index qubit one Grover step only
    # reaches success probability 1/2, with two it is exact for P <= 2.
    return max(MIN_INDEX_WIDTH, math.ceil(math.log2(positions)) if positions > 1 else 0)


def char_qubit(chars: Sequence[QubitRef], c: int) -> QubitRef:
    """Qubit holding character ``c`` of a qustring; the leftmost is the highest."""
    return chars[len(chars) - 1 - c]


def diffusion(index: Sequence[QubitRef]) -> list[GateOp]:
    """Inversion about the mean on the index register (up to global phase)."""
    hs = [h(q) for q in index]
    xs = [x(q) for q in index]
    return hs + xs + [mcz(index[:-1], index[-1])] + xs + hs


@dataclass
class GroverPlan:
    index_register: RegisterHandle
    oracle_ops: list[GateOp]
    diffusion_ops: list[GateOp]
    iterations: int
    ancilla: list[RegisterHandle]
    positions: int
    pattern: str
    target: tuple[QubitRef, ...] = field(repr=False, default=())

    @property
    def search_space(self) -> int:
        return 1 << self.index_register.width

    def ops(self) -> list[GateOp]:
        """Uniform index preparation followed by the planned Grover iterations."""
        out = [h(q) for q in self.index_register.qubits]
        for _ in range(self.iterations):
            out += self.oracle_ops + self.diffusion_ops
        return out


def substring_oracle(
    index: Sequence[QubitRef],
    target: Sequence[QubitRef],
    pattern: str,
    ancilla: Sequence[QubitRef],
) -> list[GateOp]:
    """Phase-flip |i> when the target's characters i..i+m-1 equal ``pattern``.

    For each candidate position the ancillas are loaded with
    ``target_bit XOR pattern_bit`` (then inverted, so 1 means equal), a
    multi-controlled Z fires on index == i and all ancillas set, and the
    ancilla loading is undone.
    """
    m = len(pattern)
    positions = len(target) - m + 1
    ops: list[GateOp] = []
    for i in range(positions):
        select = [x(q) for b, q in enumerate(index) if not i >> b & 1]
        load: list[GateOp] = []
        for j, bit in enumerate(pattern):
            load.append(cx(char_qubit(target, i + j), ancilla[j]))
            if bit == "1":
                load.append(x(ancilla[j]))
        load += [x(a) for a in ancilla]
        controls = list(index) + list(ancilla[:-1])
        ops += select + load + [mcz(controls, ancilla[-1])] + list(reversed(load)) + select
    return ops


def plan_grover_substring(
    handler: CircuitHandler,
    target: Target,
    pattern: str,
    name: str = "idx",
    index: RegisterHandle | None = None,
    ancilla: RegisterHandle | None = None,
) -> GroverPlan:
    """Plan a Grover search for ``pattern`` over the start positions of ``target``.

    Declares the index and ancilla registers on ``handler`` unless scratch
    registers of the right widths are passed in (the index must be |0...0>
    and the ancillas clean). Index states past the last valid position are
    never marked. The iteration count assumes one match.
    """
    chars = qubits_of(target)
    n, m = len(chars), len(pattern)
    if any(c not in "01" for c in pattern):
        raise ValueError(f"pattern {pattern!r} is not a bitstring")
    if not 1 <= m <= n:
        raise ValueError(f"pattern length {m} must lie in [1, {n}]")
    positions = n - m + 1
    width = index_width(positions)
    if index is None:
        index = handler.declare_register(handler.fresh_name(name), width)
    elif index.width != width:
        raise ValueError(f"index register needs {width} qubits, got {index.width}")
    anc = ancilla
    if anc is None:
        anc = handler.declare_register(handler.fresh_name(name + "_anc"), m)
    elif anc.width != m:
        raise ValueError(f"ancilla register needs {m} qubits, got {anc.width}")
    return GroverPlan(
        index_register=index,
        oracle_ops=substring_oracle(index.qubits, chars, pattern, anc.qubits),
        diffusion_ops=diffusion(index.qubits),
        iterations=grover_iterations(1 << width, 1),
        ancilla=[anc],
        positions=positions,
        pattern=pattern,
        target=chars,
    )
