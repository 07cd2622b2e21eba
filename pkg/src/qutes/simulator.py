"""Dense statevector simulator.

Amplitude index bit ``k`` is global qubit ``k``; registers occupy consecutive
qubits in declaration order. Gates act in place on a ``(2,) * n`` tensor view,
with controls applied by slicing rather than by building full matrices.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .diagnostics import QutesError
from .qir.circuit import Circuit, Gate, GateOp, QubitRef

DEFAULT_QUBIT_CAP = 24

_S2 = 1 / math.sqrt(2)
_MATRICES = {
    Gate.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    Gate.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Gate.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Gate.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
_CONTROLLED_BASE = {Gate.CX: Gate.X, Gate.MCX: Gate.X, Gate.MCY: Gate.Y, Gate.MCZ: Gate.Z}


class QubitCapExceeded(QutesError):
    pass


class SimulationError(QutesError):
    pass


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n: int, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
        if n > cap:
            raise QubitCapExceeded(f"{n} qubits exceed the simulator cap of {cap}")
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    def copy(self) -> StateVector:
        return StateVector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self) -> np.ndarray:
        # axis 0 is the most significant qubit
        return self.amplitudes.reshape((2,) * self.n) if self.n else self.amplitudes

    def axis(self, qubit: int) -> int:
        if not 0 <= qubit < self.n:
            raise SimulationError(f"qubit {qubit} out of range for {self.n}-qubit state")
        return self.n - 1 - qubit

    def extend(self, extra: int, cap: int = DEFAULT_QUBIT_CAP) -> None:
        """Append ``extra`` fresh |0> qubits above the existing ones."""
        if self.n + extra > cap:
            raise QubitCapExceeded(f"{self.n + extra} qubits exceed the simulator cap of {cap}")
        amps = np.zeros(1 << (self.n + extra), dtype=complex)
        amps[: 1 << self.n] = self.amplitudes
        self.n += extra
        self.amplitudes = amps

    # -- gate kernels ----------------------------------------------------------

    def _slices(self, controls: Sequence[int], pinned: Mapping[int, int]) -> tuple:
        idx: list = [slice(None)] * self.n
        for c in controls:
            idx[self.axis(c)] = 1
        for q, v in pinned.items():
            idx[self.axis(q)] = v
        return tuple(idx)

    def apply_matrix(self, matrix: np.ndarray, target: int, controls: Sequence[int] = ()) -> None:
        t = self.tensor()
        i0 = self._slices(controls, {target: 0})
        i1 = self._slices(controls, {target: 1})
        a0 = t[i0].copy()
        a1 = t[i1]
        t[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
        t[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1

    def apply_phase(self, theta: float, target: int, controls: Sequence[int] = ()) -> None:
        self.apply_factor(complex(math.cos(theta), math.sin(theta)), target, controls)

    def apply_factor(self, factor: complex, target: int, controls: Sequence[int] = ()) -> None:
        t = self.tensor()
        t[self._slices(controls, {target: 1})] *= factor

    def apply_swap(self, a: int, b: int) -> None:
        t = self.tensor()
        i01 = self._slices((), {a: 0, b: 1})
        i10 = self._slices((), {a: 1, b: 0})
        tmp = t[i01].copy()
        t[i01] = t[i10]
        t[i10] = tmp

    def marginal(self, qubits: Sequence[int]) -> np.ndarray:
        """Probabilities of the joint outcomes of ``qubits`` (qubits[0] least significant)."""
        probs = self.probabilities().reshape((2,) * self.n) if self.n else self.probabilities()
        keep = [self.axis(q) for q in qubits]
        others = tuple(a for a in range(self.n) if a not in keep)
        reduced = probs.sum(axis=others) if others else probs
        # reorder so the last axis is qubits[0]
        remaining = sorted(keep)
        order = [remaining.index(self.axis(q)) for q in reversed(qubits)]
        return np.transpose(reduced, order).reshape(-1)

    def measure(self, qubits: Sequence[int], rng: np.random.Generator) -> list[int]:
        """Sample ``qubits`` by the Born rule and collapse; returns their bits."""
        if len(set(qubits)) != len(qubits):
            raise SimulationError("measured qubits must be distinct")
        probs = self.marginal(qubits)
        cdf = np.cumsum(probs)
        u = rng.random() * cdf[-1]
        outcome = int(np.searchsorted(cdf, u, side="right"))
        outcome = min(outcome, len(probs) - 1)
        while probs[outcome] == 0.0:  # guard against landing on a zero-width bin
            outcome -= 1
        bits = [outcome >> i & 1 for i in range(len(qubits))]
        self.project(qubits, bits)
        return bits

    def project(self, qubits: Sequence[int], bits: Sequence[int]) -> None:
        t = self.tensor()
        for q, b in zip(qubits, bits):
            t[self._slices((), {q: 1 - b})] = 0.0
        norm = math.sqrt(self.norm())
        if norm == 0.0:
            raise SimulationError("projection onto a zero-probability outcome")
        self.amplitudes /= norm

    def definite_value(self, qubits: Sequence[int], tol: float = 1e-9) -> int | None:
        """The basis value of ``qubits`` if they are not in superposition."""
        probs = self.marginal(qubits)
        best = int(np.argmax(probs))
        return best if probs[best] > 1 - tol else None


def _resolve(qs: Sequence[QubitRef], layout: Mapping[int, int] | None) -> list[int]:
    if layout is None:
        return [q.offset if isinstance(q, QubitRef) else int(q) for q in qs]
    return [layout[q.register] + q.offset for q in qs]


def apply_gate(
    state: StateVector,
    op: GateOp,
    layout: Mapping[int, int] | None = None,
    rng: np.random.Generator | None = None,
) -> StateVector:
    """Apply ``op`` in place and return ``state``.

    ``layout`` maps register ids to global qubit offsets; without one, qubit
    offsets are used as global indices. Measurement and reset need ``rng``.
    """
    targets = _resolve(op.targets, layout)
    controls = _resolve(op.controls, layout)
    g = op.gate
    if g in _MATRICES:
        state.apply_matrix(_MATRICES[g], targets[0])
    elif g in _CONTROLLED_BASE:
        if g is Gate.MCZ:
            state.apply_factor(-1.0, targets[0], controls)
        else:
            state.apply_matrix(_MATRICES[_CONTROLLED_BASE[g]], targets[0], controls)
    elif g is Gate.P or g is Gate.MCP:
        state.apply_phase(op.theta, targets[0], controls)
    elif g is Gate.SWAP:
        state.apply_swap(targets[0], targets[1])
    elif g is Gate.BARRIER:
        pass
    elif g is Gate.RESET:
        if rng is None:
            raise SimulationError("reset needs a random generator")
        (bit,) = state.measure(targets, rng)
        if bit:
            state.apply_matrix(_MATRICES[Gate.X], targets[0])
    elif g is Gate.MEASURE:
        raise SimulationError("use StateVector.measure (or run) for measurement")
    else:  # pragma: no cover
        raise SimulationError(f"unsupported gate {g}")
    return state


def measure(state: StateVector, qubits: Sequence[int], rng: np.random.Generator) -> tuple[list[int], StateVector]:
    bits = state.measure(list(qubits), rng)
    return bits, state


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, shot)``; shots are independent."""
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), shot & (2**64 - 1)]))


@dataclass
class ShotHistogram:
    counts: dict[str, int] = field(default_factory=dict)
    shots: int = 0

    def merge(self, other: ShotHistogram) -> ShotHistogram:
        merged = Counter(self.counts)
        merged.update(other.counts)
        return ShotHistogram(dict(sorted(merged.items())), self.shots + other.shots)

    def probability(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots if self.shots else 0.0


def _key(circuit: Circuit, slot_bits: Mapping[int, Sequence[int]]) -> str:
    # slot 0 rightmost; inside a slot bit 0 rightmost
    parts = []
    for slot in reversed(circuit.slots):
        bits = slot_bits.get(slot.id, [0] * slot.width)
        parts.append("".join(str(b) for b in reversed(bits)))
    return "".join(parts)


def check_cap(circuit: Circuit, cap: int) -> None:
    if circuit.num_qubits > cap:
        raise QubitCapExceeded(f"circuit uses {circuit.num_qubits} qubits; cap is {cap}")


def execute(
    circuit: Circuit,
    rng: np.random.Generator,
    state: StateVector | None = None,
    start: int = 0,
    cap: int = DEFAULT_QUBIT_CAP,
) -> tuple[StateVector, dict[int, list[int]]]:
    """Run ``circuit.ops[start:]`` on ``state`` (fresh |0...0> by default)."""
    layout = circuit.layout()
    if state is None:
        check_cap(circuit, cap)
        state = StateVector.zero(circuit.num_qubits, cap)
    slots: dict[int, list[int]] = {}
    for op in circuit.ops[start:]:
        if op.gate is Gate.MEASURE:
            slots[op.slot] = state.measure(_resolve(op.targets, layout), rng)
        else:
            apply_gate(state, op, layout, rng)
    return state, slots


def run(
    circuit: Circuit,
    shots: int,
    seed: int = 0,
    cap: int = DEFAULT_QUBIT_CAP,
) -> ShotHistogram:
    """Sample ``shots`` executions; shot ``i`` draws from ``shot_rng(seed, i)``.

    The measurement-free prefix is simulated once and shared. When nothing but
    measurements follow it, outcomes are drawn directly from the final
    distribution instead of re-simulating each shot.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    check_cap(circuit, cap)
    layout = circuit.layout()
    first = next((i for i, op in enumerate(circuit.ops) if op.gate in (Gate.MEASURE, Gate.RESET)), len(circuit.ops))
    prefix = StateVector.zero(circuit.num_qubits, cap)
    for op in circuit.ops[:first]:
        apply_gate(prefix, op, layout)
    tail = circuit.ops[first:]
    counts: Counter[str] = Counter()
    if all(op.gate in (Gate.MEASURE, Gate.BARRIER) for op in tail):
        probs = prefix.probabilities()
        cdf = np.cumsum(probs)
        measures = [(op.slot, _resolve(op.targets, layout)) for op in tail if op.gate is Gate.MEASURE]
        for shot in range(shots):
            u = shot_rng(seed, shot).random() * cdf[-1]
            outcome = min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)
            while probs[outcome] == 0.0:
                outcome -= 1
            bits = {slot: [outcome >> q & 1 for q in qs] for slot, qs in measures}
            counts[_key(circuit, bits)] += 1
    else:
        for shot in range(shots):
            _, bits = execute(circuit, shot_rng(seed, shot), prefix.copy(), first, cap)
            counts[_key(circuit, bits)] += 1
    return ShotHistogram(dict(sorted(counts.items())), shots)


def statevector_of(circuit: Circuit, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """The exact final state of a measurement-free circuit."""
    if any(op.gate in (Gate.MEASURE, Gate.RESET) for op in circuit.ops):
        raise SimulationError("statevector_of needs a circuit without measurement or reset")
    state, _ = execute(circuit, np.random.default_rng(0), cap=cap)
    return state


def normalize_phase(amplitudes: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real and positive."""
    amps = np.asarray(amplitudes, dtype=complex)
    nz = np.flatnonzero(np.abs(amps) > tol)
    if nz.size == 0:
        return amps.copy()
    a = amps[nz[0]]
    return amps * (abs(a) / a)
