"""OpenQASM 3 export, plus a reader for the subset the exporter writes."""

from __future__ import annotations

import re

from .circuit import (
    MULTI_CONTROLLED,
    Circuit,
    ClassicalSlot,
    Gate,
    GateOp,
    QubitRef,
    RegisterHandle,
)

HEADER = ("OPENQASM 3.0;", 'include "stdgates.inc";')

# Keywords plus every gate name stdgates.inc declares.
RESERVED = frozenset(
    """
    OPENQASM include defcalgrammar def cal defcal gate extern box let break continue if else end
    return for while in switch case default input output const readonly mutable qreg qubit creg
    bool bit int uint float angle complex array void duration stretch measure barrier reset
    delay ctrl negctrl inv pow gphase durationof sizeof true false pi tau euler im dt ns us ms s
    U CX h x y z p phase cp cphase cx cy cz ch s sdg t tdg sx rx ry rz crx cry crz cu cswap swap
    ccx u1 u2 u3 id
    """.split()
)

_QASM_GATE = {
    Gate.H: "h", Gate.X: "x", Gate.Y: "y", Gate.Z: "z", Gate.P: "p",
    Gate.CX: "cx", Gate.SWAP: "swap",
    Gate.MCX: "x", Gate.MCY: "y", Gate.MCZ: "z", Gate.MCP: "p",
}


def _identifier(name: str) -> str:
    cleaned = re.sub(r"\W", "_", name, flags=re.ASCII) or "r"
    if cleaned[0].isdigit():
        cleaned = "_" + cleaned
    return cleaned + "_" if cleaned in RESERVED else cleaned


def qasm_names(circuit: Circuit) -> tuple[dict[int, str], dict[int, str]]:
    """Unique, valid identifiers for registers and classical slots."""
    used: set[str] = set()

    def claim(name: str) -> str:
        base = _identifier(name)
        out, i = base, 1
        while out in used or out in RESERVED:
            out = f"{base}_{i}"
            i += 1
        used.add(out)
        return out

    regs = {r.id: claim(r.name) for r in circuit.registers}
    slots = {s.id: claim(s.name) for s in circuit.slots}
    return regs, slots


def _angle(theta: float) -> str:
    return repr(float(theta))


def export_qasm(circuit: Circuit) -> str:
    """Render ``circuit`` as OpenQASM 3; identical circuits give identical text."""
    regs, slots = qasm_names(circuit)
    lines = list(HEADER)
    lines += [f"qubit[{r.width}] {regs[r.id]};" for r in circuit.registers]
    lines += [f"bit[{s.width}] {slots[s.id]};" for s in circuit.slots]

    def q(ref: QubitRef) -> str:
        return f"{regs[ref.register]}[{ref.offset}]"

    for op in circuit.ops:
        g = op.gate
        if g is Gate.MEASURE:
            lines += [f"{slots[op.slot]}[{i}] = measure {q(t)};" for i, t in enumerate(op.targets)]
        elif g is Gate.RESET:
            lines.append(f"reset {q(op.targets[0])};")
        elif g is Gate.BARRIER:
            lines.append("barrier " + ", ".join(q(t) for t in op.targets) + ";")
        else:
            name = _QASM_GATE[g]
            if op.theta is not None:
                name += f"({_angle(op.theta)})"
            if g in MULTI_CONTROLLED:
                name = f"ctrl({len(op.controls)}) @ {name}" if op.controls else name
            operands = ", ".join(q(t) for t in op.qubits)
            lines.append(f"{name} {operands};")
    return "\n".join(lines) + "\n"


# -- reader -------------------------------------------------------------------------


class QasmParseError(ValueError):
    pass


_DECL = re.compile(r"^(qubit|bit)\[(\d+)\]\s+(\w+)$")
_MEASURE = re.compile(r"^(\w+)\[(\d+)\]\s*=\s*measure\s+(\w+)\[(\d+)\]$")
_GATE = re.compile(r"^(?:ctrl(?:\((\d+)\))?\s*@\s*)?([a-z]+)(?:\(([^)]*)\))?\s+(.+)$")
_OPERAND = re.compile(r"^(\w+)\[(\d+)\]$")
_PLAIN = {"h": Gate.H, "x": Gate.X, "y": Gate.Y, "z": Gate.Z, "p": Gate.P, "cx": Gate.CX, "swap": Gate.SWAP}
_CONTROLLED = {"x": Gate.MCX, "y": Gate.MCY, "z": Gate.MCZ, "p": Gate.MCP}


def read_qasm(text: str) -> Circuit:
    """Parse exporter output back into a :class:`Circuit`.

    Registers come back with a ``Zero`` initial state since preparation is
    explicit in the gate list. Consecutive single-bit measurements that fill a
    slot from bit 0 upward are merged into one multi-qubit ``measure`` op.
    """
    statements = [s.strip() for s in re.sub(r"//[^\n]*", "", text).split(";")]
    statements = [s for s in statements if s]
    if not statements or not re.fullmatch(r"OPENQASM\s+3(\.0)?", statements[0]):
        raise QasmParseError("missing OPENQASM 3 header")
    registers: list[RegisterHandle] = []
    reg_ids: dict[str, int] = {}
    slots: list[ClassicalSlot] = []
    slot_ids: dict[str, int] = {}
    ops: list[GateOp] = []
    pending: tuple[int, list[QubitRef]] | None = None

    def operand(token: str) -> QubitRef:
        m = _OPERAND.match(token.strip())
        if not m or m.group(1) not in reg_ids:
            raise QasmParseError(f"bad qubit operand {token!r}")
        reg = registers[reg_ids[m.group(1)]]
        offset = int(m.group(2))
        if offset >= reg.width:
            raise QasmParseError(f"qubit index out of range in {token!r}")
        return QubitRef(reg.id, offset)

    def flush() -> None:
        nonlocal pending
        if pending is not None:
            slot, qubits = pending
            if len(qubits) != slots[slot].width:
                raise QasmParseError(f"slot {slots[slot].name} only partially measured")
            ops.append(GateOp(Gate.MEASURE, tuple(qubits), slot=slot))
            pending = None

    for stmt in statements[1:]:
        if stmt.startswith("include"):
            continue
        if m := _DECL.match(stmt):
            kind, width, name = m.group(1), int(m.group(2)), m.group(3)
            if kind == "qubit":
                reg_ids[name] = len(registers)
                registers.append(RegisterHandle(len(registers), name, width))
            else:
                slot_ids[name] = len(slots)
                slots.append(ClassicalSlot(len(slots), name, width))
            continue
        if m := _MEASURE.match(stmt):
            slot = slot_ids.get(m.group(1))
            if slot is None:
                raise QasmParseError(f"unknown bit register {m.group(1)!r}")
            bit = int(m.group(2))
            q = operand(f"{m.group(3)}[{m.group(4)}]")
            if pending is not None and pending[0] == slot and bit == len(pending[1]):
                pending[1].append(q)
            else:
                flush()
                if bit != 0:
                    raise QasmParseError("measurements must fill a slot from bit 0")
                pending = (slot, [q])
            continue
        flush()
        if stmt.startswith("reset "):
            ops.append(GateOp(Gate.RESET, (operand(stmt[6:]),)))
            continue
        if stmt.startswith("barrier "):
            ops.append(GateOp(Gate.BARRIER, tuple(operand(t) for t in stmt[8:].split(","))))
            continue
        m = _GATE.match(stmt)
        if not m:
            raise QasmParseError(f"unrecognised statement {stmt!r}")
        has_ctrl = stmt.startswith("ctrl")
        n_ctrl = int(m.group(1) or 1) if has_ctrl else 0
        name, arg = m.group(2), m.group(3)
        qubits = [operand(t) for t in m.group(4).split(",")]
        theta = float(arg) if arg is not None else None
        if has_ctrl:
            gate = _CONTROLLED.get(name)
        else:
            gate = _PLAIN.get(name)
            if name in ("x", "y", "z", "p") and len(qubits) != 1:
                gate = None
        if gate is None:
            raise QasmParseError(f"unsupported gate in {stmt!r}")
        if gate is Gate.CX:
            ops.append(GateOp(Gate.CX, (qubits[1],), (qubits[0],)))
        elif gate in MULTI_CONTROLLED:
            if len(qubits) != n_ctrl + 1:
                raise QasmParseError(f"operand count does not match ctrl({n_ctrl}) in {stmt!r}")
            ops.append(GateOp(gate, (qubits[-1],), tuple(qubits[:-1]), theta=theta))
        else:
            ops.append(GateOp(gate, tuple(qubits), theta=theta))
    flush()
    return Circuit(tuple(registers), tuple(ops), tuple(slots))
