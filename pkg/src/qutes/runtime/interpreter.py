"""Tree-walking interpreter over a checked program.

Classical code runs directly in Python. Quantum operations are appended to a
:class:`CircuitHandler` log, and a live statevector follows that log so a
measurement at a quantum-to-classical boundary samples the real joint state
and collapses it for the rest of the run.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..builtins.arithmetic import ShiftSpec, add_into, synth_cyclic_shift
from ..builtins.encoding import EncodingError, quint_width
from ..builtins.grover import index_width, plan_grover_substring
from ..diagnostics import QutesError, QutesRuntimeError, Span
from ..frontend import ast
from ..qir.circuit import (
    BasisValue,
    Circuit,
    CircuitError,
    CircuitHandler,
    GateOp,
    InitialState,
    QubitRef,
    RegisterHandle,
    h,
    mcp,
    mcx,
    mcy,
    mcz,
    reset,
    x,
    y,
    z,
)
from ..qir.stateprep import prepare, prepare_register
from ..sema.checker import TypedAst
from ..sema.symbols import ScopeKind, Symbol, literal_register
from ..sema.types import BOOL, FLOAT, INT, QUBIT, QUINT, QUSTRING, VOID, QutesType
from ..simulator import DEFAULT_QUBIT_CAP, StateVector, apply_gate, shot_rng
from .values import (
    INT64_MAX,
    INT64_MIN,
    ArrayValue,
    QuantumRef,
    Value,
    decode,
    default_value,
    format_value,
    register_ref,
    truthy,
)

DEFAULT_RECURSION_LIMIT = 256
DEFAULT_GROVER_RETRIES = 3

_GATES = {"hadamard": h, "pauliy": y, "pauliz": z, "not": x}
_MULTI = {"mcx": mcx, "mcy": mcy, "mcz": mcz}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    shot: int = 0
    grover_retries: int = DEFAULT_GROVER_RETRIES
    qubit_cap: int = DEFAULT_QUBIT_CAP
    recursion_limit: int = DEFAULT_RECURSION_LIMIT


@dataclass(frozen=True)
class MeasurementRecord:
    register: str
    slot: int
    bits: str  # slot bit 0 rightmost
    value: Union[bool, int, str]

    def to_json(self) -> dict:
        return {"register": self.register, "slot": self.slot, "bits": self.bits, "value": self.value}


@dataclass
class ProgramResult:
    stdout: str
    measurements: list[MeasurementRecord]
    circuit: Circuit
    exit: int = 0
    error: Optional[QutesRuntimeError] = None
    state: Optional[StateVector] = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {
            "stdout": self.stdout,
            "measurements": [m.to_json() for m in self.measurements],
            "exit": self.exit,
        }
        if self.error is not None:
            out["error"] = self.error.render()
        return out


# -- live quantum state ------------------------------------------------------


class LiveState:
    """Statevector kept in step with the handler's registers and op log."""

    def __init__(self, handler: CircuitHandler, rng: np.random.Generator, cap: int):
        self.handler = handler
        self.rng = rng
        self.cap = cap
        self.state = StateVector.zero(0, cap)
        self.layout: dict[int, int] = {}
        self._registers = 0
        self._cursor = 0

    def sync(self) -> StateVector:
        regs = self.handler.registers
        for r in regs[self._registers:]:
            self.layout[r.id] = self.state.n
            self.state.extend(r.width, self.cap)
            for op in prepare_register(r):
                apply_gate(self.state, op, self.layout, self.rng)
        self._registers = len(regs)
        ops = self.handler.ops
        for op in ops[self._cursor:]:
            apply_gate(self.state, op, self.layout, self.rng)
        self._cursor = len(ops)
        return self.state

    def indices(self, qubits: Sequence[QubitRef]) -> list[int]:
        return [self.layout[q.register] + q.offset for q in qubits]

    def measure(self, qubits: Sequence[QubitRef]) -> tuple[int, list[int]]:
        """Log a measurement of ``qubits`` into a fresh slot and sample it now."""
        self.sync()
        slot = self.handler.push_measure(qubits)
        bits = self.state.measure(self.indices(qubits), self.rng)
        self._cursor = len(self.handler.ops)
        return slot.id, bits

    def definite_value(self, qubits: Sequence[QubitRef]) -> Optional[int]:
        self.sync()
        return self.state.definite_value(self.indices(qubits))


# -- control flow signals ----------------------------------------------------


class _Return(Exception):
    def __init__(self, value: Value, node: ast.Return):
        self.value = value
        self.node = node


def _fail(message: str, span: Span | None, code: str = "R001") -> QutesRuntimeError:
    return QutesRuntimeError(message, span, code)


def _check_int(value: int, span: Span) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise _fail("integer overflow", span, "R003")
    return value


def _usable_as_bitstring(s: str) -> bool:
    return bool(s) and set(s) <= {"0", "1"}


class Interpreter:
    def __init__(self, typed: TypedAst, config: RunConfig | None = None):
        self.typed = typed
        self.config = config or RunConfig()
        self.handler = CircuitHandler()
        self.live = LiveState(self.handler, shot_rng(self.config.seed, self.config.shot), self.config.qubit_cap)
        self.out: list[str] = []
        self.measurements: list[MeasurementRecord] = []
        self.globals: dict[int, Value] = {}
        self.frames: list[dict[int, Value]] = []
        self._global_syms: dict[int, bool] = {}
        # clean scratch registers left by earlier searches, by width
        self._scratch: dict[int, list[RegisterHandle]] = {}
        self.functions: dict[str, ast.FuncDecl] = {
            item.name: item for item in typed.program.items if isinstance(item, ast.FuncDecl)
        }

    # -- environment -------------------------------------------------------

    def _is_global(self, sym: Symbol) -> bool:
        key = id(sym)
        if key not in self._global_syms:
            self._global_syms[key] = not any(s.kind is ScopeKind.FUNCTION for s in sym.scope.ancestors())
        return self._global_syms[key]

    def _frame(self, sym: Symbol) -> dict[int, Value]:
        if self._is_global(sym) or not self.frames:
            return self.globals
        return self.frames[-1]

    def bind(self, sym: Symbol, value: Value) -> None:
        self._frame(sym)[id(sym)] = value

    def lookup(self, sym: Symbol, span: Span) -> Value:
        frame = self._frame(sym)
        if id(sym) not in frame:
            raise _fail(f"{sym.name!r} used before it has a value", span)
        return frame[id(sym)]

    # -- entry point -------------------------------------------------------

    def run(self) -> ProgramResult:
        error: QutesRuntimeError | None = None
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 200 * self.config.recursion_limit + 2000))
        try:
            for item in self.typed.program.items:
                if not isinstance(item, ast.FuncDecl):
                    self.stmt(item)
        except QutesRuntimeError as exc:
            error = exc
        except _Return as ret:  # pragma: no cover - rejected by the checker
            error = _fail("return outside a function", ret.node.span)
        except (CircuitError, EncodingError) as exc:
            error = _fail(str(exc), None)
        except QutesError as exc:
            error = _fail(str(exc), None, "R002")
        except RecursionError:
            error = _fail("program recursion too deep", None, "R005")
        finally:
            sys.setrecursionlimit(old_limit)
        state = None
        if error is None:
            try:
                state = self.live.sync()
            except QutesError as exc:
                error = _fail(str(exc), None, "R002")
        return ProgramResult(
            stdout="".join(self.out),
            measurements=list(self.measurements),
            circuit=self.handler.assemble(),
            exit=0 if error is None else 2,
            error=error,
            state=state,
        )

    # -- quantum helpers ---------------------------------------------------

    def push(self, ops: Sequence[GateOp], span: Span | None = None) -> None:
        try:
            self.handler.extend(ops)
        except CircuitError as exc:
            raise _fail(str(exc), span) from None

    def declare(self, hint: str | None, width: int, init: InitialState, ty: QutesType) -> QuantumRef:
        name = self.handler.fresh_name(hint or "t")
        try:
            handle = self.handler.declare_register(name, width, init)
        except CircuitError as exc:
            raise _fail(str(exc), None) from None
        if sum(r.width for r in self.handler.registers) > self.config.qubit_cap:
            raise _fail(f"program needs more than {self.config.qubit_cap} qubits", None, "R002")
        return register_ref(handle, ty)

    def _label(self, ref: QuantumRef) -> str:
        if ref.register is not None and ref.qubits == ref.register.qubits:
            return ref.register.name
        regs = {q.register for q in ref.qubits}
        if len(regs) == 1:
            name = self.handler.register(next(iter(regs))).name
            return f"{name}[{','.join(str(q.offset) for q in ref.qubits)}]"
        return "+".join(f"{self.handler.register(q.register).name}[{q.offset}]" for q in ref.qubits)

    def boundary_measure(self, ref: QuantumRef, span: Span | None = None) -> Union[bool, int, str]:
        """Measure ``ref`` in place; the register stays collapsed afterwards."""
        try:
            slot, bits = self.live.measure(ref.qubits)
        except QutesError as exc:
            raise _fail(str(exc), span, "R002") from None
        value = decode(bits, ref.type)
        self.measurements.append(
            MeasurementRecord(self._label(ref), slot, "".join(str(b) for b in reversed(bits)), value)
        )
        return value

    def literal_state(self, node: ast.QuantumLiteral, ty: QutesType) -> tuple[int, InitialState]:
        try:
            tpl = literal_register("_", ty, node)
        except EncodingError as exc:
            raise _fail(str(exc), node.span) from None
        return tpl.width, tpl.initial_state

    def classical_state(self, value: Value, ty: QutesType, span: Span) -> tuple[int, InitialState]:
        if isinstance(value, bool):
            return 1, BasisValue(int(value))
        if isinstance(value, int):
            if value < 0:
                raise _fail(f"negative value {value} cannot be stored in a {ty}", span)
            if ty == QUBIT and value > 1:
                raise _fail(f"value {value} does not fit in a qubit", span)
            return quint_width(value), BasisValue(value)
        if isinstance(value, str):
            if not _usable_as_bitstring(value):
                raise _fail(f"{value!r} is not a bitstring", span)
            return len(value), BasisValue(int(value, 2))
        raise _fail(f"cannot encode {format_value(value)} as {ty}", span)

    def promote_to_quantum(self, value: Value, ty: QutesType, span: Span, hint: str | None) -> Value:
        if isinstance(value, QuantumRef):
            return value.retyped(ty)
        if isinstance(value, ArrayValue):
            return ArrayValue([self.promote_to_quantum(v, ty.element, span, hint) for v in value.elements], ty.element)
        width, init = self.classical_state(value, ty, span)
        return self.declare(hint, width, init, ty)

    def reprepare(self, ref: QuantumRef, width: int, init: InitialState, span: Span) -> None:
        """Reset ``ref`` and prepare ``init`` on it (no silent widening)."""
        if width > ref.width or (ref.type == QUSTRING and width != ref.width):
            raise _fail(f"value needs {width} qubit(s) but the register has {ref.width}", span)
        try:
            ops = [reset(q) for q in ref.qubits] + prepare(ref.qubits, init)
        except ValueError as exc:
            raise _fail(str(exc), span) from None
        self.push(ops, span)

    # -- coercions ---------------------------------------------------------

    def eval(self, node: ast.Expr, hint: str | None = None, promote: bool = True) -> Value:
        value = self._eval(node, hint)
        co = self.typed.coercion_of(node)
        if co is None:
            return value
        if co.measure:
            if isinstance(value, QuantumRef):
                value = self.boundary_measure(value, node.span)
            return self.convert(value, co.dst)
        if co.dst.is_quantum:
            if not promote and not co.src.is_quantum:
                return value
            return self.promote_to_quantum(value, co.dst, node.span, hint)
        return self.convert(value, co.dst)

    def convert(self, value: Value, dst: QutesType) -> Value:
        if dst == BOOL:
            return truthy(value)
        if dst == INT:
            return int(value)
        if dst == FLOAT:
            return float(value)
        if dst.is_array and isinstance(value, ArrayValue):
            return ArrayValue([self.convert(v, dst.element) for v in value.elements], dst.element)
        return value

    # -- statements --------------------------------------------------------

    def block(self, block: ast.Block) -> None:
        for s in block.stmts:
            self.stmt(s)

    def stmt(self, node: ast.Stmt) -> None:
        if isinstance(node, ast.VarDecl):
            self.var_decl(node)
        elif isinstance(node, ast.Assign):
            self.assign(node)
        elif isinstance(node, ast.ExprStmt):
            self.eval(node.expr)
        elif isinstance(node, ast.Block):
            self.block(node)
        elif isinstance(node, ast.If):
            if truthy(self.eval(node.cond)):
                self.block(node.then)
            elif node.otherwise is not None:
                self.stmt(node.otherwise)
        elif isinstance(node, ast.While):
            while truthy(self.eval(node.cond)):
                self.block(node.body)
        elif isinstance(node, ast.Foreach):
            self.foreach(node)
        elif isinstance(node, ast.Return):
            value = self.eval(node.value) if node.value is not None else None
            raise _Return(value, node)
        elif isinstance(node, ast.FuncDecl):  # pragma: no cover - top level only
            pass
        else:  # pragma: no cover
            raise TypeError(f"unexpected statement {type(node).__name__}")

    def var_decl(self, node: ast.VarDecl) -> None:
        sym = self.typed.symbol_of(node)
        ty = sym.declared_type
        if node.init is None:
            if ty.is_quantum and not ty.is_array:
                value: Value = self.declare(node.name, 1, BasisValue(0), ty)
            else:
                value = default_value(ty)
        elif ty.is_quantum and not ty.is_array and isinstance(node.init, ast.QuantumLiteral):
            width, init = self.literal_state(node.init, self.typed.type_of(node.init))
            value = self.declare(node.name, width, init, ty)
        else:
            value = self.eval(node.init, hint=node.name)
            if isinstance(value, QuantumRef) and value.type != ty:
                value = value.retyped(ty)
            elif isinstance(value, ArrayValue):
                value = value.copy()
        self.bind(sym, value)

    def assign(self, node: ast.Assign) -> None:
        target = node.target
        tty = self.typed.type_of(target)
        if isinstance(target, ast.Identifier):
            sym = self.typed.symbol_of(target)
            if tty.is_quantum and not tty.is_array:
                current = self.lookup(sym, target.span)
                if self._is_reprep(node.value):
                    self._reprep_from(current, node.value)
                    return
                value = self.eval(node.value, hint=sym.name)
                self.bind(sym, value.retyped(tty) if isinstance(value, QuantumRef) else value)
                return
            value = self.eval(node.value, hint=sym.name)
            self.bind(sym, value.copy() if isinstance(value, ArrayValue) else value)
            return
        # indexed target
        container = self.eval(target.target)
        idx = self._index_value(target)
        if isinstance(container, ArrayValue):
            self._check_bounds(idx, len(container), target.index.span)
            elem = container.elements[idx]
            if isinstance(elem, QuantumRef) and self._is_reprep(node.value):
                self._reprep_from(elem, node.value)
                return
            value = self.eval(node.value)
            container.elements[idx] = value.copy() if isinstance(value, ArrayValue) else value
            return
        if isinstance(container, QuantumRef):
            self._check_bounds(idx, container.width, target.index.span)
            if not self._is_reprep(node.value):
                raise _fail("cannot alias a quantum value into one qubit of a register", node.value.span)
            self._reprep_from(container.element(idx), node.value)
            return
        raise _fail("strings are immutable; assign the whole string instead", target.span)

    def _is_reprep(self, value: ast.Expr) -> bool:
        if isinstance(value, ast.QuantumLiteral):
            return True
        ty = self.typed.type_of(value)
        return not ty.is_quantum

    def _reprep_from(self, ref: QuantumRef, value: ast.Expr) -> None:
        if isinstance(value, ast.QuantumLiteral):
            width, init = self.literal_state(value, self.typed.type_of(value))
        else:
            raw = self.eval(value, promote=False)
            width, init = self.classical_state(raw, ref.type, value.span)
        self.reprepare(ref, width, init, value.span)

    def foreach(self, node: ast.Foreach) -> None:
        sym = self.typed.symbol_of(node)
        iterable = self.eval(node.iterable)
        if isinstance(iterable, ArrayValue):
            items = list(iterable.elements)
        elif isinstance(iterable, QuantumRef):
            items = iterable.elements()
        elif isinstance(iterable, str):
            items = list(iterable)
        else:  # pragma: no cover - rejected by the checker
            raise _fail("value is not iterable", node.iterable.span)
        for item in items:
            self.bind(sym, item)
            self.block(node.body)

    # -- expressions -------------------------------------------------------

    def _eval(self, node: ast.Expr, hint: str | None) -> Value:
        if isinstance(node, ast.Literal):
            return node.value
        if isinstance(node, ast.QuantumLiteral):
            ty = self.typed.type_of(node)
            width, init = self.literal_state(node, ty)
            return self.declare(hint, width, init, ty)
        if isinstance(node, ast.Identifier):
            return self.lookup(self.typed.symbol_of(node), node.span)
        if isinstance(node, ast.Index):
            return self.index(node)
        if isinstance(node, ast.Call):
            return self.call(node)
        if isinstance(node, ast.ArrayLiteral):
            ty = self.typed.type_of(node)
            elems = [self.eval(e, hint) for e in node.elems]
            return ArrayValue(elems, ty.element)
        if isinstance(node, ast.Unary):
            return self.unary(node)
        if isinstance(node, ast.Binary):
            return self.binary(node, hint)
        if isinstance(node, ast.MultiControlled):
            return self.multi_controlled(node)
        if isinstance(node, ast.InMatch):
            return self.in_match(node)
        raise TypeError(f"unexpected expression {type(node).__name__}")  # pragma: no cover

    def _index_value(self, node: ast.Index) -> int:
        idx = self.eval(node.index)
        return int(idx)

    @staticmethod
    def _check_bounds(idx: int, size: int, span: Span) -> None:
        if not 0 <= idx < size:
            raise _fail(f"index {idx} out of bounds for length {size}", span, "R004")

    def index(self, node: ast.Index) -> Value:
        container = self.eval(node.target)
        idx = self._index_value(node)
        if isinstance(container, ArrayValue):
            self._check_bounds(idx, len(container), node.index.span)
            return container.elements[idx]
        if isinstance(container, QuantumRef):
            self._check_bounds(idx, container.width, node.index.span)
            return container.element(idx)
        if isinstance(container, str):
            self._check_bounds(idx, len(container), node.index.span)
            return container[idx]
        raise _fail("value cannot be indexed", node.target.span)  # pragma: no cover

    def call(self, node: ast.Call) -> Value:
        fn = self.functions[node.name]
        params = [self.typed.symbol_of(p) for p in fn.params]
        args = []
        for arg, p in zip(node.args, params):
            v = self.eval(arg, hint=p.name)
            if isinstance(v, ArrayValue):
                v = v.copy()
            elif isinstance(v, QuantumRef) and v.type != p.declared_type:
                v = v.retyped(p.declared_type)
            args.append(v)
        if len(self.frames) >= self.config.recursion_limit:
            raise _fail(f"recursion limit of {self.config.recursion_limit} calls exceeded", node.span, "R005")
        frame = {id(p): v for p, v in zip(params, args)}
        self.frames.append(frame)
        try:
            self.block(fn.body)
        except _Return as ret:
            return ret.value
        finally:
            self.frames.pop()
        ret_type = self.typed.symbol_of(node).declared_type
        if ret_type != VOID:
            raise _fail(f"function {fn.name!r} ended without returning a {ret_type}", node.span, "R006")
        return None

    def unary(self, node: ast.Unary) -> Value:
        op = node.op
        if op in ("print", "println"):
            v = self.eval(node.operand)
            self.out.append(format_value(v) + ("\n" if op == "println" else ""))
            return None
        v = self.eval(node.operand)
        if op == "measure":
            return self.boundary_measure(v, node.span)
        if op in _GATES and isinstance(v, (QuantumRef, ArrayValue)):
            gate = _GATES[op]
            refs = v.elements if isinstance(v, ArrayValue) else [v]
            self.push([gate(q) for r in refs for q in r.qubits], node.span)
            return v
        if op == "not":
            return not v
        if op == "-":
            return _check_int(-v, node.span) if isinstance(v, int) and not isinstance(v, bool) else -v
        if op == "+":
            return +v
        raise TypeError(f"unexpected unary operator {op}")  # pragma: no cover

    def binary(self, node: ast.Binary, hint: str | None) -> Value:
        op = node.op
        if op in ("and", "or"):
            lhs = truthy(self.eval(node.lhs))
            if op == "and" and not lhs:
                return False
            if op == "or" and lhs:
                return True
            return truthy(self.eval(node.rhs))
        lhs = self.eval(node.lhs)
        rhs = self.eval(node.rhs)
        if op == "+" and (isinstance(lhs, QuantumRef) or isinstance(rhs, QuantumRef)):
            return self.quantum_add([lhs, rhs], node, hint)
        if op in ("<<", ">>") and isinstance(lhs, QuantumRef):
            direction = "left" if op == "<<" else "right"
            self.push(synth_cyclic_shift(ShiftSpec(lhs.qubits, int(rhs), direction)), node.span)
            return lhs
        return self.classical_binary(op, lhs, rhs, node.span)

    def quantum_add(self, operands: list[Value], node: ast.Binary, hint: str | None) -> QuantumRef:
        refs = [v for v in operands if isinstance(v, QuantumRef)]
        consts = [int(v) for v in operands if not isinstance(v, QuantumRef)]
        widths = [r.width for r in refs]
        for c in consts:
            widths.append(quint_width(abs(c)))
        width = max(widths)
        seen: set[QubitRef] = set()
        for r in refs:
            if seen & set(r.qubits):
                raise _fail("cannot add a register to itself", node.span)
            seen |= set(r.qubits)
        result = self.declare(hint or "sum", width, BasisValue(sum(consts) % (1 << width)), QUINT)
        for r in refs:
            self.push(add_into(r.qubits, result.qubits), node.span)
        return result

    def classical_binary(self, op: str, a: Value, b: Value, span: Span) -> Value:
        if op in ("==", "!="):
            eq = a == b
            return eq if op == "==" else not eq
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if isinstance(a, str) and isinstance(b, str) and op == "+":
            return a + b
        is_int = not isinstance(a, float) and not isinstance(b, float)
        if is_int:
            a, b = int(a), int(b)
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            if b == 0:
                raise _fail("division by zero", span, "R007")
            if is_int:
                q = abs(a) // abs(b)
                r = q if (a >= 0) == (b >= 0) else -q
            else:
                r = a / b
        elif op == "%":
            if b == 0:
                raise _fail("division by zero", span, "R007")
            q = abs(a) // abs(b)
            q = q if (a >= 0) == (b >= 0) else -q
            r = a - b * q
        elif op == "**":
            r = self._power(a, b, is_int, span)
        elif op in ("<<", ">>"):
            if b < 0:
                raise _fail("negative shift amount", span)
            if op == ">>":
                r = a >> b
            else:
                if a != 0 and b >= 64:
                    raise _fail("integer overflow", span, "R003")
                r = a << b
        else:  # pragma: no cover
            raise TypeError(f"unexpected operator {op}")
        if is_int:
            return _check_int(r, span)
        if not math.isfinite(r) and math.isfinite(a) and math.isfinite(b):
            raise _fail("floating-point overflow", span, "R003")
        return r

    @staticmethod
    def _power(a, b, is_int: bool, span: Span):
        if is_int:
            if b < 0:
                raise _fail("negative exponent for an integer power", span)
            if abs(a) > 1 and b > 63:
                raise _fail("integer overflow", span, "R003")
            return a**b
        try:
            r = float(a) ** float(b)
        except (OverflowError, ZeroDivisionError):
            raise _fail("invalid floating-point power", span, "R003") from None
        if isinstance(r, complex):
            raise _fail("power of a negative number to a fractional exponent", span)
        return r

    def multi_controlled(self, node: ast.MultiControlled) -> None:
        refs = [self.eval(o) for o in node.operands]
        controls = [q for r in refs[:-1] for q in r.qubits]
        targets = refs[-1].qubits
        if node.op == "mcp":
            theta = float(self.eval(node.phase))
            if not math.isfinite(theta):
                raise _fail("phase must be finite", node.phase.span)
            ops = [mcp(controls, t, theta) for t in targets]
        else:
            ops = [_MULTI[node.op](controls, t) for t in targets]
        self.push(ops, node.span)
        return None

    def in_match(self, node: ast.InMatch) -> int:
        pattern = self.eval(node.pattern)
        target = self.eval(node.target)
        if not isinstance(pattern, str):  # pragma: no cover - checker guarantees
            raise _fail("pattern must be a string", node.pattern.span)
        if pattern and not _usable_as_bitstring(pattern):
            raise _fail(f"pattern {pattern!r} is not a bitstring", node.pattern.span)
        if isinstance(target, str):
            if not _usable_as_bitstring(target):
                raise _fail(f"target {target!r} is not a bitstring", node.target.span)
            target = self.declare(node.target.name, len(target), BasisValue(int(target, 2)), QUSTRING)
        if not pattern:
            return 0
        return self.grover_search(target, pattern, node)

    def grover_search(self, target: QuantumRef, pattern: str, node: ast.InMatch) -> int:
        n, m = target.width, len(pattern)
        if m > n:
            return -1
        # character order: qubits listed from the last character up to the first
        chars = target.qubits
        known = self.live.definite_value(chars)
        text = format(known, f"0{n}b") if known is not None else None
        plan = plan_grover_substring(
            self.handler, chars, pattern, name="idx",
            index=self._take_scratch(index_width(n - m + 1)), ancilla=self._take_scratch(m),
        )
        index = QuantumRef(plan.index_register.qubits, QUINT, plan.index_register)
        found = -1
        for attempt in range(self.config.grover_retries + 1):
            if attempt:
                self.push([reset(q) for q in index.qubits], node.span)
            self.push(plan.ops(), node.span)
            i = self.boundary_measure(index, node.span)
            if i >= plan.positions:
                continue
            if text is None or text[i:i + m] == pattern:
                found = i
                break
        # the oracle uncomputes its ancillas; the index is reset for reuse
        self.push([reset(q) for q in index.qubits], node.span)
        self._scratch.setdefault(plan.index_register.width, []).append(plan.index_register)
        self._scratch.setdefault(m, []).append(plan.ancilla[0])
        return found

    def _take_scratch(self, width: int) -> RegisterHandle | None:
        pool = self._scratch.get(width)
        return pool.pop() if pool else None


def interpret(typed: TypedAst, config: RunConfig | None = None) -> ProgramResult:
    """Execute a checked program once, following one measurement trajectory."""
    return Interpreter(typed, config).run()
