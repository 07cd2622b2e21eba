"""Command-line entry point: ``qutes check|run|emit``.

Exit codes: 0 success, 1 diagnostics, 2 runtime error, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .diagnostics import Diagnostic
from .frontend import dump_ast, parse_program
from .pipeline import check_source
from .qir import Circuit, export_qasm
from .qir.circuit import BasisValue, Gate, UniformSuperposition
from .runtime import DEFAULT_GROVER_RETRIES, RunConfig, interpret
from .simulator import DEFAULT_QUBIT_CAP

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2, 3
DEFAULT_SHOTS = 1024
SEED_ENV = "QUTES_SEED"
SEED_MASK = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise UsageError(message)


@dataclass(frozen=True)
class CliConfig:
    verb: str
    path: str
    emit_kind: Optional[str] = None
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    output: Optional[str] = None
    json: bool = False
    histogram: bool = False
    grover_retries: int = DEFAULT_GROVER_RETRIES
    qubit_cap: int = DEFAULT_QUBIT_CAP

    def run_config(self, shot: int = 0) -> RunConfig:
        return RunConfig(seed=self.seed, shot=shot, grover_retries=self.grover_retries, qubit_cap=self.qubit_cap)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shots", type=int, default=None, help=f"shots for --histogram (default {DEFAULT_SHOTS})")
    p.add_argument("--seed", type=int, default=None, help=f"simulator seed (default ${SEED_ENV} or 0)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("-o", dest="output", metavar="PATH", default=None, help="write output to PATH")
    p.add_argument("--histogram", action="store_true", help="run many shots and report outcome counts")
    p.add_argument("--grover-retries", type=int, default=None, help="substring-search retries (default 3)")
    p.add_argument("--qubit-cap", type=int, default=None, help=f"simulator qubit limit (default {DEFAULT_QUBIT_CAP})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qutes", description="Check, run and compile Qutes programs.")
    sub = parser.add_subparsers(dest="verb", metavar="{check,run,emit}", parser_class=_Parser)
    sub.required = True
    p = sub.add_parser("check", help="parse and type-check a program")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("run", help="execute a program")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("emit", help="print the AST, the circuit, or OpenQASM 3")
    p.add_argument("kind", choices=("qasm", "ast", "circuit"))
    p.add_argument("file")
    _common(p)
    return parser


def parse_args(argv: Sequence[str], environ=os.environ) -> CliConfig:
    ns = build_parser().parse_args(list(argv))
    seed = ns.seed
    if seed is None:
        raw = environ.get(SEED_ENV)
        if raw:
            try:
                seed = int(raw, 0)
            except ValueError:
                raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
        else:
            seed = 0
    shots = DEFAULT_SHOTS if ns.shots is None else ns.shots
    retries = DEFAULT_GROVER_RETRIES if ns.grover_retries is None else ns.grover_retries
    cap = DEFAULT_QUBIT_CAP if ns.qubit_cap is None else ns.qubit_cap
    if shots < 1:
        raise UsageError("--shots must be at least 1")
    if retries < 0:
        raise UsageError("--grover-retries must not be negative")
    if cap < 1:
        raise UsageError("--qubit-cap must be at least 1")
    if ns.histogram and ns.verb != "run":
        raise UsageError("--histogram only applies to run")
    return CliConfig(
        verb=ns.verb,
        path=ns.file,
        emit_kind=getattr(ns, "kind", None),
        shots=shots,
        seed=seed & SEED_MASK,
        output=ns.output,
        json=ns.json,
        histogram=ns.histogram,
        grover_retries=retries,
        qubit_cap=cap,
    )


# -- rendering --------------------------------------------------------------


def _init_text(init) -> str:
    if isinstance(init, BasisValue):
        return f"basis {init.value}"
    if isinstance(init, UniformSuperposition):
        return "superposition " + ",".join(map(str, init.values))
    return "zero"


def format_circuit(circuit: Circuit) -> str:
    """Readable, deterministic listing of registers, slots and ops."""
    names = {r.id: r.name for r in circuit.registers}

    def q(ref) -> str:
        return f"{names[ref.register]}[{ref.offset}]"

    lines = [f"register {r.name}[{r.width}] {_init_text(r.initial_state)}" for r in circuit.registers]
    lines += [f"slot {s.name}[{s.width}]" for s in circuit.slots]
    for op in circuit.ops:
        head = op.gate.value
        if op.theta is not None:
            head += f"({op.theta!r})"
        parts = [head]
        if op.controls:
            parts.append(" ".join(q(c) for c in op.controls) + " ->")
        parts.append(" ".join(q(t) for t in op.targets))
        if op.gate is Gate.MEASURE:
            parts.append(f"=> {circuit.slots[op.slot].name}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _diagnostics_json(diags: list[Diagnostic]) -> list[dict]:
    return [
        {
            "code": d.code,
            "severity": d.severity.value,
            "message": d.message,
            "file": d.span.file,
            "line": d.span.start_line,
            "col": d.span.start_col,
        }
        for d in diags
    ]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


class _Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.parts: list[str] = []

    def write(self, text: str) -> None:
        self.parts.append(text)

    def flush(self) -> None:
        text = "".join(self.parts)
        if self.path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


# -- verbs ------------------------------------------------------------------


def _report(diags: list[Diagnostic]) -> None:
    for d in diags:
        print(d.render(), file=sys.stderr)


def execute(cfg: CliConfig, out: _Output) -> int:
    try:
        with open(cfg.path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.path}: {exc.strerror}") from None
    try:
        source = raw.decode("utf-8")
    except UnicodeDecodeError:
        print(f"{cfg.path}: error: file is not valid UTF-8", file=sys.stderr)
        return EXIT_DIAGNOSTICS

    if cfg.verb == "emit" and cfg.emit_kind == "ast":
        program, diags = parse_program(source, cfg.path)
        if diags:
            _report(diags)
            return EXIT_DIAGNOSTICS
        out.write(dump_ast(program))
        return EXIT_OK

    typed, diags = check_source(source, cfg.path)
    if typed is None:
        _report(diags)
        if cfg.json:
            out.write(_dumps({"diagnostics": _diagnostics_json(diags), "exit": EXIT_DIAGNOSTICS}))
        return EXIT_DIAGNOSTICS
    if cfg.verb == "check":
        if cfg.json:
            out.write(_dumps({"diagnostics": [], "exit": EXIT_OK}))
        return EXIT_OK

    if cfg.verb == "run" and cfg.histogram:
        return _histogram(typed, cfg, out)

    result = interpret(typed, cfg.run_config())
    if result.error is not None:
        print(result.error.render(), file=sys.stderr)
    if cfg.verb == "run":
        if cfg.json:
            out.write(_dumps(result.to_json()))
        else:
            out.write(result.stdout)
        return result.exit
    if result.error is not None:
        return result.exit
    if cfg.emit_kind == "qasm":
        out.write(export_qasm(result.circuit))
    else:
        out.write(format_circuit(result.circuit))
    return EXIT_OK


def _histogram(typed, cfg: CliConfig, out: _Output) -> int:
    counts: Counter[str] = Counter()
    for shot in range(cfg.shots):
        result = interpret(typed, cfg.run_config(shot))
        if result.error is not None:
            print(f"shot {shot}: {result.error.render()}", file=sys.stderr)
            return EXIT_RUNTIME
        counts[result.stdout] += 1
    ordered = dict(sorted(counts.items()))
    if cfg.json:
        out.write(_dumps({"shots": cfg.shots, "histogram": ordered, "exit": EXIT_OK}))
    else:
        for key, n in ordered.items():
            out.write(f"{n}\t{json.dumps(key)}\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
        out = _Output(cfg.output)
        code = execute(cfg, out)
    except UsageError as exc:
        print(f"qutes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out.flush()
    except OSError as exc:
        print(f"qutes: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
