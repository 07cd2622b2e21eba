from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from qutes.cli import EXIT_DIAGNOSTICS, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, UsageError, main, parse_args
from qutes.qir.qasm import read_qasm

GOLDEN = Path(__file__).parent / "golden"


def cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def write(tmp_path):
    def _write(source, name="p.qut"):
        path = tmp_path / name
        path.write_text(source)
        return str(path)

    return _write


def test_run_prints_stdout(capsys, write):
    code, out, _ = cli(capsys, "run", write("println 1 + 1;"))
    assert (code, out) == (EXIT_OK, "2\n")


def test_check_clean_and_with_diagnostics(capsys, write):
    assert cli(capsys, "check", write("int x = 1;"))[0] == EXIT_OK
    code, out, err = cli(capsys, "check", write('int x = "s";'))
    assert code == EXIT_DIAGNOSTICS and out == "" and "T001" in err


def test_check_json(capsys, write):
    code, out, _ = cli(capsys, "check", "--json", write("print y;"))
    doc = json.loads(out)
    assert code == EXIT_DIAGNOSTICS and doc["exit"] == 1
    (d,) = doc["diagnostics"]
    assert d["code"] == "S002" and d["line"] == 1 and d["col"] == 7


def test_runtime_error_exit(capsys, write):
    code, out, err = cli(capsys, "run", write("print 1; print 1 / 0;"))
    assert code == EXIT_RUNTIME and out == "1" and "R007" in err


def test_run_json(capsys, write):
    code, out, _ = cli(capsys, "run", "--json", "--seed", "42", write("qubit q = [0, 1]q; bool b = q; print b;"))
    doc = json.loads(out)
    assert code == 0 and doc["exit"] == 0 and doc["stdout"] == "true"
    assert doc["measurements"] == [{"register": "q", "slot": 0, "bits": "1", "value": True}]
    code, out, _ = cli(capsys, "run", "--json", write("print 1 / 0;"))
    doc = json.loads(out)
    assert code == 2 and doc["exit"] == 2 and "R007" in doc["error"]


def test_usage_errors(capsys, write, tmp_path):
    assert cli(capsys)[0] == EXIT_USAGE
    assert cli(capsys, "frobnicate", "x")[0] == EXIT_USAGE
    assert cli(capsys, "emit", "png", write("int x;"))[0] == EXIT_USAGE
    assert cli(capsys, "run", str(tmp_path / "missing.qut"))[0] == EXIT_USAGE
    assert cli(capsys, "run", "--shots", "0", write("int x;"))[0] == EXIT_USAGE
    assert cli(capsys, "check", "--histogram", write("int x;"))[0] == EXIT_USAGE


def test_invalid_utf8_is_a_diagnostic(capsys, tmp_path):
    path = tmp_path / "bad.qut"
    path.write_bytes(b"int x = \xff;")
    code, _, err = cli(capsys, "check", str(path))
    assert code == EXIT_DIAGNOSTICS and "UTF-8" in err


def test_seed_from_environment():
    assert parse_args(["run", "f"], {"QUTES_SEED": "7"}).seed == 7
    assert parse_args(["run", "f", "--seed", "3"], {"QUTES_SEED": "7"}).seed == 3
    assert parse_args(["run", "f"], {}).seed == 0
    assert parse_args(["run", "f", "--seed", "-1"], {}).seed == 2**64 - 1
    with pytest.raises(UsageError):
        parse_args(["run", "f"], {"QUTES_SEED": "abc"})


def test_defaults():
    cfg = parse_args(["run", "f"], {})
    assert cfg.shots == 1024 and cfg.grover_retries == 3 and not cfg.json


def test_histogram(capsys, corpus_dir):
    code, out, _ = cli(capsys, "run", "--histogram", "--shots", "200", "--json", str(corpus_dir / "bell.qut"))
    doc = json.loads(out)
    assert code == 0 and doc["shots"] == 200
    assert set(doc["histogram"]) == {"false\nfalse\n", "true\ntrue\n"}
    assert sum(doc["histogram"].values()) == 200
    code, text, _ = cli(capsys, "run", "--histogram", "--shots", "10", str(corpus_dir / "dj.qut"))
    assert text == '10\t"balanced\\n"\n'


def test_output_file(capsys, tmp_path, corpus_dir):
    target = tmp_path / "out.qasm"
    code, out, _ = cli(capsys, "emit", "qasm", str(corpus_dir / "bell.qut"), "-o", str(target))
    assert code == 0 and out == "" and target.read_text().startswith("OPENQASM 3.0;")


def test_golden_bell_qasm(capsys, corpus_dir):
    _, out, _ = cli(capsys, "emit", "qasm", str(corpus_dir / "bell.qut"))
    assert out == (GOLDEN / "bell.qasm").read_text()
    read_qasm(out)


def test_golden_dj_ast(capsys, corpus_dir):
    _, out, _ = cli(capsys, "emit", "ast", str(corpus_dir / "dj.qut"))
    assert out == (GOLDEN / "dj.ast").read_text()


def test_emit_circuit_lists_registers(capsys, corpus_dir):
    code, out, _ = cli(capsys, "emit", "circuit", str(corpus_dir / "bell.qut"))
    assert code == 0 and out.splitlines()[:2] == ["register a[1] basis 0", "register b[1] basis 0"]
    assert "mcx a[0] -> b[0]" in out


def test_emit_ast_reports_parse_errors(capsys, write):
    code, _, err = cli(capsys, "emit", "ast", write("int x = ;"))
    assert code == EXIT_DIAGNOSTICS and "P001" in err


def test_module_entry_point(corpus_dir):
    proc = subprocess.run([sys.executable, "-m", "qutes", "run", str(corpus_dir / "cyclic_shift.qut")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "11\n14\n1001\n"
