import json
import subprocess
import sys

import pytest

from graphprod.cli import main, run
from cli_corpus import build_corpus, run_in_process


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    return root, build_corpus(root)


def test_corpus_exit_codes_and_outputs(corpus):
    _, cases = corpus
    for case in cases:
        code, out, err = run_in_process(case.argv)
        assert code == case.code, (case.argv, out, err)
        if case.stdout is not None:
            assert out == case.stdout + "\n", case.argv
        if code == 2:
            assert err.startswith("error: ") and out == ""


def test_single_line_outputs(corpus):
    _, cases = corpus
    for case in cases:
        if case.argv[0] == "separate" and "-o" not in case.argv:
            continue
        _, out, _ = run_in_process(case.argv)
        assert out.count("\n") <= 1


def test_separate_to_stdout_prints_witness_block(corpus):
    root, _ = corpus
    gp = root / "free.gp"
    gp.write_text("vertices: 2\nedges:\ngroup 0: Z\ngroup 1: Z\n")
    code, out, _ = run_in_process(["separate", "-p", str(gp), "0:1 1:1", "1:1 0:-1", "--class", "3"])
    assert code == 0
    assert "kind: NonConjugacy" in out and "quotient 0: modulus 3" in out
    wit = root / "stdout.wit"
    wit.write_text(out)
    assert run_in_process(["verify-witness", str(wit)])[0] == 0


def test_central_vertex_explanation(corpus):
    _, cases = corpus
    case = next(c for c in cases if c.argv[0] == "decide-inner" and c.code == 2)
    _, _, err = run_in_process(case.argv)
    assert "central vertex" in err


def test_usage_errors_exit_2():
    assert run(["reduce"])[0] == 2
    assert main(["no-such-command"]) == 2


def test_run_report(corpus, tmp_path):
    root, cases = corpus
    report = tmp_path / "report.json"
    argv = ["--report", str(report)] + list(cases[0].argv)
    assert main(argv) == 0
    data = json.loads(report.read_text())
    assert data["command"] == argv and data["exit_code"] == 0 and data["output"] == "1:1"
    assert data["seed"] == 0 and data["elapsed_seconds"] >= 0


def test_module_entry_point(corpus):
    _, cases = corpus
    for case in cases[:4]:
        proc = subprocess.run([sys.executable, "-m", "graphprod", *case.argv], capture_output=True, text=True)
        assert proc.returncode == case.code
        assert proc.stdout == case.stdout + "\n"
