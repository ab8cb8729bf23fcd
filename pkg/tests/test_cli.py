import json
import subprocess
import sys

import pytest

from semiring_lab.cli import BUDGET_ENV, RunConfig, build_parser, main
from semiring_lab.core import builtin, dumps_algebra, loads_algebra


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "alg", "verify", "--builtin", "S_53")
    assert code == 0 and "ai-semiring" in out


def test_verify_file_and_json(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(dumps_algebra(builtin("B_0")))
    code, out, _ = run(capsys, "alg", "verify", "--file", str(path), "--builtin", "M_2", "--json")
    assert code == 0
    assert out.count("\n") == 1
    doc = json.loads(out)
    assert [r["algebra"] for r in doc["results"]] == ["B_0", "M_2"]


def test_verify_reports_broken_table(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"elements": ["p", "q"], "add": [[0, 0], [1, 1]],
                                "mul": [[0, 0], [0, 0]]}))
    code, out, _ = run(capsys, "alg", "verify", "--file", str(path))
    assert code == 1 and "fails" in out


def test_satisfies_counterexample(capsys):
    code, out, _ = run(capsys, "term", "satisfies", "--builtin", "B_0", "x*y = y*x", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["status"] == "counterexample"
    assert doc["counterexample"] == {"x": "e11", "y": "e12"}


def test_satisfies_holds(capsys):
    assert run(capsys, "term", "satisfies", "--builtin", "S_53", "x*y = y*x")[0] == 0


def test_kneser_hom_exhausted_is_exit_zero(capsys):
    code, out, _ = run(capsys, "kneser", "hom", "3", "2", "1", "--json")
    assert code == 0
    assert json.loads(out)["kind"] == "exhausted"


def test_kneser_hom_timeout_is_inconclusive(capsys):
    code, out, _ = run(capsys, "kneser", "hom", "3", "2", "3", "--nodes", "2", "--json")
    assert code == 2 and json.loads(out)["kind"] == "timeout"


def test_budget_from_environment(monkeypatch):
    parser = build_parser()
    monkeypatch.setenv(BUDGET_ENV, "1234")
    args = parser.parse_args(["kneser", "hom", "3", "1", "2"])
    assert RunConfig.from_args(args).budget_ms == 1234
    args = parser.parse_args(["kneser", "hom", "3", "1", "2", "--budget-ms", "99"])
    assert RunConfig.from_args(args).budget_ms == 99


def test_bad_budget_is_input_error(capsys, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "soon")
    assert run(capsys, "kneser", "hom", "3", "1", "2")[0] == 3
    monkeypatch.delenv(BUDGET_ENV)
    assert run(capsys, "kneser", "hom", "3", "1", "2", "--budget-ms", "0")[0] == 3


@pytest.mark.parametrize("argv", [
    ["frobnicate"], ["alg", "explode"], ["alg", "verify"], ["alg", "verify", "--builtin", "S_99"],
    ["term", "satisfies", "--builtin", "S_53", "x*y ="], ["kneser", "build", "2", "2"],
    ["alg", "iso", "--builtin", "S_53"], ["alg", "verify", "--file", "/nonexistent.json"],
    ["word", "flat", "a^0"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_word_commands_write_files(capsys, tmp_path):
    out = tmp_path / "w.json"
    code, _, _ = run(capsys, "word", "divis", "a1*a2", "--out", str(out))
    assert code == 0
    S = loads_algebra(out.read_text())
    assert S.elements == ("a1", "a2", "a1*a2", "0")
    code, text, _ = run(capsys, "word", "flat", "a*b", "--identity", "--json")
    assert code == 0 and json.loads(text)["algebra"]["elements"][0] == "1"
    assert run(capsys, "word", "maxplus", "3")[0] == 0
    assert run(capsys, "word", "sinfty", "--builtin", "S_53")[0] == 0


def test_alg_commands(capsys):
    assert run(capsys, "alg", "order", "--builtin", "S_53")[0] == 0
    code, out, _ = run(capsys, "alg", "product", "--builtin", "S_53", "--builtin", "M_2", "--json")
    assert code == 0 and len(json.loads(out)["algebra"]["elements"]) == 6
    code, out, _ = run(capsys, "alg", "subalg", "--builtin", "S_53", "a", "--json")
    assert json.loads(out)["algebra"]["elements"] == ["0", "a"]
    assert run(capsys, "alg", "quotient", "--builtin", "S_53", "a")[0] == 1
    assert run(capsys, "alg", "quotient", "--builtin", "S_53", "a", "0")[0] == 0
    assert run(capsys, "alg", "iso", "--builtin", "S_7", "--builtin", "S_53")[0] == 1
    assert run(capsys, "alg", "iso", "--builtin", "S_53", "--builtin", "S_53")[0] == 0


def test_term_commands(capsys):
    code, out, _ = run(capsys, "term", "parse", "y*x + x*y + y*x")
    assert code == 0 and out.strip() == "x*y + y*x"
    assert run(capsys, "term", "preceq", "--builtin", "B_0", "x*y", "x")[0] == 1
    assert run(capsys, "term", "isoterm", "--builtin", "B_0", "x1*x2", "--max-len", "4")[0] == 0
    assert run(capsys, "term", "isoterm", "--builtin", "S_53", "x1*x2")[0] == 1


def test_kneser_commands(capsys):
    code, out, _ = run(capsys, "kneser", "build", "3", "2", "--json")
    assert json.loads(out)["hyperedges"] == 15
    code, out, _ = run(capsys, "kneser", "terms", "3", "1", "--orderings", "all", "--json")
    assert json.loads(out)["words_in_t"] == 6
    assert run(capsys, "kneser", "blockhom", "3", "1", "2")[0] == 0
    assert run(capsys, "kneser", "blockhom", "3", "2", "3")[0] == 3


def test_exp_commands(capsys):
    assert run(capsys, "exp", "akp", "3", "2")[0] == 0
    assert run(capsys, "exp", "sigma", "3", "2")[0] == 0
    assert run(capsys, "exp", "witness", "3", "2")[0] == 1
    assert run(capsys, "exp", "reduce", "3", "2", "3")[0] == 0
    assert run(capsys, "exp", "reduce", "3", "2", "2")[0] == 1
    assert run(capsys, "exp", "reconstruct", "3")[0] == 0
    assert run(capsys, "exp", "embed", "3", "2")[0] == 0
    assert run(capsys, "exp", "maxplus-subdirect", "5")[0] == 0
    code, out, _ = run(capsys, "exp", "regularize", "--builtin", "S_53", "--count", "20", "--json")
    assert code == 0 and json.loads(out)["reports"][0]["verdict"] == "pass"


def test_exp_reduce_json_is_report(capsys):
    code, out, _ = run(capsys, "exp", "reduce", "3", "2", "3", "--json")
    doc = json.loads(out)
    assert set(doc) >= {"claim", "verdict", "certificates", "recheck", "timings_ms"}
    assert doc["certificates"]["outcome"] == "satisfied"


def test_deterministic_output(capsys):
    a = run(capsys, "exp", "regularize", "--builtin", "B_0", "--count", "30", "--seed", "4",
            "--json")[1]
    b = run(capsys, "exp", "regularize", "--builtin", "B_0", "--count", "30", "--seed", "4",
            "--json")[1]
    strip = lambda s: {k: v for k, v in json.loads(s)["reports"][0].items() if k != "timings_ms"}
    assert strip(a) == strip(b)


def test_report_all_subset(capsys):
    code, out, _ = run(capsys, "report", "all", "--only", "2", "12")
    assert code == 0 and "2/2 criteria pass" in out


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "semiring_lab.cli", "alg", "verify",
                           "--builtin", "S_53"], capture_output=True, text=True)
    assert proc.returncode == 0
