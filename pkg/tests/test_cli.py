"""Command line: outputs and exit codes, driven through main()."""

import io
import json
import subprocess
import sys

import pytest

from signseq.cli import EXIT_USAGE, main
from signseq.codec import number_from_json


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("expr, want", [
    ("mo([+1, -1])", "[+w, -w^(2)]"),
    ("mo([+1, -w])", "[+w, -w^(3)]"),
    ("kappa([])", "[+w]"),
    ("kappa([+1])", "[+eps(0)]"),
    ("lambda([-1])", "[+w, -w^(3)]"),
])
def test_eval_anchors(expr, want):
    assert run("eval", expr) == (0, want + "\n", "")


def test_eval_json_is_versioned_and_decodable():
    code, out, _ = run("eval", "lambda([-1])", "--json", "--convention", "s1-infix")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "signseq-eval" and doc["schema_version"] == 1
    assert doc["convention"] == "s1-infix"
    assert number_from_json(doc["value"]["number"]).text() == "[+w, -w^(3)]"


def test_eval_json_omits_unused_convention():
    _, out, _ = run("eval", "mo([+1])", "--json")
    assert json.loads(out)["convention"] is None


def test_cmp():
    assert run("cmp", "[+w]", "[+w, +1]")[1] == "lt\n"
    assert run("cmp", "eps([])", "mo(eps([]))")[1] == "eq\n"
    assert run("cmp", "[+2]", "[+1, +1]")[1] == "eq\n"


def test_cmp_of_equal_tails_needs_bounded():
    a, b = "V([])", "xi([], V([]))"
    code, _, err = run("cmp", a, b)
    assert code == 1 and "exceeded" in err
    assert run("cmp", a, b, "--bounded") == (0, "eq\n", "")


def test_signs_marks_tails():
    assert run("signs", "V(0)", "--limit", "3")[1] == "[+w, -w^(3), +w^(w), ...]\n"
    assert run("signs", "[+w, -1]")[1] == "[+w, -1]\n"
    assert run("signs", "[+1, -1, +1]", "--limit", "2")[1] == "[+1, -1, ...]\n"


def test_signs_json():
    _, out, _ = run("signs", "V(0)", "--limit", "2", "--json")
    doc = json.loads(out)
    assert doc["truncated"] and doc["runs"] == [{"sign": 1, "len": "w"}, {"sign": -1, "len": "w^(3)"}]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["eval"],
    ["eval", "mo([])", "--convention", "s9"],
    ["eval", "mo([])", "--limit", "0"],
    ["signs", "[]", "--limit", "-1"],
    ["audit", "--suite", "NOPE"],
    ["audit", "--suite", "EPS-FIXED", "--corpus", "pairs=x"],
    ["table", "--n-range", "3..1"],
])
def test_usage_errors_exit_64(argv):
    assert run(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize("expr, word", [
    ("mo(", "syntax error"),
    ("moinv([+2])", "NotAMonomial"),
    ("nosuch([])", "unknown function"),
])
def test_evaluation_errors_exit_1(expr, word):
    code, _, err = run("eval", expr)
    assert code == 1 and word in err


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SURREAL_BUDGET", "2")
    assert run("cmp", "V([])", "V([+1])") == (0, "lt\n", "")
    code, _, err = run("cmp", "V([])", "xi([], V([]))")
    assert code == 1 and "exceeded 2 runs" in err
    # signs never errors on tails: --limit is an explicit expansion request
    assert run("signs", "V([])", "--limit", "5")[1].count(",") == 5
    _, out, _ = run("eval", "V([])", "--json")
    assert json.loads(out)["budget"] == 2
    monkeypatch.setenv("SURREAL_BUDGET", "zero")
    assert run("eval", "[]")[0] == EXIT_USAGE


def test_limit_overrides_environment(monkeypatch):
    monkeypatch.setenv("SURREAL_BUDGET", "2")
    _, out, _ = run("eval", "[]", "--json", "--limit", "9")
    assert json.loads(out)["budget"] == 9


def test_audit_and_replay(tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run("audit", "--suite", "BOUNDARY", "--corpus", "small",
                       "--convention", "s1-plain", "--report", str(report))
    assert code == 1 and "convention: s1-plain" in out
    code, out, _ = run("replay", str(report))
    assert code == 0 and "all verdicts reproduced" in out


def test_audit_passing_suite_exits_0(tmp_path):
    code, out, _ = run("audit", "--suite", "EPS-FIXED", "--corpus", "small")
    assert code == 0 and "fail: 0" in out


def test_audit_budget_exit_code(monkeypatch):
    monkeypatch.setenv("SURREAL_BUDGET", "8")
    assert run("audit", "--suite", "V-FIXED", "--corpus", "small")[0] == 2


def test_replay_of_missing_or_bad_file(tmp_path):
    assert run("replay", str(tmp_path / "none.json"))[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "x"}')
    assert run("replay", str(bad))[0] == EXIT_USAGE


def test_table_csv_and_json():
    code, out, _ = run("table", "--n-range=-1..1")
    assert code == 0
    assert out.splitlines()[1:] == ["n,index,value", '-1,[-1],"[+w, -w^(3)]"', "0,[],[+w]",
                                    "1,[+1],[+w^(w^(w))]"]
    _, out, _ = run("table", "--family", "interval", "--t", "[-1]", "--n-range=0..1",
                    "--format", "json", "--map", "rho")
    doc = json.loads(out)
    assert doc["schema"] == "signseq-table" and [r["n"] for r in doc["rows"]] == [0, 1]
    assert doc["rows"][0]["index"] == "[-1, +1, -1]"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "signseq", "eval", "kappa([+1])"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "[+eps(0)]\n"
