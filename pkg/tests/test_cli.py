import json
import subprocess
import sys

import pytest

from omegamb.cli import main
from omegamb.corpus import get


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_member_lasso(capsys):
    code, rep, _ = run(capsys, "member-lasso", "--bpda", "corpus:Vd", "--lasso", "abbcc(d)")
    assert code == 0 and rep["verdict"] is True
    assert rep["query"]["lasso"] == "abbcc(d)" and "timing_ms" in rep


def test_empty(capsys):
    _, rep, _ = run(capsys, "empty", "--bpda", "corpus:anbn_c")
    assert rep["empty"] is False and rep["witness"] == "ab(c)"


def test_count_runs(capsys):
    _, rep, _ = run(capsys, "count-runs", "--bpda", "corpus:Vd", "--lasso", "abc(d)")
    assert rep["lower_bound"] == 2 and rep["exhaustive"] and rep["label_claim"] == "AtLeast(2)"


def test_grammar_queries(capsys):
    _, rep, _ = run(capsys, "delta-limit", "--grammar", "corpus:L1", "--lasso", "abbcc(d)")
    assert rep["verdict"] is True
    _, rep, _ = run(capsys, "adherence", "--grammar", "corpus:L1", "--lasso", "b(a)")
    assert rep == {**rep, "verdict": False, "refutation": "b"}
    _, rep, _ = run(capsys, "omega-power-member", "--grammar", "corpus:gW", "--lasso", "(1d)")
    assert rep["verdict"] is True
    _, rep, _ = run(capsys, "decompose", "--grammar", "corpus:gW", "--lasso", "0d(01d0)")
    assert rep["lower_bound"] == 2
    _, rep, _ = run(capsys, "parse-count", "--grammar", "corpus:V", "--word", "abc")
    assert rep["kind"] == "exact" and rep["value"] == 2


def test_relation_queries(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(get("T_double").obj.to_json()))
    _, rep, _ = run(capsys, "rel-classify", "--rel", str(path), "--in", "(a)", "--out", "(a)")
    assert rep["class"] == "Uncountable"
    _, rep, _ = run(capsys, "rel-member", "--rel", "corpus:T_id", "--in", "(ab)", "--out", "(ab)")
    assert rep["verdict"] is True and rep["computation"]["cycle"]


def test_corpus_commands(capsys):
    _, rep, _ = run(capsys, "corpus", "list")
    assert any(e["name"] == "gW" for e in rep["entries"])
    _, rep, _ = run(capsys, "corpus", "dump", "V")
    assert rep["start"] == "S"
    _, rep, _ = run(capsys, "corpus", "check", "--samples", "10", "--length", "6")
    assert rep["ok"] and rep["checked"] > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["member-lasso", "--bpda", "/no/such/file", "--lasso", "a(b)"],
        ["member-lasso", "--bpda", "corpus:Vd", "--lasso", "abc"],
        ["member-lasso", "--bpda", "corpus:V", "--lasso", "a(b)"],
        ["parse-count", "--grammar", "corpus:V", "--word", "abx"],
        ["corpus", "dump", "nope"],
        ["count-runs", "--bpda", "corpus:Vd", "--lasso", "a(d)", "--steps", "0"],
        ["frobnicate"],
    ],
)
def test_bad_input_exits_2(capsys, argv):
    code, rep, err = run(capsys, *argv)
    assert code == 2 and rep is None and err


def test_bad_json_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "parse-count", "--grammar", str(path), "--word", "a")
    assert code == 2 and "JSON" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "omegamb", "empty", "--bpda", "corpus:Vd"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["witness"] == "abc(d)"
