from __future__ import annotations

import json
import subprocess
import sys

import pytest

from medianlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def n5_file(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog", "--named", "N5")
    assert code == 0
    path = tmp_path / "n5.json"
    path.write_text(out)
    return str(path)


def test_lattice_summary(capsys, n5_file):
    code, out, _ = run(capsys, "lattice", n5_file)
    assert code == 0
    assert json.loads(out) == {
        "size": 5,
        "distributive": False,
        "modular": False,
        "automorphism_count": 1,
        "theta_d_blocks": 4,
    }


def test_medians_report_and_dot(capsys, n5_file, tmp_path):
    code, out, _ = run(capsys, "medians", n5_file, "--dot", str(tmp_path / "dot"))
    report = json.loads(out)
    assert code == 0
    assert report["t_poset"]["triples"] == ["abc"]
    assert report["om"]["size"] == 2 and report["im"]["size"] == 2
    assert [c["kind"] for c in report["classification"]] == ["inner", "inner"]
    dot = (tmp_path / "dot" / "om.dot").read_text()
    assert dot.startswith('digraph "OM"') and "rankdir=BT" in dot
    assert {p.name for p in (tmp_path / "dot").iterdir()} == {"om.dot", "im.dot", "lattice.dot"}


def test_medians_deterministic(capsys, tmp_path):
    _, out, _ = run(capsys, "catalog", "--named", "L4")
    path = tmp_path / "l4.json"
    path.write_text(out)
    first = run(capsys, "medians", str(path))[1]
    second = run(capsys, "medians", str(path))[1]
    assert first == second
    assert json.loads(first)["im"]["member_names"] == ["0ab", "0dd", "ddd"]


def test_term_eval_and_identity(capsys, n5_file):
    code, out, _ = run(capsys, "term", "x ^ (y v z)", "--lattice", n5_file, "--eval", "a,b,c", "--equals", "(x^y) v (x^z)")
    report = json.loads(out)
    assert code == 0 and report["canonical"] == "(x1 ^ (x2 v x3))"
    assert report["value"] == "a"
    assert report["equals"]["holds"] is False and report["equals"]["witness"] == ["c", "a", "b"]


def test_term_syntax_error(capsys):
    code, out, err = run(capsys, "term", "x ^ ^")
    assert code == 1
    assert json.loads(out)["error"] == "SyntaxError" and json.loads(out)["position"] == 4
    assert "error:" in err


def test_bad_lattice_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["a", "b", "1"], "covers": [["a", "1"], ["b", "1"]]}))
    code, out, _ = run(capsys, "lattice", str(bad))
    assert code == 1 and json.loads(out)["error"] == "NotALattice"
    code, out, _ = run(capsys, "lattice", str(tmp_path / "missing.json"))
    assert code == 1


def test_checks(capsys, n5_file):
    code, out, _ = run(capsys, "check", n5_file, "theta-d")
    assert code == 0 and json.loads(out)["results"][0]["blocks"] == [["0"], ["a", "c"], ["b"], ["1"]]
    code, out, _ = run(capsys, "check", "--size", "5", "two-outer-theorem")
    assert code == 0 and json.loads(out)["count"] == 5
    code, out, _ = run(capsys, "check", "--size", "4", "gluing-prop")
    assert code == 0 and json.loads(out)["count"] == 9
    code, out, _ = run(capsys, "check", "--size", "6", "modularity-symmetric")
    assert code == 0 and json.loads(out)["count"] == 15


def test_check_usage_errors(capsys, n5_file):
    assert run(capsys, "check", "no-such-check")[0] == 2
    assert run(capsys, "check", "theta-d")[0] == 2
    assert run(capsys, "check", n5_file, "theta-d", "--size", "4")[0] == 2


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--size", "5")
    assert code == 0 and len(json.loads(out)) == 5
    code, out, _ = run(capsys, "catalog")
    assert json.loads(out)[:2] == ["M3", "N5"]
    code, out, _ = run(capsys, "catalog", "--named", "nope")
    assert code == 1 and json.loads(out)["error"] == "UnknownName"
    code, out, _ = run(capsys, "catalog", "--size", "9")
    assert code == 1 and json.loads(out)["error"] == "SizeUnsupported"


def test_table1(capsys):
    code, out, err = run(capsys, "table1", "--markdown")
    report = json.loads(out)
    assert code == 0 and report["matched"] == 12 and report["failing"] == []
    assert "| M4 |" in err


def test_table1_mismatch_exits_nonzero(capsys):
    code, out, err = run(capsys, "table1", "--expect", "N5=3,2")
    assert code == 1
    assert json.loads(out)["failing"] == ["N5"]
    assert "N5" in err


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "medianlab", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
