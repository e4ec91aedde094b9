import io
import json
from pathlib import Path

import pytest

from cowpv.cli import main
from cowpv.pda import load_structured

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("word,identity", [("pi0 pi0", "true"), ("", "true"), ("A", "false")])
def test_eval_identity(word, identity):
    code, text = run("eval", word)
    assert code == 0
    assert f"identity: {identity}" in text


def test_eval_g1a():
    code, text = run("eval", "g1a")
    assert "identity: false" in text and "in L_G: true" in text
    assert "phi: ε:ε" in text
    assert "0:0:a" in text


def test_eval_parse_error(capsys):
    code, _ = run("eval", "A Q")
    assert code == 2
    assert "position 1" in capsys.readouterr().err


def test_pda_accept():
    code, text = run("pda", "accept", "A")
    assert code == 0 and "member: yes, rotation 0" in text
    code, text = run("pda", "accept", "A Abar")
    assert code == 0 and "member: no (all rotations rejected)" in text
    assert text.count("reject") == 3


def test_pda_build_and_accept_from_file(tmp_path):
    path = tmp_path / "m.json"
    code, text = run("pda", "build", "--out", str(path))
    assert code == 0
    machine = load_structured(path.read_text())
    assert f"transitions: {len(machine.transitions)}" in text
    code, text = run("pda", "accept", "g1a", "--machine", str(path))
    assert "member: yes" in text


def test_pda_export_dot(tmp_path):
    path = tmp_path / "m.dot"
    assert run("pda", "export", "--out", str(path))[0] == 0
    dot = path.read_text()
    _, text = run("pda", "build")
    count = int(text.rsplit("transitions: ", 1)[1])
    assert dot.startswith("digraph") and dot.count(" -> ") == count


@pytest.mark.parametrize("flags", [
    ("--theta", "identity"),
    ("--theta", "trivial"),
    ("--group", str(FIXTURES / "z3_square.yaml")),
    ("--group", "Z3", "--theta", "power:2"),
])
def test_crossval_zero_disagreements(flags, tmp_path):
    out = tmp_path / "report.txt"
    code, text = run("crossval", "--max-len", "2", "--out", str(out), *flags)
    assert code == 0
    assert "disagreements: 0" in text
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["disagreements"] == [] and summary["seed"] == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# group")
    assert sum(1 for l in lines if not l.startswith("#")) == summary["counts"]["words"]


def test_crossval_sample_is_seeded(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run("crossval", "--max-len", "0", "--sample", "20x4", "--seed", "5", "--out", str(a))
    run("crossval", "--max-len", "0", "--sample", "20x4", "--seed", "5", "--out", str(b))
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize("argv", [
    ("crossval", "--max-len", "-1"),
    ("crossval", "--sample", "twenty"),
    ("eval", "A", "--theta", "sideways"),
    ("eval", "A", "--group", "Q8"),
    ("demo", "check", "--gen", "A"),
    ("demo", "induce", "--gen", "A"),
    ("pda", "accept"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_missing_group_file_reports_usage_error(tmp_path):
    bad = tmp_path / "g.yaml"
    bad.write_text("order: 2\nnames: [e, a]\ntable:\n- [0, 1]\n- [1, 1]\nidentity: 0\n")
    assert run("eval", "A", "--group", str(bad))[0] == 2


def test_demo_induce_dihedral(tmp_path):
    out = tmp_path / "maps.yaml"
    code, text = run("demo", "induce", str(FIXTURES / "dihedral.yaml"), "--out", str(out))
    assert code == 0
    assert "relator r r: holds" in text and "relator r z r z: holds" in text
    assert set(__import__("yaml").safe_load(out.read_text())) == {"z", "r"}


def test_demo_check_pass_and_fail():
    code, text = run("demo", "check", "--gen", "A", "--node", "10", "--len", "12")
    assert code == 0 and text.startswith("PASS")
    code, text = run("demo", "check", "--gen", "A", "--node", "0", "--len", "3")
    assert code == 1 and "FAIL" in text and "(1, A)" in text


def test_demo_check_spec_file():
    code, text = run("demo", "check", str(FIXTURES / "dihedral.yaml"), "--node", "010", "--len", "6")
    assert code == 0 and text.startswith("PASS")


def test_demo_named_generator_word():
    code, text = run("demo", "check", "--gen", "z=A", "--node", "10", "--len", "4")
    assert code == 0
