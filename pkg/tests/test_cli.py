import io
import json
import pathlib
import subprocess
import sys

import pytest

from nilkgroups.cli import emit_report, main, parse_group_file, parse_group_text
from nilkgroups.errors import NotAGroup, ParseError

SCHEMA = pathlib.Path(__file__).resolve().parents[1] / "docs" / "report_schema.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), out


# --- group files ---------------------------------------------------------------------


def test_cayley_file(tmp_path):
    f = tmp_path / "c2.txt"
    f.write_text("order 2\n0 1\n1 0\n")
    G = parse_group_file(str(f))
    assert G.order == 2 and G.identity == 0


def test_permutation_file(tmp_path):
    f = tmp_path / "s3.txt"
    f.write_text("# comment\nname Sym3\ndegree 3\n(1 2)\n(1 2 3)\n")
    G = parse_group_file(str(f))
    assert G.order == 6 and G.name == "Sym3"


def test_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("order 1\n0\n"))
    assert parse_group_file("-").order == 1


@pytest.mark.parametrize("text,line", [
    ("order 2\n0 1\n1\n", 3),
    ("order 2\n0 1\n", 3),
    ("order 2\n0 1\n1 0\n0 1\n", 4),
    ("order x\n", 1),
    ("0 1\n1 0\n", 1),
    ("degree 3\n(1 2\n", 2),
    ("degree 3\n(1 2)\n(1 4)\n", 3),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_group_text(text)
    assert exc.value.line == line


def test_bad_entry_column():
    with pytest.raises(ParseError) as exc:
        parse_group_text("order 3\n0 1 2\n1 2 0\n2 0 7\n")
    assert (exc.value.line, exc.value.column) == (4, 5)


def test_non_group_table():
    with pytest.raises(NotAGroup):
        parse_group_text("order 2\n0 0\n1 1\n")


# --- analyze ----------------------------------------------------------------------------


def test_analyze_s3(capsys):
    code, r, _ = run_json(capsys, "analyze", "--group", "symmetric(3)", "--k", "1")
    assert code == 1
    assert all(v["holds"] for v in r["is_ntk"].values())
    assert not r["is_csnk"]["structural"]["holds"] and not r["is_csnk"]["sentences"]["holds"]
    mal = r["sentences"]["Mal"]
    assert not mal["holds"] and mal["witness"]["kind"] == "MalFail"
    assert r["nilpotency_class"] == "NotNilpotent"
    assert r["dichotomy_witness"]["subgroups"]["A"]["order"] == 3
    assert r["consistent"]


def test_analyze_trivial(capsys):
    code, r, _ = run_json(capsys, "analyze", "--group", "cyclic:1", "--k", "2")
    assert code == 0
    verdicts = list(r["is_ntk"].values()) + list(r["is_csnk"].values()) + list(r["sentences"].values())
    assert all(v["holds"] and v["witness"] is None for v in verdicts)
    assert r["dichotomy_witness"] is None


def test_analyze_file_and_method(capsys, tmp_path):
    f = tmp_path / "q.txt"
    f.write_text("degree 3\n(1 2)\n(1 2 3)\n")
    code, r, _ = run_json(capsys, "analyze", "--group", str(f), "--k", "1", "--method", "ck_characterization")
    assert list(r["is_ntk"]) == ["ck_characterization"] and r["group"]["order"] == 6


def test_analyze_q8_witness(capsys):
    code, r, _ = run_json(capsys, "analyze", "--group", "quaternion8", "--k", "1")
    nil = r["sentences"]["Nil"]["witness"]
    assert code == 1 and nil["elements"]["x"] == {"index": 1, "label": "-1"}


def test_analyze_deterministic_and_roundtrip(capsys):
    _, _, first = run_json(capsys, "analyze", "--group", "dihedral(5)", "--k", "1")
    _, _, second = run_json(capsys, "analyze", "--group", "dihedral(5)", "--k", "1")
    assert first == second
    assert emit_report(json.loads(first), "json") == first


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--group", "dihedral(5)", "--k", "1")
    assert "group      D5 (order 10)" in out and "dichotomy" in out and code == 1


# --- harness -------------------------------------------------------------------------------


def test_harness_cli(capsys):
    code, r, out = run_json(capsys, "harness", "--max-order", "12", "--k", "1,2")
    assert code == 0 and r["exit_status"] == 0
    assert len(r["reports"]) == 16
    assert all("elapsed" not in rep for rep in r["reports"])
    assert emit_report(json.loads(out), "json") == out
    code2, _, out2 = run_json(capsys, "harness", "--max-order", "12", "--k", "1,2")
    assert out == out2


def test_harness_prop_filter_and_text(capsys):
    code, out, _ = run(capsys, "harness", "--max-order", "10", "--k", "1", "--prop", "dichotomy",
                       "--timings")
    assert code == 0 and out.count("PASS") == 1 and "dichotomy" in out


def test_harness_budget_exit(capsys):
    code, r, _ = run_json(capsys, "harness", "--max-order", "24", "--k", "2",
                          "--prop", "pairwise_iff_nt", "--subgroup-cap", "3")
    assert code == 3 and r["reports"][0]["status"] == "incomplete"


# --- freeprod and magnus --------------------------------------------------------------------


def test_freeprod_malnormal(capsys):
    code, r, _ = run_json(capsys, "freeprod", "malnormal", "--radius", "2", "--exp-bound", "2", "--seed", "5")
    assert code == 0 and r["holds"] and r["bounds"]["seed"] == 5 and r["bounds"]["radius"] == 2
    code, r, _ = run_json(capsys, "freeprod", "malnormal", "--factor", "finite:cyclic(2)", "--z", "0:#1|1:#1")
    assert code == 1 and r["witness"] == {"x": "0:#1", "n": 1, "m": -1}


def test_freeprod_example2(capsys):
    code, r, _ = run_json(capsys, "freeprod", "example2", "--a", "cyclic(4)", "--b", "cyclic(2)")
    assert code == 0 and r["holds"] and r["x"] == 2
    code, _, err = run(capsys, "freeprod", "example2", "--a", "cyclic(3)")
    assert code == 2 and "order 2" in err


def test_freeprod_embed(capsys):
    code, r, _ = run_json(capsys, "freeprod", "embed", "--m", "2", "--samples", "100")
    assert code == 0 and r["homomorphism_ok"] == 100 and r["known_kernel_candidate"] is None
    code, r, _ = run_json(capsys, "freeprod", "embed", "--m", "3", "--samples", "50")
    assert code == 1 and r["known_kernel_candidate"]["killed"]
    code, r, _ = run_json(capsys, "freeprod", "embed", "--m", "3", "--samples", "50", "--conjugates")
    assert code == 0 and not r["known_kernel_candidate"]["killed"]
    code, r, _ = run_json(capsys, "freeprod", "embed", "--m", "2", "--word", "1:x2")
    assert r["image"] == "0:x1^-1 | 1:x2 | 0:x1"


def test_freeprod_bad_input(capsys):
    assert run(capsys, "freeprod", "malnormal", "--z", "0:x1")[0] == 2
    assert run(capsys, "freeprod", "malnormal", "--z", "0:x1 | 9:x1")[0] == 2
    assert run(capsys, "freeprod", "malnormal", "--factor", "bogus")[0] == 2
    assert run(capsys, "freeprod", "malnormal", "--node-cap", "10")[0] == 3


def test_magnus_eval(capsys):
    code, r, _ = run_json(capsys, "magnus", "eval", "--m", "2", "--k", "2", "[x1,x2]")
    assert code == 0 and r["series"] == "1 + X1X2 - X2X1" and not r["is_identity"]
    assert r["class2_coordinates"] == {"exponents": [0, 0], "commutators": {"[x2,x1]": -1}}
    code, r, _ = run_json(capsys, "magnus", "eval", "(x1x2)^2", "--compare", "x1^2x2^2[x2,x1]")
    assert r["equal"]
    code, r, _ = run_json(capsys, "magnus", "eval", "--k", "1", "[x1,x2]")
    assert r["is_identity"]


def test_magnus_errors_and_caps(capsys):
    code, _, err = run(capsys, "magnus", "eval", "x1^")
    assert code == 2 and "position 3" in err
    assert run(capsys, "magnus", "eval", "--m", "7", "x1")[0] == 2
    assert run(capsys, "magnus", "eval", "--m", "7", "--no-caps", "x1")[0] == 0


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "analyze", "--group", "symmetric(3)")[0] == 2
    assert run(capsys, "analyze", "--group", "nosuch(3)", "--k", "1")[0] == 2
    assert run(capsys, "analyze", "--group", "/no/such/file", "--k", "1")[0] == 2
    assert run(capsys, "harness", "--k", "")[0] == 2


def test_json_matches_schema_keys(capsys):
    schema = json.loads(SCHEMA.read_text())
    assert schema["schema_version"] == 1
    by_kind = {s["properties"]["kind"]["const"]: s for s in schema["oneOf"]}
    samples = [
        ("analysis", ["analyze", "--group", "symmetric(3)", "--k", "1"]),
        ("harness", ["harness", "--max-order", "6", "--k", "1"]),
        ("magnus", ["magnus", "eval", "x1x2"]),
        ("freeprod", ["freeprod", "example2"]),
    ]
    for kind, argv in samples:
        _, r, _ = run_json(capsys, *argv)
        assert r["kind"] == kind and r["schema_version"] == 1
        assert set(by_kind[kind]["required"]) <= set(r)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "nilkgroups", "magnus", "eval", "x1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and '"1 + X1"' in out.stdout
