"""Command line behavior: outputs, exit codes, file inputs."""

import contextlib
import io
import json

from matprop.cli import run


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_decide_holds():
    code, out, _ = run_cli("decide", "--lhs", "ari", "--rhs", "maj")
    assert code == 0
    assert out.strip() == "holds"


def test_decide_does_not_hold():
    code, out, _ = run_cli("decide", "--lhs", "mal", "--rhs", "maj")
    assert code == 1
    assert out.strip() == "does not hold"


def test_decide_json():
    code, out, _ = run_cli("decide", "--lhs", "ari", "--rhs", "maj", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "holds"
    assert payload["mode"] == "non_pointed"
    assert payload["used_matrices"] == [0]
    assert len(payload["columns"]) == 7


def test_decide_tableau_lines():
    code, out, _ = run_cli("decide", "--lhs", "ari", "--rhs", "maj", "--tableau")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "holds"
    assert lines[1] == "c0 = (x1, x1, x2)  left column 1 of rhs"
    assert lines[4] == "c3 = (x2, x1, x2)  derived via matrix 0 from [c0, c1, c2]"
    assert len(lines) == 8


def test_decide_star_column_line():
    code, out, _ = run_cli("decide", "--lhs", "sub", "--rhs", "p3", "--tableau")
    assert code == 0
    assert "c3 = (*, *, *)  star column" in out.strip().splitlines()


def test_term_certificate():
    code, out, _ = run_cli("term", "--lhs", "struni2", "--rhs", "struni")
    assert code == 0
    assert out.splitlines() == [
        "holds",
        "certificate: p0(p0(y2, 0, y1), p0(y2, 0, y1), y3)",
        "shared: let t0 = p0(y2, 0, y1); p0(t0, t0, y3)",
    ]


def test_term_negative():
    code, out, _ = run_cli("term", "--lhs", "mal", "--rhs", "maj")
    assert code == 1
    assert out.strip() == "does not hold; no certificate"


def test_term_json():
    code, out, _ = run_cli("term", "--lhs", "uni,sub", "--rhs", "struni", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["verdict"] == "holds"
    cert = payload["certificate"]
    assert cert["term"] == "p0(y3, p1(y1, y2))"
    assert cert["term_shared"] == "p0(y3, p1(y1, y2))"
    assert cert["source"] == "extracted"
    assert cert["tree_nodes"] == 5


def test_check_valid():
    code, out, _ = run_cli("check", "--lhs", "ari", "--rhs", "mal",
                           "--term", "p0(y1, y2, y3)")
    assert code == 0
    assert out.strip() == "valid"


def test_check_wrong_value():
    code, out, _ = run_cli("check", "--lhs", "mal", "--rhs", "mal",
                           "--term", "y1")
    assert code == 1
    assert out.strip() == "invalid (row 2): got x2, expected x1"


def test_check_undefined():
    code, out, _ = run_cli("check", "--lhs", "sub", "--rhs", "q4",
                           "--term", "p0(p0(y1, y2), p0(y3, y4))")
    assert code == 1
    assert out.strip() == "invalid (row 3): undefined at p0(y1, y2)"


def test_check_json():
    code, out, _ = run_cli("check", "--lhs", "sub", "--rhs", "q4", "--json",
                           "--term", "p0(p0(y1, y2), p0(y3, y4))")
    assert code == 1
    assert json.loads(out) == {"status": "invalid", "row": 3,
                               "reason": "undefined", "path": [0],
                               "subterm": "p0(y1, y2)"}


def test_trivial():
    code, out, _ = run_cli("trivial", "--lhs", "[x1 | x2]")
    assert code == 0
    assert out.splitlines() == ["[x1 | x2]: trivial", "list jointly: trivial"]
    code, out, _ = run_cli("trivial", "--lhs", "sub")
    assert code == 1
    assert out.splitlines()[-1] == "list jointly: non-trivial"


def test_antitrivial():
    code, out, _ = run_cli("antitrivial", "--lhs", "[x1 | x1]")
    assert code == 0
    assert out.strip() == "[x1 | x1]: anti-trivial"
    code, _, _ = run_cli("antitrivial", "--lhs", "sub")
    assert code == 1


def test_free_tables():
    code, out, _ = run_cli("free", "--lhs", "sub", "--carrier", "2")
    assert code == 0
    assert out.splitlines() == [
        "carrier size 2 (pointed, basepoint 0)",
        "p0 (arity 2):",
        "  p0(0, 0) = 0",
        "  p0(1, 0) = 1",
        "  p0(1, 1) = 0",
    ]


def test_free_clash():
    code, out, _ = run_cli("free", "--lhs", "[x1 | x2]", "--carrier", "2")
    assert code == 1
    assert out.strip() == ("demands clash: p0(0) forced to both 0 and 1; "
                           "every model collapses to one element")
    code, out, _ = run_cli("free", "--lhs", "[x1 | x2]", "--carrier", "2",
                           "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["consistent"] is False
    assert payload["first"] == {"matrix": 0, "row": 0, "env": [0, 0]}
    assert payload["second"] == {"matrix": 0, "row": 0, "env": [0, 1]}


def test_free_json():
    code, out, _ = run_cli("free", "--lhs", "mal", "--carrier", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["consistent"] is True and payload["pointed"] is False
    assert len(payload["tables"][0]["entries"]) == 6


def test_at_file_inputs(tmp_path):
    mats = tmp_path / "mats.txt"
    mats.write_text("maj\nmal\n")
    term = tmp_path / "term.txt"
    term.write_text("p1(y1, p0(y1, y3, y2), y3)\n")
    code, out, _ = run_cli("check", "--lhs", f"@{mats}", "--rhs", "ari",
                           "--term", f"@{term}")
    assert code == 0 and out.strip() == "valid"

    lit = tmp_path / "lit.txt"
    lit.write_text("[x1 x2 x2 | x1 ; x2 x2 x1 | x1]\n")
    code, out, _ = run_cli("decide", "--lhs", "ari", "--rhs", f"@{lit}")
    assert code == 0 and out.strip() == "holds"


def test_relcheck(tmp_path):
    rel = tmp_path / "rel.txt"
    rel.write_text("carriers: 2 2 pointed\n1 1\n0 1\n")
    code, out, _ = run_cli("relcheck", "--lhs", "sub", "--relation", str(rel))
    assert code == 1 and out.strip() == "not closed"

    rel.write_text("carriers: 2 2 pointed\n1 1\n0 1\n1 0\n")
    code, out, _ = run_cli("relcheck", "--lhs", "sub", "--relation", str(rel))
    assert code == 0 and out.strip() == "closed"


def test_relcheck_strict(tmp_path):
    rel = tmp_path / "rel.txt"
    rel.write_text("carriers: 2 3\n0 0\n1 1\n")
    code, out, _ = run_cli("relcheck", "--lhs", "mal", "--relation", str(rel),
                           "--strict")
    assert code == 0 and out.strip() == "closed"
    # plain closedness needs equal carriers
    code, _, err = run_cli("relcheck", "--lhs", "mal", "--relation", str(rel))
    assert code == 2 and "--strict" in err

    rel.write_text("carriers: 2 2\n0 0\n0 1\n1 0\n")
    code, out, _ = run_cli("relcheck", "--lhs", "mal", "--relation", str(rel),
                           "--strict", "--json")
    assert code == 1
    assert json.loads(out) == {"closed": False, "strict": True}


def test_report_command(tmp_path):
    out_dir = tmp_path / "rep"
    code, out, _ = run_cli("report", "--matrices", "uni,sub,struni",
                           "--out", str(out_dir), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["classes"] == [["uni"], ["sub"], ["struni"]]
    assert (out_dir / "decisions.csv").exists()
    assert (out_dir / "hasse.png").exists()


def test_usage_errors():
    assert run_cli("decide", "--lhs", "ari")[0] == 2  # missing --rhs
    assert run_cli("decide", "--lhs", "ari", "--rhs", "maj",
                   "--pointed", "--non-pointed")[0] == 2
    code, _, err = run_cli("decide", "--lhs", "sub", "--rhs", "p3",
                           "--non-pointed")
    assert code == 2 and "non-pointed" in err
    assert run_cli("free", "--lhs", "sub", "--carrier", "0")[0] == 2
    assert run_cli("nosuchcommand",)[0] == 2


def test_parse_errors():
    assert run_cli("decide", "--lhs", "nosuch", "--rhs", "maj")[0] == 3
    assert run_cli("decide", "--lhs", "[x1 |", "--rhs", "maj")[0] == 3
    assert run_cli("check", "--lhs", "ari", "--rhs", "mal", "--term", "y")[0] == 3
    assert run_cli("decide", "--lhs", "@/no/such/file", "--rhs", "maj")[0] == 3


def test_relation_parse_errors(tmp_path):
    rel = tmp_path / "rel.txt"
    rel.write_text("sizes: 2 2\n0 0\n")
    assert run_cli("relcheck", "--lhs", "mal", "--relation", str(rel))[0] == 3
    rel.write_text("carriers: 2 2\n0\n")
    assert run_cli("relcheck", "--lhs", "mal", "--relation", str(rel))[0] == 3
    rel.write_text("carriers: 2 2\n0 7\n")
    assert run_cli("relcheck", "--lhs", "mal", "--relation", str(rel))[0] == 3


def test_resource_limit_exit():
    code, _, err = run_cli("decide", "--lhs", "ari", "--rhs", "maj",
                           "--max-candidates", "0")
    assert code == 4 and "candidate" in err


def test_help_exits_zero():
    assert run_cli("--help")[0] == 0
    assert run_cli("decide", "--help")[0] == 0


def test_lifts_mixed_modes():
    # non-pointed lhs member is lifted when the rhs is pointed
    code, out, _ = run_cli("decide", "--lhs", "mal", "--rhs", "struni")
    assert code == 0 and out.strip() == "holds"
    code, _, _ = run_cli("decide", "--lhs", "mal", "--rhs", "struni",
                         "--non-pointed")
    assert code == 2