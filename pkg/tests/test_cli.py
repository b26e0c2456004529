import io
import json

from grnhoare.cli import main

from conftest import GOLDEN, MODELS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


FIG1 = ("--network", MODELS / "fig1.net")
FFL = ("--network", MODELS / "feedforward.net")


def test_validate():
    code, out, _ = run("validate", *FFL)
    assert code == 0 and "7 parameters" in out


def test_validate_reports_cycle(tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("network { var a : 0..1; multiplex m : n; multiplex n : m; target a <- m; }")
    code, _, err = run("validate", "--network", bad)
    assert code == 1
    assert err.startswith("error[multiplex-cycle]: ")
    assert err.count("\n") == 1


def test_syntax_error_line(tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("network {\n  var a 0..1;\n}")
    code, _, err = run("wp", "--network", bad, "--pre", "true", "--program", "eps", "--post", "true")
    assert code == 2
    assert err.startswith("error[syntax]: 2:")


def test_usage_errors():
    assert run("solve", *FFL)[0] == 2
    code, _, err = run("check", *FFL, "--triple", MODELS / "p1.triple")
    assert code == 2 and err.startswith("error[usage]: ")
    assert run("graph", *FIG1, "--valuation", MODELS / "fig1.val", "--format", "json")[0] == 2
    assert run("validate", "--network", MODELS / "missing.net")[0] == 2
    code, _, err = run("wp", "--network", MODELS / "missing.net", "--pre", "true", "--program", "eps", "--post", "true")
    assert code == 2 and err.startswith("error[io]: ")


def test_graph_matches_golden():
    code, out, _ = run("graph", *FIG1, "--valuation", MODELS / "fig1.val")
    assert code == 0
    assert out == (GOLDEN / "fig1.dot").read_text()


def test_graph_degrees():
    _, out, _ = run("graph", *FIG1, "--valuation", MODELS / "fig1.val")
    nodes = [l for l in out.splitlines() if l.strip().startswith('"') and "->" not in l]
    edges = [l for l in out.splitlines() if "->" in l]
    assert len(nodes) == 6
    assert sum(1 for e in edges if e.strip().startswith('"(0,0)"')) == 2
    assert sum("stable" in n for n in nodes) == 1


def test_wp_simplify_p1_and_p2():
    code, out, _ = run("wp", *FFL, "--triple", MODELS / "p1.triple", "--simplify")
    assert code == 0 and "wp satisfiable: yes" in out
    code, out, _ = run("wp", *FFL, "--triple", MODELS / "p2.triple", "--simplify", "--format", "json")
    doc = json.loads(out)
    assert doc["wp"] == "false" and doc["satisfiable"] is False


def test_check_exit_codes():
    args = (*FIG1, "--valuation", MODELS / "fig1.val")
    assert run("check", *args, "--triple", MODELS / "fig1_ex1.triple")[0] == 0
    code, out, _ = run("check", *args, "--triple", MODELS / "fig1_ex2.triple")
    assert code == 1 and out == "Fails at (2,0)\n"
    code, out, _ = run("check", *args, "--triple", MODELS / "fig1_ex2.triple", "--mode", "wp")
    assert code == 1
    spin = "while a>=0 with true do a:=0 end"
    code, out, _ = run("check", *args, "--pre", "a=0", "--program", spin, "--post", "a=2", "--fuel", "3")
    assert code == 3 and out.startswith("Undetermined")


def test_check_eps_holds():
    code, out, _ = run("check", *FIG1, "--valuation", MODELS / "fig1.val",
                       "--pre", "a=1 | b=0", "--program", "eps", "--post", "a=1 | b=0")
    assert (code, out) == (0, "Holds\n")


def test_solve_json_stable_across_jobs():
    base = ("solve", *FFL, "--triple", MODELS / "p1.triple", "--format", "json", "--mode", "oracle")
    first = run(*base)[1]
    assert first == run(*base)[1]
    assert first == run(*base, "--jobs", "2")[1]
    assert json.loads(first)["network"] == "feedforward"


def test_solve_text():
    code, out, _ = run("solve", *FFL, "--triple", MODELS / "p1.triple")
    assert code == 0
    assert "consistent: 16 of 128" in out


def test_solve_cap_exit_code():
    code, _, err = run("solve", *FFL, "--triple", MODELS / "p1.triple", "--max-valuations", "10")
    assert code == 3 and err.startswith("error[size-limit]: ")
