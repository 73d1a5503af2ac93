import json
import subprocess
import sys

import pytest

import graphnil.crossval as cv
from graphnil.classify import ClassificationReport
from graphnil.cli import EXIT_DISAGREE, EXIT_INPUT, EXIT_OK, cmd_example, main
from graphnil.linalg import Matrix, block_diag
from graphnil.metric import Metric, format_metric
from graphnil.report import Report

EXAMPLE_TEXT = "12\n1 2\n2 3\n1 3\n1 4\n2 4\n3 4\n5 6\n6 7\n5 7\n8 9\n10 11\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_example(capsys):
    code, out, _ = run(["example"], capsys)
    assert code == EXIT_OK
    assert "span(J1+J6, J2+J4, -J3+J5)" in out
    assert "span(J1-J6, J2-J4, J3+J5)" in out
    assert "phi_space_dim: 6" in out
    assert "[e10,e11] = z11" in out


def test_example_json(capsys):
    code, out, _ = run(["example", "--json"], capsys)
    rep = Report.from_json(out)
    assert rep.verdicts["phi_space_dim"] == 6
    assert rep.verdicts["semi_standard_metric_nr"] is True
    assert rep.verdicts["unit_coefficients_give_standard_metric"] is True
    assert rep == cmd_example()


def test_report_roundtrip():
    rep = cmd_example()
    assert Report.from_json(rep.to_json()) == rep
    assert Report.from_dict(json.loads(json.dumps(rep.to_dict()))) == rep
    with pytest.raises(ValueError):
        Report.from_dict({"command": "x", "bogus": 1})


def test_analyze_example(files, capsys):
    code, out, _ = run(["analyze", files("example.graph", EXAMPLE_TEXT)], capsys)
    assert code == EXIT_OK
    assert "{1,2,3,4} complete" in out and "{12} empty" in out
    assert "so(3) on K3{5,6,7}" in out


def test_analyze_p3(files, capsys):
    code, out, _ = run(["analyze", files("p3.graph", "3\n1 2\n2 3\n")], capsys)
    assert code == EXIT_OK
    assert "not a cluster graph: edge 1-2 joins non-equivalent vertices" in out
    assert "dim Der: 13" in out


def test_analyze_k1(files, capsys):
    code, out, _ = run(["analyze", "--json", files("k1.graph", "1\n")], capsys)
    rep = Report.from_json(out)
    assert rep.verdicts == {"cluster": True, "abelian": True}


def test_check_example_standard(files, capsys):
    code, out, _ = run(["check", files("example.graph", EXAMPLE_TEXT), "--standard", "--json"], capsys)
    rep = Report.from_json(out)
    assert code == EXIT_OK
    assert rep.verdicts["GO"] and rep.verdicts["NR"] and rep.verdicts["agree"]


def test_check_p3(files, capsys):
    code, out, _ = run(["check", files("p3.graph", "3\n1 2\n2 3\n"), "--json"], capsys)
    rep = Report.from_json(out)
    assert code == EXIT_OK
    assert not rep.verdicts["GO"] and not rep.verdicts["NR"]
    assert rep.witnesses["gordon"]["pair"] == "(C^-1 z1, e1)"


def test_check_k4_metric_file(files, capsys):
    k4 = "4\n1 2\n2 3\n1 3\n1 4\n2 4\n3 4\n"
    metric = Metric(block_diag(Matrix.identity(4), Matrix.diag([2, 1, 1, 1, 1, 1])))
    code, out, _ = run(["check", files("k4.graph", k4), "--metric", files("c.metric", format_metric(metric)), "--json"], capsys)
    rep = Report.from_json(out)
    assert code == EXIT_OK
    assert rep.verdicts["NR"] is False and rep.verdicts["semi_standard"] is False


@pytest.mark.parametrize("coeffs", ["2,3,5", "2,3,5,7", "2,3,5,7,11"])
def test_check_semi_standard(files, capsys, coeffs):
    code, out, _ = run(["check", files("example.graph", EXAMPLE_TEXT), "--semi-standard", coeffs, "--json"], capsys)
    rep = Report.from_json(out)
    assert code == EXIT_OK and rep.verdicts["NR"] and rep.verdicts["semi_standard"]
    assert rep.sections["semi_standard"]["coefficients"] == ["2", "3", "5"]


@pytest.mark.parametrize("argv_tail,fragment", [
    (["--semi-standard", "2,3"], "expected 3 ideal coefficients"),
    (["--semi-standard", "2,3,5,7,11,13"], "coefficient count mismatch"),
    (["--semi-standard", "2,-3,5"], "positive"),
    (["--semi-standard", "2,x,5"], "bad coefficient"),
])
def test_check_bad_coefficients(files, capsys, argv_tail, fragment):
    code, _, err = run(["check", files("example.graph", EXAMPLE_TEXT)] + argv_tail, capsys)
    assert code == EXIT_INPUT and fragment in err


def test_input_errors(files, capsys):
    code, _, err = run(["analyze", files("bad.graph", "3\n1 2\n2 2\n")], capsys)
    assert code == EXIT_INPUT and "bad.graph:3:" in err and "loop" in err
    code, _, err = run(["analyze", "/nonexistent/graph"], capsys)
    assert code == EXIT_INPUT and "cannot read" in err
    g = files("k2.graph", "2\n1 2\n")
    bad = files("bad.metric", '{"dim": 3, "gram": [["1","0","0"],["0","-1","0"],["0","0","1"]]}')
    code, _, err = run(["check", g, "--metric", bad], capsys)
    assert code == EXIT_INPUT and "positive definite" in err
    wrong = files("wrong.metric", '{"dim": 2, "gram": [["1","0"],["0","1"]]}')
    code, _, err = run(["check", g, "--metric", wrong], capsys)
    assert code == EXIT_INPUT and "dimension" in err
    code, _, err = run(["check", files("p3.graph", "3\n1 2\n2 3\n"), "--semi-standard", "1"], capsys)
    assert code == EXIT_INPUT and "cluster graph" in err


def test_metric_flags_are_exclusive(files):
    with pytest.raises(SystemExit) as exc:
        main(["check", files("k2.graph", "2\n1 2\n"), "--standard", "--semi-standard", "1"])
    assert exc.value.code == 2


def test_crossval_ok(capsys, tmp_path):
    code, out, _ = run(["crossval", "--trials", "3", "--max-vertices", "4", "--seed", "0",
                        "--dump-dir", str(tmp_path), "--json"], capsys)
    rep = Report.from_json(out)
    assert code == EXIT_OK and rep.verdicts["all_agree"]
    assert rep.sections["summary"]["trials"] == 3


def test_crossval_bad_args(capsys):
    code, _, err = run(["crossval", "--trials", "0"], capsys)
    assert code == EXIT_INPUT


def test_crossval_disagreement_exit_code(capsys, tmp_path, monkeypatch):
    real = cv.classify

    def broken(g, metric=None, seed=0):
        rep = real(g, metric, seed=seed)
        return ClassificationReport(rep.graph, rep.cluster, rep.nr, rep.go, rep.semi, False, ("forced",))

    monkeypatch.setattr(cv, "classify", broken)
    code, _, err = run(["crossval", "--trials", "1", "--max-vertices", "3", "--dump-dir", str(tmp_path)], capsys)
    assert code == EXIT_DISAGREE
    assert str(tmp_path) in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "graphnil", "example"], capture_output=True, text=True)
    assert out.returncode == 0 and "phi_space_dim: 6" in out.stdout


def test_check_disagreement_dumps_case(files, capsys, tmp_path, monkeypatch):
    import graphnil.cli as cli

    real = cli.classify

    def broken(g, metric=None, seed=0):
        rep = real(g, metric, seed=seed)
        return ClassificationReport(rep.graph, rep.cluster, rep.nr, rep.go, rep.semi, False, ("forced",))

    monkeypatch.setattr(cli, "classify", broken)
    dump = tmp_path / "dumps"
    code, _, err = run(["check", files("k2.graph", "2\n1 2\n"), "--dump-dir", str(dump)], capsys)
    assert code == EXIT_DISAGREE
    written = list(dump.iterdir())
    assert len(written) == 1 and str(written[0]) in err
    doc = json.loads(written[0].read_text())
    assert doc["verdicts"]["nr"] is True and doc["metric_kind"] == "standard"
