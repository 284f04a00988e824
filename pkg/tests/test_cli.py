import json
import subprocess
import sys

import pytest

from babygiant.cli import main, parse_system
from babygiant.poly import ParseError, poly


def run(tmp_path, text, *args):
    f = tmp_path / "input.txt"
    f.write_text(text)
    return main([args[0], str(f)] + list(args[1:]))


def test_parse_system():
    polys, k = parse_system("x1^2 + x2^2 - 1\n")
    assert polys == [poly("x1^2 + x2^2 - 1")] and k == 2
    polys, k = parse_system("# two lines\nx1 - x2\nx1 + x2 - 1  # second\n")
    assert len(polys) == 2 and k == 2


def test_parse_errors():
    with pytest.raises(ParseError, match="unknown variable"):
        parse_system("x1^2 + y")
    with pytest.raises(ParseError, match="non-rational"):
        parse_system("x1 - 0.5")


@pytest.mark.parametrize("text,expected", [("x1^2 + x2^2 - 1", "1"), ("x1*x2 - 1", "2"),
                                           ("x1^2 + x2^2 + 1", "0")])
def test_components_command(tmp_path, capsys, text, expected):
    assert run(tmp_path, text, "components") == 0
    assert capsys.readouterr().out.strip() == expected


def test_components_report(tmp_path, capsys):
    rep = tmp_path / "report.json"
    assert run(tmp_path, "x1^2 + x2^2 - 1", "components", "--report", str(rep)) == 0
    data = json.loads(rep.read_text())
    assert data["components"] == 1 and "max_depth" in data


def test_connected_command(tmp_path, capsys):
    two = "(x1^2 + x2^2 - 1)*(x1^2 + (x2 - 4)^2 - 1)"
    assert run(tmp_path, two, "connected", "0,1", "0,3") == 0
    assert capsys.readouterr().out.strip() == "no"
    assert run(tmp_path, "x1^2 + x2^2 - 1", "connected", "1,0", "-1,0") == 0
    assert capsys.readouterr().out.strip() == "yes"


def test_point_off_variety(tmp_path, capsys):
    assert run(tmp_path, "x1^2 + x2^2 - 1", "connected", "2,0", "1,0") == 3
    assert "not on variety, residual 3" in capsys.readouterr().err


def test_exit_codes(tmp_path, capsys):
    assert run(tmp_path, "x1^2 + y", "components") == 2
    assert run(tmp_path, "x1^2 + x2^2 - 1", "components", "--budget", "0") == 4
    assert main(["components", str(tmp_path / "missing.txt")]) == 3


def test_export_json_dot_csv(tmp_path, capsys):
    out, dot, csvf = tmp_path / "g.json", tmp_path / "g.dot", tmp_path / "g.csv"
    assert run(tmp_path, "x1^2 + x2^2 - 1", "roadmap", "-o", str(out), "--dot", str(dot),
               "--csv", str(csvf)) == 0
    data = json.loads(out.read_text())
    assert set(data) >= {"k", "components", "vertices", "edges"}
    assert data["components"] == 1 and len(data["vertices"]) >= 2 and len(data["edges"]) >= 2
    for v in data["vertices"]:
        assert set(v) >= {"id", "component", "anchor", "rep"}
        for lvl in v["rep"]["levels"]:
            for term in lvl["poly"]:
                int(term["coeff"])
    for e in data["edges"]:
        assert set(e) >= {"id", "v_from", "v_to", "param_var", "samples"}
    text = dot.read_text()
    assert text.startswith("graph roadmap {") and text.rstrip().endswith("}")
    assert text.count("--") == len(data["edges"])
    assert csvf.read_text().splitlines()[0].startswith("edge,index,x1,x2")


def test_anchors_match_exact_data(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run(tmp_path, "x1^2 + x2^2 - 1", "export", "-o", str(out)) == 0
    data = json.loads(out.read_text())
    for v in data["vertices"]:
        x, y = v["anchor"]
        assert abs(x * x + y * y - 1) <= 1e-9


def test_empty_export(tmp_path, capsys):
    assert run(tmp_path, "x1^2 + x2^2 + 1", "roadmap") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["vertices"] == []


def test_plots(tmp_path, capsys):
    png = tmp_path / "r.png"
    assert run(tmp_path, "x1^2 + x2^2 - 1", "roadmap", "-o", str(tmp_path / "g.json"),
               "--plot", str(png)) == 0
    assert png.stat().st_size > 0
    sil = tmp_path / "s.png"
    assert run(tmp_path, "x1^2 + x2^2 + x3^2 - 1", "silhouette", "--plot", str(sil)) == 0
    assert sil.stat().st_size > 0


def test_console_script(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("x1^2 + x2^2 - 1\n")
    r = subprocess.run([sys.executable, "-m", "babygiant.cli", "components", str(f)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1"
