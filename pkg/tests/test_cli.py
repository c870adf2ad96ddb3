import json
from pathlib import Path

import pytest

from flatsurface.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_info(capsys):
    code, out, _ = run(capsys, "info", FIX / "tetrahedron.surf")
    assert code == 0
    rows = dict(line.split("\t")[:2] for line in out.splitlines() if line.count("\t") == 1)
    assert rows["euler_characteristic"] == "2"
    assert abs(float(rows["gauss_bonnet_residual"])) < 1e-9


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", FIX / "square-torus.surf", "--max-length", 1.5)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "length\tmultiplicity"
    assert lines[1:] == ["1\t2", "1.41421356237\t2"]


def test_arcs_and_shortest(capsys, tmp_path):
    code, out, _ = run(capsys, "arcs", FIX / "square-disk.surf", "--max-length", 2,
                       "--from", 0, "--out", tmp_path / "a.json")
    assert code == 0
    assert json.loads((tmp_path / "a.json").read_text())["kind"] == "arcs"
    code, out, _ = run(capsys, "shortest", FIX / "square-disk.surf", "--from", 0, "--to", 2)
    assert code == 0
    assert out.splitlines()[0] == "length\t1.41421356237"


def test_essential_loop(capsys):
    code, out, _ = run(capsys, "essential-loop", FIX / "square-torus.surf")
    assert code == 0
    assert out.splitlines()[1].split("\t")[1:] == ["1", "true", "essential"]


def test_loops(capsys):
    code, out, _ = run(capsys, "loops", FIX / "square-torus.surf", "--max-length", 1.0)
    assert code == 0
    assert len(out.splitlines()) == 3


def test_triangulate_and_validate(capsys, tmp_path):
    res, svg, fig = tmp_path / "t.json", tmp_path / "t.svg", tmp_path / "t.png"
    code, out, _ = run(capsys, "triangulate", FIX / "octagon-genus2.surf", "--out", res,
                       "--svg", svg, "--figure", fig)
    assert code == 0
    assert out.splitlines()[1] == "1\t9\t6\t0\ttrue"
    assert svg.read_text().startswith("<?xml")
    assert fig.stat().st_size > 0
    code, out, _ = run(capsys, "validate", FIX / "octagon-genus2.surf", "--result", res)
    assert code == 0


def test_unfold_writes_files(capsys, tmp_path):
    code, out, _ = run(capsys, "unfold", FIX / "mobius-square.surf", "--out", tmp_path / "u.json",
                       "--svg", tmp_path / "u.svg", "--figure", tmp_path / "u.png")
    assert code == 0
    assert out.splitlines()[1].endswith("\tfalse\ttrue")
    assert json.loads((tmp_path / "u.json").read_text())["kind"] == "unfolding"


def test_render_modes(capsys, tmp_path):
    assert run(capsys, "render", FIX / "regular-hexagon.surf", "--svg", tmp_path / "h.svg")[0] == 0
    code, _, err = run(capsys, "render", FIX / "square-torus.surf", "--svg", tmp_path / "t.svg")
    assert code == 1 and "NotRenderable" in err
    code, _, _ = run(capsys, "render", FIX / "square-torus.surf", "--svg", tmp_path / "t.svg",
                     "--mode", "triangulation")
    assert code == 0


def test_tampered_result_fails_validation(capsys, tmp_path):
    res = tmp_path / "u.json"
    run(capsys, "unfold", FIX / "square-torus.surf", "--out", res)
    data = json.loads(res.read_text())
    data["cut_arcs"][0]["length"] *= 2
    res.write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", FIX / "square-torus.surf", "--result", res, "--json")
    assert code == 1
    assert all(json.loads(line)["code"] == "ResultInvalid" for line in err.splitlines())


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "spectrum", FIX / "square-torus.surf")[0] == 2
    assert run(capsys, "spectrum", FIX / "square-torus.surf", "--max-length", -1)[0] == 2
    assert run(capsys, "info", tmp_path / "missing.surf")[0] == 2


def test_parse_error_diagnostic(capsys, tmp_path):
    bad = tmp_path / "bad.surf"
    bad.write_text("flatsurf/1\ntri 0 coords 0 0 1 0 x 1\n")
    code, _, err = run(capsys, "info", bad, "--json")
    assert code == 1
    rec = json.loads(err)
    assert (rec["code"], rec["line"], rec["column"]) == ("SurfaceSyntaxError", 2, 22)


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "arcs", FIX / "thin-torus.surf", "--max-length", 20,
                       "--budget", 5000, "--json")
    assert code == 3
    rec = json.loads(err)
    assert rec["code"] == "SearchBudgetExceeded" and rec["budget"] == 5000
