import json

import pytest

from faceguard.cli import main
from faceguard.polyhedron import box


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.json"
    path.write_text(box((0, 1), (0, 1), (0, 1)).dumps())
    return str(path)


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_validate_and_classify(cube_file, capsys):
    assert main(["validate", cube_file]) == 0
    assert capsys.readouterr().out.strip() == "ok"
    assert main(["classify", cube_file]) == 0
    info = out_json(capsys)
    assert (info["f"], info["c"], info["orthogonal"], info["genus"]) == (6, 3, True, [0])


def test_bad_input_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    assert main(["nonsense"]) == 2


def test_solve_and_verify(cube_file, tmp_path, capsys):
    out = tmp_path / "sol.json"
    assert main(["solve", cube_file, "--algo", "coriented", "--kind", "open", "-o", str(out)]) == 0
    sol = json.loads(out.read_text())
    assert sol["size"] == 1 and sol["uncovered"] == []
    capsys.readouterr()
    faces = ",".join(map(str, sol["faces"]))
    assert main(["verify", cube_file, "--faces", faces, "--kind", "open"]) == 0
    assert out_json(capsys)["ok"]
    assert main(["verify", cube_file, "--faces", "7"]) == 2
    assert main(["verify", cube_file, "--faces", "a,b"]) == 2


def test_generate_then_certify(tmp_path, capsys):
    d = tmp_path / "fig4"
    assert main(["generate", "fig4", "--k", "2", "-o", str(d)]) == 0
    man = json.loads((d / "manifest.json").read_text())
    assert (man["f"], man["bound"], man["certified_bound"]) == (12, 2, 2)
    capsys.readouterr()
    poly = str(d / "poly.json")
    assert main(["certify-lower", poly, "--witnesses", "critical", "--kind", "open"]) == 0
    assert out_json(capsys)["lower_bound"] == 2
    assert main(["solve", poly, "--algo", "exact", "--kind", "open", "--witnesses", "critical"]) == 0
    assert out_json(capsys)["size"] == 2


def test_generate_reports_failed_contract(tmp_path, capsys):
    assert main(["generate", "fig5", "--k", "3", "-o", str(tmp_path)]) == 1
    assert "contract failed" in capsys.readouterr().err
    assert (tmp_path / "poly.json").exists()


def test_orthostack_solver(tmp_path, capsys):
    d = tmp_path / "st"
    assert main(["generate", "lower_orthostack", "--k", "4", "-o", str(d)]) == 0
    capsys.readouterr()
    assert main(["solve", str(d / "poly.json"), "--algo", "orthostack7"]) == 0
    assert out_json(capsys)["method"] == "orthostack7"
    assert main(["solve", str(d / "poly.json"), "--algo", "orthostack7", "--kind", "open"]) == 2


def test_reduce_and_export(tmp_path, capsys):
    sc = tmp_path / "sc.json"
    sc.write_text(json.dumps({"n": 1, "sets": [[1]]}))
    d = tmp_path / "red"
    assert main(["reduce", str(sc), "-o", str(d)]) == 0
    assert len(out_json(capsys)["set_faces"]) == 1
    obj = tmp_path / "red.obj"
    assert main(["export", str(d / "poly.json"), "--obj", str(obj)]) == 0
    assert obj.read_text().count("\nf ") > 0
    sc.write_text(json.dumps({"n": 2, "sets": [[3]]}))
    assert main(["reduce", str(sc), "-o", str(d)]) == 1
    sc.write_text(json.dumps({"sets": [[1]]}))
    assert main(["reduce", str(sc), "-o", str(d)]) == 2
