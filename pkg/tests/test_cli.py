import json
import re
import xml.etree.ElementTree as ET
from importlib import resources

import pytest

from mirrortoric import scenarios
from mirrortoric.cli import main
from mirrortoric.exactnum import rank

DATA = resources.files("mirrortoric") / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_p24_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "p24", "--seed", "7")
    body = json.loads(out)
    assert sum(c["passed"] for c in body["checks"]) >= 12
    assert code == (0 if body["passed"] else 1)


def test_verify_second_suite_passes(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--suite", "p11222", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["passed"] is True


def test_verify_all_text(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--format", "text")
    assert "suite p24" in out and "suite p11222" in out
    assert re.search(r"PASS\s+p11222\.identity", out)


def test_seed_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("MIRRORTORIC_SEED", "5")
    _, out, _ = run(capsys, "verify", "--suite", "p11222", "--seed", "1")
    assert json.loads(out)["seed"] == 5


def test_corrupted_fixture_exits_one(capsys, tmp_path, p11222):
    fx = json.loads(json.dumps(p11222))
    fx["newton_phi2"][0] = [9, 9, 9, 9]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(fx))
    code, _, _ = run(capsys, "verify", "--suite", "p11222", "--fixture", str(path))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "p99"],
    ["verify", "--bogus"],
    ["polytope", "--input", "missing.json", "--op", "dual"],
    ["render", "--suite", "p24", "--face", "nope"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_polytope(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"dim": 2, "vertices": [[0, "x"]]}')
    code, _, err = run(capsys, "polytope", "--input", str(path), "--op", "points")
    assert code == 2 and "cannot read polytope" in err


def test_polytope_dual(capsys, p24):
    code, out, _ = run(capsys, "polytope", "--input", str(DATA / "delta_p24.json"), "--op", "dual")
    assert code == 0
    assert {tuple(v) for v in json.loads(out)["vertices"]} == set(p24["dual_vertices"])


def test_polytope_faces_and_points(capsys):
    _, out, _ = run(capsys, "polytope", "--input", str(DATA / "nabla.json"), "--op", "faces", "--dim", "2")
    assert len(json.loads(out)) == 50
    _, out, _ = run(capsys, "polytope", "--input", str(DATA / "segment_L.json"), "--op", "points")
    assert len(json.loads(out)) == 5


def test_fan(capsys):
    code, out, _ = run(capsys, "fan", "--input", str(DATA / "nabla.json"), "--dim", "3")
    body = json.loads(out)
    assert code == 0 and sum(rank(c["rays"]) == 3 for c in body["cones"]) == 50


def _cells_from_svg(text):
    root = ET.fromstring(text)
    polys = [e for e in root.iter() if e.tag.endswith("polygon") and e.get("class") == "cell"]
    return {frozenset(tuple(int(x) for x in v.strip("()").split(",")) for v in p.get("data-vertices").split(";")) for p in polys}


@pytest.mark.parametrize("suite, face", [("p24", "e4"), ("p24", "S1"), ("p24", "e3"), ("p11222", "A"), ("p24", "v146")])
def test_render_matches_computation(capsys, tmp_path, suite, face):
    path = tmp_path / f"{face}.svg"
    code, _, _ = run(capsys, "render", "--suite", suite, "--face", face, "--out", str(path))
    assert code == 0
    computed = scenarios.face_complex(suite, face)
    assert _cells_from_svg(path.read_text()) == {frozenset(c) for c in computed.cells}
    root = ET.fromstring(path.read_text())
    assert sum(e.tag.endswith("circle") for e in root.iter()) == len(computed.points)
