import itertools
import json

import pytest

from mirrortoric import scenarios
from mirrortoric.polytope import LatticePolytope


def test_reports_are_deterministic(report_p24, report_p11222):
    assert scenarios.suite_p24().to_json() == report_p24.to_json()
    assert scenarios.suite_p11222().to_json() == report_p11222.to_json()


def test_report_has_no_timings(report_p24):
    body = json.loads(report_p24.to_json())
    assert set(body) == {"suite", "seed", "samples", "conventions", "passed", "checks"}
    assert all(set(c) == {"id", "anchor", "passed", "computed", "expected"} for c in body["checks"])


def test_check_counts(report_p24, report_p11222):
    assert len(report_p24.checks) >= 12 and sum(c.passed for c in report_p24.checks) >= 12
    assert len(report_p11222.checks) >= 9 and report_p11222.passed


def test_text_report(report_p11222):
    text = report_p11222.to_text()
    assert text.splitlines()[-1].strip() == f"{len(report_p11222.checks)}/{len(report_p11222.checks)} checks passed"


@pytest.mark.parametrize("cid", [
    "dual_vertices", "newton_polytopes", "kernel", "image", "two_faces", "removal", "sigma_prime",
    "compatible", "final", "squares", "roundtrip", "identity", "map_structure",
])
def test_p24_check(report_p24, cid):
    check = report_p24.check(f"p24.{cid}")
    assert check.passed, check.to_dict()


def test_perturbed_nabla_only_breaks_the_image_check(p24, report_p24):
    fx = json.loads(json.dumps(p24))
    fx["nabla"][0] = [x + (1 if i == 4 else 0) for i, x in enumerate(fx["nabla"][0])]
    perturbed = scenarios.suite_p24(fx)
    base_failures = {c.id for c in report_p24.checks if not c.passed}
    failures = {c.id for c in perturbed.checks if not c.passed}
    assert failures - base_failures == {"p24.image"}
    assert base_failures <= failures
    assert perturbed.check("p24.image").computed["witnesses"]


def test_corrupted_fixture_reports_errors_as_failures(p11222):
    fx = json.loads(json.dumps(p11222))
    del fx["k_faces"]["k1"]
    report = scenarios.suite_p11222(fx)
    assert not report.check("p11222.face_subdivision").passed
    assert "error" in report.check("p11222.face_subdivision").computed
    assert report.check("p11222.identity").passed


def test_subdivision_facts_that_hold(report_p24):
    c = report_p24.check("p24.subdivision").computed
    assert c["first_newton_two_faces"] == 20 and c["removed"] == 4 and c["into_square"] == 4
    assert c["splits_match"] == {"e1": True, "e2": True, "e4": True}
    assert c["crepant"] is True and c["unsplit_is_fan_map"] is False


def test_no_three_of_four_rows_rule_removes_exactly_the_non_faces(dual_delta):
    # vertex triples of the dual polytope that lie in no two-face
    verts = dual_delta.vertices
    two_faces = [set(F.vertices) for F in dual_delta.faces(2)]
    non_faces = {frozenset(t) for t in itertools.combinations(verts, 3) if not any(set(t) <= f for f in two_faces)}
    assert len(non_faces) == 4
    quads = [{frozenset(t) for t in itertools.combinations(q, 3)} for q in itertools.combinations(verts, 4)]
    assert non_faces not in quads


def test_second_example_details(report_p11222, p11222):
    c = report_p11222.check("p11222.not_contained").computed
    w = c["witness"]
    assert w["value"] < 0
    P = LatticePolytope(p11222["P_vertices"])
    assert w["vertex"] in [tuple(v) for v in p11222["newton_phi2"]]
    assert report_p11222.check("p11222.face_subdivision").computed["cells"] == 4


def test_face_registry():
    assert "S1" in scenarios.face_names("p24")
    assert scenarios.face_names("p11222") == ["A", "A-mpcp"]
    with pytest.raises(KeyError):
        scenarios.face_complex("p24", "nope")


@pytest.mark.parametrize("suite, name, cells", [
    ("p24", "e4", [3, 3, 3]),
    ("p24", "e1", [3, 3]),
    ("p24", "e3", [3, 3, 4, 4]),
    ("p24", "S1", [3] * 32),  # unimodular triangulation of a square with 25 lattice points
    ("p24", "v124", [3, 4, 4]),
    ("p11222", "A", [3, 4, 4, 4]),
])
def test_face_complexes(suite, name, cells):
    face = scenarios.face_complex(suite, name)
    assert sorted(len(c) for c in face.cells) == cells


def test_mpcp_of_singular_face_is_unimodular():
    face = scenarios.face_complex("p11222", "A-mpcp")
    assert len(face.cells) == 16 and all(len(c) == 3 for c in face.cells)
