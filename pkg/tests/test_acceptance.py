"""The twelve acceptance criteria, one pass/fail line each.

Runs under pytest (lines appear in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

import sys

import pytest

import oracles
from mirrortoric import scenarios

# criterion -> (title, [(suite, check id)]); criterion 12 runs the oracle laws instead
CRITERIA = {
    1: ("dual of the quartic polytope has the six listed vertices", [("p24", "dual_vertices")]),
    2: ("Newton polytopes of both nef functions", [("p24", "newton_polytopes")]),
    3: ("image of the combined polytope and pulled-back values", [("p24", "image")]),
    4: ("two-faces of the combined polytope: 50 of 55 candidates", [("p24", "two_faces")]),
    5: ("removal values and the single-survivor test", [("p24", "removal")]),
    6: ("partial fan maps onto the target skeleton", [("p24", "subdivision")]),
    7: ("MPCP certificate refines the downstairs complexes; segment split", [("p24", "compatible")]),
    8: ("pulled-back function identity and induced subdivisions", [("p24", "final")]),
    9: ("square cells of the upstairs fan and their splits", [("p24", "squares")]),
    10: (
        "birational maps roundtrip and factored identities hold",
        [("p24", "roundtrip"), ("p24", "identity"), ("p11222", "roundtrip"), ("p11222", "identity")],
    ),
    11: (
        "second family: Newton polytope, non-containment, named faces",
        [
            ("p11222", "second_newton"),
            ("p11222", "not_contained"),
            ("p11222", "named_faces"),
            ("p11222", "face_subdivision"),
        ],
    ),
    12: ("randomized laws agree with brute-force oracles", None),
}

LAWS = {
    "newt": oracles.newt_law_failures,
    "mpcp-1": oracles.mpcp_part1_failures,
    "mpcp-2": oracles.mpcp_part2_failures,
    "mpcp-3": oracles.mpcp_part3_failures,
    "duality": oracles.duality_failures,
}


def evaluate(n, reports):
    """Return (passed, detail) for criterion ``n``."""
    title, checks = CRITERIA[n]
    if checks is None:
        bad = {name: len(law()) for name, law in LAWS.items()}
        failing = [f"{k}: {v} failures" for k, v in bad.items() if v]
        return not failing, "; ".join(failing) or f"{len(LAWS)} laws, 0 failures"
    failing = []
    for suite, cid in checks:
        c = reports[suite].check(f"{suite}.{cid}")
        if not c.passed:
            keys = [k for k, v in c.expected.items() if c.computed.get(k) != v]
            failing.append(f"{c.id} [{', '.join(keys)}]")
    if failing:
        return False, "failing: " + "; ".join(failing)
    return True, f"{len(checks)} check{'s' * (len(checks) > 1)}"


def line(n, passed, detail):
    return f"criterion {n:2d} {'PASS' if passed else 'FAIL'}  {CRITERIA[n][0]} ({detail})"


LINES = pytest.StashKey[dict]()


@pytest.fixture(scope="module")
def reports(report_p24, report_p11222):
    return {"p24": report_p24, "p11222": report_p11222}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, reports, request):
    passed, detail = evaluate(n, reports)
    request.config.stash.setdefault(LINES, {})[n] = line(n, passed, detail)
    print(line(n, passed, detail))
    assert passed, detail


def main():
    reports = {"p24": scenarios.suite_p24(), "p11222": scenarios.suite_p11222()}
    ok = True
    for n in sorted(CRITERIA):
        passed, detail = evaluate(n, reports)
        ok &= passed
        print(line(n, passed, detail), flush=True)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
