"""Randomized laws checked against brute-force oracles, 50 inputs each."""

import oracles


def test_newton_of_pullback_is_image():
    assert oracles.newt_law_failures() == []


def test_lower_hull_reproduces_convex_heights():
    assert oracles.mpcp_part1_failures() == []


def test_lower_hull_is_lower_envelope():
    assert oracles.mpcp_part2_failures() == []


def test_boundary_perturbation_is_mpcp():
    assert oracles.mpcp_part3_failures() == []


def test_duality_and_minkowski():
    assert oracles.duality_failures() == []


def test_envelope_oracle_detects_concave_heights():
    env = oracles.lower_envelope({(0,): 0, (1,): 1, (2,): 0})
    assert env((1,)) == 0
