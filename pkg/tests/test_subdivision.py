from fractions import Fraction

import pytest

from mirrortoric.fan import Cone, Fan, fan_over_faces
from mirrortoric.plconvex import is_strictly_convex_on
from mirrortoric.polytope import LatticePolytope
from mirrortoric.subdivision import (
    fan_over_cells,
    gkz_mpcp,
    induced_subfan,
    is_crepant,
    lower_hull,
    lower_point,
    pulling_refinement,
)

SQUARE = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_concave_heights_report_nontight_point():
    sub = lower_hull(LatticePolytope([(0,), (2,)]), {(0,): 0, (1,): 1, (2,): 0})
    assert sub.complex == {frozenset({(0,), (2,)})}
    assert sub.nontight == [(1,)]
    assert sub.function.on_domain((1,)) == 0


def test_flat_square_is_one_cell():
    assert lower_hull(SQUARE, lambda p: 0).complex == {SQUARE.vertex_set}


def test_generic_square_is_two_triangles():
    sub = lower_hull(SQUARE, {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1})
    assert sub.complex == {frozenset({(0, 0), (1, 0), (0, 1)}), frozenset({(1, 0), (0, 1), (1, 1)})}


def test_heights_need_vertices():
    with pytest.raises(ValueError):
        lower_hull(SQUARE, {(0, 0): 0})


def test_lower_point_matches_recompute():
    heights = {p: 0 for p in SQUARE.lattice_points()}
    sub = lower_point(lower_hull(SQUARE, heights), (1, 1), Fraction(-1, 2))
    heights[(1, 1)] = Fraction(-1, 2)
    assert sub.complex == lower_hull(SQUARE, heights).complex


def test_simplex_is_already_mpcp(p24):
    D = LatticePolytope(p24["simplex_vertices"])
    assert D.boundary_lattice_points() == sorted(D.vertices)
    cert = gkz_mpcp(D, D.gauge)
    assert cert.valid and cert.scale == 1 and cert.rounds == 0


def test_reflexive_quadrilateral_with_one_midpoint():
    Q = LatticePolytope([(-1, -1), (1, -1), (0, 1), (-1, 0)])
    assert Q.is_reflexive() and len(Q.boundary_lattice_points()) == 5
    cert = gkz_mpcp(Q, Q.gauge)
    assert cert.valid
    assert len(cert.fan.rays()) == 5 and cert.rounds == 1 and cert.pulled == [(0, -1)]
    assert all(len(c) == 2 for c in cert.cells)


def test_gkz_rejects_non_convex_seed():
    Q = LatticePolytope([(-1, -1), (1, -1), (0, 1), (-1, 0)])
    with pytest.raises(ValueError):
        gkz_mpcp(Q, lambda p: -Q.gauge(p))


def test_pulling_refines_each_round():
    Q = LatticePolytope([(-2, -1), (2, -1), (0, 2)])
    res = pulling_refinement([Q], {p: 0 for p in Q.lattice_points()})
    for (before,), (after,) in zip(res.history, res.history[1:]):
        hulls = [LatticePolytope(d) for d in before]
        assert all(any(all(P.contains(v) for v in c) for P in hulls) for c in after)
    assert all(len(c) == 3 for c in res.cells())
    assert res.rays() == set(Q.lattice_points())



def test_crepant(p24):
    D = LatticePolytope(p24["simplex_vertices"])
    assert is_crepant(fan_over_faces(D), D)
    Q = LatticePolytope([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    assert is_crepant(fan_over_cells([[(-1, -1), (0, -1)], [(0, -1), (1, -1)]], 2), Q)
    bad = Fan.from_maximal([Cone([(1, 0), (0, 1)])], 2)
    half = LatticePolytope([(-2, -2), (2, -2), (2, 2), (-2, 2)])
    assert not is_crepant(bad, half)


def test_induced_subfan():
    Q = LatticePolytope([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    cert = gkz_mpcp(Q, Q.gauge)
    sub = Fan.from_maximal([Cone([(1, -1), (1, 1)])], 2)
    induced = induced_subfan(cert.fan, sub)
    assert {frozenset(c.rays) for c in induced.maximal_cones()} == {frozenset({(1, -1), (1, 0)}), frozenset({(1, 0), (1, 1)})}
    assert induced_subfan(cert.fan, cert.fan) == cert.fan


def test_compatible_function_is_strictly_convex(pipeline):
    h = pipeline.h
    assert is_strictly_convex_on(h.function, fan_over_cells([c.vertices for c in h.cells], 4)).ok
