import pytest

from mirrortoric.exactnum import LatticeMatrix
from mirrortoric.fan import Cone, Fan, cone_over, fan_over_faces, is_fan_map, refine, remove_cones, skeleton
from mirrortoric.polytope import LatticePolytope


@pytest.fixture(scope="module")
def fan_simplex(p24):
    return fan_over_faces(LatticePolytope(p24["simplex_vertices"]))


@pytest.fixture(scope="module")
def fan_dual(dual_delta):
    return fan_over_faces(dual_delta)


@pytest.fixture(scope="module")
def fan_nabla(nabla):
    return fan_over_faces(nabla)


def test_projective_space_fan(fan_simplex):
    assert len(fan_simplex.rays()) == 6
    assert len(fan_simplex.maximal_cones()) == 6
    assert all(c.dim == 5 for c in fan_simplex.maximal_cones())


def test_quartic_fan_rays(p24):
    assert set(fan_over_faces(LatticePolytope(p24["delta_vertices"])).rays()) == set(p24["delta_vertices"])


def test_nabla_fan(fan_nabla, nabla):
    assert len(fan_nabla.rays()) == 12
    assert len(fan_nabla.cones(3)) == 50
    for k in range(1, 6):
        assert len(fan_nabla.cones(k)) == len(nabla.faces(k - 1))


def test_fan_over_faces_needs_interior_origin():
    with pytest.raises(ValueError):
        fan_over_faces(LatticePolytope([(0, 0), (1, 0), (0, 1)]))


def test_skeleton(fan_dual):
    assert skeleton(fan_dual, 4) == fan_dual
    assert [c.dim for c in skeleton(fan_dual, 0).cones()] == [0]
    sk = skeleton(fan_dual, 3)
    assert sk.dim == 3 and len(sk.maximal_cones()) == 13


def test_remove_cones(fan_simplex):
    assert remove_cones(fan_simplex, []) == fan_simplex
    top = fan_simplex.maximal_cones()[:2]
    assert len(remove_cones(fan_simplex, top)) == len(fan_simplex) - 2
    with pytest.raises(ValueError):
        remove_cones(fan_simplex, [fan_simplex.cones(1)[0]])


def test_fan_maps(g, fan_nabla, fan_dual):
    assert not is_fan_map(g.T, fan_nabla, fan_dual).ok
    assert is_fan_map(LatticeMatrix.identity(4), fan_dual, fan_dual).ok


def test_fan_map_composition(p11222, fan_simplex):
    P = LatticePolytope(p11222["P_vertices"])
    h = LatticeMatrix(p11222["h"])
    FP = fan_over_faces(P)
    assert is_fan_map(LatticeMatrix.identity(4), FP, FP).ok
    assert is_fan_map(h, FP, fan_simplex).ok
    assert is_fan_map(h @ LatticeMatrix.identity(4), FP, fan_simplex).ok


def test_smallest_containing_cone(fan_dual, p24):
    v = p24["dual_vertices"]
    cone = fan_dual.smallest_containing_cone(p24["t_points"][0])
    assert set(cone.rays) == {v[0], v[1], v[3]}
    assert fan_dual.smallest_containing_cone((0, 0, 0, 0)).dim == 0
    partial = Fan.from_maximal([cone_over([v[0]], 4)], 4)
    assert partial.smallest_containing_cone(v[1]) is None


def test_refine():
    line = Fan.from_maximal([Cone([(1,)]), Cone([(-1,)])], 1)
    assert refine(line, line) == line
    quad = Fan.from_maximal([Cone([a, b]) for a, b in [((1, 0), (0, 1)), ((0, 1), (-1, 0)), ((-1, 0), (0, -1)), ((0, -1), (1, 0))]], 2)
    diag = Fan.from_maximal([Cone([(1, 1), (-1, -1)], ambient_dim=2) for _ in [0]][:0] + [Cone([(1, 1), (-1, 1)]), Cone([(-1, 1), (-1, -1)]), Cone([(-1, -1), (1, -1)]), Cone([(1, -1), (1, 1)])], 2)
    common = refine(quad, diag)
    assert len(common.maximal_cones()) == 8
    for x in [(3, 1), (-1, 2), (1, -5)]:
        c = common.smallest_containing_cone(x)
        assert quad.smallest_containing_cone(x).contains_cone(c)
        assert diag.smallest_containing_cone(x).contains_cone(c)


def test_cone_with_lineality():
    half = Cone([(1, 0)], lineality=[(0, 1)])
    assert half.dim == 2 and half.contains((5, -7)) and not half.contains((-1, 0))
    assert not Cone([(1, 0), (0, 1)]).contains((1, -1))
