import json
import random
from fractions import Fraction

import pytest

from mirrortoric import birational
from mirrortoric.birational import (
    FAMILIES,
    THEOREMS,
    Identity,
    LaurentPoly,
    MonomialMap,
    RationalFn,
    compose,
    inverse_support,
    ring,
    sample_on_family,
    verify_factored_identity,
    verify_theorem,
)
from mirrortoric.exactnum import LatticeMatrix

X1, X2, X3, X4 = ring("X1", "X2", "X3", "X4")


def test_cancellation():
    assert (X1 - X1).is_zero()


def test_expansion():
    got = (1 + X4 * X2 ** -1) * (X4 ** -1 * X1 * X2 + X2)
    assert got == X4 ** -1 * X1 * X2 + X2 + X1 + X4


def test_division_by_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        X1 / (X2 - X2)


def test_rational_functions():
    f = (1 + X4 * X2 ** -1) ** -1
    assert isinstance(f, RationalFn)
    assert f * (1 + X4 * X2 ** -1) == RationalFn(LaurentPoly.constant(f.variables, 1))
    assert f.evaluate({"X2": 2, "X4": 2}) == Fraction(1, 2)


def test_ring_axioms():
    rng = random.Random(2)

    def rand_poly():
        return sum((rng.randint(-3, 3) * X1 ** rng.randint(-2, 2) * X2 ** rng.randint(-2, 2) for _ in range(4)), X3 * 0)

    for _ in range(20):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


def test_first_map_points():
    f = THEOREMS["birational1"].forward
    ones = {y: 1 for y in f.source}
    assert set(f.pullback_point(ones).values()) == {1}
    pt = dict(zip(f.source, (1, 2, 1, 1, 3)))
    assert f.pullback_point(pt) == {"X1": Fraction(1, 6), "X2": 6, "X3": 1, "X4": Fraction(1, 3)}


def test_zero_coordinate_rejected():
    f = THEOREMS["birational1"].forward
    with pytest.raises(ValueError):
        f.pullback_point(dict(zip(f.source, (0, 1, 1, 1, 1))))


def test_composition_matches_matrix_product():
    rng = random.Random(4)
    f = THEOREMS["birational1"].forward
    assert compose(MonomialMap.identity(f.target), f) == f
    for _ in range(20):
        m = MonomialMap(LatticeMatrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(4)]), f.target, ("A", "B", "C"))
        pt = {y: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for y in f.source}
        assert compose(m, f).pullback_point(pt) == m.pullback_point(f.pullback_point(pt))


def test_conifold_sample_formula():
    x = {"X1": 1, "X2": 2, "X3": 3, "X4": 5}
    a5 = Fraction(x["X1"] * x["X2"] * x["X3"]) * (1 - 1 - 2 - 3 - 5 - Fraction(1 * 2, 5))
    assert FAMILIES["X*_C"].contains({**x, "a5": a5})


def test_bb_linear_solve():
    fam = FAMILIES["X*_BB"]
    # all-ones in the first equation forces b4 = (1 - 3) / Y4
    y4 = 1 / (Fraction(1 - 3) * 3)
    assert fam.residuals({"Y1": 1, "Y2": 1, "Y3": 1, "Y4": y4, "Y5": 3, "b4": -2 / y4})[0] == 0


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_samples_lie_on_family(name):
    fam = FAMILIES[name]
    for seed in range(25):
        pt, params = sample_on_family(name, seed)
        assert fam.residuals({**pt, **params}) == [0] * len(fam.equations)


def test_identities():
    assert verify_factored_identity("p24").equal
    assert verify_factored_identity("p11222").equal


def test_corrupted_identity():
    good = birational.IDENTITIES["p24"]
    x3 = LaurentPoly.variable(good.rhs.variables, "X3")
    bad = Identity("flipped", good.lhs, good.rhs - 2 * x3)  # the X3 term changes sign
    verdict = verify_factored_identity(bad)
    assert not verdict.equal and not verdict.difference.is_zero()


@pytest.mark.parametrize("name", ["birational1", "example2"])
def test_theorems(name):
    report = verify_theorem(name, 100, 0)
    assert (report.samples, report.successes, report.failures) == (100, 100, [])


@pytest.mark.parametrize("name", ["birational1", "example2"])
def test_corrupted_map_fails_with_witnesses(name):
    thm = THEOREMS[name]
    report = verify_theorem(name, 20, 0, forward=thm.forward.swapped(1, 2))
    assert report.successes == 0 and len(report.failures) == 20
    witness = json.loads(report.to_json())["failures"][0]
    assert all(isinstance(v, str) for v in witness.values())


def test_reports_are_reproducible():
    assert verify_theorem("example2", 10, 9).to_json() == verify_theorem("example2", 10, 9).to_json()


def test_forward_maps_match_embeddings(g, p11222):
    assert THEOREMS["birational1"].forward.matrix == g
    assert THEOREMS["example2"].forward.matrix == LatticeMatrix(p11222["h"])


def test_parameter_dependence_of_inverses():
    assert inverse_support("birational1") == {"X1", "X2", "X3", "X4"}
    assert "b6" in inverse_support("example2")
