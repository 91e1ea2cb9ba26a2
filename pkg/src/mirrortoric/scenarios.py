"""Fixtures and verification suites for the two worked examples.

Every suite recomputes the published data from fixture inputs and records one
:class:`Check` per claim, holding the computed value next to the expected one.
Matrix conventions used throughout: for an integer matrix ``A`` acting on
column vectors, ``pullback(phi, A)`` is ``phi o A`` on the source space and
``image(P, A.T)`` is the transpose action on polytopes of the dual space.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping

from . import birational
from .exactnum import LatticeMatrix, as_fraction, dot, kernel_basis, rank, vec, vneg, vsub
from .fan import Cone, Fan, cone_over, fan_over_faces, is_fan_map, skeleton
from .plconvex import PLConvexFunction, from_ray_values, is_strictly_convex_on, newton, orbit_excluded, pullback, section_function
from .polytope import LatticePolytope, dual, image, serialize_scalar
from .subdivision import fan_over_cells, gkz_mpcp, lower_hull, pulling_refinement

CONVENTIONS = {
    "pullback": "phi o A for a matrix A acting on column vectors",
    "image": "polytopes in the dual space are mapped by the transpose of A",
    "cells": "vertex sets of cells; cones are taken over them from the origin",
}
RANDOM_POINTS_PER_CONE = 20
SUITE_NAMES = ("p24", "p11222")


# -- fixtures ---------------------------------------------------------------


def _tuples(x):
    if isinstance(x, list):
        if x and all(isinstance(v, int) for v in x):
            return tuple(x)
        return [_tuples(v) for v in x]
    if isinstance(x, dict):
        return {k: _tuples(v) for k, v in x.items()}
    return x


def fixture_text(name: str) -> str:
    return (resources.files("mirrortoric") / "data" / f"{name}.json").read_text(encoding="utf-8")


def load_fixture(source: str | Path | Mapping) -> dict:
    """Fixture from a shipped name, a JSON file, or an already parsed mapping."""
    if isinstance(source, Mapping):
        data = json.loads(json.dumps(source))
    elif str(source) in SUITE_NAMES:
        data = json.loads(fixture_text(str(source)))
    else:
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    return _tuples(data)


# -- reports ----------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return serialize_scalar(x)
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


@dataclass
class Check:
    id: str
    anchor: str
    passed: bool
    computed: object
    expected: object

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "passed": self.passed,
            "computed": _jsonable(self.computed),
            "expected": _jsonable(self.expected),
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    samples: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, cid: str) -> Check:
        return next(c for c in self.checks if c.id == cid)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "samples": self.samples,
            "conventions": CONVENTIONS,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def to_text(self) -> str:
        width = max(len(c.id) for c in self.checks)
        lines = [f"suite {self.suite} (seed {self.seed}, {self.samples} samples)"]
        for c in self.checks:
            lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.id:<{width}}  {c.anchor}")
        npass = sum(c.passed for c in self.checks)
        lines.append(f"  {npass}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _compare(computed: dict, expected: dict) -> bool:
    return all(computed.get(k) == v for k, v in expected.items())


SEEDED_CHECKS = {"final", "roundtrip"}


def _run(suite: str, seed: int, samples: int, pipeline, checks: list[tuple[str, str, Callable]]) -> SuiteReport:
    report = SuiteReport(suite, seed, samples)
    for cid, anchor, fn in checks:
        try:
            computed, expected = fn() if cid in SEEDED_CHECKS else pipeline.memo(cid, fn)
            passed = _compare(computed, expected)
        except Exception as exc:  # a broken fixture must not stop the remaining checks
            computed, expected, passed = {"error": f"{type(exc).__name__}: {exc}"}, None, False
        report.checks.append(Check(f"{suite}.{cid}", anchor, passed, computed, expected))
    return report


# -- shared helpers -----------------------------------------------------------


def _cells(cells) -> set[frozenset]:
    return {frozenset(vec(v) for v in c) for c in cells}


def _sorted_points(points) -> list:
    return sorted(vec(p) for p in points)


def _ray_function(simplex: list, values: list) -> PLConvexFunction:
    F = fan_over_faces(LatticePolytope(simplex))
    return from_ray_values(F, dict(zip(simplex, values)))


def _section_polytope(simplex: list, values: list) -> LatticePolytope:
    """Hull of the origin and the vertices where the function equals 1."""
    return LatticePolytope([tuple([0] * len(simplex[0]))] + [v for v, x in zip(simplex, values) if x == 1])


def _removable(vertices, points, rows) -> bool:
    vs = set(vertices)
    return any(p in vs for p in points) or sum(r in vs for r in rows) >= 3


def _parallel(a: tuple, b: tuple) -> bool:
    return rank([a, b]) == 1


def _is_empty_simplex(cell) -> bool:
    P = LatticePolytope(cell)
    return len(P.vertices) == P.dim + 1 and len(P.lattice_points()) == len(P.vertices)


def _refines(cells, coarse) -> bool:
    """Every cell lies in the hull of some coarse cell."""
    hulls = [LatticePolytope(d) for d in coarse]
    return all(any(all(P.contains(v) for v in c) for P in hulls) for c in cells)


def _random_cone_point(rng: random.Random, vertices) -> tuple:
    """Positive multiple of a random interior convex combination of ``vertices``."""
    weights = [Fraction(rng.randint(1, 97), rng.randint(1, 97)) for _ in vertices]
    total = sum(weights)
    t = Fraction(rng.randint(1, 97), rng.randint(1, 97))
    return tuple(t * sum(w * v[i] for w, v in zip(weights, vertices)) / total for i in range(len(vertices[0])))


def radial_projection(face: LatticePolytope, y) -> tuple:
    """The point of the affine hull of ``face`` on the ray through ``y``."""
    e, c = next((e, c) for e, c in face.equations if c != 0)
    t = Fraction(-dot(e, y)) / c
    if t <= 0:
        raise ValueError(f"{y} is not on a ray through the face")
    return vec(Fraction(x) / t for x in y)


@lru_cache(maxsize=8)
def _mpcp(vertices: tuple, lift: tuple):
    """MPCP certificate for the lifted vertices; cached because it dominates suite time."""
    base = LatticePolytope(vertices)
    h = lower_hull(base, dict(lift))
    return gkz_mpcp(base, h.function)


# -- first example ------------------------------------------------------------


class P24Pipeline:
    """Every intermediate object of the first example, computed lazily from a fixture."""

    def __init__(self, fixture: Mapping):
        self.fx = fixture
        self._memo = {}

    def memo(self, key: str, fn: Callable):
        """Result of a seed-independent check, computed once per pipeline."""
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    # inputs
    @cached_property
    def delta(self) -> LatticePolytope:
        return LatticePolytope(self.fx["delta_vertices"])

    @cached_property
    def dual_delta(self) -> LatticePolytope:
        return dual(self.delta)

    @cached_property
    def g(self) -> LatticeMatrix:
        return LatticeMatrix(self.fx["g"])

    @cached_property
    def g_dual(self) -> LatticeMatrix:
        return self.g.T

    @cached_property
    def phi1(self) -> PLConvexFunction:
        return _ray_function(self.fx["simplex_vertices"], self.fx["phi1_ray_values"])

    @cached_property
    def phi2(self) -> PLConvexFunction:
        return _ray_function(self.fx["simplex_vertices"], self.fx["phi2_ray_values"])

    @cached_property
    def nabla1(self) -> LatticePolytope:
        return newton(self.phi1)

    @cached_property
    def nabla2(self) -> LatticePolytope:
        return newton(self.phi2)

    @cached_property
    def nabla(self) -> LatticePolytope:
        return LatticePolytope(self.nabla1.vertices + self.nabla2.vertices)

    @cached_property
    def section_polytopes(self) -> dict:
        s = self.fx["simplex_vertices"]
        return {1: _section_polytope(s, self.fx["phi1_ray_values"]), 2: _section_polytope(s, self.fx["phi2_ray_values"])}

    def removable(self, vertices) -> bool:
        return _removable(vertices, self.fx["removal_points"], self.fx["removal_rows"])

    # the partial fan and its crepant subdivision
    @cached_property
    def kept_faces(self) -> list[tuple]:
        return [F.vertices for F in self.nabla.faces(2) if not self.removable(F.vertices)]

    @cached_property
    def sigma_prime(self) -> Fan:
        return Fan.from_maximal([cone_over(f, 5) for f in self.kept_faces], 5)

    def face_name(self, vertices) -> str | None:
        vs = frozenset(vertices)
        return next((n for n, f in self.fx["e_faces"].items() if frozenset(f) == vs), None)

    @cached_property
    def splits(self) -> dict:
        """Faces cut by lowering the kernel point below all other lattice points."""
        k = self.fx["kernel_point"]
        out = {}
        for name, verts in self.fx["e_faces"].items():
            P = LatticePolytope(verts)
            if not P.contains(k):
                continue
            sub = lower_hull(P, {p: (-1 if p == k else 0) for p in P.lattice_points()})
            out[name] = sub.complex
        return out

    @cached_property
    def sigma_dprime_cells(self) -> list[frozenset]:
        cells = []
        for f in self.kept_faces:
            name = self.face_name(f)
            cells.extend(self.splits[name] if name in self.splits else [frozenset(f)])
        return cells

    @cached_property
    def sigma_dprime(self) -> Fan:
        return fan_over_cells(self.sigma_dprime_cells, 5)

    @cached_property
    def target_skeleton(self) -> Fan:
        return skeleton(fan_over_faces(self.dual_delta), 3)

    # the compatible function downstairs
    @cached_property
    def lift(self) -> dict:
        eps = as_fraction(self.fx["lift_epsilon"])
        heights = {v: Fraction(1) for v in self.fx["dual_vertices"]}
        heights.update({t: 1 - eps for t in self.fx["t_points"]})
        heights[(0, 0, 0, 0)] = Fraction(0)
        heights[self.fx["square_center"]] = 1 - eps
        return heights

    @cached_property
    def h(self):
        return lower_hull(self.dual_delta, self.lift)

    @cached_property
    def h_fan(self) -> Fan:
        return fan_over_cells([c.vertices for c in self.h.cells], 4)

    @cached_property
    def cert(self):
        return _mpcp(tuple(sorted(self.dual_delta.vertices)), tuple(sorted(self.lift.items())))

    # the function upstairs
    @cached_property
    def h_prime_pulled(self) -> PLConvexFunction:
        return pullback(self.cert.function, self.g_dual)

    @cached_property
    def j(self) -> dict:
        """Lower hull of the pulled-back heights on each face of the partial fan."""
        return {f: lower_hull(LatticePolytope(f), self.h_prime_pulled) for f in self.kept_faces}

    @cached_property
    def j_cells(self) -> list[frozenset]:
        return [c.vertices for sub in self.j.values() for c in sub.cells]

    @cached_property
    def sigma_prime_j(self) -> Fan:
        return fan_over_cells(self.j_cells, 5)

    @cached_property
    def j_refinement(self):
        pieces = [LatticePolytope(f) for f in self.kept_faces]
        heights = {p: self.h_prime_pulled(p) for P in pieces for p in P.lattice_points()}
        return pulling_refinement(pieces, heights)

    @cached_property
    def sigma_dprime_j(self) -> Fan:
        return fan_over_cells(self.j_refinement.cells(), 5)

    def image_cell(self, cell) -> frozenset:
        return frozenset(self.g_dual.apply(v) for v in cell)

    def named_triangles(self) -> list[frozenset]:
        """Triangles of the dual polytope in their enumeration order."""
        v = self.fx["dual_vertices"]
        mixed = [frozenset(t) for t in itertools.product((v[0], v[3]), (v[1], v[5]), (v[2], v[4]))]
        return mixed + [frozenset((v[0], v[3], x)) for x in (v[1], v[2], v[4], v[5])]


@lru_cache(maxsize=4)
def _p24_pipeline(key: str) -> P24Pipeline:
    return P24Pipeline(_tuples(json.loads(key)))


def p24_pipeline(fixture: Mapping | None = None) -> P24Pipeline:
    fx = load_fixture(fixture if fixture is not None else "p24")
    return _p24_pipeline(json.dumps(fx, sort_keys=True))


def _p24_checks(p: P24Pipeline, seed: int, samples: int) -> list:
    fx = p.fx

    def dual_vertices():
        return {"vertices": _sorted_points(p.dual_delta.vertices)}, {"vertices": _sorted_points(fx["dual_vertices"])}

    def newton_polytopes():
        got = {"nabla1": _sorted_points(p.nabla1.vertices), "nabla2": _sorted_points(p.nabla2.vertices)}
        return got, {"nabla1": _sorted_points(fx["nabla1"]), "nabla2": _sorted_points(fx["nabla2"])}

    def kernel():
        basis = kernel_basis(p.g_dual)
        k = fx["kernel"]
        return {"rank": len(basis), "spans": len(basis) == 1 and basis[0] in (k, vneg(k)), "basis": basis}, {"rank": 1, "spans": True}

    def image_of_nabla():
        img = image(LatticePolytope(fx["nabla"]), p.g_dual)
        h1 = pullback(p.phi1, p.g)
        h2 = pullback(p.phi2, p.g)
        us = fx["delta_vertices"]
        n1, n2 = newton(h1), newton(h2)
        got = {
            "image_equals_dual": img.vertex_set == p.dual_delta.vertex_set,
            "witnesses": sorted(img.vertex_set ^ p.dual_delta.vertex_set),
            "first_newton_image_equals_dual": image(p.nabla1, p.g_dual) == p.dual_delta,
            "h1": [h1(u) for u in us],
            "h2": [h2(u) for u in us],
            "h2_newton_inside_h1_newton": all(n1.contains(v) for v in n2.vertices),
            "h1_newton_equals_dual": n1 == p.dual_delta,
        }
        exp = {
            "image_equals_dual": True,
            "witnesses": [],
            "first_newton_image_equals_dual": True,
            "h1": list(fx["h1_values"]),
            "h2": list(fx["h2_values"]),
            "h2_newton_inside_h1_newton": True,
            "h1_newton_equals_dual": True,
        }
        return got, exp

    def two_faces():
        type1 = {frozenset(F.vertices) for Q in (p.nabla1, p.nabla2) for F in Q.faces(2)}
        type2 = set()
        for a in p.nabla1.faces(1):
            for b in p.nabla2.faces(1):
                if _parallel(vsub(*a.vertices), vsub(*b.vertices)):
                    type2.add(frozenset(a.vertices + b.vertices))
        faces = [frozenset(F.vertices) for F in p.nabla.faces(2)]
        kinds = [(f in type1) + 2 * (f in type2) for f in faces]
        got = {
            "two_faces": len(faces),
            "type1": kinds.count(1),
            "type2": kinds.count(2),
            "neither_or_both": sum(k in (0, 3) for k in kinds),
            "candidates": len(type1 | type2),
        }
        return got, {"two_faces": fx["two_face_count"], "neither_or_both": 0, "candidates": fx["candidate_count"]}

    def removal():
        rays = p.nabla.vertices
        values, support_sizes = [], []
        for i, m, ray, _ in fx["section_values"]:
            phi = section_function(p.section_polytopes[i], m)
            values.append([i, m, ray, phi(ray)])
            support_sizes.append(sum(phi(r) != 0 for r in rays))
        failing, tested = [], 0
        pts, rows = fx["removal_points"], fx["removal_rows"]
        for F in p.nabla.all_faces():
            if F.dim == p.nabla.dim:
                continue
            vs = set(F.vertices)
            which = [i for i, hit in ((2, any(q in vs for q in pts)), (1, sum(r in vs for r in rows) >= 3)) if hit]
            if not which:
                continue
            tested += 1
            cone = cone_over(F.vertices, 5)
            if not any(orbit_excluded(cone, p.section_polytopes[i]).excluded for i in which):
                failing.append(F.vertices)
        got = {"values": values, "nonzero_rays": support_sizes, "faces_tested": tested, "failing_faces": failing}
        exp = {"values": [list(x) for x in fx["section_values"]], "nonzero_rays": [2] * len(values), "failing_faces": []}
        return got, exp

    def sigma_prime():
        n1 = {frozenset(F.vertices) for F in p.nabla1.faces(2)}
        n2 = {frozenset(F.vertices) for F in p.nabla2.faces(2)}
        kinds = {"nabla1": 0, "nabla2": 0, "mixed": 0}
        for f in p.kept_faces:
            key = "nabla1" if frozenset(f) in n1 else "nabla2" if frozenset(f) in n2 else "mixed"
            kinds[key] += 1
        got = {"max_dim": p.sigma_prime.dim, "maximal_cones": len(p.sigma_prime.maximal_cones()), **kinds}
        counts = dict(fx["sigma_prime_counts"])
        return got, {"max_dim": 3, "maximal_cones": sum(counts.values()), **counts}

    def subdivision():
        faces1 = [F.vertices for F in p.nabla1.faces(2)]
        removed = [f for f in faces1 if p.removable(f)]
        named = p.named_triangles()
        square = frozenset(fx["dual_vertices"][i] for i in (1, 2, 4, 5))
        hits, into_square, other = [], 0, []
        for f in faces1:
            if p.removable(f):
                continue
            img = p.image_cell(f)
            if len(img) == 3 and img in named:
                hits.append(named.index(img))
            elif len(img) == 3 and img <= square:
                into_square += 1
            else:
                other.append(f)
        splits_ok = {n: p.splits.get(n) == _cells(c) for n, c in fx["splits"].items()}
        unsplit = is_fan_map(p.g_dual, p.sigma_prime, p.target_skeleton)
        split = is_fan_map(p.g_dual, p.sigma_dprime, p.target_skeleton)
        two_faces = {frozenset(F.vertices) for F in p.dual_delta.faces(2)}
        non_faces = {frozenset(t) for t in itertools.combinations(fx["dual_vertices"], 3)
                     if not any(set(t) <= f for f in two_faces)}
        got = {
            "first_newton_two_faces": len(faces1),
            "removed": len(removed),
            "bijective_onto_named": len(hits),
            "named_hit_once": sorted(hits) == list(range(len(named))),
            "into_square": into_square,
            "unaccounted": other,
            "splits_match": splits_ok,
            "unsplit_is_fan_map": unsplit.ok,
            "is_fan_map": split.ok,
            "fan_map_failures": [c.rays for c in split.failures],
            "removed_images_are_the_non_faces": {p.image_cell(f) for f in removed} == non_faces,
            "crepant": _crepant(p.sigma_dprime_cells, p.nabla),
        }
        exp = {
            "first_newton_two_faces": 20,
            "removed": 4,
            "bijective_onto_named": 12,
            "named_hit_once": True,
            "into_square": 4,
            "unaccounted": [],
            "splits_match": {n: True for n in fx["splits"]},
            "unsplit_is_fan_map": False,
            "is_fan_map": True,
            "crepant": True,
        }
        return got, exp

    def compatible():
        cert = p.cert
        L = LatticePolytope(fx["segment_L"])
        segs = cert.cells_in(fx["segment_L"])
        named = {}
        refine = {}
        for name, verts in fx["h_faces"].items():
            expected = _cells(fx["h_complexes"][name])
            named[name] = p.h.cells_in(verts) == expected
            refine[name] = _refines(cert.cells_in(verts), expected)
        got = {
            "h_cells": len(p.h.cells),
            "h_nontight": p.h.nontight,
            "h_origin_in_every_cell": all((0, 0, 0, 0) in c.vertices for c in p.h.cells),
            "named_complexes": named,
            "h_strictly_convex": is_strictly_convex_on(p.h.function, p.h_fan).ok,
            "mpcp_checks": cert.checks,
            "mpcp_rounds": cert.rounds,
            "mpcp_scale": cert.scale,
            "mpcp_refines_h": _refines(cert.cells, [c.vertices for c in p.h.cells]),
            "mpcp_refines_named": refine,
            "segment_points": len(L.lattice_points()),
            "segment_pieces": len(segs),
            "segment_pieces_unit": all(len(LatticePolytope(s).lattice_points()) == 2 for s in segs),
        }
        exp = {
            "h_nontight": [],
            "h_origin_in_every_cell": True,
            "named_complexes": {n: True for n in fx["h_faces"]},
            "h_strictly_convex": True,
            "mpcp_checks": {k: True for k in cert.checks},
            "mpcp_refines_h": True,
            "mpcp_refines_named": {n: True for n in fx["h_faces"]},
            "segment_points": fx["segment_L_points"],
            "segment_pieces": fx["segment_L_points"] - 1,
            "segment_pieces_unit": True,
        }
        return got, exp

    def final():
        rng = random.Random(f"{seed}/cones")
        hg = p.h_prime_pulled
        gauge = p.nabla.gauge
        lattice_bad, random_bad = [], []
        for f, sub in p.j.items():
            for q in LatticePolytope(f).lattice_points():
                boundary = gauge(q)
                if sub.function.on_domain(q) + boundary != hg(q) + boundary:
                    lattice_bad.append(q)
            for _ in range(RANDOM_POINTS_PER_CONE):
                x = _random_cone_point(rng, f)
                boundary = gauge(x)
                if sub.function(x) + boundary != hg(x) + boundary:
                    random_bad.append(x)
        induced = {}
        for name, cells in fx["induced_complexes"].items():
            f = next(f for f in p.kept_faces if p.face_name(f) == name)
            induced[name] = p.j[f].complex == _cells(cells)
        iso = 0
        for f, sub in p.j.items():
            if p.face_name(f) is not None:
                continue
            imgs = [p.image_cell(c.vertices) for c in sub.cells]
            if len(set(imgs)) == len(imgs) and set(imgs) == p.cert.cells_in(p.image_cell(f)):
                iso += 1
        transverse = sum(p.face_name(f) is None for f in p.kept_faces)
        got = {
            "faces": len(p.j),
            "lattice_mismatches": lattice_bad,
            "random_mismatches": random_bad,
            "random_points": RANDOM_POINTS_PER_CONE * len(p.j),
            "partial_fan_map": is_fan_map(p.g_dual, p.sigma_prime_j, p.cert.fan).ok,
            "refined_fan_map": is_fan_map(p.g_dual, p.sigma_dprime_j, p.cert.fan).ok,
            "induced_complexes": induced,
            "isomorphic_transverse_faces": iso,
        }
        exp = {
            "faces": len(p.kept_faces),
            "lattice_mismatches": [],
            "random_mismatches": [],
            "partial_fan_map": True,
            "refined_fan_map": True,
            "induced_complexes": {n: True for n in fx["induced_complexes"]},
            "isomorphic_transverse_faces": transverse,
        }
        return got, exp

    def squares():
        face = LatticePolytope(fx["square_face"])
        odd = [c for c in p.j_cells if not _is_empty_simplex(c)]
        squares = [c for c in odd if len(c) == 4 and LatticePolytope(c).dim == 2 and all(face.contains(v) for v in c)]
        square_images = {frozenset(LatticePolytope(p.image_cell(c)).vertices) for c in squares}
        refined = p.j_refinement.cells()
        split = {}
        for i, sq in enumerate(sorted(squares, key=sorted)):
            pts = set(LatticePolytope(sq).lattice_points())
            inner = [c for c in refined if c <= pts]
            split[i] = sorted(len(c) for c in inner)
        unchanged = set(p.j_cells) - set(squares) <= set(refined)
        got = {
            "non_maximal_cells": len(odd),
            "squares_on_named_face": len(squares),
            "square_images": square_images,
            "squares_split": split,
            "other_cells_unchanged": unchanged,
            "refinement_refines_crepant_subdivision": _refines(refined, p.sigma_dprime_cells),
        }
        exp = {
            "non_maximal_cells": 2,
            "squares_on_named_face": 2,
            "square_images": _cells(fx["conifold_segments"]),
            "squares_split": {0: [3, 3], 1: [3, 3]},
            "other_cells_unchanged": True,
            "refinement_refines_crepant_subdivision": True,
        }
        return got, exp

    def roundtrip():
        r = birational.verify_theorem("birational1", samples, seed)
        return {"samples": r.samples, "successes": r.successes, "failures": r.failures[:3]}, {"successes": samples, "failures": []}

    def identity():
        v = birational.verify_factored_identity("p24")
        return {"equal": v.equal, "difference": repr(v.difference)}, {"equal": True}

    def map_structure():
        thm = birational.THEOREMS["birational1"]
        params = {"a5", "a6", "b4", "b6"}
        got = {
            "forward_matrix_is_g": thm.forward.matrix == p.g,
            "inverse_parameters": sorted(birational.inverse_support("birational1") & params),
        }
        return got, {"forward_matrix_is_g": True, "inverse_parameters": []}

    return [
        ("dual_vertices", "vertices of the dual of the quartic's polytope", dual_vertices),
        ("newton_polytopes", "Newton polytopes of the two degree functions", newton_polytopes),
        ("kernel", "kernel of the dual map", kernel),
        ("image", "image of the mirror polytope under the dual map", image_of_nabla),
        ("two_faces", "classification of two-faces of the mirror polytope", two_faces),
        ("removal", "vanishing orders of monomial sections and orbit exclusion", removal),
        ("sigma_prime", "partial fan of surviving cones", sigma_prime),
        ("subdivision", "crepant subdivision mapping into the three-skeleton", subdivision),
        ("compatible", "lifted function downstairs, its MPCP refinement and the segment of nodes", compatible),
        ("final", "pulled-back function upstairs and induced subdivisions", final),
        ("squares", "square cells of the induced subdivision and their splits", squares),
        ("roundtrip", "birational map between the two families", roundtrip),
        ("identity", "factored form of the degenerate quartic", identity),
        ("map_structure", "forward map is the transpose action and parameter free", map_structure),
    ]


def _crepant(cells, polytope: LatticePolytope) -> bool:
    """Each cell lies in a proper face and has only lattice-point vertices."""
    for c in cells:
        F = polytope.smallest_face_containing(c)
        if F is None or F.dim >= polytope.dim or not all(all(isinstance(x, int) for x in v) for v in c):
            return False
    return True


def suite_p24(fixture: Mapping | str | Path | None = None, seed: int = 0, samples: int = 100) -> SuiteReport:
    p = p24_pipeline(load_fixture(fixture) if fixture is not None else None)
    return _run("p24", seed, samples, p, _p24_checks(p, seed, samples))


# -- second example -------------------------------------------------------------


class P11222Pipeline:
    def __init__(self, fixture: Mapping):
        self.fx = fixture
        self._memo = {}

    def memo(self, key: str, fn: Callable):
        """Result of a seed-independent check, computed once per pipeline."""
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @cached_property
    def P(self) -> LatticePolytope:
        return LatticePolytope(self.fx["P_vertices"])

    @cached_property
    def P_dual(self) -> LatticePolytope:
        return dual(self.P)

    @cached_property
    def h(self) -> LatticeMatrix:
        return LatticeMatrix(self.fx["h"])

    @cached_property
    def phi1(self) -> PLConvexFunction:
        return _ray_function(self.fx["simplex_vertices"], self.fx["phi1_ray_values"])

    @cached_property
    def phi2(self) -> PLConvexFunction:
        return _ray_function(self.fx["simplex_vertices"], self.fx["phi2_ray_values"])

    @cached_property
    def nabla(self) -> LatticePolytope:
        return LatticePolytope(newton(self.phi1).vertices + newton(self.phi2).vertices)

    @cached_property
    def A(self) -> LatticePolytope:
        return LatticePolytope(self.fx["A"])

    @cached_property
    def strips(self) -> set[frozenset]:
        """Images of the cones over the named faces, cut down to ``A``."""
        out = set()
        for name in ("k1", "k2", "k3", "k4"):
            out.add(frozenset(radial_projection(self.A, self.h.T.apply(v)) for v in self.fx["k_faces"][name]))
        return out

    @cached_property
    def expected_strips(self) -> set[frozenset]:
        """Inner triangle and the hulls of its edges with the parallel edges of ``A``."""
        inner = self.A.interior_lattice_points()
        out = {frozenset(inner)}
        for a, b in itertools.combinations(inner, 2):
            for c, d in itertools.combinations(self.A.vertices, 2):
                if _parallel(vsub(a, b), vsub(c, d)):
                    out.add(frozenset((a, b, c, d)))
        return out

    @cached_property
    def A_heights(self) -> dict:
        inner = set(self.A.interior_lattice_points())
        return {q: 0 if q in inner else 1 for q in self.A.lattice_points()}

    @cached_property
    def A_subdivision(self):
        return lower_hull(self.A, self.A_heights)

    @cached_property
    def A_refinement(self):
        return pulling_refinement([self.A], self.A_heights)


@lru_cache(maxsize=4)
def _p11222_pipeline(key: str) -> P11222Pipeline:
    return P11222Pipeline(_tuples(json.loads(key)))


def p11222_pipeline(fixture: Mapping | None = None) -> P11222Pipeline:
    fx = load_fixture(fixture if fixture is not None else "p11222")
    return _p11222_pipeline(json.dumps(fx, sort_keys=True))


def _p11222_checks(p: P11222Pipeline, seed: int, samples: int) -> list:
    fx = p.fx

    def reflexive():
        pts = _sorted_points(p.P.lattice_points())
        return {"reflexive": p.P.is_reflexive(), "lattice_points": pts}, {
            "reflexive": True,
            "lattice_points": _sorted_points(list(fx["P_vertices"]) + list(fx["extra_points"])),
        }

    def embedding():
        simplex = LatticePolytope(fx["simplex_vertices"])
        fm = is_fan_map(p.h, fan_over_faces(p.P), fan_over_faces(simplex))
        return {"fan_map": fm.ok, "injective": rank(p.h.entries) == p.h.ncols}, {"fan_map": True, "injective": True}

    def first_newton():
        N = newton(pullback(p.phi1, p.h))
        return {"equals_dual": N == p.P_dual, "vertices": _sorted_points(N.vertices)}, {"equals_dual": True}

    def second_newton():
        phi = pullback(p.phi2, p.h)
        N = newton(phi)
        got = {"vertices": _sorted_points(N.vertices), "values": {str(list(v)): phi(v) for v in p.P.vertices}}
        big = {fx["P_vertices"][0], fx["P_vertices"][1]}
        exp = {"vertices": _sorted_points(fx["newton_phi2"]), "values": {str(list(v)): 2 if v in big else 0 for v in p.P.vertices}}
        return got, exp

    def not_contained():
        N = LatticePolytope(fx["newton_phi2"])
        witness = next(((u, a, b) for u in N.vertices for a, b in p.P_dual.facets if dot(a, u) + b < 0), None)
        got = {"contained": witness is None}
        if witness:
            u, a, b = witness
            got["witness"] = {"vertex": u, "facet_normal": a, "offset": b, "value": dot(a, u) + b}
        return got, {"contained": False}

    def named_faces():
        cone = Cone(p.A.vertices, ambient_dim=4)
        two = {frozenset(F.vertices) for F in p.nabla.faces(2)}
        rows, pts = fx["removal_rows"], fx["removal_points"]
        inside, faces_ok, removable = {}, {}, {}
        for name, verts in fx["k_faces"].items():
            inside[name] = all(cone.contains(p.h.T.apply(v)) for v in verts)
            faces_ok[name] = frozenset(verts) in two
            removable[name] = _removable(verts, pts, rows)
        got = {
            "A_is_two_face": p.P_dual.face_of(p.A.vertices) is not None and p.A.dim == 2,
            "images_in_cone": inside,
            "are_two_faces": faces_ok,
            "removable": removable,
        }
        names = list(fx["k_faces"])
        exp = {
            "A_is_two_face": True,
            "images_in_cone": {n: True for n in names},
            "are_two_faces": {n: True for n in names},
            "removable": {n: n == "k5" for n in names},
        }
        return got, exp

    def face_subdivision():
        res = p.A_refinement
        cells = res.cells()
        got = {
            "interior_points": len(p.A.interior_lattice_points()),
            "images_match_description": p.strips == p.expected_strips,
            "regular_subdivision_matches": p.A_subdivision.complex == p.expected_strips,
            "cells": len(p.strips),
            "mpcp_cells_empty_triangles": all(_is_empty_simplex(c) for c in cells),
            "mpcp_uses_all_points": res.rays() == set(p.A.lattice_points()),
            "mpcp_refines": _refines(cells, p.A_subdivision.complex),
        }
        exp = {
            "interior_points": fx["A_interior_count"],
            "images_match_description": True,
            "regular_subdivision_matches": True,
            "cells": 4,
            "mpcp_cells_empty_triangles": True,
            "mpcp_uses_all_points": True,
            "mpcp_refines": True,
        }
        return got, exp

    def identity():
        v = birational.verify_factored_identity("p11222")
        return {"equal": v.equal, "difference": repr(v.difference)}, {"equal": True}

    def roundtrip():
        r = birational.verify_theorem("example2", samples, seed)
        return {"samples": r.samples, "successes": r.successes, "failures": r.failures[:3]}, {"successes": samples, "failures": []}

    def map_structure():
        thm = birational.THEOREMS["example2"]
        got = {
            "forward_matrix_is_h": thm.forward.matrix == p.h,
            "inverse_parameters": sorted(birational.inverse_support("example2") & {"a5", "a6", "b4", "b6"}),
        }
        return got, {"forward_matrix_is_h": True, "inverse_parameters": ["b6"]}

    return [
        ("reflexive", "weighted projective polytope and its lattice points", reflexive),
        ("embedding", "toric embedding into projective five-space", embedding),
        ("first_newton", "Newton polytope of the first pulled-back function", first_newton),
        ("second_newton", "Newton polytope of the second pulled-back function", second_newton),
        ("not_contained", "second Newton polytope leaves the dual polytope", not_contained),
        ("named_faces", "two-faces whose images lie over the singular face", named_faces),
        ("face_subdivision", "subdivision of the singular face", face_subdivision),
        ("identity", "factored form of the degenerate family", identity),
        ("roundtrip", "birational map between the two families", roundtrip),
        ("map_structure", "forward map is the embedding's transpose; inverse needs the parameter", map_structure),
    ]


def suite_p11222(fixture: Mapping | str | Path | None = None, seed: int = 0, samples: int = 100) -> SuiteReport:
    p = p11222_pipeline(load_fixture(fixture) if fixture is not None else None)
    return _run("p11222", seed, samples, p, _p11222_checks(p, seed, samples))


SUITES = {"p24": suite_p24, "p11222": suite_p11222}


# -- faces for rendering ------------------------------------------------------


@dataclass
class FaceComplex:
    name: str
    vertices: list  # vertices of the face
    points: list  # its lattice points
    cells: list  # vertex sets of the subdivision's maximal cells


def _face_complex(name, vertices, cells) -> FaceComplex:
    P = LatticePolytope(vertices)
    return FaceComplex(name, list(P.vertices), P.lattice_points(), sorted((sorted(c) for c in cells)))


def face_names(suite: str) -> list[str]:
    if suite == "p24":
        fx = load_fixture("p24")
        return sorted(set(fx["e_faces"]) | set(fx["h_faces"]) | {f"{n}-induced" for n in fx["induced_complexes"]})
    if suite == "p11222":
        return ["A", "A-mpcp"]
    raise KeyError(suite)


def face_complex(suite: str, name: str, fixture: Mapping | None = None) -> FaceComplex:
    """Computed subdivision of a named two-face."""
    if suite == "p24":
        p = p24_pipeline(fixture)
        fx = p.fx
        if name in p.splits:
            return _face_complex(name, fx["e_faces"][name], p.splits[name])
        base = name.removesuffix("-induced")
        if base in fx["e_faces"]:
            f = next(f for f in p.kept_faces if p.face_name(f) == base)
            return _face_complex(name, f, p.j[f].complex)
        if name == "S1":
            return _face_complex(name, fx["h_faces"][name], p.cert.cells_in(fx["h_faces"][name]))
        if name in fx["h_faces"]:
            return _face_complex(name, fx["h_faces"][name], p.h.cells_in(fx["h_faces"][name]))
    elif suite == "p11222":
        p = p11222_pipeline(fixture)
        if name == "A":
            return _face_complex(name, p.A.vertices, p.A_subdivision.complex)
        if name == "A-mpcp":
            return _face_complex(name, p.A.vertices, p.A_refinement.cells())
    raise KeyError(f"no face {name!r} in suite {suite!r}")
