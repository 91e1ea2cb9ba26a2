"""Lattice polytopes with exact vertex/facet representations."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exactnum import (
    LatticeMatrix,
    apply,
    as_fraction,
    clear_denominators,
    cone_generators,
    dot,
    is_integral,
    normalize_scalar,
    nullspace,
    rank,
    rref,
    vadd,
    vec,
    vsub,
)


class NotFullDimensional(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    """A face of a polytope, keyed by the indices of its vertices."""

    vertex_indices: frozenset
    dim: int
    vertices: tuple

    def __contains__(self, point) -> bool:
        return tuple(point) in self.vertices

    def sorted_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertex_indices))


def _affine_frame(points: Sequence[tuple]) -> tuple[tuple, list[int], list]:
    """Base point, pivot coordinates and rref of the direction space."""
    p0 = points[0]
    dirs = [vsub(p, p0) for p in points[1:]]
    red, pivots = rref(dirs) if dirs else ([], [])
    return p0, pivots, red


class LatticePolytope:
    """Convex hull of finitely many rational points.

    ``facets`` holds pairs ``(normal, offset)`` meaning
    ``<normal, x> + offset >= 0``; ``equations`` holds ``(normal, offset)``
    with ``<normal, x> + offset == 0`` cutting out the affine hull when the
    polytope is not full dimensional.  Normals are primitive integer vectors.
    """

    def __init__(self, points: Iterable[Sequence]):
        pts = sorted(set(vec(p) for p in points))
        if not pts:
            raise ValueError("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points of differing dimension")
        self.ambient_dim = n
        p0, pivots, red = _affine_frame(pts)
        self.dim = len(pivots)
        self._pivots = pivots
        # equations of the affine hull
        normals = nullspace(red, n) if self.dim < n else []
        self.equations = [(nv, normalize_scalar(-dot(nv, p0))) for nv in normals]
        if self.dim == 0:
            self.vertices = (pts[0],)
            self.facets = []
            self._incidence = []
            return
        proj = [tuple(p[i] for i in pivots) for p in pts]
        d = self.dim
        rows = [clear_denominators(q + (1,)) for q in proj]
        rays, lin = cone_generators(rows, dim=d + 1)
        assert not lin, "projected polytope must be full dimensional"
        facets = []
        for r in rays:
            a, b = r[:d], r[d]
            if all(x == 0 for x in a):
                continue
            full = [0] * n
            for k, i in enumerate(pivots):
                full[i] = a[k]
            facets.append((tuple(full), b))
        facets.sort()
        # vertices: points whose saturated facets have full rank
        verts = []
        for p, q in zip(pts, proj):
            sat = [f[0] for f in facets if dot(f[0], p) + f[1] == 0]
            proj_normals = [tuple(nv[i] for i in pivots) for nv in sat]
            if rank(proj_normals) == d:
                verts.append(p)
        self.vertices = tuple(verts)
        self.facets = facets
        self._incidence = [
            frozenset(i for i, v in enumerate(self.vertices) if dot(a, v) + b == 0)
            for a, b in facets
        ]

    # -- construction helpers --------------------------------------------

    @classmethod
    def from_inequalities(
        cls,
        inequalities: Sequence[tuple[Sequence, object]],
        equations: Sequence[tuple[Sequence, object]] = (),
    ) -> LatticePolytope:
        """Vertex enumeration for ``{x : <a,x> + b >= 0, <e,x> + c == 0}``."""
        ineq_rows = [tuple(a) + (b,) for a, b in inequalities]
        eq_rows = [tuple(e) + (c,) for e, c in equations]
        n = len((ineq_rows or eq_rows)[0]) - 1
        homog = [tuple([0] * n) + (1,)]
        rays, lin = cone_generators(ineq_rows + homog, eq_rows, dim=n + 1)
        if lin:
            raise ValueError("polyhedron contains a line")
        pts = []
        for r in rays:
            t = r[-1]
            if t == 0:
                raise ValueError("polyhedron is unbounded")
            pts.append(tuple(Fraction(x, t) for x in r[:-1]))
        if not pts:
            raise ValueError("empty polyhedron")
        return cls(pts)

    @classmethod
    def from_json(cls, text: str) -> LatticePolytope:
        data = json.loads(text)
        verts = [[as_fraction(x) for x in v] for v in data["vertices"]]
        P = cls(verts)
        if "dim" in data and data["dim"] != P.ambient_dim:
            raise ValueError(f"declared dim {data['dim']} does not match vertices")
        return P

    def to_json(self) -> str:
        return json.dumps({"dim": self.ambient_dim, "vertices": [serialize_vector(v) for v in self.vertices]})

    # -- basic predicates -------------------------------------------------

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, ambient_dim={self.ambient_dim}, {len(self.vertices)} vertices)"

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertex_set == other.vertex_set

    def __hash__(self):
        return hash(self.vertex_set)

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return all(dot(e, x) + c == 0 for e, c in self.equations) and all(
            dot(a, x) + b >= 0 for a, b in self.facets
        )

    def interior_contains(self, x: Sequence) -> bool:
        """Relative-interior membership."""
        return all(dot(e, x) + c == 0 for e, c in self.equations) and all(
            dot(a, x) + b > 0 for a, b in self.facets
        )

    def has_origin_in_interior(self) -> bool:
        return self.is_full_dimensional and all(b > 0 for _, b in self.facets)

    def is_reflexive(self) -> bool:
        return self.is_lattice and self.has_origin_in_interior() and dual(self).is_lattice

    # -- faces ------------------------------------------------------------

    @cached_property
    def _face_sets(self) -> dict[frozenset, int]:
        """All nonempty faces as vertex-index sets mapped to their dimension."""
        full = frozenset(range(len(self.vertices)))
        result = {full: self.dim}
        frontier = set(self._incidence)
        seen = set()
        while frontier:
            nxt = set()
            for F in frontier:
                if F in seen or not F:
                    continue
                seen.add(F)
                for G in self._incidence:
                    H = F & G
                    if H and H != F and H not in seen:
                        nxt.add(H)
            frontier = nxt
        for F in seen:
            result[F] = self._affine_dim(F)
        return result

    def _affine_dim(self, idx: Iterable[int]) -> int:
        pts = [self.vertices[i] for i in sorted(idx)]
        return rank([vsub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0

    def faces(self, k: int) -> list[Face]:
        if not 0 <= k <= self.dim:
            return []
        out = [F for F, d in self._face_sets.items() if d == k]
        out.sort(key=lambda F: sorted(F))
        return [self._face(F, k) for F in out]

    def all_faces(self) -> list[Face]:
        return [f for k in range(self.dim + 1) for f in self.faces(k)]

    def face_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dim + 1)]

    def _face(self, idx: frozenset, k: int) -> Face:
        return Face(idx, k, tuple(self.vertices[i] for i in sorted(idx)))

    def face_of(self, points: Iterable[Sequence]) -> Face | None:
        """The face whose vertex set is exactly ``points``, if there is one."""
        want = frozenset(tuple(vec(p)) for p in points)
        idx = frozenset(i for i, v in enumerate(self.vertices) if v in want)
        if len(idx) != len(want):
            return None
        d = self._face_sets.get(idx)
        return None if d is None else self._face(idx, d)

    def smallest_face_containing(self, points: Iterable[Sequence]) -> Face | None:
        pts = [vec(p) for p in points]
        if not all(self.contains(p) for p in pts):
            return None
        idx = frozenset(range(len(self.vertices)))
        for (a, b), inc in zip(self.facets, self._incidence):
            if all(dot(a, p) + b == 0 for p in pts):
                idx &= inc
        return self._face(idx, self._face_sets[idx])

    def locate(self, x: Sequence) -> Face | None:
        """Minimal face whose relative interior contains ``x`` (``None`` if outside)."""
        return self.smallest_face_containing([x])

    def face_polytope(self, face: Face) -> LatticePolytope:
        return LatticePolytope(face.vertices)

    # -- lattice points ---------------------------------------------------

    @cached_property
    def _lattice_points(self) -> tuple:
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
        return tuple(p for p in itertools.product(*ranges) if self.contains(p))

    def lattice_points(self) -> list[tuple[int, ...]]:
        return list(self._lattice_points)

    def interior_lattice_points(self) -> list[tuple[int, ...]]:
        return [p for p in self._lattice_points if self.interior_contains(p)]

    def boundary_lattice_points(self) -> list[tuple[int, ...]]:
        return [p for p in self._lattice_points if not self.interior_contains(p)]

    def lattice_points_of_face(self, face: Face) -> list[tuple[int, ...]]:
        tight = [f for f, inc in zip(self.facets, self._incidence) if face.vertex_indices <= inc]
        return [p for p in self._lattice_points if all(dot(a, p) + b == 0 for a, b in tight)]

    # -- gauge ------------------------------------------------------------

    def gauge(self, x: Sequence):
        """Smallest ``t >= 0`` with ``x in t*P`` (origin must be interior)."""
        if not self.has_origin_in_interior():
            raise NotFullDimensional("gauge needs the origin in the interior")
        return normalize_scalar(max([Fraction(0)] + [Fraction(-dot(a, x)) / b for a, b in self.facets]))


def _floor(x) -> int:
    return int(as_fraction(x).__floor__())


def _ceil(x) -> int:
    return int(as_fraction(x).__ceil__())


def serialize_scalar(x):
    x = normalize_scalar(as_fraction(x))
    return x if isinstance(x, int) else str(x)


def serialize_vector(v: Sequence) -> list:
    return [serialize_scalar(x) for x in v]


def hull(points: Iterable[Sequence]) -> LatticePolytope:
    return LatticePolytope(points)


def dual(P: LatticePolytope) -> LatticePolytope:
    """``{u : <p,u> >= -1 for all p in P}``; needs the origin in the interior."""
    if not P.has_origin_in_interior():
        raise NotFullDimensional("the dual is only defined when the origin is interior")
    return LatticePolytope([tuple(Fraction(a_i, b) for a_i in a) for a, b in P.facets])


def minkowski(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("Minkowski sum of polytopes in different spaces")
    return LatticePolytope(vadd(p, q) for p in P.vertices for q in Q.vertices)


def image(P: LatticePolytope, A: LatticeMatrix) -> LatticePolytope:
    if A.ncols != P.ambient_dim:
        raise ValueError("matrix does not act on the polytope's space")
    return LatticePolytope(apply(A, v) for v in P.vertices)


def translate(P: LatticePolytope, t: Sequence) -> LatticePolytope:
    return LatticePolytope(vadd(v, t) for v in P.vertices)


def faces(P: LatticePolytope, k: int) -> list[Face]:
    return P.faces(k)


def lattice_points(P: LatticePolytope) -> list[tuple[int, ...]]:
    return P.lattice_points()


def locate(P: LatticePolytope, x: Sequence) -> Face | None:
    return P.locate(x)
