"""Rational polyhedral cones and fans."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .exactnum import (
    LatticeMatrix,
    apply,
    cone_generators,
    dot,
    hermite_rows,
    is_zero,
    lattice_index,
    nullspace,
    primitive,
    rank,
    vec,
)
from .polytope import LatticePolytope, NotFullDimensional


class Cone:
    """Nonnegative span of ``rays`` plus the linear span of ``lineality``.

    The constructor canonicalizes: rays become the primitive extreme rays
    orthogonal to the lineality space and the lineality basis is put in
    Hermite normal form, so two equal cones compare equal.
    """

    def __init__(self, rays: Iterable[Sequence] = (), lineality: Iterable[Sequence] = (), ambient_dim: int | None = None):
        rays = [vec(r) for r in rays]
        lineality = [vec(v) for v in lineality]
        given = rays + lineality
        if ambient_dim is None:
            if not given:
                raise ValueError("ambient dimension needed for the zero cone")
            ambient_dim = len(given[0])
        self.ambient_dim = n = ambient_dim
        rays = [primitive(r) for r in rays if not is_zero(r)]
        lineality = [primitive(v) for v in lineality if not is_zero(v)]
        if not lineality and rank(rays) == len(rays):
            self._init_simplicial(sorted(set(rays)))
            return
        # facet normals live in the span of the cone; equations cut out the span
        normals, eqs = cone_generators(rays + lineality + [tuple(-x for x in v) for v in lineality], dim=n)
        ext, lin = cone_generators(normals, eqs, dim=n) if normals or eqs else ([], [tuple(int(i == j) for j in range(n)) for i in range(n)])
        self.rays = tuple(sorted(ext))
        self.lineality = tuple(hermite_rows(lin)) if lin else ()
        self.facets = tuple(sorted(normals))
        self.equations = tuple(eqs)

    def _init_simplicial(self, rays: list[tuple[int, ...]]):
        n = self.ambient_dim
        self.rays = tuple(rays)
        self.lineality = ()
        self.equations = tuple(hermite_rows(nullspace(rays, n))) if len(rays) < n else ()
        if not rays:
            self.facets = ()
            return
        # normal i vanishes on the other rays and on the span's orthogonal complement
        normals = []
        for i, r in enumerate(rays):
            w = nullspace(rays[:i] + rays[i + 1:] + list(self.equations), n)[0]
            normals.append(w if dot(w, r) > 0 else tuple(-x for x in w))
        self.facets = tuple(sorted(normals)) if len(rays) > 1 else tuple(normals)

    # -- identity ---------------------------------------------------------

    @property
    def key(self):
        return (self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        lin = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"Cone({list(self.rays)}{lin})"

    @classmethod
    def from_inequalities(cls, inequalities: Sequence[Sequence], equations: Sequence[Sequence] = (), ambient_dim: int | None = None) -> Cone:
        n = ambient_dim if ambient_dim is not None else len((list(inequalities) or list(equations))[0])
        rays, lin = cone_generators(list(inequalities), list(equations), dim=n)
        return cls(rays, lin, ambient_dim=n)

    @classmethod
    def zero(cls, n: int) -> Cone:
        return cls((), (), ambient_dim=n)

    # -- geometry ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    def multiplicity(self) -> int:
        if not self.is_simplicial:
            raise ValueError("multiplicity is defined for simplicial cones only")
        return lattice_index(self.rays)

    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(a, x) >= 0 for a in self.facets)

    def relint_contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(a, x) > 0 for a in self.facets)

    def contains_cone(self, other: Cone) -> bool:
        return all(self.contains(r) for r in other.rays) and all(
            self.contains(v) and self.contains(tuple(-x for x in v)) for v in other.lineality
        )

    def generators(self) -> list[tuple]:
        """Rays plus both signs of each lineality vector."""
        return list(self.rays) + [v for l in self.lineality for v in (l, tuple(-x for x in l))]

    def interior_point(self) -> tuple:
        """Sum of the rays: a point of the relative interior."""
        return tuple(sum(c) for c in zip(*self.rays)) if self.rays else tuple([0] * self.ambient_dim)

    def intersection(self, other: Cone) -> Cone:
        return Cone.from_inequalities(
            list(self.facets) + list(other.facets),
            list(self.equations) + list(other.equations),
            ambient_dim=self.ambient_dim,
        )

    def image(self, A: LatticeMatrix) -> Cone:
        return Cone([apply(A, r) for r in self.rays], [apply(A, v) for v in self.lineality], ambient_dim=A.nrows)

    @cached_property
    def _ray_incidence(self) -> list[frozenset]:
        return [frozenset(i for i, r in enumerate(self.rays) if dot(a, r) == 0) for a in self.facets]

    def faces(self) -> list[Cone]:
        """All faces including the cone itself and the minimal face."""
        if self.is_simplicial:
            from itertools import combinations

            return [
                Cone([self.rays[i] for i in sub], ambient_dim=self.ambient_dim)
                for k in range(len(self.rays) + 1)
                for sub in combinations(range(len(self.rays)), k)
            ]
        full = frozenset(range(len(self.rays)))
        sets = {full}
        frontier = set(self._ray_incidence)
        while frontier:
            nxt = set()
            for F in frontier:
                if F in sets:
                    continue
                sets.add(F)
                for G in self._ray_incidence:
                    H = F & G
                    if H not in sets:
                        nxt.add(H)
            frontier = nxt
        return [Cone([self.rays[i] for i in sorted(F)], self.lineality, ambient_dim=self.ambient_dim) for F in sets]

    def face_containing(self, x: Sequence) -> Cone:
        """Smallest face whose relative interior contains ``x`` (assumes ``x`` in the cone)."""
        tight = [a for a in self.facets if dot(a, x) == 0]
        rays = [r for r in self.rays if all(dot(a, r) == 0 for a in tight)]
        return Cone(rays, self.lineality, ambient_dim=self.ambient_dim)

    def is_face_of(self, other: Cone) -> bool:
        if not other.contains_cone(self):
            return False
        gens = self.generators()
        tight = [a for a in other.facets if all(dot(a, g) == 0 for g in gens)]
        rays = [r for r in other.rays if all(dot(a, r) == 0 for a in tight)]
        return Cone(rays, other.lineality, ambient_dim=self.ambient_dim) == self

    def to_dict(self) -> dict:
        d = {"rays": [list(r) for r in self.rays]}
        if self.lineality:
            d["lineality"] = [list(v) for v in self.lineality]
        return d


def cone_over(points: Iterable[Sequence], ambient_dim: int | None = None) -> Cone:
    return Cone([p for p in points if not is_zero(p)], ambient_dim=ambient_dim)


@dataclass
class FanMapVerdict:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class Fan:
    """A finite set of cones closed under taking faces."""

    def __init__(self, cones: Iterable[Cone], ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._cones: dict = {}
        for c in cones:
            self._cones.setdefault(c.key, c)

    @classmethod
    def from_maximal(cls, maximal: Iterable[Cone], ambient_dim: int) -> Fan:
        cones = {}
        for c in maximal:
            if c.key in cones:
                continue
            for f in c.faces():
                cones.setdefault(f.key, f)
        if not cones:
            z = Cone.zero(ambient_dim)
            cones[z.key] = z
        return cls(cones.values(), ambient_dim)

    def __len__(self):
        return len(self._cones)

    def __iter__(self):
        return iter(self.cones())

    def __contains__(self, cone: Cone) -> bool:
        return cone.key in self._cones

    def __eq__(self, other):
        return isinstance(other, Fan) and set(self._cones) == set(other._cones)

    def __repr__(self):
        return f"Fan(ambient_dim={self.ambient_dim}, cones={len(self)})"

    def cones(self, k: int | None = None) -> list[Cone]:
        out = [c for c in self._cones.values() if k is None or c.dim == k]
        out.sort(key=lambda c: (c.dim, c.key))
        return out

    def rays(self) -> list[tuple[int, ...]]:
        return sorted({r for c in self._cones.values() if c.dim == len(c.lineality) + 1 for r in c.rays})

    @property
    def dim(self) -> int:
        return max(c.dim for c in self._cones.values())

    @cached_property
    def _maximal(self) -> list[Cone]:
        cs = sorted(self._cones.values(), key=lambda c: -c.dim)
        out = []
        # in a fan a pointed cone is a face of another iff its rays are among the other's rays
        by_ray: dict = {}
        for c in cs:
            if c.lineality or not c.rays:
                covered = any(d.dim > c.dim and d.contains_cone(c) for d in out)
            else:
                rs = set(c.rays)
                covered = any(d.dim > c.dim and (rs <= set(d.rays) if not d.lineality else d.contains_cone(c))
                              for d in by_ray.get(c.rays[0], ()))
                covered = covered or any(d.lineality and d.dim > c.dim and d.contains_cone(c) for d in out)
            if not covered:
                out.append(c)
                for r in c.rays:
                    by_ray.setdefault(r, []).append(c)
        out.sort(key=lambda c: (c.dim, c.key))
        return out

    def maximal_cones(self) -> list[Cone]:
        return list(self._maximal)

    def is_maximal(self, cone: Cone) -> bool:
        return cone.key in self._cones and any(c.key == cone.key for c in self._maximal)

    def contains_point(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self._maximal)

    def smallest_containing_cone(self, x: Sequence) -> Cone | None:
        x = vec(x)
        for c in self._maximal:
            if c.contains(x):
                return c.face_containing(x)
        return None

    def is_valid(self) -> bool:
        """Every pairwise intersection of maximal cones is a face of both."""
        ms = self._maximal
        for i, a in enumerate(ms):
            for b in ms[i + 1:]:
                m = a.intersection(b)
                if not (m.is_face_of(a) and m.is_face_of(b)):
                    return False
        return True

    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self._maximal)

    def to_json(self) -> str:
        return json.dumps({"ambient_dim": self.ambient_dim, "cones": [c.to_dict() for c in self.cones()]})


def fan_over_faces(P: LatticePolytope) -> Fan:
    if not P.has_origin_in_interior():
        raise NotFullDimensional("fan over faces needs the origin in the interior")
    n = P.ambient_dim
    return Fan.from_maximal([cone_over(F.vertices, n) for F in P.faces(P.dim - 1)], n)


def normal_fan(Q: LatticePolytope) -> tuple[Fan, dict]:
    """Inner normal fan of ``Q``: the cone at vertex ``p`` is where ``<p,.>`` is minimal.

    Returns the fan and a map from maximal-cone key to the minimizing vertex.
    """
    n = Q.ambient_dim
    owners = {}
    cones = []
    for p in Q.vertices:
        ineqs = [tuple(a - b for a, b in zip(q, p)) for q in Q.vertices if q != p]
        c = Cone.from_inequalities(ineqs, (), ambient_dim=n) if ineqs else Cone([], [tuple(int(i == j) for j in range(n)) for i in range(n)], ambient_dim=n)
        cones.append(c)
        owners[c.key] = p
    return Fan.from_maximal(cones, n), owners


def skeleton(F: Fan, k: int) -> Fan:
    return Fan([c for c in F.cones() if c.dim <= k], F.ambient_dim)


def remove_cones(F: Fan, S: Iterable[Cone]) -> Fan:
    """Drop maximal cones of ``F``; their faces stay."""
    S = list(S)
    for c in S:
        if not F.is_maximal(c):
            raise ValueError(f"cannot remove non-maximal cone {c}")
    drop = {c.key for c in S}
    return Fan([c for c in F.cones() if c.key not in drop], F.ambient_dim)


def remove_cones_staged(F: Fan, S: Iterable[Cone]) -> Fan:
    """Remove every cone of ``S``, highest dimension first, each once it is maximal."""
    pending = {c.key: c for c in S if c in F}
    while pending:
        ready = [c for c in pending.values() if F.is_maximal(c)]
        if not ready:
            raise ValueError("requested cones are faces of cones that are kept")
        top = max(c.dim for c in ready)
        batch = [c for c in ready if c.dim == top]
        F = remove_cones(F, batch)
        for c in batch:
            del pending[c.key]
    return F


def is_fan_map(A: LatticeMatrix, F1: Fan, F2: Fan) -> FanMapVerdict:
    """Check that ``A`` sends every cone of ``F1`` into a single cone of ``F2``."""
    if A.ncols != F1.ambient_dim or A.nrows != F2.ambient_dim:
        raise ValueError("matrix does not map between the fans' spaces")
    failures = []
    for c in F1.maximal_cones():
        target = F2.smallest_containing_cone(apply(A, c.interior_point()))
        if target is None or not all(target.contains(apply(A, g)) for g in c.generators()):
            failures.append(c)
    return FanMapVerdict(not failures, failures)


def refine(F1: Fan, F2: Fan) -> Fan:
    """Common refinement over the intersection of the supports."""
    if F1.ambient_dim != F2.ambient_dim:
        raise ValueError("fans live in different spaces")
    pieces = {}
    for a in F1.maximal_cones():
        for b in F2.maximal_cones():
            c = a.intersection(b)
            pieces.setdefault(c.key, c)
    cs = sorted(pieces.values(), key=lambda c: -c.dim)
    maximal = []
    for c in cs:
        if not any(d.contains_cone(c) for d in maximal):
            maximal.append(c)
    return Fan.from_maximal(maximal, F1.ambient_dim)
