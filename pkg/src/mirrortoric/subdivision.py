"""Regular subdivisions from lifted heights, pulling refinements and MPCP certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from operator import mul
from typing import Callable, Iterable, Mapping, Sequence

from .exactnum import as_fraction, clear_denominators, cone_generators, dot, intersect_halfspace, normalize_scalar, solve, vec
from .fan import Cone, Fan, cone_over
from .plconvex import LiftedFunction, PLConvexFunction
from .polytope import LatticePolytope, serialize_scalar, serialize_vector

MAX_HALVINGS = 40


def _idot(u, v):
    return sum(map(mul, u, v))


@lru_cache(maxsize=1 << 16)
def _dim(points: frozenset) -> int:
    return LatticePolytope(points).dim


@dataclass(frozen=True)
class Cell:
    vertices: frozenset
    points: frozenset  # every given point lying in the cell
    affine: tuple  # (a, c): value <a, x> + c

    @property
    def dim(self) -> int:
        return _dim(self.vertices)

    def polytope(self) -> LatticePolytope:
        return LatticePolytope(self.vertices)

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1


class LiftedSubdivision:
    """Projection of the lower faces of the lifted point configuration."""

    def __init__(self, base: LatticePolytope, heights: Mapping, cells: Sequence[Cell], normals: tuple | None = None):
        self.base = base
        self._normals = normals  # facet normals of the lifted cone and their tight-row masks, for updates
        self.heights = dict(heights)
        self.cells = tuple(sorted(cells, key=lambda c: sorted(c.vertices)))

    def __repr__(self):
        return f"LiftedSubdivision({len(self.cells)} cells over {len(self.heights)} points)"

    @cached_property
    def function(self) -> LiftedFunction:
        return LiftedFunction(self.base, [c.affine for c in self.cells])

    @cached_property
    def complex(self) -> frozenset:
        return frozenset(c.vertices for c in self.cells)

    def vertices(self) -> set:
        return {v for c in self.cells for v in c.vertices}

    @cached_property
    def nontight(self) -> list:
        """Points lifted strictly above the lower hull."""
        return sorted(p for p, h in self.heights.items() if self.function.on_domain(p) != h)

    def faces(self, k: int) -> set[frozenset]:
        """Vertex sets of all ``k``-dimensional cells of the complex."""
        out = set()
        for c in self.cells:
            P = c.polytope()
            for F in P.faces(k):
                out.add(frozenset(F.vertices))
        return out

    def cells_in(self, face_points: Iterable[Sequence]) -> set[frozenset]:
        """Maximal cells of the complex restricted to the hull of ``face_points``."""
        F = LatticePolytope(face_points)
        out = set()
        for k in range(F.dim, -1, -1):
            for s in self.faces(k):
                if len(s) and all(F.contains(v) for v in s) and LatticePolytope(s).dim == F.dim:
                    out.add(s)
            if out:
                break
        return out

    def refines(self, other: LiftedSubdivision) -> bool:
        """Every cell lies inside some cell of ``other``."""
        return all(any(c.vertices <= d.points for d in other.cells) for c in self.cells)

    def to_json(self) -> str:
        pts = sorted(self.heights)
        index = {p: i for i, p in enumerate(pts)}
        return json.dumps({
            "base": json.loads(self.base.to_json()),
            "heights": [[serialize_vector(p), str(as_fraction(self.heights[p]))] for p in pts],
            "cells": [sorted(index[v] for v in c.vertices) for c in self.cells],
        })


def lower_hull(base: LatticePolytope, heights: Mapping | Callable) -> LiftedSubdivision:
    """Lower faces of ``conv{(p, heights[p])}`` projected to ``base``.

    ``heights`` is either a mapping over points of ``base`` (which must
    include its vertices) or a callable evaluated at every lattice point.
    """
    if callable(heights):
        heights = {p: heights(p) for p in base.lattice_points()}
    hmap = {vec(p): as_fraction(h) for p, h in heights.items()}
    if not base.vertex_set <= set(hmap):
        raise ValueError("heights must be given at every vertex of the base")
    d = len(base._pivots)
    if d == 0:
        p = next(iter(hmap))
        return LiftedSubdivision(base, hmap, [Cell(frozenset([p]), frozenset([p]), (tuple([0] * base.ambient_dim), hmap[p]))])
    rows = [_lifted_row(base, p, h) for p, h in hmap.items()]
    normals, _ = cone_generators(rows + [_vertical(d)], dim=d + 2)
    return _from_normals(base, hmap, normals)


def lower_point(sub: LiftedSubdivision, point: Sequence, height) -> LiftedSubdivision:
    """``lower_hull`` after lowering the height of one point, updated incrementally.

    The old lifted point is the new one plus a vertical vector, so it stays
    inside the lifted cone and only one new inequality has to be added.
    """
    point, height = vec(point), as_fraction(height)
    if height > sub.heights[point]:
        raise ValueError("can only lower heights")
    if sub._normals is None:
        return lower_hull(sub.base, {**sub.heights, point: height})
    normals, masks = sub._normals
    row = _lifted_row(sub.base, point, height)
    bit = 1 << (len(sub.heights) + 1)
    normals, masks = intersect_halfspace(normals, masks, row, bit, len(row))
    # the new row takes the place of the old one in the sorted order
    old = 1 << sorted(sub.heights).index(point)
    masks = [(m & ~old & ~bit) | (old if m & bit else 0) for m in masks]
    return _from_normals(sub.base, {**sub.heights, point: height}, normals, masks)


def _lifted_row(base: LatticePolytope, p: Sequence, h) -> tuple:
    return _row(tuple(base._pivots), p, h)


@lru_cache(maxsize=1 << 16)
def _row(piv: tuple, p: tuple, h) -> tuple:
    return clear_denominators(tuple(p[i] for i in piv) + (h, 1))


@lru_cache(maxsize=1 << 16)
def _affine(piv: tuple, n: int, normal: tuple) -> tuple:
    """Affine function ``(a, c)`` whose graph is the facet with this normal."""
    d = len(piv)
    a, b, c = normal[:d], normal[d], normal[d + 1]
    full = [Fraction(0)] * n
    for k, i in enumerate(piv):
        full[i] = Fraction(-a[k], b)
    return vec(full), normalize_scalar(Fraction(-c, b))


def _vertical(d: int) -> tuple:
    return tuple([0] * d) + (1, 0)


def _from_normals(base: LatticePolytope, hmap: dict, normals: list, masks: list | None = None) -> LiftedSubdivision:
    piv = base._pivots
    d = len(piv)
    pts = sorted(hmap)
    rows = [_lifted_row(base, p, hmap[p]) for p in pts] + [_vertical(d)]
    if masks is None:
        # bit k of masks[j]: normal j is tight at row k
        masks = []
        for nv in normals:
            m = 0
            for k, r in enumerate(rows):
                if _idot(nv, r) == 0:
                    m |= 1 << k
            masks.append(m)
    incident = []
    for k in range(len(rows)):
        m = 0
        for j, mask in enumerate(masks):
            if mask >> k & 1:
                m |= 1 << j
        incident.append(m)
    # a lifted point spans an extreme ray iff no other row meets all of its facets
    is_vertex = {
        p for k, p in enumerate(pts)
        if incident[k] and not any(o != k and incident[o] & incident[k] == incident[k] for o in range(len(rows)))
    }
    lower = [(nv, m) for nv, m in zip(normals, masks) if nv[d] > 0]
    tight_rows = 0
    for _, m in lower:
        tight_rows |= m
    # points above the hull: locate them by comparing facet values -(<a, q> + c) / b as integer pairs
    above = [k for k in range(len(pts)) if not tight_rows >> k & 1]
    extra = [0] * len(lower)
    for k in above:
        q = tuple(pts[k][i] for i in piv)
        vals = [(-(_idot(nv[:d], q) + nv[d + 1]), nv[d]) for nv, _ in lower]
        bn, bd = vals[0]
        for num, den in vals[1:]:
            if num * bd > bn * den:
                bn, bd = num, den
        for j, (num, den) in enumerate(vals):
            if num * bd == bn * den:
                extra[j] |= 1 << k
    n = base.ambient_dim
    cells = []
    for (nv, m), more in zip(lower, extra):
        m |= more
        members = frozenset(p for k, p in enumerate(pts) if m >> k & 1)
        cells.append(Cell(members & is_vertex, members, _affine(tuple(piv), n, nv)))
    return LiftedSubdivision(base, hmap, cells, (normals, masks))


# -- crepancy and subfans -------------------------------------------------


def boundary_point(delta: LatticePolytope, r: Sequence) -> tuple:
    t = delta.gauge(r)
    return vec(Fraction(x) / t for x in r)


def is_crepant(F: Fan, delta: LatticePolytope) -> bool:
    """Each cone is the cone over lattice points of one proper face of ``delta``."""
    for c in F.maximal_cones():
        if c.lineality:
            return False
        pts = [boundary_point(delta, r) for r in c.rays]
        if not all(all(isinstance(x, int) for x in p) for p in pts):
            return False
        face = delta.smallest_face_containing(pts) if pts else None
        if pts and (face is None or face.dim >= delta.dim):
            return False
    return True


def induced_subfan(refined: Fan, sub: Fan) -> Fan:
    """Cones of ``refined`` lying inside some cone of ``sub``."""
    targets = sub.maximal_cones()
    return Fan([c for c in refined.cones() if any(t.contains_cone(c) for t in targets)], refined.ambient_dim)


def fan_over_cells(cells: Iterable[Iterable[Sequence]], ambient_dim: int) -> Fan:
    return Fan.from_maximal([cone_over(c, ambient_dim) for c in cells], ambient_dim)


# -- pulling refinement ---------------------------------------------------


def cell_linear_part(vertices: Iterable[Sequence], heights: Mapping) -> tuple | None:
    """Covector through the lifted vertices of a cell off the origin."""
    vs = sorted(vertices)
    return solve(vs, [heights[v] for v in vs])


def conewise_check(delta: LatticePolytope, cells: Iterable[frozenset], heights: Mapping) -> tuple[bool, list]:
    """Cone-wise linear parts support every lifted lattice point, strictly off their cell."""
    cells = list(cells)
    rays = {v for c in cells for v in c}
    pts = delta.lattice_points()
    for c in cells:
        l = cell_linear_part(c, heights)
        if l is None:
            return False, [c]
        for p in pts:
            diff = as_fraction(heights[p]) - dot(l, p)
            if diff < 0:
                return False, [c, p]
            if diff == 0 and p in rays and p not in c and any(x != 0 for x in p):
                return False, [c, p]
    return True, []


class IncrementalConewiseCheck:
    """:func:`conewise_check` that re-examines only what changed since the last pass."""

    def __init__(self, delta: LatticePolytope):
        self.points = delta.lattice_points()
        self._parts: dict = {}
        self._verified: set = set()
        self._base: dict | None = None
        self._base_rays: set = set()

    def _part(self, cell, heights):
        """Linear part as an integer covector and a positive denominator."""
        key = (cell, tuple(heights[v] for v in sorted(cell)))
        if key not in self._parts:
            l = cell_linear_part(cell, heights)
            if l is None:
                self._parts[key] = None
            else:
                den = lcm(*(as_fraction(x).denominator for x in l))
                self._parts[key] = (tuple(int(x * den) for x in l), den)
        return key, self._parts[key]

    def __call__(self, cells, heights) -> tuple[bool, list]:
        cells = list(cells)
        rays = {v for c in cells for v in c}
        if self._base is None:
            changed = None
        else:
            changed = [p for p in self.points if heights[p] != self._base[p]]
            changed += sorted(rays - self._base_rays - set(changed))
        keys = []
        for c in cells:
            key, part = self._part(c, heights)
            if part is None:
                return False, [c]
            l, den = part
            pts = changed if (changed is not None and key in self._verified) else self.points
            for p in pts:
                h = as_fraction(heights[p])
                diff = h.numerator * den - _idot(l, p) * h.denominator
                if diff < 0 or (diff == 0 and p in rays and p not in c and any(x != 0 for x in p)):
                    return False, [c, p]
            keys.append(key)
        self._verified = set(keys)
        self._base = dict(heights)
        self._base_rays = rays
        return True, []


@dataclass
class PullingResult:
    subdivisions: list  # one LiftedSubdivision per piece
    heights: dict
    pulled: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    history: list = field(default_factory=list)  # complexes after each round

    @property
    def rounds(self) -> int:
        return len(self.pulled)

    def cells(self) -> list[frozenset]:
        return sorted({c.vertices for s in self.subdivisions for c in s.cells}, key=sorted)

    def rays(self) -> set:
        return {v for s in self.subdivisions for v in s.vertices()}


def _complex_key(subs: Sequence[LiftedSubdivision]) -> tuple:
    return tuple(s.complex for s in subs)


def pulling_refinement(
    pieces: Sequence[LatticePolytope],
    heights: Mapping,
    global_check: Callable[[list, Mapping], tuple[bool, list]] | None = None,
) -> PullingResult:
    """Lower heights one lattice point at a time until every piece is triangulated.

    Points are taken in lexicographic order: first lattice points that are
    not yet vertices of the complex, then vertices of non-simplicial cells.
    Each point is pulled at most once, from the current hull value at that
    point.  The amount is found adaptively: start at 1/4 and halve until the
    complex agrees with the one for half the amount, refines the current
    complex and passes ``global_check``.
    """
    heights = {vec(p): as_fraction(h) for p, h in heights.items()}
    piece_pts = [set(P.lattice_points()) for P in pieces]
    subs = [lower_hull(P, {p: heights[p] for p in pts}) for P, pts in zip(pieces, piece_pts)]
    result = PullingResult(subs, heights)
    result.history.append(_complex_key(subs))
    all_pts = sorted(set().union(*piece_pts)) if piece_pts else []
    pulled: set = set()

    while True:
        rays = {v for s in subs for v in s.vertices()}
        missing = [p for p in all_pts if p not in rays and p not in pulled]
        if missing:
            target = missing[0]
        else:
            cand = sorted({v for s in subs for c in s.cells if not c.is_simplex() for v in c.vertices} - pulled)
            if not cand:
                if any(not c.is_simplex() for s in subs for c in s.cells):
                    raise RuntimeError("pulling exhausted without triangulating")
                break
            target = cand[0]
        affected = [i for i, pts in enumerate(piece_pts) if target in pts]

        owner = subs[affected[0]]
        start_height = as_fraction(owner.function.on_domain(target))

        def attempt(eps):
            trial = dict(heights)
            trial[target] = start_height - eps
            new = list(subs)
            for i in affected:
                new[i] = lower_point(subs[i], target, trial[target])
            return trial, new

        eps = Fraction(1, 4)
        trial, new = attempt(eps)
        for _ in range(MAX_HALVINGS):
            trial2, new2 = attempt(eps / 2)
            ok = _complex_key(new) == _complex_key(new2) and all(new[i].refines(subs[i]) for i in affected)
            if ok and global_check is not None:
                cells = [c.vertices for s in new for c in s.cells]
                ok = global_check(cells, trial)[0]
            if ok:
                break
            eps, trial, new = eps / 2, trial2, new2
        else:
            raise RuntimeError(f"no admissible perturbation found at {target}")

        heights, subs = trial, new
        pulled.add(target)
        result.pulled.append(target)
        result.epsilons.append(eps)
        result.history.append(_complex_key(subs))

    result.subdivisions = subs
    result.heights = heights
    return result


# -- MPCP certificates ----------------------------------------------------


@dataclass
class MPCPCertificate:
    base: LatticePolytope
    cells: list
    heights: dict  # scaled so that all linear parts are integral
    function: PLConvexFunction
    fan: Fan
    scale: int
    rounds: int
    pulled: list
    checks: dict

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def cells_in(self, face_points: Iterable[Sequence]) -> set[frozenset]:
        """Maximal cells of the boundary complex restricted to a face of the base.

        A cell meets a face of the base in one of its own faces, spanned by
        the cell's vertices lying in that face.
        """
        F = LatticePolytope(face_points)
        out = set()
        for c in self.cells:
            inside = frozenset(v for v in c if F.contains(v))
            if len(inside) > F.dim and _dim(inside) == F.dim:
                out.add(inside)
        return out


def certify_mpcp(delta: LatticePolytope, cells: Sequence[frozenset], heights: Mapping, fan: Fan | None = None) -> dict:
    boundary = set(delta.boundary_lattice_points())
    rays = {v for c in cells for v in c}
    simplicial_empty = True
    for c in cells:
        P = LatticePolytope(c)
        if len(c) != P.dim + 1 or set(P.lattice_points()) != set(c):
            simplicial_empty = False
    parts = [cell_linear_part(c, heights) for c in cells]
    if fan is None:
        fan = fan_over_cells(cells, delta.ambient_dim)
    return {
        "strictly_convex": conewise_check(delta, cells, heights)[0],
        "crepant": is_crepant(fan, delta),
        "all_boundary_points_are_rays": boundary <= rays,
        "simplicial_and_empty": simplicial_empty,
        "integral_linear_parts": all(l is not None and all(isinstance(x, int) for x in l) for l in parts),
    }


def gkz_mpcp(delta: LatticePolytope, seed: Callable) -> MPCPCertificate:
    """MPCP function refining the strict-convexity fan of ``seed``.

    ``seed`` is evaluated at the lattice points of ``delta``; it must be
    strictly convex and cone-wise linear on a crepant subdivision.
    """
    if not delta.has_origin_in_interior():
        raise ValueError("needs a polytope with the origin in its interior")
    heights = {p: as_fraction(seed(p)) for p in delta.lattice_points()}
    facets = [LatticePolytope(F.vertices) for F in delta.faces(delta.dim - 1)]

    check = IncrementalConewiseCheck(delta)

    start = [lower_hull(F, {p: heights[p] for p in F.lattice_points()}) for F in facets]
    ok, witness = check([c.vertices for s in start for c in s.cells], heights)
    if not ok:
        raise ValueError(f"seed is not strictly convex on a crepant subdivision: {witness}")
    res = pulling_refinement(facets, heights, global_check=check)
    cells = res.cells()
    parts = [cell_linear_part(c, res.heights) for c in cells]
    scale = 1
    for l in parts:
        for x in l:
            scale = lcm(scale, as_fraction(x).denominator)
    scaled = {p: normalize_scalar(h * scale) for p, h in res.heights.items()}
    function = PLConvexFunction([tuple(normalize_scalar(x * scale) for x in l) for l in parts], delta.ambient_dim)
    fan = fan_over_cells(cells, delta.ambient_dim)
    checks = certify_mpcp(delta, cells, scaled, fan)
    return MPCPCertificate(delta, cells, scaled, function, fan, scale, res.rounds, res.pulled, checks)


def heights_to_json(heights: Mapping) -> list:
    return [[serialize_vector(p), serialize_scalar(h)] for p, h in sorted(heights.items())]
