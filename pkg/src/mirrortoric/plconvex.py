"""Lower convex piecewise-linear functions and their Newton polytopes.

A globally defined function is stored as a finite list of covectors ``c``
with ``phi(v) = max_c <c, v>``; the polytope ``Q`` corresponds to the
covectors ``-q`` for the vertices ``q`` of ``Q``.  Functions known only
through heights on the lattice points of a polytope are :class:`LiftedFunction`
instances built by :mod:`mirrortoric.subdivision`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exactnum import (
    LatticeMatrix,
    apply,
    as_fraction,
    dot,
    normalize_scalar,
    solve,
    vadd,
    vec,
    vneg,
    vscale,
)
from .fan import Cone, Fan
from .polytope import LatticePolytope, translate


class PLConvexFunction:
    """``v -> max_c <c, v>`` over a finite set of rational covectors."""

    def __init__(self, covectors: Iterable[Sequence], ambient_dim: int | None = None):
        cs = sorted(set(vec(c) for c in covectors))
        if not cs:
            raise ValueError("need at least one covector")
        self.ambient_dim = ambient_dim if ambient_dim is not None else len(cs[0])
        self.covectors = tuple(cs)
        # integer form: covectors times a common denominator, for fast evaluation
        self._den = lcm(*(as_fraction(x).denominator for c in cs for x in c))
        self._int_covectors = tuple(tuple(int(x * self._den) for x in c) for c in cs)

    def __call__(self, v: Sequence):
        v = [as_fraction(x) for x in v]
        d = lcm(*(x.denominator for x in v))
        w = [int(x * d) for x in v]
        best = max(sum(a * b for a, b in zip(c, w)) for c in self._int_covectors)
        return normalize_scalar(Fraction(best, d * self._den))

    def __repr__(self):
        return f"PLConvexFunction({len(self.covectors)} pieces in dimension {self.ambient_dim})"

    def __add__(self, other: PLConvexFunction) -> PLConvexFunction:
        return add(self, other)

    def scaled(self, k) -> PLConvexFunction:
        if as_fraction(k) < 0:
            raise ValueError("negative multiples are not convex")
        return PLConvexFunction([vscale(k, c) for c in self.covectors], self.ambient_dim)

    def essential_covectors(self) -> list[tuple]:
        """Covectors whose domain of linearity is full dimensional."""
        return [c for c, _ in _domains(self)]


def zero_function(n: int) -> PLConvexFunction:
    return PLConvexFunction([tuple([0] * n)], n)


def from_polytope(Q: LatticePolytope) -> PLConvexFunction:
    """``phi(v) = -min {<p, v> : p in Q}``."""
    return PLConvexFunction([vneg(q) for q in Q.vertices], Q.ambient_dim)


def from_ray_values(F: Fan, values: dict) -> PLConvexFunction:
    """Function linear on each maximal cone of a simplicial fan with given ray values.

    The max-of-covectors form only agrees with the conewise function when the
    latter is convex, so convexity is checked before returning.
    """
    covs = []
    for c in F.maximal_cones():
        if not c.is_simplicial or c.dim != F.ambient_dim:
            raise ValueError("need a complete simplicial fan")
        covs.append(solve(list(c.rays), [values[r] for r in c.rays]))
    phi = PLConvexFunction(covs, F.ambient_dim)
    for c, l in zip(F.maximal_cones(), covs):
        if any(phi(r) != dot(l, r) for r in c.rays):
            raise ValueError("ray values do not define a convex function")
    return phi


def _domains(phi: PLConvexFunction) -> list[tuple[tuple, Cone]]:
    """Full-dimensional domains of linearity, one per essential covector."""
    n = phi.ambient_dim
    out = []
    for c in phi.covectors:
        ineqs = [tuple(a - b for a, b in zip(c, d)) for d in phi.covectors if d != c]
        if ineqs:
            cone = Cone.from_inequalities(ineqs, (), ambient_dim=n)
        else:
            cone = Cone([], [tuple(int(i == j) for j in range(n)) for i in range(n)], ambient_dim=n)
        if cone.dim == n:
            out.append((c, cone))
    return out


def newton(phi: PLConvexFunction) -> LatticePolytope:
    """``{u : <u, v> >= -phi(v) for all v}`` via the generators of the linearity domains."""
    ineqs = []
    for _, cone in _domains(phi):
        for g in cone.generators():
            ineqs.append((g, phi(g)))
    return LatticePolytope.from_inequalities(ineqs)


def pullback(phi: PLConvexFunction, p: LatticeMatrix) -> PLConvexFunction:
    """``phi o p``; ``p`` maps the new domain into the domain of ``phi``."""
    if p.nrows != phi.ambient_dim:
        raise ValueError("map does not land in the function's domain")
    pt = p.T
    return PLConvexFunction([apply(pt, c) for c in phi.covectors], p.ncols)


def add(phi: PLConvexFunction, psi: PLConvexFunction) -> PLConvexFunction:
    if phi.ambient_dim != psi.ambient_dim:
        raise ValueError("functions live on different spaces")
    ess_a = phi.essential_covectors()
    ess_b = psi.essential_covectors()
    return PLConvexFunction([vadd(a, b) for a in ess_a for b in ess_b], phi.ambient_dim)


@dataclass
class LinearityFan:
    fan: Fan
    linear_part: dict  # maximal cone key -> covector

    def covector_of(self, cone: Cone):
        return self.linear_part[cone.key]


def linearity_fan(phi: PLConvexFunction) -> LinearityFan:
    doms = _domains(phi)
    fan = Fan.from_maximal([c for _, c in doms], phi.ambient_dim)
    return LinearityFan(fan, {cone.key: cov for cov, cone in doms})


# -- functions given by heights ------------------------------------------


class LiftedFunction:
    """Lower-hull function on a polytope, extended to the cone over it.

    ``pieces`` are affine maps ``(a, c)`` with value ``<a, x> + c`` whose
    maximum is the function on ``domain``.  Points outside the domain are
    scaled back onto it: by the gauge when the origin is interior, or onto
    the affine hull of a face that misses the origin.
    """

    def __init__(self, domain: LatticePolytope, pieces: Sequence[tuple]):
        self.domain = domain
        self.pieces = tuple(pieces)
        self.ambient_dim = domain.ambient_dim
        self._interior_origin = domain.has_origin_in_interior()
        self._homog = next(((e, c) for e, c in domain.equations if c != 0), None)

    def on_domain(self, x: Sequence):
        if not self.domain.contains(x):
            raise ValueError(f"{x} is outside the domain")
        return normalize_scalar(max(dot(a, x) + c for a, c in self.pieces))

    def scale_of(self, x: Sequence):
        """``t`` with ``x / t`` on the domain's boundary or affine hull."""
        if self._interior_origin:
            return self.domain.gauge(x)
        if self._homog is not None:
            e, c = self._homog
            return Fraction(-dot(e, x)) / c
        raise ValueError("no homogeneous extension available")

    def __call__(self, x: Sequence):
        x = vec(x)
        if self._interior_origin and self.domain.contains(x):
            return self.on_domain(x)
        t = self.scale_of(x)
        if t < 0:
            raise ValueError(f"{x} is outside the cone over the domain")
        if t == 0:
            if any(v != 0 for v in x):
                raise ValueError(f"{x} is outside the cone over the domain")
            return 0
        return normalize_scalar(t * self.on_domain(tuple(Fraction(v) / t for v in x)))


def cone_linear_part(phi, cone: Cone):
    """Covector agreeing with ``phi`` on ``cone``, or ``None`` if ``phi`` is not linear there."""
    gens = cone.generators()
    if not gens:
        return tuple([0] * cone.ambient_dim)
    l = solve(gens, [phi(g) for g in gens])
    if l is None:
        return None
    x = cone.interior_point()
    if phi(x) != dot(l, x):
        return None
    return l


@dataclass
class ConvexityVerdict:
    ok: bool
    reason: str = ""
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_strictly_convex_on(phi, F: Fan) -> ConvexityVerdict:
    """Linear on each maximal cone, with ``phi > l_C`` off every cone ``C``."""
    maximal = F.maximal_cones()
    parts = {}
    for c in maximal:
        l = cone_linear_part(phi, c)
        if l is None:
            return ConvexityVerdict(False, "not piecewise linear on F", [c])
        parts[c.key] = l
    gens = sorted({g for c in maximal for g in c.generators()})
    for c in maximal:
        l = parts[c.key]
        for g in gens:
            diff = phi(g) - dot(l, g)
            if diff < 0:
                return ConvexityVerdict(False, "not convex", [c, g])
            if diff == 0 and not c.contains(g):
                return ConvexityVerdict(False, "not strictly convex", [c, g])
    return ConvexityVerdict(True)


def section_function(delta_i: LatticePolytope, m: Sequence) -> PLConvexFunction:
    """Vanishing-order function of the monomial section ``m``: Newton polytope ``delta_i - m``."""
    m = vec(m)
    if m not in delta_i.lattice_points():
        raise ValueError(f"{m} is not a lattice point of the polytope")
    return from_polytope(translate(delta_i, vneg(m)))


def vanishes_on(phi: PLConvexFunction, cone: Cone) -> bool:
    """``phi`` identically zero on ``cone`` (valid for ``phi >= 0`` convex)."""
    return all(phi(g) == 0 for g in cone.generators())


@dataclass
class ExclusionVerdict:
    excluded: bool
    survivors: list

    def __bool__(self):
        return self.excluded


def orbit_excluded(cone: Cone, delta_i: LatticePolytope) -> ExclusionVerdict:
    """Exactly one section of ``delta_i`` is nowhere zero on the orbit of ``cone``."""
    survivors = [m for m in delta_i.lattice_points() if vanishes_on(section_function(delta_i, m), cone)]
    return ExclusionVerdict(len(survivors) == 1, survivors)
