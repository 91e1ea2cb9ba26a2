"""Brute-force oracles and the randomized law checks shared by the property tests."""

import functools
import itertools
import random
from fractions import Fraction

from mirrortoric.exactnum import LatticeMatrix, dot, rank, solve, vsub
from mirrortoric.plconvex import add, from_polytope, newton, pullback
from mirrortoric.polytope import LatticePolytope, dual, image, minkowski
from mirrortoric.subdivision import gkz_mpcp, lower_hull

SAMPLES = 50


def box_points(points):
    d = len(points[0])
    lo = [min(p[i] for p in points) for i in range(d)]
    hi = [max(p[i] for p in points) for i in range(d)]
    return list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def supporting_hyperplanes(points):
    """(normal, offset) with <normal, x> + offset >= 0 on ``points``, through d of them."""
    d = len(points[0])
    out = set()
    for S in itertools.combinations(points, d):
        diffs = [vsub(p, S[0]) for p in S[1:]]
        if rank(diffs) != d - 1:
            continue
        a = solve_normal(diffs, d)
        b = -dot(a, S[0])
        vals = [dot(a, p) + b for p in points]
        if all(v <= 0 for v in vals):
            a, b = tuple(-x for x in a), -b
        elif not all(v >= 0 for v in vals):
            continue
        out.add((a, b))
    return out


def solve_normal(diffs, d):
    for i in range(d):
        fixed = [tuple(int(j == i) for j in range(d))]
        x = solve(diffs + fixed, [0] * len(diffs) + [1])
        if x is not None:
            return x
    raise ValueError("degenerate")


def inside(planes, x):
    return all(dot(a, x) + b >= 0 for a, b in planes)


def lattice_points(points):
    planes = supporting_hyperplanes(points)
    return [q for q in box_points(points) if inside(planes, q)], planes


def lower_envelope(heights):
    """Affine minorants through d+1 lifted points; their maximum is the lower convex envelope."""
    pts = list(heights)
    d = len(pts[0])
    pieces = []
    for S in itertools.combinations(pts, d + 1):
        rows = [tuple(p) + (1,) for p in S]
        if rank(rows) != d + 1:
            continue
        sol = solve(rows, [heights[p] for p in S])
        a, c = sol[:-1], sol[-1]
        if all(dot(a, q) + c <= heights[q] for q in pts):
            pieces.append((a, c))
    return lambda x: max(dot(a, x) + c for a, c in pieces)


def random_full_polytope(rng, d, lo=-2, hi=2, max_points=None, origin_inside=False):
    while True:
        pts = [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(rng.randint(d + 1, d + 4))]
        P = LatticePolytope(pts)
        if P.dim != d or (origin_inside and not P.has_origin_in_interior()):
            continue
        if max_points and len(P.lattice_points()) > max_points:
            continue
        return P


def random_point_in(rng, P):
    w = [Fraction(rng.randint(0, 20)) for _ in P.vertices]
    w[rng.randrange(len(w))] += 1
    s = sum(w)
    return tuple(sum(wi * v[i] for wi, v in zip(w, P.vertices)) / s for i in range(P.ambient_dim))


# -- the law checks; each returns a list of failing inputs ---------------------
# cached so the acceptance run and the property tests share one pass


@functools.cache
def newt_law_failures(seed=0, n=SAMPLES):
    rng = random.Random(f"newt/{seed}")
    failures = []
    for i in range(n):
        m, k = rng.randint(1, 3), rng.randint(1, 3)
        Q = LatticePolytope([tuple(rng.randint(-2, 2) for _ in range(m)) for _ in range(rng.randint(1, 5))])
        p = LatticeMatrix([[rng.randint(-2, 2) for _ in range(k)] for _ in range(m)])
        phi = from_polytope(Q)
        pulled = pullback(phi, p)
        ok = newton(pulled) == image(newton(phi), p.T)
        for _ in range(10):
            v = tuple(rng.randint(-6, 6) for _ in range(k))
            ok &= pulled(v) == -min(dot(u, p.apply(v)) for u in Q.vertices)
        if not ok:
            failures.append((i, Q.vertices, p.entries))
    return failures


@functools.cache
def mpcp_part1_failures(seed=0, n=SAMPLES):
    """Heights from a convex function are reproduced at every lattice point."""
    rng = random.Random(f"mpcp1/{seed}")
    failures = []
    for i in range(n):
        d = rng.randint(1, 3)
        base = random_full_polytope(rng, d, max_points=14)
        pts, _ = lattice_points(base.vertices)
        phi = from_polytope(random_full_polytope(rng, d, lo=-3, hi=3))
        heights = {q: phi(q) for q in pts}
        sub = lower_hull(base, heights)
        env = lower_envelope(heights)
        if any(sub.function.on_domain(q) != heights[q] or env(q) != heights[q] for q in pts) or sub.nontight:
            failures.append((i, base.vertices))
    return failures


@functools.cache
def mpcp_part2_failures(seed=0, n=SAMPLES, points=SAMPLES):
    """The lower-hull function equals the lower convex envelope of arbitrary heights."""
    rng = random.Random(f"mpcp2/{seed}")
    failures = []
    for i in range(n):
        d = rng.randint(1, 3)
        base = random_full_polytope(rng, d, max_points=12)
        pts, _ = lattice_points(base.vertices)
        heights = {q: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for q in pts}
        f = lower_hull(base, heights).function
        env = lower_envelope(heights)
        if any(f.on_domain(x) != env(x) for x in (random_point_in(rng, base) for _ in range(points))):
            failures.append((i, base.vertices))
    return failures


@functools.cache
def mpcp_part3_failures(seed=0, n=SAMPLES):
    """The perturbed boundary function is MPCP: crepant, unimodular, all boundary rays, strictly convex."""
    rng = random.Random(f"mpcp3/{seed}")
    failures = []
    for i in range(n):
        d = rng.randint(2, 3)
        P = random_full_polytope(rng, d, max_points=18 if d == 3 else None, origin_inside=True)
        cert = gkz_mpcp(P, P.gauge)
        pts, planes = lattice_points(P.vertices)
        facets = [(a, b) for a, b in planes]
        boundary = {q for q in pts if any(dot(a, q) + b == 0 for a, b in facets)}
        ok = {v for c in cert.cells for v in c} == boundary
        for c in cert.cells:
            c = sorted(c)
            ok &= len(c) == d
            ok &= any(all(dot(a, v) + b == 0 for v in c) for a, b in facets)
            ok &= rank(c) == d and _empty_simplex(c, facets)
            lin = solve(c, [cert.heights[v] for v in c])
            ok &= lin is not None and all(x.denominator == 1 for x in map(Fraction, lin))
            ok &= all(dot(lin, q) < cert.heights[q] for q in boundary if q not in c)
        if not ok:
            failures.append((i, P.vertices))
    return failures


def _empty_simplex(cell, facets):
    """The only lattice points of the simplex are its vertices (slice of the pyramid over it)."""
    pts, _ = lattice_points(list(cell) + [(0,) * len(cell)])
    a, b = next((a, b) for a, b in facets if all(dot(a, v) + b == 0 for v in cell))
    return sorted(q for q in pts if dot(a, q) + b == 0) == sorted(cell)


@functools.cache
def duality_failures(seed=0, n=SAMPLES):
    rng = random.Random(f"dual/{seed}")
    failures = []
    for i in range(n):
        d = rng.randint(1, 3)
        P = random_full_polytope(rng, d, origin_inside=True)
        Q = random_full_polytope(rng, d)
        ok = dual(dual(P)) == P
        S = minkowski(P, Q)
        ok &= newton(add(from_polytope(P), from_polytope(Q))) == S
        for _ in range(10):
            v = tuple(rng.randint(-6, 6) for _ in range(d))
            ok &= from_polytope(S)(v) == -min(dot(p, v) + dot(q, v) for p in P.vertices for q in Q.vertices)
        if not ok:
            failures.append((i, P.vertices, Q.vertices))
    return failures
