"""Exact integer/rational vectors and matrices.

Vectors are plain tuples of ``int`` or ``Fraction``. Matrices are
:class:`LatticeMatrix` instances acting on column vectors.  Everything here is
exact; no floating point is used anywhere in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from operator import mul
from typing import Iterable, Sequence

Vector = tuple


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def normalize_scalar(x):
    """Return ``x`` as an ``int`` if it is integral, else as a ``Fraction``."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def vec(xs: Iterable) -> Vector:
    return tuple(normalize_scalar(as_fraction(x)) for x in xs)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), 0)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(normalize_scalar(c * a) for a in v)


def vneg(v: Sequence) -> Vector:
    return tuple(-a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def is_integral(v: Sequence) -> bool:
    return all(isinstance(a, int) or a.denominator == 1 for a in v)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of ``v`` with integer entries."""
    den = 1
    for a in v:
        if isinstance(a, Fraction):
            den = lcm(den, a.denominator)
    return tuple(int(a * den) for a in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through ``v``."""
    w = clear_denominators(v)
    g = 0
    for a in w:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("the zero vector has no primitive direction")
    return tuple(a // g for a in w)


def unit_vector(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


@dataclass(frozen=True)
class LatticeMatrix:
    """Integer (or rational) matrix acting on the left of column vectors."""

    entries: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> LatticeMatrix:
        return cls(tuple(zip(*columns)))

    @classmethod
    def identity(cls, n: int) -> LatticeMatrix:
        return cls(tuple(unit_vector(n, i) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def T(self) -> LatticeMatrix:
        return LatticeMatrix(tuple(zip(*self.entries)))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def apply(self, v: Sequence) -> Vector:
        return apply(self, v)

    def __matmul__(self, other: LatticeMatrix) -> LatticeMatrix:
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        cols = other.T.entries
        return LatticeMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.entries))

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]


def apply(A: LatticeMatrix, v: Sequence) -> Vector:
    if A.ncols != len(v):
        raise ValueError(f"matrix has {A.ncols} columns but vector has dimension {len(v)}")
    return tuple(normalize_scalar(dot(r, v)) for r in A.entries)


# -- elimination -----------------------------------------------------------


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    m = [clear_denominators(r) for r in rows if not is_zero(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            m[i] = [(m[r][c] * m[i][k] - m[i][c] * m[r][k]) // prev for k in range(ncols)]
        prev = m[r][c]
        r += 1
        if r == len(m):
            break
    return r


def det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for k in range(c + 1, n):
                m[i][k] = (m[c][c] * m[i][k] - m[i][c] * m[c][k]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def lattice_index(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the span of independent integer ``vectors`` in its saturation."""
    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = gcd(g, det([[v[c] for c in cols] for v in vectors]))
    if g == 0:
        raise ValueError("vectors are linearly dependent")
    return g


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[as_fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _integer_rref(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Integer rows in reduced echelon shape: zero above and below each pivot, primitive rows."""
    m = [list(clear_denominators(r)) for r in rows if not is_zero(r)]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f != 0:
                row = [p * a - f * b for a, b in zip(m[i], pr)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the rational null space of ``rows``."""
    red, pivots = _integer_rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        scale = 1
        for row, p in zip(red, pivots):
            scale = lcm(scale, row[p])
        v = [0] * ncols
        v[f] = scale
        for row, p in zip(red, pivots):
            v[p] = -row[f] * (scale // row[p])
        basis.append(primitive(v))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One rational solution of ``rows @ x = rhs`` or ``None`` if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return vec(x)


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(map(as_fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("singular matrix")
    return [r[n:] for r in red]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of an integer matrix (nonzero rows only)."""
    m = [list(v) for v in vectors]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            g, x, y = _xgcd(m[r][c], m[i][c])
            a, b = m[r][c] // g, m[i][c] // g
            ri, rr = m[i], m[r]
            m[r] = [x * p + y * q for p, q in zip(rr, ri)]
            m[i] = [-b * p + a * q for p, q in zip(rr, ri)]
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-p for p in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [p - q * s for p, s in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [tuple(row) for row in m[:r]]


def kernel_basis(A: LatticeMatrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice ``{v in Z^n : A v = 0}``.

    Integer column operations reduce ``A`` to column echelon form while the
    same operations are tracked on an identity matrix; the tracked columns
    sitting over zero columns span the kernel lattice (the transform is
    unimodular, so the basis is saturated).  The result is put in row Hermite
    form so it is canonical.
    """
    rows = [list(clear_denominators(r)) for r in A.entries]
    n = A.ncols
    # work on columns: store as list of columns, each column = (A-part, U-part)
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(n)]
    U = [list(unit_vector(n, j)) for j in range(n)]
    k = 0
    for i in range(len(rows)):
        for j in range(k + 1, n):
            if cols[j][i] == 0:
                continue
            g, x, y = _xgcd(cols[k][i], cols[j][i])
            a, b = cols[k][i] // g, cols[j][i] // g
            ck, cj = cols[k], cols[j]
            uk, uj = U[k], U[j]
            cols[k] = [x * p + y * q for p, q in zip(ck, cj)]
            cols[j] = [-b * p + a * q for p, q in zip(ck, cj)]
            U[k] = [x * p + y * q for p, q in zip(uk, uj)]
            U[j] = [-b * p + a * q for p, q in zip(uk, uj)]
        if k < n and cols[k][i] != 0:
            k += 1
        if k == n:
            break
    kernel = [tuple(U[j]) for j in range(k, n)]
    return hermite_rows(kernel)


# -- double description ----------------------------------------------------


def _idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(map(mul, u, v))


def intersect_halfspace(rays: list, zsets: list, row: Sequence[int], bit: int, n: int) -> tuple[list, list]:
    """Intersect a pointed cone with ``<row, x> >= 0``.

    ``zsets`` are bitmasks of the constraints tight at each ray; ``bit`` marks
    the new one.  Returns the new rays with their masks.
    """
    vals = [_idot(row, r) for r in rays]
    pos = [k for k, v in enumerate(vals) if v > 0]
    neg = [k for k, v in enumerate(vals) if v < 0]
    new_rays = [rays[k] for k, v in enumerate(vals) if v >= 0]
    new_z = [zsets[k] | bit if v == 0 else zsets[k] for k, v in enumerate(vals) if v >= 0]
    need = n - 2
    for p in pos:
        zp = zsets[p]
        for q in neg:
            common = zp & zsets[q]
            if common.bit_count() < need:
                continue
            if any(k != p and k != q and (z & common) == common for k, z in enumerate(zsets)):
                continue
            a, b = vals[p], vals[q]
            new_rays.append(primitive([a * y - b * x for x, y in zip(rays[p], rays[q])]))
            new_z.append(common | bit)
    return new_rays, new_z


def cone_generators(
    inequalities: Sequence[Sequence],
    equations: Sequence[Sequence] = (),
    dim: int | None = None,
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Extreme rays and lineality basis of ``{x : A x >= 0, E x = 0}``.

    Double description method with the combinatorial adjacency test.  Returns
    ``(rays, lineality)``; rays are primitive integer vectors lying in the
    orthogonal complement of the lineality space.
    """
    ineqs = [clear_denominators(r) for r in inequalities]
    eqs = [clear_denominators(r) for r in equations]
    if dim is None:
        dim = len((ineqs or eqs)[0])
    n = dim
    lineality = nullspace(ineqs + eqs, n) if (ineqs or eqs) else [unit_vector(n, i) for i in range(n)]
    if lineality:
        lineality = hermite_rows(lineality)
    rows = [r for r in ineqs if not is_zero(r)]
    for e in eqs + [tuple(x) for x in lineality]:
        if not is_zero(e):
            rows.append(tuple(e))
            rows.append(vneg(e))
    if len(lineality) == n:
        return [], [tuple(x) for x in lineality]

    # initial simplicial cone from n independent rows
    chosen: list[int] = []
    basis_rows: list = []
    for i, r in enumerate(rows):
        if rank(basis_rows + [r]) > len(basis_rows):
            basis_rows.append(r)
            chosen.append(i)
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise ArithmeticError("constraint system is not of full rank after adding lineality")
    inv = inverse(basis_rows)
    rays = [primitive([inv[i][j] for i in range(n)]) for j in range(n)]
    # zero sets as bitmasks over row indices
    zsets = []
    for j in range(n):
        z = 0
        for k, i in enumerate(chosen):
            if k != j:
                z |= 1 << i
        zsets.append(z)

    for i in range(len(rows)):
        if i not in set(chosen):
            rays, zsets = intersect_halfspace(rays, zsets, rows[i], 1 << i, n)
    uniq = sorted(set(rays))
    return uniq, [tuple(x) for x in lineality]
