"""Laurent polynomials, monomial maps, and exact checks of birational maps between families.

Families of hypersurfaces and complete intersections in algebraic tori are
given by Laurent polynomial equations whose coefficients may be symbolic
parameters.  Parameters are ordinary variables of the ring.  Maps between tori
are monomial; inverses are tuples of rational functions.  Verification is by
exact sampling: draw rational points on the source family, push them forward,
check the target equations and recover the point with the inverse.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .exactnum import LatticeMatrix, as_fraction

MAX_REDRAWS = 50
DRAW_BOUND = 97


# -- Laurent polynomials ----------------------------------------------------


def _scalar(x) -> Fraction | None:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


class LaurentPoly:
    """Sparse Laurent polynomial with rational coefficients in a fixed list of variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], object] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> LaurentPoly:
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Sequence[int], c=1) -> LaurentPoly:
        return cls(variables, {tuple(exponents): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> LaurentPoly:
        variables = tuple(variables)
        return cls.monomial(variables, [int(v == name) for v in variables])

    def _coerce(self, other) -> LaurentPoly:
        c = _scalar(other)
        if c is not None:
            return LaurentPoly.constant(self.variables, c)
        if isinstance(other, LaurentPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials live in different rings")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _scalar(other)
        if c is not None:
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / c)
        return RationalFn(self) / other

    def __rtruediv__(self, other):
        return RationalFn(self._coerce(other)) / self

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                return RationalFn(LaurentPoly.constant(self.variables, 1), self ** -k)
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(self.variables, [a * k for a in e], c ** k)
        out = LaurentPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> set[str]:
        """Variables occurring with a nonzero exponent."""
        return {v for e in self.terms for v, a in zip(self.variables, e) if a}

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [as_fraction(point[v]) if v in point else None for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, x, a in zip(self.variables, vals, e):
                if not a:
                    continue
                if x is None:
                    raise KeyError(f"no value for {v}")
                if x == 0 and a < 0:
                    raise ValueError(f"{v} = 0 is not a torus point")
                term *= x ** a
            total += term
        return total

    def substitute(self, values: Mapping[str, object]):
        """Replace variables by scalars, polynomials or rational functions of this ring."""
        out = LaurentPoly(self.variables, {})
        for e, c in self.terms.items():
            kept = tuple(0 if v in values else a for v, a in zip(self.variables, e))
            term = LaurentPoly.monomial(self.variables, kept, c)
            for v, a in zip(self.variables, e):
                if a and v in values:
                    x = values[v]
                    term = term * (as_fraction(x) ** a if _scalar(x) is not None else x ** a)
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if a == 1 else f"{v}^{a}" for v, a in zip(self.variables, e) if a)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def ring(*names: str) -> tuple[LaurentPoly, ...]:
    """Generators of the Laurent polynomial ring in ``names``."""
    return tuple(LaurentPoly.variable(names, v) for v in names)


class RationalFn:
    """Quotient of two Laurent polynomials in the same ring."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.constant(num.variables, 1)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if num.variables != den.variables:
            raise ValueError("numerator and denominator live in different rings")
        self.num, self.den = num, den

    @property
    def variables(self):
        return self.num.variables

    def _coerce(self, other) -> RationalFn:
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, LaurentPoly) or _scalar(other) is not None:
            return RationalFn(self.num._coerce(other))
        return NotImplemented

    def reduced(self) -> RationalFn:
        """Cancel the common monomial factor and make the denominator's leading coefficient 1."""
        if self.num.is_zero():
            return RationalFn(self.num, LaurentPoly.constant(self.variables, 1))
        exps = list(self.num.terms) + list(self.den.terms)
        low = [min(col) for col in zip(*exps)]
        lead = self.den.terms[max(self.den.terms)]
        shift = LaurentPoly.monomial(self.variables, [-a for a in low], 1 / lead)
        return RationalFn(self.num * shift, self.den * shift)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den).reduced()

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFn(self.num * other.num, self.den * other.den).reduced()

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by an identically zero function")
        return RationalFn(self.num * other.den, self.den * other.num).reduced()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFn(self.den, self.num) ** -k
        return RationalFn(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash(self.variables)

    def support(self) -> set[str]:
        r = self.reduced()
        return r.num.support() | r.den.support()

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ValueError("denominator vanishes at this point")
        return self.num.evaluate(point) / d

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


# -- monomial maps ----------------------------------------------------------


@dataclass(frozen=True)
class MonomialMap:
    """Torus map ``target_i = prod_j source_j ** matrix[j][i]``.

    Column ``i`` of the matrix is the exponent vector of target coordinate
    ``i``, so on character lattices the map is ``m -> matrix @ m``.
    """

    matrix: LatticeMatrix
    source: tuple
    target: tuple

    def __post_init__(self):
        if self.matrix.nrows != len(self.source) or self.matrix.ncols != len(self.target):
            raise ValueError("matrix shape does not match the coordinate names")

    @classmethod
    def identity(cls, names: Sequence[str]) -> MonomialMap:
        names = tuple(names)
        return cls(LatticeMatrix.identity(len(names)), names, names)

    def exponents(self, i: int) -> tuple:
        return self.matrix.column(i)

    def pullback_point(self, point: Mapping[str, object]) -> dict:
        vals = []
        for v in self.source:
            x = as_fraction(point[v])
            if x == 0:
                raise ValueError(f"{v} = 0 is not a torus point")
            vals.append(x)
        out = {}
        for i, name in enumerate(self.target):
            val = Fraction(1)
            for x, a in zip(vals, self.exponents(i)):
                val *= x ** a
            out[name] = val
        return out

    def coordinate(self, i: int, variables: Sequence[str] | None = None) -> LaurentPoly:
        variables = tuple(variables) if variables is not None else self.source
        e = dict(zip(self.source, self.exponents(i)))
        return LaurentPoly.monomial(variables, [e.get(v, 0) for v in variables])

    def then(self, outer: MonomialMap) -> MonomialMap:
        """``outer`` after ``self``."""
        if outer.source != self.target:
            raise ValueError("maps do not compose")
        return MonomialMap(self.matrix @ outer.matrix, self.source, outer.target)

    def swapped(self, i: int, j: int) -> MonomialMap:
        """Same map with the formulas for target coordinates ``i`` and ``j`` exchanged."""
        rows = self.matrix.tolist()
        for r in rows:
            r[i], r[j] = r[j], r[i]
        return MonomialMap(LatticeMatrix(rows), self.source, self.target)


def compose(outer: MonomialMap, inner: MonomialMap) -> MonomialMap:
    return inner.then(outer)


# -- families ----------------------------------------------------------------


def random_rational(rng: random.Random) -> Fraction:
    """Nonzero rational with numerator and denominator in [1, 97] and a random sign."""
    x = Fraction(rng.randint(1, DRAW_BOUND), rng.randint(1, DRAW_BOUND))
    return x if rng.random() < 0.5 else -x


class DegenerateDraw(Exception):
    pass


@dataclass
class Family:
    name: str
    coordinates: tuple
    parameters: tuple
    equations: tuple  # LaurentPoly over coordinates + parameters, each = 0 on the family
    solver: Callable[[random.Random], dict]

    @property
    def variables(self) -> tuple:
        return self.coordinates + self.parameters

    def residuals(self, point: Mapping) -> list[Fraction]:
        return [eq.evaluate(point) for eq in self.equations]

    def contains(self, point: Mapping) -> bool:
        try:
            return all(r == 0 for r in self.residuals(point))
        except ValueError:
            return False


X_NAMES = ("X1", "X2", "X3", "X4")
Y_NAMES = ("Y1", "Y2", "Y3", "Y4", "Y5")


def _conifold_family() -> Family:
    names = X_NAMES + ("a5",)
    X1, X2, X3, X4, a5 = ring(*names)
    eq = -1 + X1 + X2 + X3 + X4 + a5 * (X1 * X2 * X3) ** -1 + X1 * X2 * X4 ** -1

    def solve(rng):
        x = {v: random_rational(rng) for v in X_NAMES}
        rest = (-1 + X1 + X2 + X3 + X4 + X1 * X2 * X4 ** -1).evaluate(x)
        a5v = -rest * x["X1"] * x["X2"] * x["X3"]
        if a5v == 0:
            raise DegenerateDraw
        return {**x, "a5": a5v}

    return Family("X*_C", X_NAMES, ("a5",), (eq,), solve)


def _bb_family() -> Family:
    names = Y_NAMES + ("b4",)
    Y1, Y2, Y3, Y4, Y5, b4 = ring(*names)
    eqs = (Y1 + Y2 + Y3 + b4 * Y4 - 1, Y5 + (Y1 * Y2 * Y3 * Y4 * Y5) ** -1 - 1)

    def solve(rng):
        y = {v: random_rational(rng) for v in ("Y1", "Y2", "Y3", "Y5")}
        if y["Y5"] == 1:
            raise DegenerateDraw
        y["Y4"] = 1 / ((1 - y["Y5"]) * y["Y1"] * y["Y2"] * y["Y3"] * y["Y5"])
        b4v = (1 - y["Y1"] - y["Y2"] - y["Y3"]) / y["Y4"]
        if b4v == 0:
            raise DegenerateDraw
        return {**{v: y[v] for v in Y_NAMES}, "b4": b4v}

    return Family("X*_BB", Y_NAMES, ("b4",), eqs, solve)


def _degenerate_weighted_family() -> Family:
    names = X_NAMES + ("a5", "a6")
    X1, X2, X3, X4, a5, a6 = ring(*names)
    eqs = (
        -1 + X1 + X2 + X3 + X4 + a5 * X1 ** -1 * (X2 * X3 * X4) ** -2 + a6 * (X2 * X3 * X4) ** -1,
        4 * a5 - a6 ** 2,
    )

    def solve(rng):
        # u stands for 1 + (a6/2) / (X1 X2 X3 X4); the equation then reads X1 u^2 = 1 - X2 - X3 - X4
        x = {v: random_rational(rng) for v in ("X2", "X3", "X4")}
        u = random_rational(rng)
        rest = 1 - x["X2"] - x["X3"] - x["X4"]
        if rest == 0 or u == 1:
            raise DegenerateDraw
        x1 = rest / u ** 2
        a6v = 2 * (u - 1) * x1 * x["X2"] * x["X3"] * x["X4"]
        return {"X1": x1, "X2": x["X2"], "X3": x["X3"], "X4": x["X4"], "a5": a6v ** 2 / 4, "a6": a6v}

    return Family("X*_0", X_NAMES, ("a5", "a6"), eqs, solve)


def _complete_intersection_family() -> Family:
    names = Y_NAMES + ("b6",)
    Y1, Y2, Y3, Y4, Y5, b6 = ring(*names)
    eqs = (Y1 + Y2 + Y3 + Y4 - 1, Y5 + b6 * (Y1 * Y2 * Y3 * Y4 * Y5) ** -1 - 1)

    def solve(rng):
        y = {v: random_rational(rng) for v in ("Y1", "Y2", "Y3", "Y5")}
        y["Y4"] = 1 - y["Y1"] - y["Y2"] - y["Y3"]
        b6v = (1 - y["Y5"]) * y["Y1"] * y["Y2"] * y["Y3"] * y["Y4"] * y["Y5"]
        if y["Y4"] == 0 or b6v == 0:
            raise DegenerateDraw
        return {**{v: y[v] for v in Y_NAMES}, "b6": b6v}

    return Family("X*_(2,4)", Y_NAMES, ("b6",), eqs, solve)


FAMILIES = {
    f.name: f
    for f in (_conifold_family(), _bb_family(), _degenerate_weighted_family(), _complete_intersection_family())
}


def sample_on_family(family: str, rng_seed) -> tuple[dict, dict]:
    """Exact point on ``family`` and its parameter values, drawn from ``rng_seed``."""
    fam = FAMILIES[family]
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    for _ in range(MAX_REDRAWS):
        try:
            pt = fam.solver(rng)
        except DegenerateDraw:
            continue
        return {v: pt[v] for v in fam.coordinates}, {v: pt[v] for v in fam.parameters}
    raise RuntimeError(f"no nondegenerate draw on {family} after {MAX_REDRAWS} attempts")


# -- factorization identities ------------------------------------------------


@dataclass
class Identity:
    name: str
    lhs: LaurentPoly
    rhs: LaurentPoly


@dataclass
class IdentityVerdict:
    name: str
    equal: bool
    difference: LaurentPoly

    def __bool__(self):
        return self.equal


def _conifold_identity() -> Identity:
    X1, X2, X3, X4, a5 = ring(*X_NAMES, "a5")
    lhs = -1 + X1 + X2 + X3 + X4 + a5 * (X1 * X2 * X3) ** -1 + X1 * X2 * X4 ** -1
    rhs = -1 + (1 + X4 * X2 ** -1) * (X4 ** -1 * X1 * X2 + X2) + X3 + a5 * (X1 * X2 * X3) ** -1
    return Identity("p24", lhs, rhs)


def _weighted_identity() -> Identity:
    X1, X2, X3, X4, a5, a6 = ring(*X_NAMES, "a5", "a6")
    general = -1 + X1 + X2 + X3 + X4 + a5 * X1 ** -1 * (X2 * X3 * X4) ** -2 + a6 * (X2 * X3 * X4) ** -1
    lhs = general.substitute({"a5": a6 ** 2 / 4})
    rhs = -1 + X1 * (1 + (a6 / 2) * (X1 * X2 * X3 * X4) ** -1) ** 2 + X2 + X3 + X4
    return Identity("p11222", lhs, rhs)


IDENTITIES = {i.name: i for i in (_conifold_identity(), _weighted_identity())}


def verify_factored_identity(identity: str | Identity) -> IdentityVerdict:
    ident = IDENTITIES[identity] if isinstance(identity, str) else identity
    diff = ident.lhs - ident.rhs
    return IdentityVerdict(ident.name, diff.is_zero(), diff)


# -- theorems ---------------------------------------------------------------


@dataclass
class Theorem:
    name: str
    source: str
    target: str
    forward: MonomialMap
    inverse: dict  # source coordinate -> RationalFn in target coordinates and parameters
    match: Callable[[dict], dict]  # source parameters -> target parameters


def _first_theorem() -> Theorem:
    g = LatticeMatrix([[0, 0, 0, -1], [-1, 1, 0, 0], [-1, 0, 1, -1], [-1, 0, 0, -1], [-1, 1, 0, -1]])
    names = X_NAMES + ("a5",)
    X1, X2, X3, X4, _ = ring(*names)
    w = 1 + X4 * X2 ** -1
    inverse = {
        "Y1": RationalFn(w * (X4 ** -1 * X1 * X2)),
        "Y2": RationalFn(w * X2),
        "Y3": RationalFn(X3),
        "Y4": RationalFn((X1 * X2 * X3) ** -1),
        "Y5": 1 / RationalFn(w),
    }
    return Theorem("birational1", "X*_BB", "X*_C", MonomialMap(g, Y_NAMES, X_NAMES), inverse, lambda p: {"a5": p["b4"]})


def _second_theorem() -> Theorem:
    h = LatticeMatrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [2, 0, 0, 0]])
    names = X_NAMES + ("b6",)
    X1, X2, X3, X4, b6 = ring(*names)
    inverse = {
        "Y1": RationalFn(X4),
        "Y2": RationalFn(X3),
        "Y3": RationalFn(X2),
        "Y4": RationalFn(1 - X2 - X3 - X4),
        "Y5": 1 / RationalFn(1 + b6 * (X1 * X2 * X3 * X4) ** -1),
    }

    def match(p):
        a6 = 2 * p["b6"]
        return {"a5": a6 ** 2 / 4, "a6": a6}

    return Theorem("example2", "X*_(2,4)", "X*_0", MonomialMap(h, Y_NAMES, X_NAMES), inverse, match)


THEOREMS = {t.name: t for t in (_first_theorem(), _second_theorem())}


def inverse_support(theorem: str) -> set[str]:
    """Variables the inverse formulas depend on."""
    return set().union(*(f.support() for f in THEOREMS[theorem].inverse.values()))


@dataclass
class TheoremReport:
    theorem: str
    samples: int
    successes: int
    failures: list = field(default_factory=list)  # witness points, values as rational strings

    @property
    def ok(self) -> bool:
        return self.successes == self.samples and not self.failures

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "samples": self.samples, "successes": self.successes, "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _witness(point: Mapping) -> dict:
    return {k: str(as_fraction(v)) for k, v in sorted(point.items())}


def sample_rng(seed, index: int) -> random.Random:
    """Independent stream for sample ``index``; serial and parallel runs draw the same points."""
    return random.Random(f"{seed}/{index}")


def check_sample(thm: Theorem, point: dict, params: dict, forward: MonomialMap | None = None) -> bool:
    forward = forward or thm.forward
    target = FAMILIES[thm.target]
    image = forward.pullback_point(point)
    tparams = thm.match(params)
    if not target.contains({**image, **tparams}):
        return False
    at = {**image, **tparams, **params}
    try:
        return all(thm.inverse[v].evaluate(at) == point[v] for v in FAMILIES[thm.source].coordinates)
    except ValueError:
        return False


def verify_theorem(theorem: str, n: int = 100, rng_seed=0, forward: MonomialMap | None = None) -> TheoremReport:
    """Push ``n`` exact samples of the source family forward and invert them.

    ``forward`` replaces the theorem's map, for negative controls.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    thm = THEOREMS[theorem]
    report = TheoremReport(theorem, n, 0)
    for i in range(n):
        point, params = sample_on_family(thm.source, sample_rng(rng_seed, i))
        if check_sample(thm, point, params, forward):
            report.successes += 1
        else:
            report.failures.append(_witness({**point, **params}))
    return report
