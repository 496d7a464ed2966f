"""Exact rational arithmetic helpers, sign predicates and a phase-1 simplex.

Rationals are plain :class:`fractions.Fraction` values; they are always kept
in lowest terms with a positive denominator, which is exactly what the rest
of the package relies on.  Vectors are tuples of Fractions (or ints, which
mix freely with Fractions).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vec = tuple

LE, EQ, GE = "<=", "=", ">="


class DimensionMismatch(ValueError):
    pass


# -- rationals ---------------------------------------------------------------

def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; ints and Fractions pass through."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"rational must be given as a string, got {text!r}")
    return Fraction(text.strip())


def format_rational(x) -> str:
    return str(Fraction(x))


def sign(x) -> int:
    return (x > 0) - (x < 0)


# -- vectors -----------------------------------------------------------------

def _check_dims(a, b):
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")


def dot(a, b):
    _check_dims(a, b)
    return sum(x * y for x, y in zip(a, b))


def sign_dot(a, b) -> int:
    """Exact sign of the inner product of two vectors."""
    return sign(dot(a, b))


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def det3(a, b, c):
    return dot(a, cross(b, c))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def scale(a, s):
    return tuple(x * s for x in a)


def neg(a):
    return tuple(-x for x in a)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def primitive(v) -> tuple[int, ...]:
    """Positive multiple of ``v`` with coprime integer coordinates."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no direction")
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


def approx_unit(v) -> tuple[Fraction, ...]:
    """``v`` divided by an integer approximation of its length.

    The result is a positive rational multiple of ``v`` (so it names the same
    ray) whose length is close to 1; used only to balance convex combinations.
    """
    p = primitive(v)
    n = math.isqrt(sum(x * x for x in p)) or 1
    return tuple(Fraction(x, n) for x in p)


@dataclass(frozen=True, eq=False)
class Ray:
    """A point of the direction sphere, stored as an unnormalized vector.

    Two rays are equal iff one direction is a positive multiple of the other.
    """
    direction: tuple
    canonical: bool = False
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if is_zero(self.direction):
            raise ValueError("ray direction must be nonzero")
        object.__setattr__(self, "key", primitive(self.direction))

    @classmethod
    def of(cls, v) -> "Ray":
        return cls(primitive(v))

    def __eq__(self, other):
        return isinstance(other, Ray) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __neg__(self) -> "Ray":
        return Ray(tuple(-x for x in self.key))

    @property
    def dim(self) -> int:
        return len(self.direction)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.key) + ")"


def canonical_ray(v) -> Ray:
    """Scale ``v`` so its first nonzero coordinate is +1."""
    if is_zero(v):
        raise ValueError("zero vector has no canonical ray")
    first = next(Fraction(x) for x in v if x != 0)
    return Ray(tuple(Fraction(x) / first for x in v), canonical=True)


# -- linear feasibility ------------------------------------------------------

@dataclass(frozen=True)
class LinearSystem:
    """Rows ``coefficients . x  (relation)  rhs`` over free variables."""
    constraints: tuple
    num_vars: int

    def __post_init__(self):
        rows = []
        for coeffs, rel, rhs in self.constraints:
            if len(coeffs) != self.num_vars:
                raise ValueError(
                    f"row has {len(coeffs)} coefficients, expected {self.num_vars}")
            if rel not in (LE, EQ, GE):
                raise ValueError(f"unknown relation {rel!r}")
            rows.append((tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs)))
        object.__setattr__(self, "constraints", tuple(rows))

    def satisfied_by(self, x: Sequence) -> bool:
        if len(x) != self.num_vars:
            return False
        for coeffs, rel, rhs in self.constraints:
            lhs = sum(c * v for c, v in zip(coeffs, x) if c)
            if rel == LE and not lhs <= rhs:
                return False
            if rel == GE and not lhs >= rhs:
                return False
            if rel == EQ and lhs != rhs:
                return False
        return True


def _sign_bounds(system: LinearSystem):
    """Split rows into plain nonnegativity bounds and everything else."""
    nonneg = set()
    rows = []
    for coeffs, rel, rhs in system.constraints:
        nz = [j for j, c in enumerate(coeffs) if c]
        if len(nz) == 1 and rhs == 0 and rel != EQ:
            c = coeffs[nz[0]]
            if (c > 0 and rel == GE) or (c < 0 and rel == LE):
                nonneg.add(nz[0])
                continue
        rows.append((coeffs, rel, rhs))
    return nonneg, rows


def lp_feasible(system: LinearSystem) -> list[Fraction] | None:
    """Find a rational point satisfying every row, or return None.

    Phase-1 simplex on a dense Fraction tableau with Bland's rule, so it
    always terminates and is deterministic.  Variables are free; single
    variable rows of the form ``x >= 0`` become sign restrictions instead
    of tableau rows.
    """
    nonneg, rows = _sign_bounds(system)
    nv = system.num_vars

    # column layout: x_j (or x_j+ and x_j-), then slacks, then artificials
    cols = []          # (var, +1|-1)
    for j in range(nv):
        cols.append((j, 1))
        if j not in nonneg:
            cols.append((j, -1))
    nx = len(cols)

    if not rows:
        return [Fraction(0)] * nv

    m = len(rows)
    norm = []
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = tuple(-c for c in coeffs)
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        norm.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in norm if rel != EQ)
    n_art = sum(1 for _, rel, _ in norm if rel != LE)
    width = nx + n_slack + n_art
    tab = []
    rhs_col = []
    basis = []
    s_at = nx
    a_at = nx + n_slack
    art_cols = set()
    for coeffs, rel, rhs in norm:
        row = [Fraction(0)] * width
        for k, (j, sgn) in enumerate(cols):
            c = coeffs[j]
            if c:
                row[k] = c if sgn > 0 else -c
        if rel == LE:
            row[s_at] = Fraction(1)
            basis.append(s_at)
            s_at += 1
        else:
            if rel == GE:
                row[s_at] = Fraction(-1)
                s_at += 1
            row[a_at] = Fraction(1)
            basis.append(a_at)
            art_cols.add(a_at)
            a_at += 1
        tab.append(row)
        rhs_col.append(rhs)

    # reduced costs of  min sum(artificials)
    cost = [Fraction(0)] * width
    for i in range(m):
        if basis[i] in art_cols:
            r = tab[i]
            for k in range(width):
                if r[k]:
                    cost[k] -= r[k]
    for k in art_cols:
        cost[k] = Fraction(0)

    while True:
        enter = next((k for k in range(width) if cost[k] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = rhs_col[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # phase-1 objective is bounded below by zero, so this cannot happen
            raise RuntimeError("unbounded phase-1 direction")
        _pivot(tab, rhs_col, cost, leave, enter)
        basis[leave] = enter

    infeas = sum(rhs_col[i] for i in range(m) if basis[i] in art_cols)
    if infeas != 0:
        return None

    value = [Fraction(0)] * width
    for i in range(m):
        value[basis[i]] = rhs_col[i]
    x = [Fraction(0)] * nv
    for k, (j, sgn) in enumerate(cols):
        if value[k]:
            x[j] += value[k] if sgn > 0 else -value[k]
    if not system.satisfied_by(x):
        raise AssertionError("simplex witness failed exact substitution")
    return x


def _pivot(tab, rhs_col, cost, r, c):
    prow = tab[r]
    p = prow[c]
    if p != 1:
        inv = 1 / p
        for k, v in enumerate(prow):
            if v:
                prow[k] = v * inv
        rhs_col[r] *= inv
    nz = [k for k, v in enumerate(prow) if v]
    pr = rhs_col[r]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[c]
        if f:
            for k in nz:
                row[k] -= f * prow[k]
            rhs_col[i] -= f * pr
    f = cost[c]
    if f:
        for k in nz:
            cost[k] -= f * prow[k]


def box_system(intervals: Iterable[tuple]) -> LinearSystem:
    """Product of closed intervals ``lo <= x_j <= hi`` as a LinearSystem."""
    intervals = list(intervals)
    n = len(intervals)
    rows = []
    for j, (lo, hi) in enumerate(intervals):
        e = [0] * n
        e[j] = 1
        rows.append((tuple(e), GE, lo))
        rows.append((tuple(e), LE, hi))
    return LinearSystem(tuple(rows), n)
