"""Line transversals with a prescribed direction, and orders induced by directions.

A line with direction u meets a convex body iff the body's projection along
u contains the line's projection.  ``TransversalProblem`` works in that
projected picture with integer arithmetic only: bodies are scaled to integer
coordinates, projected onto a coordinate plane, and the projected hulls are
clipped against each other with homogeneous integer points.  The single-LP
formulation (``method="lp"``) is kept as an independent route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import EQ, GE, LinearSystem, Ray, lp_feasible, primitive


@dataclass(frozen=True)
class LineWitness:
    """A line ``base_point + t * direction`` meeting every listed body.

    ``weights[i]`` expresses the point at parameter ``params[i]`` as a convex
    combination ``((vertex index, weight), ...)`` of body i's vertices.
    """
    direction: Ray
    base_point: tuple
    params: tuple
    weights: tuple

    def point(self, i):
        u = self.direction.key
        t = self.params[i]
        return tuple(p + t * x for p, x in zip(self.base_point, u))

    def order(self) -> tuple:
        return tuple(sorted(range(len(self.params)), key=lambda i: self.params[i]))

    def reversed(self) -> "LineWitness":
        return LineWitness(-self.direction, self.base_point,
                           tuple(-t for t in self.params), self.weights)

    def restrict(self, keep) -> "LineWitness":
        """Same line, listing only the bodies in ``keep`` (old indices)."""
        return LineWitness(self.direction, self.base_point,
                           tuple(self.params[i] for i in keep),
                           tuple(self.weights[i] for i in keep))

    def verify(self, bodies) -> bool:
        if len(self.params) != len(bodies):
            return False
        for i, body in enumerate(bodies):
            w = self.weights[i]
            if any(lam < 0 for _, lam in w) or sum(lam for _, lam in w) != 1:
                return False
            d = body.dim
            x = [Fraction(0)] * d
            for k, lam in w:
                v = body.vertices[k]
                for c in range(d):
                    x[c] += lam * v[c]
            if tuple(x) != self.point(i):
                return False
        return True


# -- integer planar helpers ---------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points):
    """Counterclockwise hull without collinear points (1, 2 or more vertices)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def _halfplanes(hull):
    """Closed halfplanes a*x + b*y + c >= 0 whose intersection is the hull."""
    r = len(hull)
    if r == 1:
        (px, py), = hull
        return [(1, 0, -px), (-1, 0, px), (0, 1, -py), (0, -1, py)]
    if r == 2:
        (px, py), (qx, qy) = hull
        dx, dy = qx - px, qy - py
        return [(-dy, dx, dy * px - dx * py), (dy, -dx, -(dy * px - dx * py)),
                (dx, dy, -(dx * px + dy * py)), (-dx, -dy, dx * qx + dy * qy)]
    out = []
    for k in range(r):
        (px, py), (qx, qy) = hull[k], hull[(k + 1) % r]
        dx, dy = qx - px, qy - py
        out.append((-dy, dx, dy * px - dx * py))
    return out


def _clip(poly, hp):
    a, b, c = hp
    vals = [a * X + b * Y + c * W for X, Y, W in poly]
    n = len(poly)
    out = []
    for i in range(n):
        P, sP = poly[i], vals[i]
        j = i + 1 if i + 1 < n else 0
        Q, sQ = poly[j], vals[j]
        if sP >= 0:
            out.append(P)
        if (sP > 0 > sQ) or (sP < 0 < sQ):
            X = sP * Q[0] - sQ * P[0]
            Y = sP * Q[1] - sQ * P[1]
            W = sP * Q[2] - sQ * P[2]
            if W < 0:
                X, Y, W = -X, -Y, -W
            g = math.gcd(math.gcd(X, Y), W)
            out.append((X // g, Y // g, W // g))
    if len(out) > 1:
        dedup = [p for k, p in enumerate(out) if p != out[k - 1]]
        out = dedup or out[:1]
    return out


def _barycentric(hull, q):
    """Convex weights of hull vertices (indices into ``hull``) summing to point q."""
    r = len(hull)
    qx, qy = q
    if r == 1:
        return [(0, Fraction(1))]
    if r == 2:
        (px, py), (sx, sy) = hull
        dx, dy = sx - px, sy - py
        lam = ((qx - px) * dx + (qy - py) * dy) / Fraction(dx * dx + dy * dy)
        return [(0, 1 - lam), (1, lam)]
    h0 = hull[0]
    for k in range(1, r - 1):
        a, b = hull[k], hull[k + 1]
        area = _cross(h0, a, b)
        w_a = ((qx - h0[0]) * (b[1] - h0[1]) - (qy - h0[1]) * (b[0] - h0[0])) / Fraction(area)
        w_b = ((a[0] - h0[0]) * (qy - h0[1]) - (a[1] - h0[1]) * (qx - h0[0])) / Fraction(area)
        if w_a >= 0 and w_b >= 0 and w_a + w_b <= 1:
            return [(0, 1 - w_a - w_b), (k, w_a), (k + 1, w_b)]
    raise AssertionError("point outside projected hull")


class TransversalProblem:
    """Prepared bodies for repeated ``direction -> transversal`` queries."""

    def __init__(self, bodies):
        self.bodies = list(bodies)
        if not self.bodies:
            raise ValueError("no bodies")
        self.dim = self.bodies[0].dim
        den = 1
        for b in self.bodies:
            for v in b.vertices:
                for x in v:
                    den = den * x.denominator // math.gcd(den, x.denominator)
        self.scale = den
        self.int_vertices = [[tuple(int(x * den) for x in v) for v in b.vertices]
                             for b in self.bodies]

    def solve(self, direction, method="project") -> LineWitness | None:
        if isinstance(direction, Ray):
            u = direction.key
        else:
            u = primitive(direction)
        if len(u) != self.dim:
            raise ValueError("direction has the wrong dimension")
        if method == "lp":
            return _solve_lp(self.bodies, u)
        if self.dim == 2:
            return self._solve2(u)
        return self._solve3(u)

    def _axis(self, u):
        return max(range(self.dim), key=lambda i: (abs(u[i]), -i))

    def _solve2(self, u):
        k = self._axis(u)
        j = 1 - k
        uk, uj = u[k], u[j]
        spans = []
        lo_all, hi_all = None, None
        for verts in self.int_vertices:
            vals = [v[j] * uk - v[k] * uj for v in verts]
            lo, hi = min(vals), max(vals)
            spans.append((lo, vals.index(lo), hi, vals.index(hi)))
            lo_all = lo if lo_all is None or lo > lo_all else lo_all
            hi_all = hi if hi_all is None or hi < hi_all else hi_all
            if lo_all > hi_all:
                return None
        q = Fraction(lo_all + hi_all, 2)
        weights = []
        for lo, ilo, hi, ihi in spans:
            if lo == hi:
                weights.append(((ilo, Fraction(1)),))
            else:
                lam = (q - lo) / (hi - lo)
                weights.append(tuple(sorted(((ilo, 1 - lam), (ihi, lam)))))
        base = [Fraction(0), Fraction(0)]
        base[j] = q / (self.scale * uk)
        return self._finish(u, k, tuple(base), weights)

    def _solve3(self, u):
        k = self._axis(u)
        j1, j2 = [i for i in range(3) if i != k]
        uk, u1, u2 = u[k], u[j1], u[j2]
        projected = []
        bx0 = by0 = bx1 = by1 = None
        for verts in self.int_vertices:
            pts = [(v[j1] * uk - v[k] * u1, v[j2] * uk - v[k] * u2) for v in verts]
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
            if bx0 is None:
                bx0, bx1, by0, by1 = x0, x1, y0, y1
            else:
                bx0, bx1 = max(bx0, x0), min(bx1, x1)
                by0, by1 = max(by0, y0), min(by1, y1)
            if bx0 > bx1 or by0 > by1:
                return None
            projected.append(pts)
        hulls = [_hull(pts) for pts in projected]
        region = [(x, y, 1) for x, y in hulls[0]]
        for hull in hulls[1:]:
            for hp in _halfplanes(hull):
                region = _clip(region, hp)
                if not region:
                    return None
        r = len(region)
        qx = sum(Fraction(X, W) for X, _, W in region) / r
        qy = sum(Fraction(Y, W) for _, Y, W in region) / r
        weights = []
        for pts, hull in zip(projected, hulls):
            first = {}
            for idx, p in enumerate(pts):
                first.setdefault(p, idx)
            weights.append(tuple(sorted((first[hull[h]], lam)
                                        for h, lam in _barycentric(hull, (qx, qy)) if lam)))
        base = [Fraction(0)] * 3
        base[j1] = qx / (self.scale * uk)
        base[j2] = qy / (self.scale * uk)
        return self._finish(u, k, tuple(base), weights)

    def _finish(self, u, k, base, weights):
        params = []
        for body, w in zip(self.bodies, weights):
            xk = sum(lam * body.vertices[idx][k] for idx, lam in w)
            params.append(Fraction(xk) / u[k])
        return LineWitness(Ray(u), base, tuple(params), tuple(weights))


def _solve_lp(bodies, u):
    """One LP: base point on the plane x_k = 0, a parameter and convex weights per body."""
    d = len(u)
    k = max(range(d), key=lambda i: (abs(u[i]), -i))
    free_coords = [c for c in range(d) if c != k]
    n = len(bodies)
    sizes = [len(b.vertices) for b in bodies]
    n_p = len(free_coords)
    offs = []
    at = n_p + n
    for s in sizes:
        offs.append(at)
        at += s
    nv = at
    rows = []
    for i, body in enumerate(bodies):
        for c in range(d):
            row = [0] * nv
            if c != k:
                row[free_coords.index(c)] = 1
            row[n_p + i] = u[c]
            for t, v in enumerate(body.vertices):
                row[offs[i] + t] = -v[c]
            rows.append((row, EQ, 0))
        row = [0] * nv
        for t in range(sizes[i]):
            row[offs[i] + t] = 1
        rows.append((row, EQ, 1))
    for col in range(n_p + n, nv):
        e = [0] * nv
        e[col] = 1
        rows.append((e, GE, 0))
    sol = lp_feasible(LinearSystem(tuple(rows), nv))
    if sol is None:
        return None
    base = [Fraction(0)] * d
    for idx, c in enumerate(free_coords):
        base[c] = sol[idx]
    params = tuple(sol[n_p:n_p + n])
    weights = tuple(tuple((t, sol[offs[i] + t]) for t in range(sizes[i]) if sol[offs[i] + t])
                    for i in range(n))
    return LineWitness(Ray(u), tuple(base), params, weights)


def transversal_for_direction(direction, bodies, method="project") -> LineWitness | None:
    """A line with the given direction meeting every body, or None."""
    if isinstance(direction, Ray):
        pass
    elif all(x == 0 for x in direction):
        raise ValueError("zero direction")
    return TransversalProblem(bodies).solve(direction, method)


# -- orders ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedOrder:
    sequence: tuple
    source: object = None

    def reversed(self) -> "OrientedOrder":
        return OrientedOrder(tuple(reversed(self.sequence)), self.source)


@dataclass(frozen=True)
class Cyclic:
    cycle: tuple


@dataclass(frozen=True)
class OnCircle:
    pair: tuple


def tournament_order(signs, pair_list, n):
    """Linear order from pairwise signs (+ means first index precedes), or a 3-cycle."""
    beats = [set() for _ in range(n)]
    for s, (i, j) in zip(signs, pair_list):
        if s > 0:
            beats[i].add(j)
        else:
            beats[j].add(i)
    wins = [len(b) for b in beats]
    if sorted(wins) == list(range(n)):
        return OrientedOrder(tuple(sorted(range(n), key=lambda i: -wins[i])))
    for a in range(n):
        for b in beats[a]:
            for c in beats[b]:
                if a in beats[c]:
                    return Cyclic(_rotate_min((a, b, c)))
    raise AssertionError("non-transitive tournament without a 3-cycle")


def _rotate_min(cyc):
    k = cyc.index(min(cyc))
    return cyc[k:] + cyc[:k]


def order_for_direction(direction, system):
    """Order forced on any transversal with this direction by the separators."""
    u = direction.key if isinstance(direction, Ray) else direction
    signs = []
    pair_list = []
    for h in system.hyperplanes:
        s = sum(a * b for a, b in zip(u, h.normal))
        if s == 0:
            return OnCircle(h.pair)
        signs.append(1 if s > 0 else -1)
        pair_list.append(h.pair)
    res = tournament_order(signs, pair_list, system.n)
    if isinstance(res, OrientedOrder):
        return OrientedOrder(res.sequence, Ray(tuple(u)))
    return res
