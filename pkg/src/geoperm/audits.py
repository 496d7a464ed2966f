"""Audits of the structural facts about popular cells, borders and removals.

Every audit returns an :class:`AuditReport`.  The pure checkers
(``consecutive_pair_violations``, ``k33_violations``) take plain data so they
can be fed fabricated inputs as negative controls.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import Arrangement
from .census import Census, PopularStats, vertex_indices
from .exact import EQ, GE, LinearSystem, cross, dot, lp_feasible, sign

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class AuditReport:
    name: str
    status: str
    rows: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


def _status(violations) -> str:
    return FAIL if violations else PASS


# -- consecutive pairs -------------------------------------------------------------

def consecutive_pair_violations(orders, pair1, pair2) -> list[str]:
    """Check four orders around a regular popular vertex on circles ``pair1``, ``pair2``.

    Bodies outside the two pairs must sit at the same position in every
    order, and each pair must be adjacent in every order.
    """
    out = []
    defining = set(pair1) | set(pair2)
    n = len(orders[0])
    positions = [{b: k for k, b in enumerate(o)} for o in orders]
    for b in range(n):
        if b in defining:
            continue
        spots = {pos[b] for pos in positions}
        if len(spots) > 1:
            out.append(f"body {b} moves between positions {sorted(spots)}")
    for pair in (pair1, pair2):
        for k, pos in enumerate(positions):
            if abs(pos[pair[0]] - pos[pair[1]]) != 1:
                out.append(f"pair {tuple(pair)} not adjacent in order {k}")
    return out


def audit_consecutive_pairs(census: Census, stats: PopularStats) -> AuditReport:
    arr = census.arrangement
    if arr.dim != 3:
        return AuditReport("consecutive_pairs", SKIP)
    rows = []
    bad = 0
    for vid in stats.popular_vertices:
        v = arr.vertices[vid]
        p1, p2 = (arr.circles[c].pair for c in v.circles)
        orders = [census.faces[f].order for f in arr.vertex_faces(vid)]
        problems = consecutive_pair_violations(orders, p1, p2)
        bad += bool(problems)
        rows.append({"vertex": vid, "pairs": f"{p1}|{p2}", "ok": not problems,
                     "violations": "; ".join(problems)})
    return AuditReport("consecutive_pairs", FAIL if bad else PASS, rows,
                       {"checked": len(rows), "violations": bad})


# -- popular line ------------------------------------------------------------------

def popular_line(h1, h2):
    """The line where two separating planes meet, as (point, direction)."""
    d = cross(h1.normal, h2.normal)
    dd = dot(d, d)
    if dd == 0:
        raise ValueError(f"planes {h1.pair} and {h2.pair} are parallel")
    a = cross(h2.normal, d)
    b = cross(d, h1.normal)
    point = tuple(Fraction(h1.offset * x + h2.offset * y) / dd for x, y in zip(a, b))
    return point, d


def line_meets_body(point, direction, body) -> bool:
    """Exact LP: some point + t*direction is a convex combination of the body's vertices."""
    d = len(point)
    k = len(body.vertices)
    rows = []
    for c in range(d):
        row = [direction[c]] + [-v[c] for v in body.vertices]
        rows.append((row, EQ, -point[c]))
    rows.append(([0] + [1] * k, EQ, 1))
    for t in range(k):
        e = [0] * (k + 1)
        e[t + 1] = 1
        rows.append((e, GE, 0))
    return lp_feasible(LinearSystem(tuple(rows), k + 1)) is not None


def audit_popular_line(census: Census, stats: PopularStats) -> AuditReport:
    arr = census.arrangement
    system = census.system
    if arr.dim != 3:
        return AuditReport("popular_line", SKIP)
    rows = []
    bad = 0
    for vid in stats.popular_vertices:
        a, b = arr.vertices[vid].circles
        point, direction = popular_line(system.hyperplanes[a], system.hyperplanes[b])
        defining = vertex_indices(arr, vid)
        problems = []
        for q, body in enumerate(system.bodies):
            meets = line_meets_body(point, direction, body)
            if meets == (q in defining):
                problems.append(f"body {q} {'met' if meets else 'missed'}")
        bad += bool(problems)
        rows.append({"vertex": vid, "point": "(" + ",".join(map(str, point)) + ")",
                     "direction": "(" + ",".join(map(str, direction)) + ")",
                     "ok": not problems, "violations": "; ".join(problems)})
    return AuditReport("popular_line", FAIL if bad else PASS, rows,
                       {"checked": len(rows), "violations": bad})


# -- arrangement of the circles through one body -------------------------------------

def circles_through(arr: Arrangement, i: int) -> list[int]:
    return [c for c, circ in enumerate(arr.circles) if i in circ.pair]


def zone_arrangement(arr: Arrangement, i: int) -> tuple[Arrangement, list[int]]:
    idx = circles_through(arr, i)
    return Arrangement([arr.circles[c] for c in idx], arr.dim), idx


def k33_incidences(arr: Arrangement, i: int):
    """For each face of ``arr``: (face of A_i containing it, set of A_i circles it has edges on)."""
    sub, idx = zone_arrangement(arr, i)
    local = {c: k for k, c in enumerate(idx)}
    table = []
    for f in arr.faces:
        f0 = sub.face_index[tuple(f.sign_vector[c] for c in idx)]
        table.append((f0, frozenset(local[c] for c in f.circles if c in local)))
    return sub, table


def k33_violations(table) -> list[tuple]:
    """(f0, c0, c1, count) for every edge pair of f0 touched by 3+ faces that also touch a third edge.

    Edges of a convex face lie on distinct circles, so an edge of f0 is
    named by its circle.
    """
    counts = Counter()
    for f0, touched in table:
        if len(touched) < 3:
            continue
        for c0, c1 in itertools.combinations(sorted(touched), 2):
            counts[(f0, c0, c1)] += 1
    return [(f0, c0, c1, k) for (f0, c0, c1), k in sorted(counts.items()) if k > 2]


def audit_k33(census: Census, i: int) -> AuditReport:
    arr = census.arrangement
    if arr.dim != 3:
        return AuditReport(f"k33[{i}]", SKIP)
    _, table = k33_incidences(arr, i)
    bad = k33_violations(table)
    rows = [{"body": i, "f0": f0, "edge0": c0, "edge1": c1, "faces": k} for f0, c0, c1, k in bad]
    return AuditReport(f"k33[{i}]", _status(bad), rows, {"violations": len(bad)})


def zone_square_metric(arr: Arrangement, i: int) -> dict:
    """Sum over faces of A_i of (number of edges)^2, and its ratio to (n-1)^2."""
    if arr.dim != 3:
        raise ValueError("zone metric needs d=3")
    sub, idx = zone_arrangement(arr, i)
    total = 0
    for f0 in sub.faces:
        k = len(f0.boundary)
        if k != len(f0.vertices) or (k and k != len(set(f0.circles))):
            raise AssertionError(f"face {f0.id} walk disagrees with its incidences")
        total += k * k
    m = len(idx)
    return {"body": i, "circles": m, "faces": sub.F, "sum_sq": total,
            "ratio": Fraction(total, m * m) if m else Fraction(0)}


# -- removals ----------------------------------------------------------------------

def audit_removal_identities(census: Census, stats: PopularStats, removals) -> AuditReport:
    """Exact averages over all single removals against the surviving and 1-level borders.

    Expects ``stats`` annotated by ``conflict_weights``.  Checks, for edge
    (E) and slice (V) borders:
      avg E0(R) >= ((n-4) E0_reg + E1_reg) / n        the inequality
      sum E0_reg(R) == (n-4) E0_reg + E1_reg          regular-only equality
      sum E0(R) == (n-4) E0_reg + (n-3) E0_deg + E1   full count, degenerate survival (n-3)/n
    plus monotone certification of every certified face.
    """
    n = census.n
    arr = census.arrangement
    if arr.dim != 3:
        return AuditReport("removal_identities", SKIP)
    rows = []
    details = {}
    ok = True
    for kind, tag in (("edge", "E"), ("slice", "V")):
        reg0 = stats.level0(kind, regular=True)
        deg0 = stats.level0(kind, regular=False)
        reg1 = stats.weighted_level1(kind, regular=True)
        all1 = stats.weighted_level1(kind)
        sub_all = sum(r.stats.level0(kind) for r in removals)
        sub_reg = sum(r.stats.level0(kind, regular=True) for r in removals)
        lhs = Fraction(sub_all, n)
        rhs = Fraction((n - 4) * reg0 + reg1, n)
        inequality = lhs >= rhs
        regular_eq = sub_reg == (n - 4) * reg0 + reg1
        full_eq = sub_all == (n - 4) * reg0 + (n - 3) * deg0 + all1
        ok &= inequality and regular_eq and full_eq
        details[f"removal_identity_{tag}"] = {
            "lhs": str(lhs), "rhs": str(rhs), "gap": str(lhs - rhs),
            "inequality": inequality, "regular_equality": regular_eq, "full_count": full_eq}
        rows.append({"kind": kind, "n": n, "level0_regular": reg0, "level0_degenerate": deg0,
                     "level1_weighted_regular": reg1, "level1_weighted": all1,
                     "sum_sub_level0": sub_all, "sum_sub_level0_regular": sub_reg,
                     "lhs": str(lhs), "rhs": str(rhs), "gap": str(lhs - rhs),
                     "inequality": inequality, "regular_equality": regular_eq,
                     "full_count": full_eq})
    mono = sum(len(r.monotone_violations) for r in removals)
    details["monotone_violations"] = mono
    ok &= mono == 0
    return AuditReport("removal_identities", PASS if ok else FAIL, rows, details)


def slice_neighbors(arr: Arrangement, vid: int, sa: int, sb: int):
    """The two slice borders a 0-level slice border at a regular vertex charges.

    Walks away from the slice along each of its two circles to the next
    vertex and returns [(vertex, face, crossed circle), ...].
    """
    v = arr.vertices[vid]
    w = v.ray.key
    a, b = v.circles
    out = []
    for along, crossed, s_along, s_crossed in ((a, b, sa, sb), (b, a, sb, sa)):
        tangent = cross(arr.normals[along], w)
        step = 1 if sign(dot(arr.normals[crossed], tangent)) == -s_crossed else -1
        nid = arr.neighbor_on_circle(vid, along, step)
        nb = arr.vertices[nid]
        other = nb.circles[1] if nb.circles[0] == along else nb.circles[0]
        sig = list(nb.signs)
        sig[along] = s_along
        sig[other] = sign(dot(arr.normals[other], w))
        out.append((nid, arr.face_index[tuple(sig)], crossed))
    return out


def weight_one_double_charges(census: Census, stats: PopularStats) -> dict:
    """Count 1-level slice borders of weight 1 charged by two 0-level slice borders.

    Needs conflict-annotated ``stats``.  Also verifies that every charged
    border is 1-level and in conflict with a body of the crossed circle.
    """
    arr = census.arrangement
    if arr.dim != 3:
        return {"case_popular_edge": 0, "case_neighbors": 0, "charged": 0,
                "weight1_double": 0, "inconsistent": 0}
    cert = census.certified
    by_key = {(b.vertex, b.cell): b for b in stats.slice_borders}
    edge_level = {(b.vertex, b.choice): b.level for b in stats.edge_borders}
    charges = Counter()
    case_i = case_ii = inconsistent = 0
    for b in stats.slice_borders:
        if b.level != 0 or not b.regular:
            continue
        v = arr.vertices[b.vertex]
        a, c = v.circles
        sa, sc = b.choice
        # edges bounding the slice: on circle a inside hemisphere c:sc, on c inside a:sa
        if edge_level[(b.vertex, (c, sc))] == 0 or edge_level[(b.vertex, (a, sa))] == 0:
            case_i += 1
            continue
        case_ii += 1
        for nid, fid, crossed in slice_neighbors(arr, b.vertex, sa, sc):
            target = by_key[(nid, fid)]
            charges[(nid, fid)] += 1
            expect = set(arr.circles[crossed].pair) - vertex_indices(arr, nid)
            if cert[fid] or target.level != 1 or not expect & set(target.conflicts):
                inconsistent += 1
    double_w1 = sum(1 for key, k in charges.items()
                    if k == 2 and by_key[key].level == 1 and len(by_key[key].conflicts) == 1)
    return {"case_popular_edge": case_i, "case_neighbors": case_ii, "charged": len(charges),
            "weight1_double": double_w1, "inconsistent": inconsistent}


# -- reference curves ------------------------------------------------------------------

def bound_curves(n: int, d: int) -> dict:
    """Reference growth curves with unit constants and log base 2."""
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    power = n ** (2 * d - 3)
    lg = math.log2(n)
    return {"wenger": n ** (2 * d - 2),
            "main": (power, lg, power * lg),
            "planar": 2 * n - 2,
            "lower": n ** (d - 1)}
