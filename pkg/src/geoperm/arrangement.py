"""Arrangements of great circles on S^2 (and direction points on S^1).

Every point of the sphere is an integer ray, so all incidences and sidedness
tests are exact.  Faces of a great-circle arrangement are convex, hence a
face is identified by its sign vector alone; edges are identified by sign
vectors with a single zero, vertices by their primitive ray.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import NamedTuple

from .exact import Ray, approx_unit, cross, primitive


class GeneralPositionError(ValueError):
    pass


@dataclass(frozen=True)
class GreatCircle:
    """Directions parallel to the separator of ``pair``.

    ``normal`` is the separator's normal scaled to coprime integers, so the
    open hemisphere ``u . normal > 0`` holds the directions crossing from the
    first body's side to the second's.
    """
    pair: tuple
    normal: tuple


@dataclass
class ArrVertex:
    id: int
    ray: Ray
    circles: tuple
    regular: bool
    signs: tuple = field(repr=False, default=())


@dataclass
class ArrEdge:
    id: int
    circle: int
    endpoints: tuple      # counterclockwise about the circle normal
    side_faces: tuple     # (face on + side, face on - side)
    midpoint: tuple = field(repr=False, default=())
    signs: tuple = field(repr=False, default=())


@dataclass
class ArrFace:
    id: int
    sign_vector: tuple
    boundary: tuple = ()        # ((edge id, +1 | -1), ...) walked with the face on the left
    vertices: tuple = ()        # vertex ids in boundary order
    circles: tuple = ()         # circles contributing an edge (d=2: an endpoint)
    interior_samples: tuple = ()
    anchor: tuple = field(repr=False, default=())   # d=2: arc midpoint


class Cell(NamedTuple):
    kind: str   # "face" | "edge" | "vertex"
    id: int


def _sign(x):
    return (x > 0) - (x < 0)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def circles_of(system) -> list[GreatCircle]:
    """One great circle per separator, orientation preserved."""
    return [GreatCircle(h.pair, primitive(h.normal)) for h in system.hyperplanes]


def intersect_circles(c1: GreatCircle, c2: GreatCircle) -> tuple[Ray, Ray]:
    d = cross(c1.normal, c2.normal)
    if all(x == 0 for x in d):
        raise GeneralPositionError(f"circles {c1.pair} and {c2.pair} coincide")
    r = Ray.of(d)
    return r, -r


def _plane_basis(n):
    k = min(range(3), key=lambda i: (abs(n[i]), i))
    axis = [0, 0, 0]
    axis[k] = 1
    e1 = primitive(cross(n, axis))
    e2 = cross(n, e1)
    return e1, e2


def _angular_key_cmp(coords):
    def half(p):
        x, y = p
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(i, j):
        p, q = coords[i], coords[j]
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        c = p[0] * q[1] - p[1] * q[0]
        return -1 if c > 0 else (1 if c < 0 else 0)
    return cmp_to_key(cmp)


class Arrangement:
    """Vertices, edges and faces cut out by a list of great circles."""

    def __init__(self, circles, dim=3):
        self.dim = dim
        self.circles = list(circles)
        self.normals = [tuple(c.normal) for c in self.circles]
        self.vertices: list[ArrVertex] = []
        self.edges: list[ArrEdge] = []
        self.faces: list[ArrFace] = []
        self.face_index: dict = {}
        self.edge_index: dict = {}
        self.vertex_index: dict = {}
        self.circle_vertices: list[list[int]] = [[] for _ in self.circles]
        self.position_on_circle: dict = {}
        if dim == 3:
            self._build3()
        elif dim == 2:
            self._build2()
        else:
            raise ValueError(f"unsupported dimension {dim}")
        self.antipode_face = [self.face_index[tuple(-s for s in f.sign_vector)] for f in self.faces]
        self.antipode_vertex = [self.vertex_index[tuple(-x for x in v.ray.key)] for v in self.vertices]
        self.antipode_edge = [self.edge_index[tuple(-s for s in e.signs)]
                              for e in self.edges]
        for f in self.faces:
            f.interior_samples = tuple(self.interior_sample(f.id, 1))

    # -- predicates ------------------------------------------------------------

    def signs(self, u) -> tuple:
        if self.dim == 3:
            u0, u1, u2 = u
            return tuple(_sign(u0 * a + u1 * b + u2 * c) for a, b, c in self.normals)
        u0, u1 = u
        return tuple(_sign(u0 * a + u1 * b) for a, b in self.normals)

    def locate(self, u) -> Cell:
        key = u.key if isinstance(u, Ray) else primitive(u)
        s = self.signs(key)
        zeros = s.count(0)
        if zeros == 0:
            return Cell("face", self.face_index[s])
        if self.dim == 3 and zeros == 1:
            return Cell("edge", self.edge_index[s])
        if key in self.vertex_index:
            return Cell("vertex", self.vertex_index[key])
        raise GeneralPositionError(f"direction {key} lies on {zeros} circles")

    def face_of_signs(self, s):
        return self.face_index.get(tuple(s))

    @property
    def V(self):
        return len(self.vertices)

    @property
    def E(self):
        return len(self.edges)

    @property
    def F(self):
        return len(self.faces)

    # -- construction: S^2 -------------------------------------------------------

    def _add_vertex(self, key, circs, regular):
        if key in self.vertex_index:
            other = self.vertices[self.vertex_index[key]].circles
            trio = sorted(set(other) | set(circs))
            raise GeneralPositionError(
                "circles " + ", ".join(str(self.circles[c].pair) for c in trio) + " are concurrent")
        vid = len(self.vertices)
        self.vertex_index[key] = vid
        s = self.signs(key)
        self.vertices.append(ArrVertex(vid, Ray(key), circs, regular, s))
        for c in circs:
            self.circle_vertices[c].append(vid)
        return vid

    def _build3(self):
        m = len(self.circles)
        for a in range(m):
            for b in range(a + 1, m):
                d = cross(self.normals[a], self.normals[b])
                if d == (0, 0, 0):
                    raise GeneralPositionError(
                        f"circles {self.circles[a].pair} and {self.circles[b].pair} coincide")
                d = primitive(d)
                regular = not (set(self.circles[a].pair) & set(self.circles[b].pair))
                self._add_vertex(d, (a, b), regular)
                self._add_vertex(tuple(-x for x in d), (a, b), regular)

        if m <= 1:
            signs_list = [()] if m == 0 else [(1,), (-1,)]
            for s in signs_list:
                self._new_face(s)
            if m == 1:
                self.faces[0].circles = (0,)
                self.faces[1].circles = (0,)
            return

        for c in range(m):
            e1, e2 = _plane_basis(self.normals[c])
            ids = self.circle_vertices[c]
            coords = {v: (_dot(self.vertices[v].ray.key, e1), _dot(self.vertices[v].ray.key, e2))
                      for v in ids}
            ids.sort(key=_angular_key_cmp(coords))
            for pos, v in enumerate(ids):
                self.position_on_circle[(c, v)] = pos

        half_edges = []   # (edge id, dir, start, end, face signs)
        for c in range(m):
            ids = self.circle_vertices[c]
            k = len(ids)
            n = self.normals[c]
            for pos in range(k):
                a, b = ids[pos], ids[(pos + 1) % k]
                ra, rb = self.vertices[a].ray.key, self.vertices[b].ray.key
                if all(x == -y for x, y in zip(ra, rb)):
                    mid = primitive(cross(n, ra))
                else:
                    mid = primitive(tuple(x + y for x, y in zip(approx_unit(ra), approx_unit(rb))))
                s = list(self.signs(mid))
                if s[c] != 0 or s.count(0) != 1:
                    raise GeneralPositionError(f"edge midpoint on circle {c} is not interior")
                eid = len(self.edges)
                self.edges.append(ArrEdge(eid, c, (a, b), (None, None), mid, tuple(s)))
                self.edge_index[tuple(s)] = eid
                s[c] = 1
                plus = tuple(s)
                s[c] = -1
                minus = tuple(s)
                half_edges.append((eid, 1, a, b, plus))
                half_edges.append((eid, -1, b, a, minus))

        by_face: dict = {}
        for he in half_edges:
            by_face.setdefault(he[4], []).append(he)
        for s in sorted(by_face, key=lambda t: tuple(-x for x in t)):
            hes = by_face[s]
            fid = self._new_face(s)
            nxt = {he[2]: he for he in hes}
            if len(nxt) != len(hes):
                raise GeneralPositionError("face boundary revisits a vertex")
            start = min(hes, key=lambda he: (he[0], he[1]))
            walk = [start]
            while True:
                he = nxt[walk[-1][3]]
                if he is start:
                    break
                walk.append(he)
            if len(walk) != len(hes):
                raise GeneralPositionError("face boundary is not a single cycle")
            face = self.faces[fid]
            face.boundary = tuple((he[0], he[1]) for he in walk)
            face.vertices = tuple(he[2] for he in walk)
            face.circles = tuple(sorted({self.edges[he[0]].circle for he in walk}))
            for eid, d, *_ in walk:
                e = self.edges[eid]
                sf = list(e.side_faces)
                sf[0 if d > 0 else 1] = fid
                e.side_faces = tuple(sf)

    def _new_face(self, s):
        fid = len(self.faces)
        self.faces.append(ArrFace(fid, tuple(s)))
        self.face_index[tuple(s)] = fid
        return fid

    # -- construction: S^1 -------------------------------------------------------

    def _build2(self):
        m = len(self.circles)
        for c in range(m):
            a, b = self.normals[c]
            p = primitive((-b, a))
            self._add_vertex(p, (c,), True)
            self._add_vertex(tuple(-x for x in p), (c,), True)
        if m == 0:
            self._new_face(())
            return
        order = list(range(len(self.vertices)))
        coords = {v: self.vertices[v].ray.key for v in order}
        order.sort(key=_angular_key_cmp(coords))
        self.circle_order = order
        k = len(order)
        for pos in range(k):
            a, b = order[pos], order[(pos + 1) % k]
            ra, rb = self.vertices[a].ray.key, self.vertices[b].ray.key
            if ra[0] == -rb[0] and ra[1] == -rb[1]:
                mid = (-ra[1], ra[0])
            else:
                mid = primitive(tuple(x + y for x, y in zip(approx_unit(ra), approx_unit(rb))))
            s = self.signs(mid)
            if 0 in s:
                raise GeneralPositionError("arc midpoint lies on a circle")
            fid = self._new_face(s)
            face = self.faces[fid]
            face.vertices = (a, b)
            face.circles = tuple(sorted({self.vertices[a].circles[0], self.vertices[b].circles[0]}))
            face.anchor = mid

    # -- incidences ---------------------------------------------------------------

    def slice_face(self, vid, sa, sb) -> int:
        """Face at vertex ``vid`` on side ``sa`` of its first circle, ``sb`` of its second."""
        v = self.vertices[vid]
        a, b = v.circles
        s = list(v.signs)
        s[a], s[b] = sa, sb
        return self.face_index[tuple(s)]

    def vertex_faces(self, vid) -> list[int]:
        return [self.slice_face(vid, sa, sb) for sa in (1, -1) for sb in (1, -1)]

    def vertex_edges(self, vid) -> list[int]:
        v = self.vertices[vid]
        out = []
        for c in v.circles:
            for sgn in (1, -1):
                s = list(v.signs)
                other = v.circles[1] if c == v.circles[0] else v.circles[0]
                s[other] = sgn
                out.append(self.edge_index[tuple(s)])
        return out

    def neighbor_on_circle(self, vid, circle, step) -> int:
        """Next vertex along ``circle``; step=+1 is counterclockwise about its normal."""
        ids = self.circle_vertices[circle]
        pos = self.position_on_circle[(circle, vid)]
        return ids[(pos + step) % len(ids)]

    # -- sampling -------------------------------------------------------------------

    def _inside(self, fid, u) -> bool:
        return self.signs(u) == self.faces[fid].sign_vector

    def _candidates(self, fid):
        face = self.faces[fid]
        s = face.sign_vector
        if self.dim == 2:
            yield from self._arc_candidates(face)
            return
        if not face.vertices:
            yield from self._cap_candidates(face)
            return
        units = [approx_unit(self.vertices[v].ray.key) for v in face.vertices]
        k = len(units)
        centroid = tuple(sum(u[i] for u in units) / k for i in range(3))
        inward = [0, 0, 0]
        for c in face.circles:
            nu = approx_unit(self.normals[c])
            for i in range(3):
                inward[i] += s[c] * nu[i]
        inward = tuple(inward)
        centers = []
        if any(inward):
            centers.append(approx_unit(inward))
        centers.append(centroid)
        yield from centers
        for alpha in (Fraction(1, 2), Fraction(3, 4), Fraction(7, 8), Fraction(1, 4)):
            for ctr in centers:
                for u in units:
                    yield tuple(ctr[i] * (1 - alpha) + u[i] * alpha for i in range(3))
        # last resort: walk inward from an edge midpoint
        for eid, _ in face.boundary:
            e = self.edges[eid]
            n = self.normals[e.circle]
            mid = e.midpoint
            eps = Fraction(1)
            for _ in range(200):
                yield tuple(mid[i] + eps * s[e.circle] * n[i] for i in range(3))
                eps /= 2

    def _cap_candidates(self, face):
        if not face.sign_vector:
            yield from [(0, 0, 1), (1, 0, 0), (0, 1, 0), (0, 0, -1), (-1, 0, 0), (0, -1, 0),
                        (1, 1, 1), (-1, -1, -1)]
            return
        n = self.normals[0]
        s = face.sign_vector[0]
        e1, e2 = _plane_basis(n)
        top = tuple(s * x for x in approx_unit(n))
        u1, u2 = approx_unit(e1), approx_unit(e2)
        yield top
        for t in (Fraction(1, 2), Fraction(1), Fraction(2)):
            for a, b in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                yield tuple(top[i] + t * (a * u1[i] + b * u2[i]) for i in range(3))

    def _arc_candidates(self, face):
        if not face.vertices:
            yield from [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)]
            return
        a, b = face.vertices
        ua = approx_unit(self.vertices[a].ray.key)
        ub = approx_unit(self.vertices[b].ray.key)
        mid = approx_unit(face.anchor)
        yield mid
        for alpha in (Fraction(1, 2), Fraction(3, 4), Fraction(7, 8), Fraction(15, 16)):
            for u in (ua, ub):
                yield tuple(mid[i] * (1 - alpha) + u[i] * alpha for i in range(2))

    def _small(self, fid, cand):
        """A short integer ray near ``cand`` that is still inside the face."""
        top = max(abs(x) for x in cand)
        for bits in (3, 6, 10, 16, 24, 32, 48):
            r = tuple(round(Fraction(x) * (1 << bits) / top) for x in cand)
            if any(r) and self._inside(fid, r):
                return primitive(r)
        return None

    def interior_sample(self, fid, k=1) -> list[Ray]:
        """``k`` distinct rays strictly inside face ``fid``; deterministic."""
        out = []
        seen = set()
        for cand in self._candidates(fid):
            if all(x == 0 for x in cand):
                continue
            key = primitive(cand)
            if not self._inside(fid, key):
                continue
            key = self._small(fid, cand) or key
            if key in seen:
                continue
            seen.add(key)
            out.append(Ray(key))
            if len(out) == k:
                break
        return out

    # -- export ----------------------------------------------------------------------

    def to_json(self) -> str:
        def sv(s):
            return "".join("+" if x > 0 else ("-" if x < 0 else "0") for x in s)
        data = {
            "dim": self.dim,
            "circles": [{"pair": list(c.pair), "normal": [str(x) for x in c.normal]}
                        for c in self.circles],
            "vertices": [{"id": v.id, "ray": [str(x) for x in v.ray.key],
                          "circles": list(v.circles), "regular": v.regular}
                         for v in self.vertices],
            "edges": [{"id": e.id, "circle": e.circle, "endpoints": list(e.endpoints),
                       "side_faces": list(e.side_faces)} for e in self.edges],
            "faces": [{"id": f.id, "sign_vector": sv(f.sign_vector),
                       "boundary": [[eid, d] for eid, d in f.boundary],
                       "vertices": list(f.vertices)} for f in self.faces],
        }
        return json.dumps(data, indent=1)


def build_arrangement(circles, dim=3) -> Arrangement:
    return Arrangement(circles, dim)


def sub_arrangement(arr: Arrangement, keep_circles) -> Arrangement:
    return Arrangement([arr.circles[c] for c in keep_circles], arr.dim)
