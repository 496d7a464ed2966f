"""Face classification, popular cells, borders and conflict weights.

Permutation faces are certified one-sidedly: a face counts as a permutation
face only once a transversal with direction inside it has been found.  All
levels and weights below are relative to that classifier, applied with the
same probe policy to the full family and to every single-removal subfamily.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .arrangement import Arrangement, circles_of
from .transversal import Cyclic, LineWitness, OrientedOrder, TransversalProblem, tournament_order

DEFAULT_PROBES = 5
LEVEL_HIGH = 2   # "level >= 2 or unknown"


class CensusInconsistency(AssertionError):
    pass


@dataclass
class FaceClass:
    face_id: int
    relation: object                 # OrientedOrder | Cyclic
    witness: LineWitness | None = None

    @property
    def acyclic(self) -> bool:
        return isinstance(self.relation, OrientedOrder)

    @property
    def certified(self) -> bool:
        return self.witness is not None

    @property
    def order(self):
        return self.relation.sequence if self.acyclic else None


@dataclass
class Census:
    arrangement: Arrangement
    system: object
    faces: list
    probes_per_face: int = DEFAULT_PROBES
    extra_probes: tuple = ()

    @property
    def n(self):
        return self.system.n

    @property
    def certified(self) -> list[bool]:
        return [fc.certified for fc in self.faces]

    @property
    def acyclic_count(self) -> int:
        return sum(fc.acyclic for fc in self.faces)

    @property
    def certified_count(self) -> int:
        return sum(fc.certified for fc in self.faces)

    def certified_orders(self) -> set:
        return {fc.order for fc in self.faces if fc.certified}

    @property
    def unoriented_count(self) -> int:
        orders = self.certified_orders()
        return len({min(o, tuple(reversed(o))) for o in orders})

    def witnesses(self):
        return [fc.witness for fc in self.faces if fc.certified]


def build_census_arrangement(system) -> Arrangement:
    return Arrangement(circles_of(system), system.dim)


def classify_faces(arr: Arrangement, system, probes_per_face=DEFAULT_PROBES,
                   extra_probes=(), carried=(), problem=None) -> Census:
    """Relation of every face from its sign vector, then certification by probing.

    Order of evidence: carried witnesses (lines already known to be
    transversals of this family), each acyclic face's own interior samples,
    then the extra probe directions.  A certified face always certifies its
    antipodal face with the reversed line.
    """
    pair_list = [c.pair for c in arr.circles]
    n = system.n
    if problem is None:
        problem = TransversalProblem(system.bodies)
    faces = []
    for f in arr.faces:
        rel = tournament_order(f.sign_vector, pair_list, n)
        if isinstance(rel, OrientedOrder):
            rel = OrientedOrder(rel.sequence, f.id)
        faces.append(FaceClass(f.id, rel))

    def certify(fid, w):
        fc = faces[fid]
        if fc.witness is not None:
            return
        if not fc.acyclic or w.order() != fc.order:
            raise CensusInconsistency(
                f"transversal order {w.order()} disagrees with face {fid} relation {fc.relation}")
        fc.witness = w
        anti = arr.antipode_face[fid]
        if faces[anti].witness is None:
            certify(anti, w.reversed())

    for w in carried:
        cell = arr.locate(w.direction)
        if cell.kind != "face":
            raise CensusInconsistency("carried witness direction lies on a circle")
        certify(cell.id, w)

    for fc in faces:
        if not fc.acyclic or fc.certified:
            continue
        for r in arr.interior_sample(fc.face_id, probes_per_face):
            w = problem.solve(r)
            if w is not None:
                certify(fc.face_id, w)
                break

    for u in extra_probes:
        cell = arr.locate(u)
        if cell.kind != "face":
            continue
        fc = faces[cell.id]
        if fc.certified or not fc.acyclic:
            continue
        w = problem.solve(u)
        if w is not None:
            certify(cell.id, w)

    return Census(arr, system, faces, probes_per_face, tuple(extra_probes))


def census_for(system, probes_per_face=DEFAULT_PROBES, extra_probes=()) -> Census:
    return classify_faces(build_census_arrangement(system), system, probes_per_face, extra_probes)


# -- borders ---------------------------------------------------------------------

@dataclass
class Border:
    """A vertex with a hemisphere (edge border) or a slice (slice border).

    ``choice`` is (circle, sign) for edge borders and (sign on first circle,
    sign on second circle) for slice borders.  ``faces`` are the faces whose
    certification decides popularity of the associated cell.
    """
    kind: str
    vertex: int
    choice: tuple
    cell: int
    faces: tuple
    regular: bool
    level: int = LEVEL_HIGH
    conflicts: tuple = ()

    @property
    def weight(self) -> int:
        if self.level != 1:
            raise ValueError("weight is defined only for 1-level borders")
        return len(self.conflicts)


def edge_borders(arr: Arrangement) -> list[Border]:
    out = []
    for v in arr.vertices:
        a, b = v.circles
        for c, other in ((a, b), (b, a)):
            for s in (1, -1):
                sig = list(v.signs)
                sig[c] = s
                faces = []
                for t in (1, -1):
                    sig[other] = t
                    faces.append(arr.face_index[tuple(sig)])
                sig[other] = 0
                eid = arr.edge_index[tuple(sig)]
                out.append(Border("edge", v.id, (c, s), eid, tuple(faces), v.regular))
    return out


def slice_borders(arr: Arrangement) -> list[Border]:
    out = []
    for v in arr.vertices:
        for sa in (1, -1):
            for sb in (1, -1):
                fid = arr.slice_face(v.id, sa, sb)
                out.append(Border("slice", v.id, (sa, sb), fid, (fid,), v.regular))
    return out


@dataclass
class PopularStats:
    popular_vertices: list
    popular_edges: list
    edge_borders: list
    slice_borders: list

    @property
    def E0(self) -> int:
        return sum(b.level == 0 for b in self.edge_borders)

    @property
    def V0(self) -> int:
        return sum(b.level == 0 for b in self.slice_borders)

    def level0(self, kind, regular=None) -> int:
        borders = self.edge_borders if kind == "edge" else self.slice_borders
        return sum(b.level == 0 and (regular is None or b.regular == regular) for b in borders)

    def weighted_level1(self, kind, regular=None) -> int:
        borders = self.edge_borders if kind == "edge" else self.slice_borders
        return sum(len(b.conflicts) for b in borders
                   if b.level == 1 and (regular is None or b.regular == regular))

    def level1_count(self, kind) -> int:
        borders = self.edge_borders if kind == "edge" else self.slice_borders
        return sum(b.level == 1 for b in borders)

    @property
    def E1_weighted(self) -> int:
        return self.weighted_level1("edge")

    @property
    def V1_weighted(self) -> int:
        return self.weighted_level1("slice")


def popular_census(census: Census) -> PopularStats:
    """Popular vertices and edges plus the 0-level edge and slice borders."""
    arr = census.arrangement
    cert = census.certified
    if arr.dim != 3:
        return PopularStats([], [], [], [])
    popular_edges = [e.id for e in arr.edges if cert[e.side_faces[0]] and cert[e.side_faces[1]]]
    popular_vertices = [v.id for v in arr.vertices if all(cert[f] for f in arr.vertex_faces(v.id))]
    eb = edge_borders(arr)
    sb = slice_borders(arr)
    for b in eb + sb:
        if all(cert[f] for f in b.faces):
            b.level = 0
    stats = PopularStats(popular_vertices, popular_edges, eb, sb)
    if stats.E0 != 2 * len(popular_edges):
        raise CensusInconsistency(f"E0={stats.E0} but {len(popular_edges)} popular edges")
    per_vertex = sum(sum(cert[f] for f in arr.vertex_faces(v.id)) for v in arr.vertices)
    if stats.V0 != per_vertex:
        raise CensusInconsistency("V0 disagrees with certified faces around vertices")
    for vid in popular_vertices:
        if not arr.vertices[vid].regular:
            raise CensusInconsistency(f"popular vertex {vid} is degenerate")
    return stats


def degenerate_vertex_count(arr: Arrangement) -> int:
    if arr.dim != 3:
        return 0
    return sum(not v.regular for v in arr.vertices)


# -- removals ----------------------------------------------------------------------

@dataclass
class Removal:
    """Census of the family with body ``q`` removed, tied back to the full arrangement."""
    q: int
    keep: list
    census: Census
    face_map: list             # face of A(K) -> face of A(K minus q)
    stats: PopularStats = None
    monotone_violations: list = field(default_factory=list)


def removal_census(census: Census, q: int) -> Removal:
    arr = census.arrangement
    sub_system, keep = census.system.without(q)
    sub_arr = Arrangement(circles_of(sub_system), arr.dim)
    kept = [c for c, circ in enumerate(arr.circles) if q not in circ.pair]
    if [arr.circles[c].normal for c in kept] != [c.normal for c in sub_arr.circles]:
        raise CensusInconsistency("sub-arrangement circles differ from the kept circles")
    carried = [w.restrict(keep) for w in census.witnesses()]
    sub = classify_faces(sub_arr, sub_system, census.probes_per_face,
                         census.extra_probes, carried)
    face_map = [sub_arr.face_index[tuple(f.sign_vector[c] for c in kept)] for f in arr.faces]
    removal = Removal(q, keep, sub, face_map)
    where = {old: new for new, old in enumerate(keep)}
    for fc in census.faces:
        if not fc.certified:
            continue
        sfc = sub.faces[face_map[fc.face_id]]
        expected = tuple(where[i] for i in fc.order if i != q)
        if not sfc.certified or sfc.order != expected:
            removal.monotone_violations.append(fc.face_id)
    removal.stats = popular_census(sub)
    return removal


def all_removals(census: Census, pmap=map) -> list[Removal]:
    return list(pmap(lambda q: removal_census(census, q), range(census.n)))


def conflict_weights(census: Census, stats: PopularStats, removals) -> PopularStats:
    """Annotate every non-0-level border with the removals that make it 0-level."""
    arr = census.arrangement
    for b in stats.edge_borders + stats.slice_borders:
        if b.level == 0:
            continue
        idx = set(arr.circles[arr.vertices[b.vertex].circles[0]].pair) | \
            set(arr.circles[arr.vertices[b.vertex].circles[1]].pair)
        hits = []
        for rem in removals:
            if rem.q in idx:
                continue
            sub_cert = rem.census.faces
            if all(sub_cert[rem.face_map[f]].certified for f in b.faces):
                hits.append(rem.q)
        b.conflicts = tuple(hits)
        b.level = 1 if hits else LEVEL_HIGH
    return stats


def vertex_indices(arr: Arrangement, vid) -> set:
    v = arr.vertices[vid]
    out = set()
    for c in v.circles:
        out |= set(arr.circles[c].pair)
    return out
