import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoperm.arrangement import (Arrangement, GeneralPositionError, GreatCircle, circles_of,
                                 intersect_circles)
from geoperm.bodies import build_separation_system
from geoperm.exact import GE, LinearSystem, Ray, lp_feasible, sign_dot
from geoperm.generators import GenConfig, generate


def random_circles(m, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < m:
        n = tuple(rng.randint(-40, 40) for _ in range(3))
        if any(n):
            out.append(GreatCircle((0, len(out) + 1), n))
    return out


def check_structure(arr):
    m = len(arr.circles)
    assert arr.V == m * (m - 1)
    assert arr.E == 2 * m * (m - 1)
    assert arr.F == m * (m - 1) + 2
    assert arr.V - arr.E + arr.F == 2
    for v in arr.vertices:
        assert len(set(arr.vertex_faces(v.id))) == 4
        assert len(set(arr.vertex_edges(v.id))) == 4
        for c in v.circles:
            assert sign_dot(v.ray.key, arr.normals[c]) == 0
    for f in arr.faces:
        assert 0 not in f.sign_vector
        for r in f.interior_samples:
            assert arr.locate(r) == ("face", f.id)
    for e in arr.edges:
        for vid in e.endpoints:
            assert arr.circle_vertices[e.circle].count(vid) == 1


class TestIntersect:
    def test_examples(self):
        a, b = intersect_circles(GreatCircle((0, 1), (1, 0, 0)), GreatCircle((0, 2), (0, 1, 0)))
        assert {a, b} == {Ray((0, 0, 1)), Ray((0, 0, -1))}
        a, b = intersect_circles(GreatCircle((0, 1), (1, 0, 0)), GreatCircle((0, 2), (0, 0, 1)))
        assert a == Ray((0, -1, 0)) and b == Ray((0, 1, 0))
        a, b = intersect_circles(GreatCircle((0, 1), (1, 1, 0)), GreatCircle((0, 2), (1, -1, 0)))
        assert {a, b} == {Ray((0, 0, 1)), Ray((0, 0, -1))}

    def test_parallel(self):
        with pytest.raises(GeneralPositionError):
            intersect_circles(GreatCircle((0, 1), (1, 0, 0)), GreatCircle((0, 2), (2, 0, 0)))


class TestBuild:
    def test_octant(self, octant):
        assert (octant.V, octant.E, octant.F) == (6, 12, 8)
        check_structure(octant)

    def test_octant_locate(self, octant):
        assert octant.locate((1, 1, 1)) == ("face", octant.face_index[(1, 1, 1)])
        kind, vid = octant.locate((0, 0, 1))
        assert kind == "vertex" and octant.vertices[vid].ray == Ray((0, 0, 1))
        kind, eid = octant.locate((1, 1, 0))
        assert kind == "edge" and octant.edges[eid].circle == 2
        assert octant.edges[eid].signs == (1, 1, 0)

    def test_octant_sample(self, octant):
        fid = octant.face_index[(1, 1, 1)]
        assert octant.interior_sample(fid, 1) == [Ray((1, 1, 1))]

    def test_two_circles(self):
        arr = Arrangement(random_circles(2, 0))
        assert (arr.V, arr.E, arr.F) == (2, 4, 4)
        for f in arr.faces:
            for r in arr.interior_sample(f.id, 5):
                assert arr.signs(r.key) == f.sign_vector

    def test_small_cases(self):
        assert Arrangement([]).F == 1
        one = Arrangement(random_circles(1, 0))
        assert (one.V, one.E, one.F) == (0, 0, 2)

    @pytest.mark.parametrize("m", [3, 4, 7, 12])
    def test_random_counts(self, m):
        check_structure(Arrangement(random_circles(m, m)))

    def test_concurrent_rejected(self):
        circles = [GreatCircle((0, 1), (1, 0, 0)), GreatCircle((0, 2), (0, 1, 0)),
                   GreatCircle((1, 2), (1, 1, 0))]
        with pytest.raises(GeneralPositionError, match="concurrent"):
            Arrangement(circles)

    def test_five_samples_distinct(self):
        arr = Arrangement(random_circles(6, 3))
        for f in arr.faces:
            rays = arr.interior_sample(f.id, 5)
            assert len(set(rays)) == len(rays) >= 1
            for r in rays:
                assert arr.signs(r.key) == f.sign_vector

    def test_sample_deterministic(self):
        a, b = Arrangement(random_circles(5, 1)), Arrangement(random_circles(5, 1))
        assert [a.interior_sample(f.id, 5) for f in a.faces] == \
            [b.interior_sample(f.id, 5) for f in b.faces]

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_antipodal_symmetry(self, seed):
        arr = Arrangement(random_circles(5, seed))
        for f in arr.faces:
            g = arr.faces[arr.antipode_face[f.id]]
            assert g.sign_vector == tuple(-s for s in f.sign_vector)
        for v in arr.vertices:
            assert arr.vertices[arr.antipode_vertex[v.id]].ray == -v.ray
        assert sorted(arr.antipode_edge) == list(range(arr.E))

    @pytest.mark.parametrize("m", [3, 4, 6])
    def test_faces_match_lp_oracle(self, m):
        # independent oracle: a sign vector is a face iff its open cone is nonempty
        arr = Arrangement(random_circles(m, 11 + m))
        cones = set()
        for signs in itertools.product((1, -1), repeat=m):
            rows = tuple(([s * x for x in n], GE, 1) for s, n in zip(signs, arr.normals))
            if lp_feasible(LinearSystem(rows, 3)) is not None:
                cones.add(signs)
        assert cones == set(arr.face_index)

    def test_neighbor_on_circle(self, octant):
        c = 2
        ids = octant.circle_vertices[c]
        for vid in ids:
            nxt = octant.neighbor_on_circle(vid, c, 1)
            assert octant.neighbor_on_circle(nxt, c, -1) == vid

    def test_json_dump(self, octant):
        import json
        data = json.loads(octant.to_json())
        assert len(data["faces"]) == 8 and len(data["vertices"]) == 6


class TestFromInstances:
    def test_removal_consistency(self):
        bodies = generate(GenConfig(n=6, dim=3, kind="grid_boxes", seed=2))
        sys = build_separation_system(bodies, 2)
        arr = Arrangement(circles_of(sys))
        for q in range(sys.n):
            sub_sys, keep = sys.without(q)
            sub = Arrangement(circles_of(sub_sys))
            kept = [c for c, circ in enumerate(arr.circles) if q not in circ.pair]
            assert [c.normal for c in sub.circles] == [arr.circles[c].normal for c in kept]
            for v in arr.vertices:
                pairs = [arr.circles[c].pair for c in v.circles]
                if v.regular and all(q not in p for p in pairs):
                    assert v.ray.key in sub.vertex_index

    def test_regular_flag(self):
        bodies = generate(GenConfig(n=5, dim=3, kind="grid_boxes", seed=4))
        arr = Arrangement(circles_of(build_separation_system(bodies, 4)))
        for v in arr.vertices:
            idx = set(arr.circles[v.circles[0]].pair) | set(arr.circles[v.circles[1]].pair)
            assert v.regular == (len(idx) == 4)

    def test_planar(self):
        bodies = generate(GenConfig(n=5, dim=2, kind="grid_boxes", seed=1))
        arr = Arrangement(circles_of(build_separation_system(bodies, 1)), 2)
        assert arr.V == 2 * 10 and arr.F == 2 * 10
        for f in arr.faces:
            for r in arr.interior_sample(f.id, 3):
                assert arr.locate(r) == ("face", f.id)
