import itertools
import json
from fractions import Fraction

import pytest

from conftest import cube
from geoperm.bodies import (ConvexBody, DisjointnessViolation, OrientedHyperplane,
                            SeparationSystem, build_separation_system, disjoint, gp_verify,
                            load_instance, pair_index, save_instance, separating_hyperplane)
from geoperm.exact import DimensionMismatch, dot
from geoperm.generators import GenConfig, generate


def _plane_system(normals):
    body = ConvexBody("p", ((0, 0, 0),))
    planes = tuple(OrientedHyperplane(tuple(n), Fraction(0), (0, 1)) for n in normals)
    return SeparationSystem((body, body), planes)


def _substitution_ok(h, a, b):
    return (all(dot(h.normal, v) < h.offset for v in a.vertices)
            and all(dot(h.normal, w) > h.offset for w in b.vertices))


class TestDisjoint:
    def test_cubes(self):
        assert disjoint(cube("a", (0, 0, 0)), cube("b", (2, 0, 0)))

    def test_same_triangle(self):
        t = ConvexBody("t", ((0, 0), (1, 0), (0, 1)))
        assert not disjoint(t, t)

    def test_crossing_segments(self):
        assert not disjoint(ConvexBody("s", ((0, 0), (1, 1))), ConvexBody("t", ((0, 1), (1, 0))))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            disjoint(ConvexBody("a", ((0, 0),)), ConvexBody("b", ((0, 0, 0),)))


class TestSeparation:
    def test_two_points(self):
        h = separating_hyperplane(ConvexBody("a", ((0, 0, 0),)), ConvexBody("b", ((2, 0, 0),)))
        # margin rows: 0 <= offset - 1 and normal.(2,0,0) >= offset + 1
        assert h.offset >= 1 and 2 * h.normal[0] >= h.offset + 1
        assert _substitution_ok(h, ConvexBody("a", ((0, 0, 0),)), ConvexBody("b", ((2, 0, 0),)))

    def test_cubes_all_vertices(self):
        a, b = cube("a", (0, 0, 0)), cube("b", (2, 0, 0))
        h = separating_hyperplane(a, b)
        assert _substitution_ok(h, a, b)
        assert h.margin(a, b) >= 2

    def test_overlap(self):
        a = ConvexBody("a", ((0, 0), (2, 0), (2, 2), (0, 2)))
        b = ConvexBody("b", ((1, 1), (3, 1), (3, 3), (1, 3)))
        with pytest.raises(DisjointnessViolation):
            separating_hyperplane(a, b)

    def test_collinear_system(self, collinear3):
        sys = build_separation_system(collinear3, 0)
        assert len(sys.hyperplanes) == 3
        for h in sys.hyperplanes:
            i, j = h.pair
            assert _substitution_ok(h, collinear3[i], collinear3[j])
            assert h.normal[0] > 0

    def test_two_bodies(self, collinear3):
        sys = build_separation_system(collinear3[:2])
        assert len(sys.hyperplanes) == 1 and gp_verify(sys)

    def test_grid_seed7(self):
        bodies = generate(GenConfig(n=4, dim=3, kind="grid_boxes", seed=7))
        sys = build_separation_system(bodies, 7)
        assert len(sys.hyperplanes) == 6 and gp_verify(sys)

    def test_build_names_pair(self):
        a = cube("a", (0, 0, 0))
        with pytest.raises(DisjointnessViolation) as info:
            build_separation_system([a, cube("b", (3, 0, 0)), cube("c", (Fraction(1, 2), 0, 0))])
        assert info.value.pair == (0, 2)

    def test_deterministic(self):
        bodies = generate(GenConfig(n=5, dim=3, kind="flower3d", seed=1))
        assert build_separation_system(bodies, 3) == build_separation_system(bodies, 3)

    @pytest.mark.parametrize("kind,dim", [("grid_boxes", 3), ("grid_boxes", 2), ("flower3d", 3),
                                          ("flower2d", 2), ("collinear", 3)])
    def test_margins_and_orientation(self, kind, dim):
        for seed in range(3):
            bodies = generate(GenConfig(n=5, dim=dim, kind=kind, seed=seed))
            sys = build_separation_system(bodies, seed)
            assert gp_verify(sys)
            for h in sys.hyperplanes:
                i, j = h.pair
                assert h.separates(bodies[i], bodies[j])

    def test_perturbation_used_only_when_needed(self, collinear3):
        # collinear cubes: every raw separator is x = const, so all normals are parallel
        sys = build_separation_system(collinear3, 0)
        raw = [separating_hyperplane(collinear3[i], collinear3[j], (i, j))
               for i, j in itertools.combinations(range(3), 2)]
        assert not gp_verify(SeparationSystem(tuple(collinear3), tuple(raw)))
        assert gp_verify(sys)


class TestGP:
    def test_orthogonal(self):
        assert gp_verify(_plane_system([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))

    def test_parallel(self):
        assert not gp_verify(_plane_system([(1, 0, 0), (2, 0, 0)]))

    def test_concurrent(self):
        assert not gp_verify(_plane_system([(1, 0, 0), (0, 1, 0), (1, 1, 0)]))


class TestInstanceFiles:
    def test_round_trip(self, tmp_path, collinear3):
        path = tmp_path / "inst.json"
        save_instance(path, collinear3, 4)
        bodies, seed = load_instance(path)
        assert seed == 4 and bodies == collinear3
        data = json.loads(path.read_text())
        assert data["bodies"][0]["vertices"][0] == ["-1/2", "-1/2", "-1/2"]

    def test_duplicates_removed(self):
        b = ConvexBody("b", (("1/2", 0), (Fraction(1, 2), 0), (1, 1)))
        assert len(b.vertices) == 2

    def test_pair_index(self):
        n = 5
        got = [pair_index(i, j, n) for i, j in itertools.combinations(range(n), 2)]
        assert got == list(range(10))
