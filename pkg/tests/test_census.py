import pytest

from geoperm.bodies import build_separation_system
from geoperm.census import (Border, LEVEL_HIGH, all_removals, census_for, conflict_weights,
                            popular_census)
from geoperm.generators import GenConfig, generate, oracle_enumerate


@pytest.fixture(scope="module")
def flower6():
    bodies = generate(GenConfig(n=6, dim=3, kind="flower3d", seed=2))
    system = build_separation_system(bodies, 2)
    census = census_for(system, 5)
    stats = popular_census(census)
    removals = all_removals(census)
    conflict_weights(census, stats, removals)
    return census, stats, removals


class TestClassify:
    def test_collinear(self, collinear3_system):
        c = census_for(collinear3_system)
        assert c.arrangement.F == 8
        assert c.acyclic_count == 6
        assert c.certified_count == 2
        assert c.unoriented_count == 1
        assert c.certified_orders() == {(0, 1, 2), (2, 1, 0)}

    def test_two_bodies(self, collinear3):
        c = census_for(build_separation_system(collinear3[:2]))
        assert c.arrangement.F == 2 and c.unoriented_count == 1

    def test_witnesses_live_in_their_faces(self, flower6):
        census = flower6[0]
        arr = census.arrangement
        for fc in census.faces:
            if fc.certified:
                assert fc.acyclic
                assert arr.locate(fc.witness.direction) == ("face", fc.face_id)
                assert fc.witness.verify(census.system.bodies)
                assert fc.witness.order() == fc.order

    def test_antipodal_certification(self, flower6):
        census = flower6[0]
        arr = census.arrangement
        for fc in census.faces:
            other = census.faces[arr.antipode_face[fc.face_id]]
            assert fc.certified == other.certified
            if fc.certified:
                assert other.order == tuple(reversed(fc.order))

    def test_counts_ordered(self, flower6):
        census = flower6[0]
        assert census.certified_count <= census.acyclic_count <= census.arrangement.F

    def test_extra_probes_only_add(self):
        bodies = generate(GenConfig(n=5, dim=2, kind="grid_boxes", seed=0))
        system = build_separation_system(bodies, 0)
        plain = census_for(system, 5)
        oracle = oracle_enumerate(bodies, 2000)
        boosted = census_for(system, 5, oracle.directions)
        assert plain.certified_orders() <= boosted.certified_orders()
        assert set(oracle.orders) <= boosted.certified_orders()


class TestPopular:
    def test_collinear_none(self, collinear3_system):
        stats = popular_census(census_for(collinear3_system))
        assert stats.popular_vertices == [] and stats.popular_edges == []

    def test_flower_has_popular_vertex(self, flower6):
        census, stats, _ = flower6
        assert stats.popular_vertices
        arr = census.arrangement
        for vid in stats.popular_vertices:
            assert arr.vertices[vid].regular
            slices = [b for b in stats.slice_borders if b.vertex == vid]
            assert len(slices) == 4 and all(b.level == 0 for b in slices)

    def test_edge_border_invariant(self, flower6):
        _, stats, _ = flower6
        assert stats.E0 == 2 * len(stats.popular_edges)


class TestConflicts:
    def test_weights_positive(self, flower6):
        _, stats, _ = flower6
        for b in stats.edge_borders + stats.slice_borders:
            if b.level == 1:
                assert b.weight >= 1
            elif b.level == 0:
                with pytest.raises(ValueError):
                    b.weight
            else:
                assert b.level == LEVEL_HIGH and b.conflicts == ()

    def test_conflicts_avoid_defining_bodies(self, flower6):
        census, stats, _ = flower6
        arr = census.arrangement
        for b in stats.slice_borders:
            v = arr.vertices[b.vertex]
            idx = set(arr.circles[v.circles[0]].pair) | set(arr.circles[v.circles[1]].pair)
            assert not idx & set(b.conflicts)

    def test_weighted_totals_two_ways(self, flower6):
        # per-border sum versus per-removal count of newly 0-level borders
        _, stats, removals = flower6
        per_removal = sum(1 for rem in removals for b in stats.edge_borders
                          if rem.q in b.conflicts)
        assert per_removal == stats.E1_weighted
        per_removal_v = sum(1 for rem in removals for b in stats.slice_borders
                            if rem.q in b.conflicts)
        assert per_removal_v == stats.V1_weighted

    def test_monotone(self, flower6):
        _, _, removals = flower6
        assert all(not r.monotone_violations for r in removals)

    def test_border_weight_guard(self):
        b = Border("slice", 0, (1, 1), 0, (0,), True, level=0)
        with pytest.raises(ValueError):
            b.weight
