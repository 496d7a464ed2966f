import random

import pytest

from conftest import cube
from geoperm.exact import Ray
from geoperm.generators import GenConfig, generate
from geoperm.transversal import (Cyclic, OnCircle, OrientedOrder, TransversalProblem,
                                 order_for_direction, tournament_order,
                                 transversal_for_direction)


class TestTransversal:
    def test_collinear_x_axis(self, collinear3):
        w = transversal_for_direction((1, 0, 0), collinear3)
        assert w is not None and w.verify(collinear3)
        assert w.order() == (0, 1, 2)

    def test_collinear_vertical(self, collinear3):
        assert transversal_for_direction((0, 0, 1), collinear3) is None
        assert transversal_for_direction((0, 0, 1), collinear3, method="lp") is None

    def test_stacked_cubes_vertical(self):
        bodies = [cube("a", (0, 0, 0)), cube("b", (0, 0, 2))]
        w = transversal_for_direction((0, 0, 1), bodies)
        assert w.verify(bodies) and w.order() == (0, 1)
        assert w.point(0)[:2] == w.point(1)[:2]

    def test_zero_direction(self, collinear3):
        with pytest.raises(ValueError):
            transversal_for_direction((0, 0, 0), collinear3)

    def test_antipodal_reversal(self, collinear3):
        p = TransversalProblem(collinear3)
        w = p.solve((3, 1, 0))
        back = p.solve((-3, -1, 0))
        assert back.order() == tuple(reversed(w.order()))
        assert w.reversed().order() == back.order() and w.reversed().verify(collinear3)

    @pytest.mark.parametrize("kind,dim,n", [("grid_boxes", 3, 4), ("flower3d", 3, 5),
                                            ("grid_boxes", 2, 5), ("flower2d", 2, 6)])
    def test_projection_agrees_with_lp(self, kind, dim, n):
        # two independent routes must agree on feasibility for every direction
        bodies = generate(GenConfig(n=n, dim=dim, kind=kind, seed=1))
        p = TransversalProblem(bodies)
        rng = random.Random(3)
        feasible = 0
        dirs = [tuple(rng.randint(-6, 6) for _ in range(dim)) for _ in range(40)]
        if kind == "flower3d":
            dirs += [(rng.randint(-2, 2), rng.randint(-2, 2), 40) for _ in range(20)]
        for u in dirs:
            if not any(u):
                continue
            a, b = p.solve(u), p.solve(u, method="lp")
            assert (a is None) == (b is None)
            if a is not None:
                feasible += 1
                assert a.verify(bodies) and b.verify(bodies)
                assert a.order() == b.order()
        if kind == "flower3d":
            assert feasible > 0

    def test_restrict(self, collinear3):
        w = transversal_for_direction((1, 0, 0), collinear3)
        r = w.restrict([0, 2])
        assert r.verify([collinear3[0], collinear3[2]]) and r.order() == (0, 1)


class TestOrders:
    def test_collinear(self, collinear3_system):
        assert order_for_direction(Ray((1, 0, 0)), collinear3_system).sequence == (0, 1, 2)
        assert order_for_direction(Ray((-1, 0, 0)), collinear3_system).sequence == (2, 1, 0)

    def test_on_circle(self, collinear3_system):
        h = collinear3_system.hyperplanes[0]
        n = h.normal
        u = (n[1], -n[0], 0) if (n[0], n[1]) != (0, 0) else (1, 0, 0)
        assert order_for_direction(u, collinear3_system) == OnCircle(h.pair)

    def test_tournament(self):
        pairs = [(0, 1), (0, 2), (1, 2)]
        assert tournament_order((1, 1, 1), pairs, 3) == OrientedOrder((0, 1, 2))
        assert tournament_order((-1, -1, -1), pairs, 3) == OrientedOrder((2, 1, 0))
        assert tournament_order((1, -1, 1), pairs, 3) == Cyclic((0, 1, 2))
        assert tournament_order((-1, 1, -1), pairs, 3) == Cyclic((0, 2, 1))

    def test_tournament_counts(self):
        # on 3 elements: 6 linear orders and 2 cyclic tournaments
        import itertools
        pairs = [(0, 1), (0, 2), (1, 2)]
        kinds = [type(tournament_order(s, pairs, 3)) for s in itertools.product((1, -1), repeat=3)]
        assert kinds.count(OrientedOrder) == 6 and kinds.count(Cyclic) == 2
