import itertools

import pytest

from geoperm.bodies import disjoint
from geoperm.generators import (KINDS, ConfigError, GenConfig, generate, oracle_directions,
                                oracle_enumerate)


@pytest.mark.parametrize("kind,dim", [("grid_boxes", 3), ("grid_boxes", 2), ("collinear", 3),
                                      ("flower2d", 2), ("flower3d", 3)])
def test_deterministic_and_disjoint(kind, dim):
    for seed in range(3):
        a = generate(GenConfig(n=6, dim=dim, kind=kind, seed=seed))
        assert a == generate(GenConfig(n=6, dim=dim, kind=kind, seed=seed))
        assert len(a) == 6 and all(b.dim == dim for b in a)
        for x, y in itertools.combinations(a, 2):
            assert disjoint(x, y)


def test_seeds_differ():
    a = generate(GenConfig(n=5, kind="grid_boxes", seed=0))
    b = generate(GenConfig(n=5, kind="grid_boxes", seed=1))
    assert a != b


@pytest.mark.parametrize("kw", [dict(kind="nope"), dict(n=0), dict(dim=4),
                                dict(kind="flower2d", dim=3), dict(kind="flower3d", dim=2),
                                dict(spacing=1)])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        GenConfig(**{"n": 4, **kw})


def test_kinds_listed():
    assert set(KINDS) == {"grid_boxes", "collinear", "flower2d", "flower3d"}


class TestOracle:
    def test_directions(self):
        d3 = oracle_directions(3, 60)
        assert len(d3) == len(set(d3)) == 60
        assert all(max(abs(x) for x in u) == 1 for u in d3)
        d2 = oracle_directions(2, 16)
        assert len(set(d2)) == 16 and all(0 not in u for u in d2)

    def test_reproducible(self):
        bodies = generate(GenConfig(n=4, kind="flower3d", seed=0))
        a, b = oracle_enumerate(bodies, 300), oracle_enumerate(bodies, 300)
        assert a.orders.keys() == b.orders.keys() and a.directions == b.directions

    def test_collinear_exact(self):
        bodies = generate(GenConfig(n=3, kind="collinear"))
        res = oracle_enumerate(bodies, 10_000)
        assert set(res.orders) == {(0, 1, 2), (2, 1, 0)}
        assert res.unoriented() == {(0, 1, 2)}
        assert res.probe_count == 10_000
