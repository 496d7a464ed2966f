from __future__ import annotations

from fractions import Fraction

import pytest

from geoperm.arrangement import Arrangement, GreatCircle
from geoperm.bodies import ConvexBody, build_separation_system
from geoperm.generators import GenConfig, generate

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def cube(name, center, half=Fraction(1, 2)):
    import itertools
    verts = [tuple(c + s * half for c, s in zip(center, signs))
             for signs in itertools.product((-1, 1), repeat=len(center))]
    return ConvexBody(name, tuple(verts))


@pytest.fixture
def collinear3():
    return generate(GenConfig(n=3, dim=3, kind="collinear"))


@pytest.fixture
def collinear3_system(collinear3):
    return build_separation_system(collinear3, 0)


@pytest.fixture
def octant():
    circles = [GreatCircle((0, 1), (1, 0, 0)), GreatCircle((0, 2), (0, 1, 0)),
               GreatCircle((1, 2), (0, 0, 1))]
    return Arrangement(circles, 3)
