"""Instance generators and a brute-force direction-grid oracle.

The oracle never touches the arrangement: it probes a fixed quasi-uniform
set of rational directions and keeps every order realized by a transversal.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bodies import ConvexBody, DisjointnessViolation, disjoint
from .exact import Ray
from .transversal import TransversalProblem

KINDS = ("grid_boxes", "collinear", "flower2d", "flower3d")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    n: int
    dim: int = 3
    kind: str = "grid_boxes"
    seed: int = 0
    spacing: Fraction = Fraction(2)
    half_width: Fraction = Fraction(7, 8)

    def __post_init__(self):
        object.__setattr__(self, "spacing", Fraction(self.spacing))
        object.__setattr__(self, "half_width", Fraction(self.half_width))
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.dim not in (2, 3):
            raise ConfigError(f"dim must be 2 or 3, got {self.dim}")
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.kind == "flower2d" and self.dim != 2:
            raise ConfigError("flower2d requires dim 2")
        if self.kind == "flower3d" and self.dim != 3:
            raise ConfigError("flower3d requires dim 3")
        if self.kind in ("grid_boxes", "collinear") and not self.spacing > 2 * self.half_width:
            raise ConfigError("spacing must exceed twice the half-width")


def _box(name, center, half):
    d = len(center)
    verts = [tuple(c + s * h for c, s, h in zip(center, signs, half))
             for signs in itertools.product((-1, 1), repeat=d)]
    return ConvexBody(name, tuple(verts))


def _collinear(cfg):
    half = Fraction(1, 2)
    out = []
    for k in range(cfg.n):
        center = (cfg.spacing * k,) + (Fraction(0),) * (cfg.dim - 1)
        out.append(_box(f"K{k}", center, (half,) * cfg.dim))
    return out


def _grid_boxes(cfg, rng):
    """Jittered simplices, one per distinct cell of an n x 2 (x 2) slab of grid cells.

    The slab is long in x and two cells thick otherwise, so families usually
    keep some common transversals.
    """
    cells = list(itertools.product(range(cfg.n), *[range(2)] * (cfg.dim - 1)))
    chosen = rng.sample(cells, cfg.n)
    corners = list(itertools.product((-1, 1), repeat=cfg.dim))
    den = 64
    hi = int(cfg.half_width * den)
    out = []
    for k, cell in enumerate(chosen):
        center = tuple(cfg.spacing * c for c in cell)
        # d+1 distinct cell-box corners, each pulled inward by a seeded amount
        verts = []
        for corner in rng.sample(corners, cfg.dim + 1):
            verts.append(tuple(c + s * Fraction(rng.randint(hi // 2, hi), den)
                               for c, s in zip(center, corner)))
        out.append(ConvexBody(f"K{k}", tuple(verts)))
    return out


def _circle_point(t: Fraction):
    """Rational point on the unit circle, angle 2*atan(t)."""
    q = 1 + t * t
    return ((1 - t * t) / q, 2 * t / q)


def _flower2d(cfg, rng):
    """Petals: segments tangent to the unit circle, tangent points spread over a half-turn."""
    out = []
    for k in range(cfg.n):
        t = Fraction(2 * k + 1, cfg.n) - 1 + Fraction(rng.randint(-8, 8), 64 * cfg.n)
        cx, cy = _circle_point(t)
        length = 8 + Fraction(rng.randint(0, 16), 8)
        out.append(ConvexBody(f"K{k}", ((cx, cy), (cx - length * cy, cy + length * cx))))
    return out


def _flower3d(cfg, rng):
    """Two crossing "gates" around the vertical axis, then horizontal plates above.

    Bodies 0,1 sit on either side of the plane x=0 low down, bodies 2,3 on
    either side of y=0 higher up.  Nearly vertical lines can thread both
    gates in all four sign combinations, which makes the direction (0,0,1)
    a candidate popular vertex.  Plates are wide enough for those lines.
    """
    gap = Fraction(1, 8) + Fraction(rng.randint(0, 8), 64)
    reach = 5 + Fraction(rng.randint(0, 8), 8)
    gates = [
        ((-1, -gap), (-reach, reach), (-10, 10)),
        ((gap, 1), (-reach, reach), (-10, 10)),
        ((-reach, reach), (-1, -gap), (20, 40)),
        ((-reach, reach), (gap, 1), (20, 40)),
    ]
    out = []
    for k in range(cfg.n):
        if k < 4:
            ranges = gates[k]
        else:
            z = 50 + 10 * (k - 4)
            w = 40 + Fraction(rng.randint(0, 16), 4)
            tilt = Fraction(rng.randint(-4, 4), 16)
            ranges = ((-w, w), (-w, w), (z, z + 1 + tilt * tilt))
        center = tuple(Fraction(lo + hi, 2) for lo, hi in ranges)
        half = tuple(Fraction(hi - lo, 2) for lo, hi in ranges)
        out.append(_box(f"K{k}", center, half))
    return out


def generate(cfg: GenConfig) -> list[ConvexBody]:
    rng = random.Random(cfg.seed)
    if cfg.kind == "collinear":
        bodies = _collinear(cfg)
    elif cfg.kind == "grid_boxes":
        bodies = _grid_boxes(cfg, rng)
    elif cfg.kind == "flower2d":
        bodies = _flower2d(cfg, rng)
    else:
        bodies = _flower3d(cfg, rng)
    for i, j in itertools.combinations(range(len(bodies)), 2):
        if not disjoint(bodies[i], bodies[j]):
            raise DisjointnessViolation(i, j, f"generator bug: bodies {i} and {j} intersect")
    return bodies


# -- oracle ------------------------------------------------------------------------

def _halton(index: int, base: int) -> Fraction:
    f = Fraction(1)
    r = Fraction(0)
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


def oracle_directions(dim: int, density: int, seed: int = 0) -> list[tuple]:
    """``density`` rational directions spread over the sphere (or circle).

    d=3: Halton points (bases 2 and 3) on the six faces of the cube [-1,1]^3,
    face chosen round-robin.  d=2: evenly spaced points on the square's
    boundary, offset by half a step so none lands on an axis.
    """
    if density < 1:
        raise ValueError("density must be at least 1")
    out = []
    if dim == 2:
        for i in range(density):
            p = Fraction(8 * (2 * i + 1), 2 * density)   # arclength along the perimeter
            side, s = divmod(p, 2)
            s -= 1
            side = int(side)
            out.append([(1, s), (-s, 1), (-1, -s), (s, -1)][side])
        return out
    for i in range(density):
        h = i // 6 + 1 + seed
        a = 2 * _halton(h, 2) - 1
        b = 2 * _halton(h, 3) - 1
        face = i % 6
        axis, sgn = divmod(face, 2)
        v = [a, b]
        v.insert(axis, Fraction(1 if sgn == 0 else -1))
        out.append(tuple(v))
    return out


@dataclass
class OracleResult:
    orders: dict                     # order tuple -> LineWitness
    probe_count: int
    directions: list
    feasible: list = field(default_factory=list)

    def unoriented(self) -> set:
        return {min(o, tuple(reversed(o))) for o in self.orders}


def oracle_enumerate(bodies, density: int, seed: int = 0) -> OracleResult:
    bodies = list(bodies)
    problem = TransversalProblem(bodies)
    dirs = oracle_directions(bodies[0].dim, density, seed)
    orders = {}
    feasible = []
    for u in dirs:
        w = problem.solve(Ray.of(u))
        feasible.append(w)
        if w is None:
            continue
        if not w.verify(bodies):
            raise AssertionError(f"oracle witness for {u} failed verification")
        orders.setdefault(w.order(), w)
    return OracleResult(orders, len(dirs), dirs, feasible)
