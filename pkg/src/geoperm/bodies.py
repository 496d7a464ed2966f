"""Convex polytopes (vertex lists), exact disjointness and oriented separators."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exact import (EQ, GE, LE, DimensionMismatch, LinearSystem, cross, det3,
                    dot, format_rational, is_zero, lp_feasible, parse_rational)

MAX_PERTURB_RETRIES = 32
PERTURB_BITS = 16


class DisjointnessViolation(ValueError):
    def __init__(self, i=None, j=None, msg=None):
        self.pair = (i, j)
        if msg is None:
            msg = f"bodies {i} and {j} intersect" if i is not None else "bodies intersect"
        super().__init__(msg)


class GeneralPositionFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class ConvexBody:
    """Closed convex hull of a finite vertex list."""
    name: str
    vertices: tuple

    def __post_init__(self):
        verts = []
        seen = set()
        for v in self.vertices:
            v = tuple(parse_rational(x) for x in v)
            if v not in seen:
                seen.add(v)
                verts.append(v)
        if not verts:
            raise ValueError(f"body {self.name!r} has no vertices")
        d = len(verts[0])
        if any(len(v) != d for v in verts):
            raise DimensionMismatch(f"body {self.name!r} mixes dimensions")
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class OrientedHyperplane:
    """``normal . x = offset`` with body ``pair[0]`` strictly on the negative side."""
    normal: tuple
    offset: Fraction
    pair: tuple

    def side(self, x) -> int:
        s = dot(self.normal, x) - self.offset
        return (s > 0) - (s < 0)

    def separates(self, a: ConvexBody, b: ConvexBody) -> bool:
        return (all(self.side(v) < 0 for v in a.vertices)
                and all(self.side(w) > 0 for w in b.vertices))

    def margin(self, a: ConvexBody, b: ConvexBody) -> Fraction:
        lo = min(dot(self.normal, w) for w in b.vertices)
        hi = max(dot(self.normal, v) for v in a.vertices)
        return lo - hi


@dataclass(frozen=True)
class SeparationSystem:
    bodies: tuple
    hyperplanes: tuple
    seed: int = 0

    @property
    def n(self) -> int:
        return len(self.bodies)

    @property
    def dim(self) -> int:
        return self.bodies[0].dim

    def hyperplane(self, i, j) -> OrientedHyperplane:
        return self.hyperplanes[pair_index(i, j, self.n)]

    def without(self, q: int):
        """Drop body ``q``, keeping the remaining separators untouched.

        Returns the reduced system and the list of surviving original
        indices (position in the new system -> old index).
        """
        keep = [i for i in range(self.n) if i != q]
        where = {old: new for new, old in enumerate(keep)}
        planes = []
        for h in self.hyperplanes:
            i, j = h.pair
            if q in (i, j):
                continue
            planes.append(OrientedHyperplane(h.normal, h.offset, (where[i], where[j])))
        bodies = tuple(self.bodies[i] for i in keep)
        return SeparationSystem(bodies, tuple(planes), self.seed), keep


def pair_index(i, j, n) -> int:
    """Position of pair (i, j), i < j, in lexicographic pair order."""
    if not 0 <= i < j < n:
        raise IndexError(f"bad pair ({i}, {j}) for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def pairs(n):
    return list(itertools.combinations(range(n), 2))


# -- disjointness and separation ---------------------------------------------

def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"bodies {a.name!r} (d={a.dim}) and {b.name!r} (d={b.dim})")


def disjoint(a: ConvexBody, b: ConvexBody) -> bool:
    """True iff conv(a) and conv(b) share no point (decided by LP)."""
    _check_same_dim(a, b)
    na, nb, d = len(a.vertices), len(b.vertices), a.dim
    nv = na + nb
    rows = []
    for c in range(d):
        coeffs = [v[c] for v in a.vertices] + [-w[c] for w in b.vertices]
        rows.append((coeffs, EQ, 0))
    rows.append(([1] * na + [0] * nb, EQ, 1))
    rows.append(([0] * na + [1] * nb, EQ, 1))
    for k in range(nv):
        e = [0] * nv
        e[k] = 1
        rows.append((e, GE, 0))
    return lp_feasible(LinearSystem(tuple(rows), nv)) is None


def separating_hyperplane(a: ConvexBody, b: ConvexBody, pair=(0, 1)) -> OrientedHyperplane:
    """Margin-normalized separator: a on the negative side, b on the positive."""
    _check_same_dim(a, b)
    d = a.dim
    rows = []
    # variables: normal (d), offset
    for v in a.vertices:
        rows.append((list(v) + [-1], LE, -1))
    for w in b.vertices:
        rows.append((list(w) + [-1], GE, 1))
    sol = lp_feasible(LinearSystem(tuple(rows), d + 1))
    if sol is None:
        raise DisjointnessViolation(*pair)
    return OrientedHyperplane(tuple(sol[:d]), sol[d], tuple(pair))


def normals_parallel(u, v) -> bool:
    if len(u) == 2:
        return u[0] * v[1] - u[1] * v[0] == 0
    return is_zero(cross(u, v))


def gp_verify(system: SeparationSystem) -> bool:
    """No two circle normals parallel; for d=3 no three circles concurrent."""
    normals = [h.normal for h in system.hyperplanes]
    for u, v in itertools.combinations(normals, 2):
        if normals_parallel(u, v):
            return False
    if system.dim == 3:
        for a, b, c in itertools.combinations(normals, 3):
            if det3(a, b, c) == 0:
                return False
    return True


def _perturbed(h: OrientedHyperplane, rng: random.Random) -> OrientedHyperplane:
    full = 1 << PERTURB_BITS
    size = max(abs(x) for x in h.normal) / full

    def jitter():
        return Fraction(rng.randint(-full, full), full) * size

    normal = tuple(x + jitter() for x in h.normal)
    return OrientedHyperplane(normal, h.offset + jitter(), h.pair)


def build_separation_system(bodies, seed: int = 0) -> SeparationSystem:
    """Separate every pair and enforce general position.

    The raw LP separators are used when they are already in general
    position; otherwise every separator receives a seeded rational jitter of
    relative size at most 2**-16, retried with fresh sub-seeds.
    """
    bodies = tuple(bodies)
    if not bodies:
        raise ValueError("need at least one body")
    d = bodies[0].dim
    for b in bodies:
        if b.dim != d:
            raise DimensionMismatch("bodies of mixed dimension")
    n = len(bodies)
    raw = tuple(separating_hyperplane(bodies[i], bodies[j], (i, j)) for i, j in pairs(n))
    system = SeparationSystem(bodies, raw, seed)
    if gp_verify(system):
        return system
    for attempt in range(1, MAX_PERTURB_RETRIES + 1):
        rng = random.Random(seed * 1_000_003 + attempt)
        planes = tuple(_perturbed(h, rng) for h in raw)
        if not all(h.separates(bodies[h.pair[0]], bodies[h.pair[1]]) for h in planes):
            continue
        system = SeparationSystem(bodies, planes, seed)
        if gp_verify(system):
            return system
    raise GeneralPositionFailure(
        f"no general-position separators after {MAX_PERTURB_RETRIES} perturbations")


# -- instance files ----------------------------------------------------------

def instance_to_dict(bodies, seed: int = 0) -> dict:
    bodies = list(bodies)
    return {
        "dim": bodies[0].dim if bodies else 3,
        "seed": seed,
        "bodies": [
            {"name": b.name,
             "vertices": [[format_rational(x) for x in v] for v in b.vertices]}
            for b in bodies
        ],
    }


def instance_from_dict(data: dict):
    dim = int(data["dim"])
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    bodies = []
    for k, raw in enumerate(data["bodies"]):
        body = ConvexBody(str(raw.get("name", f"K{k}")),
                          tuple(tuple(parse_rational(x) for x in v) for v in raw["vertices"]))
        if body.dim != dim:
            raise DimensionMismatch(f"body {body.name!r} has dimension {body.dim}, instance says {dim}")
        bodies.append(body)
    return bodies, int(data.get("seed", 0))


def save_instance(path, bodies, seed: int = 0):
    text = json.dumps(instance_to_dict(bodies, seed), indent=1) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_instance(path):
    return instance_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
