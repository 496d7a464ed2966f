"""End-to-end analysis of one instance: separation, arrangement, census, audits."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

from .audits import (AuditReport, FAIL, PASS, SKIP, audit_consecutive_pairs, audit_k33,
                     audit_popular_line, audit_removal_identities, bound_curves,
                     weight_one_double_charges, zone_square_metric)
from .bodies import build_separation_system
from .census import (Census, PopularStats, census_for, conflict_weights,
                     degenerate_vertex_count, popular_census, removal_census)
from .generators import OracleResult, oracle_enumerate

THREADS_ENV = "GEOPERM_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items, threads=None) -> list:
    """``map`` that may fan out over processes; results keep input order."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


@dataclass
class Analysis:
    census: Census
    stats: PopularStats
    oracle: OracleResult | None
    removals: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    zone: list = field(default_factory=list)
    charges: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.oracle is not None and not self.oracle_subset():
            return False
        return all(r.passed for r in self.reports)

    def oracle_subset(self) -> bool:
        return set(self.oracle.orders) <= self.census.certified_orders()

    def report(self, name) -> AuditReport | None:
        return next((r for r in self.reports if r.name == name), None)

    def summary(self) -> dict:
        c, s = self.census, self.stats
        arr = c.arrangement
        n, d = c.n, arr.dim
        k33 = [r for r in self.reports if r.name.startswith("k33")]
        if not k33 or all(r.status == SKIP for r in k33):
            k33_status = SKIP
        else:
            k33_status = FAIL if any(r.status == FAIL for r in k33) else PASS
        audits = {
            "consecutive_pairs": self._status("consecutive_pairs"),
            "popular_line": self._status("popular_line"),
            "k33": k33_status,
        }
        rem = self.report("removal_identities")
        if rem is not None and rem.status != SKIP:
            for tag in ("E", "V"):
                audits[f"removal_identity_{tag}"] = dict(rem.details[f"removal_identity_{tag}"])
            audits["monotone_violations"] = rem.details["monotone_violations"]
            audits["removal_identities"] = rem.status
        else:
            audits["removal_identities"] = SKIP
        if self.oracle is not None:
            audits["oracle_subset"] = PASS if self.oracle_subset() else FAIL
        curves = bound_curves(max(n, 2), d)
        out = {
            "n": n, "d": d,
            "V": arr.V, "E": arr.E, "F": arr.F,
            "acyclic": c.acyclic_count,
            "certified": c.certified_count,
            "uncertified_acyclic": c.acyclic_count - c.certified_count,
            "permutations": c.unoriented_count,
            "popular_vertices": len(s.popular_vertices),
            "popular_edges": len(s.popular_edges),
            "E0": s.E0, "E1_weighted": s.E1_weighted,
            "V0": s.V0, "V1_weighted": s.V1_weighted,
            "degenerate_vertices": degenerate_vertex_count(arr),
            "weight1_double_charged": self.charges.get("weight1_double", 0),
            "probes_per_face": c.probes_per_face,
            "oracle_probes": self.oracle.probe_count if self.oracle else 0,
            "oracle_permutations": len(self.oracle.unoriented()) if self.oracle else 0,
            "bounds": {"wenger": curves["wenger"], "main_power": curves["main"][0],
                       "planar": curves["planar"], "lower": curves["lower"]},
            "audits": audits,
            "passed": self.passed,
        }
        return out

    def _status(self, name):
        r = self.report(name)
        return r.status if r is not None else SKIP


def analyze(bodies, seed=0, probes=5, oracle_density=2000, removals=True,
            threads=None) -> Analysis:
    """Separate, build, classify and audit.  ``oracle_density=0`` skips the oracle."""
    system = build_separation_system(bodies, seed)
    oracle = oracle_enumerate(system.bodies, oracle_density, seed) if oracle_density else None
    extra = oracle.directions if oracle else ()
    census = census_for(system, probes, extra)
    stats = popular_census(census)
    result = Analysis(census, stats, oracle)
    result.reports.append(audit_consecutive_pairs(census, stats))
    result.reports.append(audit_popular_line(census, stats))
    if census.arrangement.dim == 3:
        for i in range(census.n):
            result.reports.append(audit_k33(census, i))
            result.zone.append(zone_square_metric(census.arrangement, i))
    if removals and census.arrangement.dim == 3:
        rems = parallel_map(partial(removal_census, census), range(census.n), threads)
        conflict_weights(census, stats, rems)
        result.removals = rems
        result.reports.append(audit_removal_identities(census, stats, rems))
        result.charges = weight_one_double_charges(census, stats)
    return result

