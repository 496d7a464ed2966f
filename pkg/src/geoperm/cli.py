"""Command-line front end: gen, census, audit, sweep.

Every run writes its outputs atomically plus a ``manifest.json`` with the
command, configuration, timing and per-file row counts.  ``summary.json``
holds no timing, so identical inputs give byte-identical summaries.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import sys
import time
from functools import partial
from pathlib import Path

from . import __version__
from .audits import bound_curves
from .bodies import DisjointnessViolation, GeneralPositionFailure, load_instance, save_instance
from .generators import ConfigError, GenConfig, KINDS, generate
from .pipeline import analyze, parallel_map

CAPS = {3: 10, 2: 14}


class CapExceeded(ValueError):
    pass


# -- output helpers --------------------------------------------------------------

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


class Outputs:
    """Collects written files for the manifest."""

    def __init__(self, out_dir: Path):
        self.dir = out_dir
        self.files = {}

    def json(self, name, data):
        text = json.dumps(data, indent=1, sort_keys=True) + "\n"
        _atomic_write(self.dir / name, text)
        self.files[name] = {"records": 1, "sha256": hashlib.sha256(text.encode()).hexdigest()}

    def csv(self, name, header, rows):
        rows = list(rows)
        text = _csv_text(header, rows)
        _atomic_write(self.dir / name, text)
        self.files[name] = {"rows": len(rows), "sha256": hashlib.sha256(text.encode()).hexdigest()}

    def manifest(self, command, config, started):
        data = {
            "command": command,
            "config": config,
            "seeds": config.get("seeds") or [config.get("seed")],
            "versions": {"geoperm": __version__, "python": platform.python_version()},
            "timing_seconds": round(time.perf_counter() - started, 3),
            "outputs": self.files,
        }
        _atomic_write(self.dir / "manifest.json", json.dumps(data, indent=1, sort_keys=True) + "\n")


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _signs(s) -> str:
    return "".join("+" if x > 0 else "-" for x in s)


# -- census tables ------------------------------------------------------------------

def face_rows(census):
    for fc in census.faces:
        face = census.arrangement.faces[fc.face_id]
        w = fc.witness
        yield (fc.face_id, _signs(face.sign_vector),
               "acyclic" if fc.acyclic else "cyclic",
               " ".join(map(str, fc.order)) if fc.acyclic else "",
               "" if fc.acyclic else " ".join(map(str, fc.relation.cycle)),
               int(fc.certified),
               str(w.direction) if w else "",
               _vec(w.base_point) if w else "")


FACE_HEADER = ("face", "sign_vector", "relation", "order", "cycle", "certified",
               "witness_direction", "witness_point")
BORDER_HEADER = ("kind", "vertex", "choice", "cell", "regular", "level", "conflicts", "weight")


def border_rows(stats):
    for b in stats.edge_borders + stats.slice_borders:
        yield (b.kind, b.vertex, " ".join(map(str, b.choice)), b.cell, int(b.regular),
               b.level if b.level < 2 else ">=2", " ".join(map(str, b.conflicts)),
               len(b.conflicts) if b.level == 1 else "")


def audit_rows(analysis):
    for r in analysis.reports:
        if not r.rows:
            yield (r.name, r.status, "", "")
        for k, row in enumerate(r.rows):
            detail = ";".join(f"{key}={val}" for key, val in row.items())
            yield (r.name, r.status, k, detail)


def _check_cap(n, dim, override):
    cap = CAPS[dim]
    if n > cap and not override:
        raise CapExceeded(f"n={n} exceeds the default cap {cap} for d={dim}; pass --cap-override")


# -- commands --------------------------------------------------------------------

def cmd_gen(args) -> int:
    cfg = GenConfig(n=args.n, dim=args.dim, kind=args.kind, seed=args.seed)
    bodies = generate(cfg)
    out = Path(args.out or "instance.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(out.name + ".tmp")
    save_instance(tmp, bodies, args.seed)
    os.replace(tmp, out)
    print(f"wrote {out} ({len(bodies)} bodies)")
    return 0


def _run_instance(args, command):
    started = time.perf_counter()
    bodies, seed = load_instance(args.instance)
    if args.seed is not None:
        seed = args.seed
    dim = bodies[0].dim
    _check_cap(len(bodies), dim, args.cap_override)
    analysis = analyze(bodies, seed=seed, probes=args.probes,
                       oracle_density=args.oracle_density, removals=not args.no_removals)
    outputs = Outputs(Path(args.out or "out"))
    summary = analysis.summary()
    outputs.json("summary.json", summary)
    outputs.csv("faces.csv", FACE_HEADER, face_rows(analysis.census))
    outputs.csv("borders.csv", BORDER_HEADER, border_rows(analysis.stats))
    if command == "audit":
        outputs.csv("audits.csv", ("audit", "status", "item", "detail"), audit_rows(analysis))
        outputs.csv("zone.csv", ("body", "circles", "faces", "sum_sq", "ratio"),
                    ((z["body"], z["circles"], z["faces"], z["sum_sq"], str(z["ratio"]))
                     for z in analysis.zone))
        if analysis.oracle is not None:
            o = analysis.oracle
            outputs.csv("oracle.csv", ("direction", "feasible", "order"),
                        ((_vec(u), int(w is not None), " ".join(map(str, w.order())) if w else "")
                         for u, w in zip(o.directions, o.feasible)))
    config = {"instance": str(args.instance), "seed": seed, "probes": args.probes,
              "oracle_density": args.oracle_density, "removals": not args.no_removals,
              "threads": os.environ.get("GEOPERM_THREADS", "1")}
    outputs.manifest(command, config, started)
    verdict = "pass" if analysis.passed else "FAIL"
    print(f"F={summary['F']} acyclic={summary['acyclic']} certified={summary['certified']} "
          f"permutations={summary['permutations']} popular_vertices={summary['popular_vertices']} "
          f"audits={verdict}")
    return 0 if analysis.passed else 1


def cmd_census(args) -> int:
    return _run_instance(args, "census")


def cmd_audit(args) -> int:
    return _run_instance(args, "audit")


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"3-8"`` or ``"3..8"`` (inclusive)."""
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
    return [int(text)]


SWEEP_HEADER = ("kind", "n", "seed", "F", "acyclic", "certified", "permutations",
                "popular_vertices", "popular_edges", "E0", "V0",
                "wenger", "main_power", "log2_n", "main", "planar", "lower")


def _sweep_task(job, dim, kind, probes, density):
    n, seed = job
    bodies = generate(GenConfig(n=n, dim=dim, kind=kind, seed=seed))
    a = analyze(bodies, seed=seed, probes=probes, oracle_density=density,
                removals=False, threads=1)
    s = a.summary()
    curves = bound_curves(max(n, 2), dim)
    power, lg, main = curves["main"]
    return (kind, n, seed, s["F"], s["acyclic"], s["certified"], s["permutations"],
            s["popular_vertices"], s["popular_edges"], s["E0"], s["V0"],
            curves["wenger"], power, f"{lg:.6f}", f"{main:.6f}", curves["planar"], curves["lower"])


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    ns = parse_range(args.n)
    for n in ns:
        _check_cap(n, args.dim, args.cap_override)
    seeds = list(range(args.seed or 0, (args.seed or 0) + args.seeds))
    jobs = [(n, s) for n in ns for s in seeds]
    task = partial(_sweep_task, dim=args.dim, kind=args.kind, probes=args.probes,
                   density=args.oracle_density)
    rows = parallel_map(task, jobs)
    outputs = Outputs(Path(args.out or "sweep"))
    outputs.csv("sweep.csv", SWEEP_HEADER, rows)
    config = {"kind": args.kind, "dim": args.dim, "n": ns, "seeds": seeds, "probes": args.probes,
              "oracle_density": args.oracle_density}
    outputs.manifest("sweep", config, started)
    ok = all(r[5] <= r[4] <= r[3] for r in rows)
    print(f"wrote {len(rows)} rows to {outputs.dir / 'sweep.csv'}")
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geoperm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--kind", choices=KINDS, default="grid_boxes")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dim", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    for name, func, text in (("census", cmd_census, "classify faces and write the summary"),
                             ("audit", cmd_audit, "census plus per-item audit tables")):
        c = sub.add_parser(name, help=text)
        c.add_argument("instance")
        c.add_argument("--probes", type=int, default=5)
        c.add_argument("--oracle-density", type=int, default=2000)
        c.add_argument("--seed", type=int, default=None, help="override the instance seed")
        c.add_argument("--no-removals", action="store_true",
                       help="skip conflict weights and removal audits")
        c.add_argument("--cap-override", action="store_true")
        c.add_argument("-o", "--out")
        c.set_defaults(func=func)

    s = sub.add_parser("sweep", help="counts against n over several seeds")
    s.add_argument("--kind", choices=KINDS, default="grid_boxes")
    s.add_argument("--n", required=True, help="n or an inclusive range like 3-8")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--seed", type=int, default=0, help="first seed")
    s.add_argument("--seeds", type=int, default=5, help="number of seeds")
    s.add_argument("--probes", type=int, default=5)
    s.add_argument("--oracle-density", type=int, default=2000)
    s.add_argument("--cap-override", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DisjointnessViolation as exc:
        print(f"error: DisjointnessViolation{exc.pair}: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, CapExceeded, GeneralPositionFailure, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
