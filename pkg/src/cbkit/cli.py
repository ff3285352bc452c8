"""Command-line entry point: ``cbkit <subcommand> [flags]``.

Every run prints one JSON document {"schema", "command", "config", "result"}
on stdout. The config is the fully resolved flag set, defaults included, so
re-running with it reproduces the output byte for byte.

Exit codes: 0 success / property held, 1 property violated (the output then
contains a reproducer), 2 invalid input. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from random import Random

from . import SCHEMA
from .ambients import (LinearSubspace, PluckerModel, QuadricPencil, SegreModel, pencil_discriminant,
                       plucker_coordinates, plucker_relations_hold, residual_quadric,
                       segre_coordinates, segre_minors_vanish)
from .bounds import BoundsQuery, InconsistentQuery, irr_bounds
from .cb import CbUndefined, cb_check, cb_check_oracle, max_cb_degree
from .curves import classify_degree2
from .fields import PrimeField, field_from_spec
from .linalg import ExactMatrix
from .projections import (GenericityError, KINDS, build_projection, projection_degree,
                          verify_fiber_cb)
from .projective import PointSet, ProjectivePoint
from .search import MODES, SearchJob, run_search

log = logging.getLogger("cbkit")

OK, VIOLATED, INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


def _load_json(value: str):
    """Inline JSON (starting with { or [) or a path to a JSON file."""
    text = value.strip()
    if text[:1] in "{[":
        return json.loads(text)
    with open(value) as fh:
        return json.load(fh)


def _field(args):
    return field_from_spec(args.field)


def _points(args) -> PointSet:
    obj = _load_json(args.points)
    if isinstance(obj, list):
        obj = {"points": obj}
    obj = dict(obj)
    obj.setdefault("field", _field(args).spec())
    return PointSet.from_json(obj)


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(x) for x in text.split(",") if x.strip()]


# -- subcommands -----------------------------------------------------------------

def cmd_cb_check(args):
    S = _points(args)
    if args.max_degree is not None:
        best = max_cb_degree(S, args.max_degree)
        return OK, {"max_cb_degree": best, "r": len(S)}
    if args.method == "oracle":
        holds = cb_check_oracle(S, args.m)
        result = {"m": args.m, "holds": holds, "r": len(S), "method": "oracle"}
    else:
        report = cb_check(S, args.m, method=args.method)
        result = report.to_json()
        result["r"] = len(S)
        result["method"] = args.method
        holds = report.holds
    if not holds:
        result["reproducer"] = {"points": S.to_json(), "m": args.m}
    return (OK if holds else VIOLATED), result


def cmd_classify(args):
    S = _points(args)
    cls = classify_degree2(S, Random(args.seed))
    return OK, {"r": len(S), **cls.to_json()}


def _projection_params(args) -> dict:
    params = {}
    if args.params is not None:
        params.update(_load_json(args.params))
    for name in ("n", "d", "k", "m", "factor"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    for name in ("dims", "degrees"):
        v = _int_list(getattr(args, name))
        if v is not None:
            params[name] = v
    if args.case is not None:
        params["case"] = args.case
    return params


def cmd_project(args):
    F = _field(args)
    if not isinstance(F, PrimeField):
        raise InvalidInput("projection sampling needs a prime field")
    rng = Random(args.seed)
    try:
        spec = build_projection(args.kind, _projection_params(args), F, rng)
    except KeyError as exc:
        raise InvalidInput(f"missing projection parameter {exc.args[0]}") from exc
    result = {"projection": spec.to_json()}
    if args.task == "degree":
        report = projection_degree(spec, args.samples, rng)
        result["degree"] = report.to_json(with_samples=args.with_samples)
        return OK, result
    samples = verify_fiber_cb(spec, args.samples, rng)
    statuses = [s.cb_status for s in samples]
    result["adjunction"] = spec.adjunction
    result["fibers"] = [{"degree": s.degree, "cb_status": s.cb_status, "residue_degrees": s.residue_degrees}
                        for s in samples]
    result["summary"] = {k: statuses.count(k) for k in sorted(set(statuses))}
    failing = [s.to_json() for s in samples if s.cb_status == "fails"]
    if failing:
        result["reproducer"] = failing[0]
        return VIOLATED, result
    return OK, result


def cmd_pencil(args):
    F = _field(args)
    if args.pencil is not None:
        pencil = QuadricPencil.from_json(_load_json(args.pencil), F)
    elif args.diag is not None:
        entries = [F.from_json(x) for x in args.diag.split(",")]
        n = len(entries)
        m1 = ExactMatrix([[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)], F)
        m2 = ExactMatrix([[entries[i] if i == j else F.zero() for j in range(n)] for i in range(n)], F)
        pencil = QuadricPencil(m1, m2)
    else:
        raise InvalidInput("pencil needs --pencil or --diag")
    disc = pencil_discriminant(pencil, Random(args.seed))
    result = {"pencil": pencil.to_json(), "discriminant": disc.to_json()}
    if args.plane is not None:
        plane = LinearSubspace([[F.from_json(x) for x in v] for v in _load_json(args.plane)], F)
        t = residual_quadric(pencil, plane)
        result["residual_parameter"] = t if isinstance(t, str) else F.to_json(t)
    return OK, result


def cmd_bounds(args):
    q = BoundsQuery(family=args.family, n=args.n, d=args.d, k=args.k, m=args.m,
                    dims=_int_list(args.dims), degrees=_int_list(args.degrees),
                    contains_line=args.contains_line, contains_conic=args.contains_conic)
    return OK, irr_bounds(q).to_json()


def cmd_search(args):
    obj = _load_json(args.job) if args.job is not None else {}
    for name in ("mode", "N", "m_min", "m_max", "r_min", "r_max", "trials", "p"):
        v = getattr(args, name)
        if v is not None:
            obj[name] = v
    if args.corrupt_implication:
        obj["corrupt_implication"] = True
    obj.setdefault("seed", args.seed)
    if "p" not in obj:
        F = _field(args)
        if not isinstance(F, PrimeField):
            raise InvalidInput("search runs over a prime field")
        obj["p"] = F.p
    job = SearchJob.from_json(obj)
    args.resolved_job = job.to_json()
    stats: dict = {}
    out = run_search(job, workers=args.workers, stats=stats)
    log.info("search: %.2f s, %.1f trials/s", stats["seconds"], stats["trials_per_second"])
    return (OK if out.ok else VIOLATED), {"job": job.to_json(), **out.to_json()}


def cmd_embed(args):
    F = _field(args)
    if args.plucker is not None:
        k, m = _int_list(args.plucker)
        rows = [[F.from_json(x) for x in r] for r in _load_json(args.rows)]
        model = PluckerModel(k, m)
        if len(rows) != k or any(len(r) != m for r in rows):
            raise InvalidInput(f"need a {k} x {m} matrix")
        coords = plucker_coordinates(model, rows, F)
        if all(F.is_zero(c) for c in coords):
            raise InvalidInput("rows are linearly dependent")
        pt = ProjectivePoint.of(coords, F)
        return OK, {"model": "plucker", "k": k, "m": m, "ambient_dim": model.ambient_dim,
                    "subsets": [list(s) for s in model.subsets], "point": pt.to_json(),
                    "relations_hold": plucker_relations_hold(model, pt.coords, F)}
    if args.segre is not None:
        dims = _int_list(args.segre)
        vecs = [[F.from_json(x) for x in v] for v in _load_json(args.vectors)]
        model = SegreModel(tuple(dims))
        if any(all(F.is_zero(x) for x in v) for v in vecs):
            raise InvalidInput("zero vector")
        pt = ProjectivePoint.of(segre_coordinates(model, vecs, F), F)
        return OK, {"model": "segre", "dims": dims, "ambient_dim": model.ambient_dim,
                    "point": pt.to_json(), "minors_vanish": segre_minors_vanish(model, pt.coords, F)}
    raise InvalidInput("embed needs --plucker or --segre")


# -- parser ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", default="prime:101", help="rationals | prime:P | ext:P:K (default prime:101)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", choices=("json", "pretty"), default="json")
    p.add_argument("--workers", type=int, default=1)
    return p


def _tristate(p, name):
    g = p.add_mutually_exclusive_group()
    g.add_argument(f"--{name}", dest=name.replace("-", "_"), action="store_true", default=None)
    g.add_argument(f"--no-{name}", dest=name.replace("-", "_"), action="store_false")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cbkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cb-check", parents=[common], help="decide CB(m) for a point set")
    p.add_argument("--points", required=True, help="PointSet JSON (file or inline)")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--method", choices=("fast", "naive", "oracle"), default="fast")
    p.add_argument("--max-degree", type=int, default=None, help="report the largest m <= this with CB(m)")
    p.set_defaults(func=cmd_cb_check)

    p = sub.add_parser("classify", parents=[common], help="line / two lines / smooth conic / none")
    p.add_argument("--points", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("project", parents=[common], help="degrees and fiber CB of the explicit projections")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--task", choices=("degree", "verify"), default="degree")
    p.add_argument("--params", default=None, help="JSON object of parameters")
    for name in ("n", "d", "k", "m", "factor"):
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--dims", default=None, help="comma-separated factor dimensions")
    p.add_argument("--degrees", default=None, help="comma-separated multidegree")
    p.add_argument("--case", choices=("generic", "line", "conic"), default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--with-samples", action="store_true")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("pencil", parents=[common], help="discriminant of a pencil of quadrics")
    p.add_argument("--pencil", default=None, help='JSON {"m1": [[..]], "m2": [[..]]}')
    p.add_argument("--diag", default=None, help="M1 = I, M2 = diag of these comma-separated entries")
    p.add_argument("--plane", default=None, help="basis vectors of a plane; report its residual member")
    p.set_defaults(func=cmd_pencil)

    p = sub.add_parser("bounds", parents=[common], help="degree of irrationality bounds")
    p.add_argument("--family", required=True)
    for name in ("n", "d", "k", "m"):
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--dims", default=None)
    p.add_argument("--degrees", default=None)
    _tristate(p, "contains-line")
    _tristate(p, "contains-conic")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", parents=[common], help="seeded search over CB point sets")
    p.add_argument("--job", default=None, help="SearchJob JSON; flags below override it")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    for name in ("m-min", "m-max", "r-min", "r-max", "trials"):
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("--corrupt-implication", action="store_true", help="fault injection")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("embed", parents=[common], help="Plücker and Segre coordinates")
    p.add_argument("--plucker", default=None, help="k,m")
    p.add_argument("--rows", default=None, help="k x m matrix JSON")
    p.add_argument("--segre", default=None, help="comma-separated factor dimensions")
    p.add_argument("--vectors", default=None, help="one coordinate vector per factor (JSON)")
    p.set_defaults(func=cmd_embed)
    return parser


def _resolve(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    if cfg.get("command") == "project" and cfg.get("samples") is None:
        cfg["samples"] = 10 if cfg.get("task") == "degree" else 20
        args.samples = cfg["samples"]
    return dict(sorted(cfg.items()))


def render(doc: dict, style: str) -> str:
    if style == "pretty":
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("CBKIT_LOG", "WARNING"), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    config = _resolve(args)
    try:
        code, result = args.func(args)
    except (InvalidInput, InconsistentQuery, CbUndefined, ValueError, KeyError, TypeError,
            OSError, json.JSONDecodeError, GenericityError) as exc:
        print(f"cbkit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INVALID
    if hasattr(args, "resolved_job"):
        config = dict(sorted({**config, "resolved_job": args.resolved_job}.items()))
    doc = {"schema": SCHEMA, "command": args.command, "config": config, "result": result}
    print(render(doc, args.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
