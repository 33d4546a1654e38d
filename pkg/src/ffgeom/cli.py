"""Command-line entry point: ``ffgeom {gen,stats,audit,certify,trees,sweep}``.

Point sets come either from a point file (``--input``) or from a generator
(``--kind`` plus ``--size``/``--side``/``--seed``).  Exit status is 0 on
success, 2 when an audit or check fails, 1 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiment
from .audit import (audit_bisector_bound, audit_incidence_bound, audit_K_constant, audit_M_condition,
                    audit_triple_bound)
from .certify import REGIMES, CertifyParams, certify_tree, explain_certificate
from .errors import FFGeomError
from .field import make_field
from .generate import KINDS, GenSpec, derive_seed, generate
from .pointfile import format_points, read_points
from .schema import dumps
from .stats import (bisector_energy, bisector_lines, distance_set, isosceles_triples, pinned_nonzero_distances,
                    sphere_histogram)
from .trees import DEFAULT_BUDGET, count_distinct_pinned_trees, parse_tree_spec, pinned_tree_lower_bound

MODES = ("paper", "strict", "symmetric", "all", "nonzero")


def _common(sp: argparse.ArgumentParser, source=True):
    sp.add_argument("--p", type=int, help="field characteristic (odd prime)")
    sp.add_argument("--ext", type=int, default=1, help="extension degree e, q = p^e")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tree", help='tree spec, e.g. "vertices=3 edges=1-2,2-3 pin=1"')
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max embeddings to enumerate")
    if source:
        sp.add_argument("--input", help="point file for E")
        sp.add_argument("--input-f", help="point file for F (default: F = E)")
        sp.add_argument("--kind", choices=KINDS, default="random", help="generator when no --input")
        sp.add_argument("--size", type=int, help="generator size")
        sp.add_argument("--side", type=int, help="grid side")
        sp.add_argument("--radii", help="comma-separated radii for circle_union")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffgeom", description="Distance statistics for point sets in F_q^2.")
    sub = ap.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("gen", help="generate a point set file"))

    sp = sub.add_parser("stats", help="counting statistics of E")
    _common(sp)
    sp.add_argument("--statistic", default="T*",
                    choices=("T*", "T*(F,E,E)", "Q", "distance_set", "pinned", "histogram"))
    sp.add_argument("--pin", help="pin point x,y for pinned/histogram (default first point of F)")

    sp = sub.add_parser("audit", help="audit one of the counting inequalities")
    _common(sp)
    sp.add_argument("--which", default="incidence", choices=("triple", "bisector", "incidence", "K", "M"))
    sp.add_argument("--K", default="4")

    sp = sub.add_parser("certify", help="build and check a distinct-tree certificate")
    _common(sp)
    sp.add_argument("--regime", choices=REGIMES, default="medium_prime")
    sp.add_argument("--threshold", help="override the pin threshold (rational)")
    sp.add_argument("--K", default="4")

    sp = sub.add_parser("trees", help="count distinct pinned trees")
    _common(sp)
    sp.add_argument("--pin", help="pin point x,y (default first point of F)")

    sp = sub.add_parser("sweep", help="run an experiment config (JSON)")
    sp.add_argument("config")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--workers", type=int)
    return ap


def _point(text):
    try:
        x, y = (int(t) for t in text.split(","))
    except ValueError:
        raise FFGeomError(f"bad point {text!r}; expected x,y") from None
    return (x, y)


def _gen(args, stream=0):
    if args.p is None:
        raise FFGeomError("--p is required without --input")
    ctx = make_field(args.p, args.ext)
    params = {}
    if args.size is not None:
        params["size"] = args.size
    if args.side is not None:
        params["side"] = args.side
    if args.radii:
        params["radii"] = [int(r) for r in args.radii.split(",")]
    seed = args.seed if stream == 0 else derive_seed(args.seed, stream)
    return generate(ctx, GenSpec(args.kind, params, seed))


def _sets(args):
    E = read_points(args.input) if args.input else _gen(args)
    F = read_points(args.input_f) if args.input_f else E
    if F.ctx != E.ctx:
        raise FFGeomError("E and F live over different fields")
    return E, F


def _emit(args, payload: bytes | str):
    data = payload.encode() if isinstance(payload, str) else payload
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


def _record(args, rec: dict):
    if args.format == "csv":
        return experiment._csv([{k: experiment._cell(v) for k, v in rec.items()}], list(rec))
    return dumps(rec) + "\n"


def cmd_gen(args):
    _emit(args, format_points(_gen(args)))
    return 0


def cmd_stats(args):
    E, F = _sets(args)
    s = args.statistic
    rec = {"statistic": s, "p": E.ctx.p, "e": E.ctx.e, "n_E": E.n, "n_F": F.n}
    if s in ("T*", "T*(F,E,E)"):
        mode = args.mode or "paper"
        rec.update(mode=mode, value=str(isosceles_triples(E if s == "T*" else F, E, mode).value))
    elif s == "Q":
        mode = args.mode or "paper"
        rec.update(mode=mode, value=str(bisector_energy(E, mode)))
    elif s == "distance_set":
        rec.update(value=len(distance_set(E)), distances=sorted(distance_set(E)))
    else:
        x = _point(args.pin) if args.pin else F[0]
        rec["pin"] = list(x)
        if s == "pinned":
            d = sorted(pinned_nonzero_distances(x, E))
            rec.update(value=len(d), distances=d)
        else:
            rec["counts"] = {str(k): v for k, v in sorted(sphere_histogram(x, E).counts.items())}
    if args.format == "csv":
        rec = {k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in rec.items()
               if not isinstance(v, dict)}
    _emit(args, _record(args, rec))
    return 0


def cmd_audit(args):
    E, F = _sets(args)
    w, mode = args.which, args.mode or "paper"
    if w == "triple":
        r = audit_triple_bound(E, mode)
    elif w == "bisector":
        r = audit_bisector_bound(E, mode)
    elif w == "incidence":
        r = audit_incidence_bound(F, bisector_lines(E))
    elif w == "K":
        r = audit_K_constant(E, Fraction(args.K), mode)
    else:
        if not args.tree:
            raise FFGeomError("--tree is required for the M audit")
        r = audit_M_condition(E, F, parse_tree_spec(args.tree).k, Fraction(args.K))
    _emit(args, experiment.export(r, args.format))
    return 0 if r.holds else 2


def cmd_certify(args):
    E, F = _sets(args)
    if not args.tree:
        raise FFGeomError("--tree is required")
    T = parse_tree_spec(args.tree)
    kw = dict(regime=args.regime, K=Fraction(args.K), enumeration_budget=args.budget)
    params = CertifyParams.with_threshold(Fraction(args.threshold), **kw) if args.threshold \
        else CertifyParams(**kw)
    cert = certify_tree(E, F, T, params)
    _emit(args, experiment.export(cert, "json"))
    why = explain_certificate(cert, E, F, T)
    if why:
        print(f"certificate rejected: {why}", file=sys.stderr)
        return 2
    return 0


def cmd_trees(args):
    E, F = _sets(args)
    if not args.tree:
        raise FFGeomError("--tree is required")
    T = parse_tree_spec(args.tree)
    x = _point(args.pin) if args.pin else F[0]
    mode = args.mode or "nonzero"
    exact = count_distinct_pinned_trees(E.ctx, T, x, E, mode=mode, budget=args.budget)
    lb, _ = pinned_tree_lower_bound(E.ctx, T, x, E)
    rec = {"tree": T.text(), "pin": list(x), "mode": mode, "pool_size": E.n,
           "count": str(exact), "lower_bound": str(lb)}
    if args.format == "csv":
        rec["pin"] = f"{x[0]},{x[1]}"
    _emit(args, _record(args, rec))
    return 0


def cmd_sweep(args):
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FFGeomError(f"cannot read config: {exc}") from exc
    for key in ("out", "format", "workers"):
        if getattr(args, key) is not None:
            cfg[key] = getattr(args, key)
    report = experiment.run_experiment(cfg)
    if not report.path:
        sys.stdout.write(experiment.export(report, report.format).decode())
    return report.exit_status


COMMANDS = {"gen": cmd_gen, "stats": cmd_stats, "audit": cmd_audit, "certify": cmd_certify,
            "trees": cmd_trees, "sweep": cmd_sweep}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FFGeomError, OSError) as exc:
        print(f"ffgeom: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
