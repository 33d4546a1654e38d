"""Seeded sweeps over generated point sets, reported as CSV or JSON rows.

A config is a plain dict (usually loaded from JSON)::

    {"p": 7, "e": 1,
     "E": {"kind": "random", "params": {"size": 12}},
     "F": {"kind": "random", "params": {"size": 12}},   # optional, default F = E
     "select": ["T*", "Q:symmetric", "audit_incidence_bound"],
     "tree": "vertices=2 edges=1-2 pin=1",
     "seeds": 100, "seed_start": 0, "format": "csv", "out": "report.csv"}

Instance i uses base seed ``seed_start + i``; E and F are drawn from the
sub-seeds ``derive_seed(seed, 0)`` and ``derive_seed(seed, 1)``.  A
selection may carry a mode after a colon.  Any row whose ``holds`` is
false makes the run exit with status 2.
"""
from __future__ import annotations

import csv
import io
import json
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .audit import (AuditReport, audit_bisector_bound, audit_incidence_bound, audit_K_constant,
                    audit_M_condition, audit_triple_bound)
from .certify import Certificate, CertifyParams, certify_tree, check_certificate
from .errors import ConfigError, FFGeomError, IoError
from .field import make_field
from .generate import GenSpec, derive_seed, generate
from .plane import PointSet
from .schema import audit_to_json, certificate_to_json, dumps
from .stats import bisector_energy, bisector_lines, distance_set, isosceles_triples, pinned_nonzero_distances
from .trees import DEFAULT_BUDGET, count_distinct_pinned_trees, parse_tree_spec, pinned_tree_lower_bound

COLUMNS = ("run_id", "seed", "p", "e", "n_E", "n_F", "statistic", "mode", "value", "bound",
           "holds", "borderline", "premise_in_range", "elapsed_ms")


@dataclass(frozen=True)
class ExperimentConfig:
    p: int
    E: GenSpec
    select: tuple[str, ...]
    e: int = 1
    F: GenSpec | None = None
    tree: str | None = None
    seeds: int = 1
    seed_start: int = 0
    format: str = "csv"
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    regime: str = "medium_prime"
    K: Fraction = Fraction(4)
    threshold: Fraction | None = None
    workers: int | None = None

    def __post_init__(self):
        if not self.select:
            raise ConfigError("nothing selected")
        for s in self.select:
            if s.split(":", 1)[0] not in STATISTICS:
                raise ConfigError(f"unknown statistic {s!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.seeds < 0:
            raise ConfigError("seeds must be nonnegative")
        if self.tree is not None:
            try:
                parse_tree_spec(self.tree)
            except FFGeomError as exc:
                raise ConfigError(f"bad tree spec: {exc}") from exc
        elif any(s.split(":")[0] in NEEDS_TREE for s in self.select):
            raise ConfigError("selection needs a tree spec")
        try:
            make_field(self.p, self.e)
            self.params()
        except (FFGeomError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        try:
            for key in ("E", "F"):
                spec = d.get(key)
                if isinstance(spec, dict):
                    d[key] = GenSpec(spec["kind"], dict(spec.get("params", {})), int(spec.get("seed", 0)))
            d["select"] = tuple(d.get("select", ()))
            if d.get("threshold") is not None:
                d["threshold"] = Fraction(str(d["threshold"]))
            if "K" in d:
                d["K"] = Fraction(str(d["K"]))
            return cls(**d)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from exc

    def params(self) -> CertifyParams:
        if self.threshold is not None:
            return CertifyParams.with_threshold(self.threshold, regime=self.regime, K=self.K,
                                                enumeration_budget=self.budget)
        return CertifyParams(regime=self.regime, K=self.K, enumeration_budget=self.budget)


@dataclass
class ExperimentReport:
    rows: list[dict]
    exit_status: int
    path: str | None = None
    format: str = "csv"


@dataclass
class Row:
    value: object
    mode: str = ""
    bound: object = None
    holds: bool | None = None
    borderline: bool | None = None
    premise_in_range: bool | None = None


StatFn = Callable[[ExperimentConfig, PointSet, PointSet, str], Row]
STATISTICS: dict[str, StatFn] = {}
NEEDS_TREE = {"certify", "trees", "audit_M_condition"}


def register_statistic(name: str, fn: StatFn | None = None):
    """Add a statistic to the registry; usable as a decorator."""
    def deco(f):
        STATISTICS[name] = f
        return f
    return deco(fn) if fn is not None else deco


def _audit_row(r: AuditReport, mode="") -> Row:
    return Row(r.lhs, mode, r.rhs_text, r.holds, r.borderline, r.premise_in_range)


register_statistic("T*", lambda c, E, F, m: Row(isosceles_triples(E, E, m or "paper").value, m or "paper"))
register_statistic("T*(F,E,E)", lambda c, E, F, m: Row(isosceles_triples(F, E, m or "paper").value, m or "paper"))
register_statistic("Q", lambda c, E, F, m: Row(bisector_energy(E, m or "paper"), m or "paper"))
register_statistic("distance_set", lambda c, E, F, m: Row(len(distance_set(E))))
register_statistic("pinned_min", lambda c, E, F, m: Row(
    min((len(pinned_nonzero_distances(x, E)) for x in F), default=0)))
register_statistic("audit_triple_bound", lambda c, E, F, m: _audit_row(audit_triple_bound(E, m or "paper"), m or "paper"))
register_statistic("audit_bisector_bound",
                   lambda c, E, F, m: _audit_row(audit_bisector_bound(E, m or "paper"), m or "paper"))
register_statistic("audit_incidence_bound", lambda c, E, F, m: _audit_row(audit_incidence_bound(F, bisector_lines(E))))
register_statistic("audit_K_constant",
                   lambda c, E, F, m: _audit_row(audit_K_constant(E, c.K, m or "paper"), m or "paper"))
register_statistic("audit_M_condition",
                   lambda c, E, F, m: _audit_row(audit_M_condition(E, F, parse_tree_spec(c.tree).k, c.K)))


@register_statistic("certify")
def _certify_row(c: ExperimentConfig, E, F, m) -> Row:
    T = parse_tree_spec(c.tree)
    cert = certify_tree(E, F, T, c.params())
    ok = check_certificate(cert, E, F, T)
    return Row(cert.pins.n, c.regime, cert.per_pin_bound, ok, None, cert.hypothesis_in_range)


@register_statistic("trees")
def _trees_row(c: ExperimentConfig, E, F, m) -> Row:
    """Exact distinct pinned-tree count at the first pin of F, with its lower bound."""
    T = parse_tree_spec(c.tree)
    mode = m or "nonzero"
    x = F[0]
    exact = count_distinct_pinned_trees(E.ctx, T, x, E, mode=mode, budget=c.budget)
    lb = pinned_tree_lower_bound(E.ctx, T, x, E, c.params())[0] if E.without(x).n else 0
    return Row(exact, mode, lb, lb <= exact)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _run_instance(args) -> list[dict]:
    config, i = args
    ctx = make_field(config.p, config.e)
    seed = config.seed_start + i
    E = generate(ctx, GenSpec(config.E.kind, config.E.params, derive_seed(seed, 0)))
    if config.F is None:
        F = E
    else:
        F = generate(ctx, GenSpec(config.F.kind, config.F.params, derive_seed(seed, 1)))
    rows = []
    for j, sel in enumerate(config.select):
        name, _, mode = sel.partition(":")
        t0 = time.perf_counter()
        r = STATISTICS[name](config, E, F, mode)
        ms = int((time.perf_counter() - t0) * 1000)
        rows.append({
            "run_id": f"{i:06d}-{j:02d}", "seed": str(seed), "p": str(ctx.p), "e": str(ctx.e),
            "n_E": str(E.n), "n_F": str(F.n), "statistic": name, "mode": r.mode,
            "value": _cell(r.value), "bound": _cell(r.bound), "holds": _cell(r.holds),
            "borderline": _cell(r.borderline), "premise_in_range": _cell(r.premise_in_range),
            "elapsed_ms": str(ms),
        })
    return rows


def worker_count(config: ExperimentConfig) -> int:
    """Requested workers (default: all CPUs), capped by FFGEOM_THREADS."""
    n = config.workers or os.cpu_count() or 1
    cap = os.environ.get("FFGEOM_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise ConfigError(f"FFGEOM_THREADS must be an integer, got {cap!r}") from exc
    return max(1, n)


def run_experiment(config: ExperimentConfig | dict) -> ExperimentReport:
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    jobs = [(config, i) for i in range(config.seeds)]
    workers = min(worker_count(config), max(1, len(jobs)))
    if workers == 1:
        chunks = [_run_instance(j) for j in jobs]
    else:
        # fork keeps statistics registered at runtime visible to the workers
        with ProcessPoolExecutor(workers, mp_context=multiprocessing.get_context("fork")) as ex:
            chunks = list(ex.map(_run_instance, jobs))
    rows = sorted((r for ch in chunks for r in ch), key=lambda r: r["run_id"])
    status = 2 if any(r["holds"] == "false" for r in rows) else 0
    report = ExperimentReport(rows, status, config.out, config.format)
    if config.out:
        try:
            with open(config.out, "wb") as fh:
                fh.write(export(report, config.format))
        except OSError as exc:
            raise IoError(str(exc)) from exc
    return report


def export(report, format: str = "csv") -> bytes:
    """Serialise an experiment report, a certificate or an audit report."""
    if isinstance(report, Certificate):
        return (dumps(certificate_to_json(report)) + "\n").encode()
    if isinstance(report, AuditReport):
        if format == "json":
            return (dumps(audit_to_json(report)) + "\n").encode()
        d = audit_to_json(report)
        row = {k: _cell(d[k]) for k in ("inequality", "lhs", "rhs", "holds", "borderline", "premise_in_range")}
        return _csv([row], list(row))
    rows = report.rows if isinstance(report, ExperimentReport) else list(report)
    if format == "json":
        return (json.dumps(rows, indent=2) + "\n").encode()
    if format != "csv":
        raise ConfigError(f"unknown format {format!r}")
    return _csv(rows, COLUMNS)


def _csv(rows, columns) -> bytes:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue().encode()
