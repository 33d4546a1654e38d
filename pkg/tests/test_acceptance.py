"""Acceptance criteria 1-8, one test each; every test prints a PASS/FAIL line."""
import csv
import io
import time

import pytest

from ffgeom import (CertifyParams, LineMultiset, PointSet, audit_bisector_bound, audit_incidence_bound,
                    audit_K_constant, audit_triple_bound, bisector, bisector_energy, bisector_lines, certify_tree,
                    check_certificate, circle_points, count_distinct_pinned_trees, export,
                    isosceles_triples, make_field, parse_tree_spec, pinned_nonzero_distances, popular_pins,
                    run_experiment, sphere_histogram)
from ffgeom.certify import medium_hypothesis, triple_premise, triple_premise_range
from ffgeom.exact import iroot_floor
from ffgeom.experiment import STATISTICS, Row, register_statistic
from ffgeom.generate import SplitMix64
from ffgeom.plane import incidences, incidences_bruteforce
from ffgeom.stats import bisector_energy_bruteforce, isosceles_triples_bruteforce
from ffgeom.trees import count_distinct_pinned_trees_bruteforce

import oracles
from conftest import FIELDS, random_set
from helpers_cert import inflate_bound, overlap_pools

QS = sorted(FIELDS)
TREES = [
    "vertices=2 edges=1-2 pin=1",
    "vertices=3 edges=1-2,2-3 pin=1",
    "vertices=3 edges=1-2,2-3 pin=2",
    "vertices=4 edges=1-2,2-3,3-4 pin=1",
    "vertices=4 edges=1-2,2-3,3-4 pin=2",
    "vertices=4 edges=1-2,1-3,1-4 pin=1",
    "vertices=4 edges=1-2,1-3,1-4 pin=2",
    "vertices=4 edges=1-2,2-3,2-4 pin=1",
]


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def instances(count, seed, max_n, min_n=0):
    """(q, ctx, naive field, n1, n2, seed) tuples spread evenly over QS."""
    rng = SplitMix64(seed)
    for i in range(count):
        q = QS[i % len(QS)]
        yield (q, make_field(*FIELDS[q]), oracles.field(*FIELDS[q]),
               min_n + rng.below(max_n - min_n + 1), min_n + rng.below(max_n - min_n + 1), rng.next())


def test_1_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    mismatches = []
    counts = dict.fromkeys(("triples", "Q", "incidences", "trees"), 0)
    for q, ctx, K, nE, nF, s in instances(504, 1, 60):
        E, F = random_set(ctx, nE, s), random_set(ctx, nF, s + 1)
        for mode in ("paper", "strict"):
            fast = isosceles_triples(F, E, mode).value
            ref = isosceles_triples_bruteforce(F, E, mode).value
            naive = oracles.triples(K, list(F), list(E), strict=mode == "strict")
            if not fast == ref == naive:
                mismatches.append(("triples", q, s, mode))
        counts["triples"] += 1
    for q, ctx, K, n, _, s in instances(504, 2, 30):
        E = random_set(ctx, n, s)
        for variant in ("paper", "symmetric"):
            fast, ref = bisector_energy(E, variant), bisector_energy_bruteforce(E, variant)
            if not fast == ref == oracles.bisector_energy(K, list(E), variant == "symmetric"):
                mismatches.append(("Q", q, s, variant))
        counts["Q"] += 1
    for q, ctx, K, nE, nF, s in instances(504, 3, 60):
        E, F = random_set(ctx, nE % 21, s), random_set(ctx, nF, s + 1)
        L = bisector_lines(E)
        fast = incidences(F, L)
        if not fast == incidences_bruteforce(F, L) == oracles.bisector_incidences(K, list(F), list(E)):
            mismatches.append(("incidences", q, s))
        counts["incidences"] += 1
    rng = SplitMix64(4)
    for q, ctx, K, n, _, s in instances(504, 5, 25, min_n=1):
        T = parse_tree_spec(TREES[rng.below(len(TREES))])
        pool = random_set(ctx, n, s)
        x = (rng.below(ctx.q), rng.below(ctx.q))
        for mode in ("nonzero", "all"):
            fast = count_distinct_pinned_trees(ctx, T, x, pool, mode=mode)
            ref = count_distinct_pinned_trees_bruteforce(ctx, T, x, pool, mode=mode)
            naive = oracles.tree_count(K, T.edges, T.pin, x, list(pool), nonzero=mode == "nonzero")
            if not fast == ref == naive:
                mismatches.append(("trees", q, s, mode))
        counts["trees"] += 1
    elapsed = time.perf_counter() - t0
    ok = not mismatches and min(counts.values()) >= 500 and elapsed < 300
    verdict(1, "oracle equivalence", ok, f"instances {counts}, mismatches {len(mismatches)}, {elapsed:.0f}s")


def test_2_exact_anchors(verdict):
    checks = []
    f3, f5 = make_field(3), make_field(5)
    full = PointSet.full_plane(f3)
    checks.append(isosceles_triples(full, full).value == 216 == oracles.triples(oracles.field(3), list(full), list(full)))
    K3 = oracles.field(3)
    scan = {K3.dist((0, 0), z) for z in K3.plane()} - {0}
    checks.append(pinned_nonzero_distances((0, 0), full) == {1, 2} == scan)
    three = PointSet(f5, [(0, 0), (0, 1), (0, 2)])
    checks.append(bisector_energy(three) == 12 == oracles.bisector_energy(oracles.field(5), list(three)))
    circles = 0
    for q in range(3, 50):
        pe = {9: (3, 2), 25: (5, 2), 27: (3, 3), 49: (7, 2)}.get(q, (q, 1))
        try:
            ctx = make_field(*pe)
        except ValueError:
            continue
        K = oracles.field(*pe)
        eta = ctx.eta_minus_one
        for delta in range(ctx.q):
            want = ctx.q - eta if delta else (2 * ctx.q - 1 if eta == 1 else 1)
            got = circle_points(ctx, (0, 0), delta, full_plane=True).n
            checks.append(got == want == oracles.circle_size(K, (0, 0), delta))
            circles += 1
    verdict(2, "exact anchors", all(checks), f"{len(checks)} checks, {circles} circles, q <= 49")


def test_3_identity_suite(verdict):
    failures, n_inst = 0, 0
    for q, ctx, K, nE, nF, s in instances(504, 6, 40):
        E, F = random_set(ctx, nE, s), random_set(ctx, nF, s + 1)
        dFE = oracles.distance_table(K, list(F), list(E))
        dEE = oracles.distance_table(K, list(E), list(E))
        # pinned-circle identity: nonzero-radius circle populations add up to nonzero-distance pairs
        lhs = 0
        for x in F:
            h = sphere_histogram(x, E).counts
            lhs += sum(h[d] for d in pinned_nonzero_distances(x, E))
        rhs = sum(1 for row in dFE for d in row if d != 0)
        # histogram-square identity and the zero-distance correction
        h2 = sum(c * c for x in F for c in sphere_histogram(x, E).counts.values())
        eq = sum(1 for row in dFE for b in range(E.n) for c in range(E.n) if row[b] == row[c])
        zero_bc = sum(1 for row in dFE for b in range(E.n) for c in range(E.n)
                      if row[b] == row[c] and dEE[b][c] == 0)
        sym_ok = bisector_lines(E).sum_squares() == bisector_energy(E, "symmetric")
        if not (lhs == rhs and h2 == eq and isosceles_triples(F, E).value == h2 - zero_bc and sym_ok):
            failures += 1
        n_inst += 1
    verdict(3, "identity suite", failures == 0, f"{n_inst} instances, {failures} failures")


def test_4_incidence_audit(verdict):
    violations, n_inst = 0, 0
    rng = SplitMix64(7)
    for i in range(1000):
        p = (5, 7, 11, 13, 17)[i % 5]
        ctx = make_field(p)
        F = random_set(ctx, rng.below(61), rng.next())
        if i % 2:
            L = bisector_lines(random_set(ctx, 2 + rng.below(19), rng.next()))
        else:
            L = LineMultiset()
            pts = list(random_set(ctx, 2 * (1 + rng.below(30)), rng.next()))
            for a, b in zip(pts[0::2], pts[1::2]):
                L.add(bisector(ctx, a, b), 1 + rng.below(4))
        r = audit_incidence_bound(F, L)
        violations += not r.holds
        n_inst += 1
    verdict(4, "unconditional incidence bound", violations == 0, f"{n_inst} audits, {violations} violations")


def _primes_upto(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\0\0"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(3, n + 1) if sieve[i]]


def test_5_conditional_audits(verdict, tmp_path):
    findings, in_range_violations, reports = [], 0, 0
    for q, ctx, K, n, _, s in instances(300, 8, 45, min_n=1):
        if ctx.e != 1:
            continue
        E = random_set(ctx, n, s)
        for r in (audit_triple_bound(E), audit_bisector_bound(E), audit_K_constant(E)):
            reports += 1
            assert isinstance(r.premise_in_range, bool)
            if not r.holds:
                findings.append((r.inequality, ctx.p, E.n, r.premise_in_range))
                in_range_violations += r.premise_in_range and r.inequality != "K_constant"
    # the triple-bound premise range is empty for every prime a desk run can reach
    nonempty = [p for p in _primes_upto(2**20) if triple_premise_range(p)[0] <= triple_premise_range(p)[1]]
    medium_open = [p for p in _primes_upto(2**12)
                   if any(medium_hypothesis(iroot_floor(p**4, 3), p, k) for k in (1, 2, 3))]
    # boundary arithmetic: the window first opens at p = 5^12, where it is exactly {5^16}
    boundary = (triple_premise_range(5**12) == (5**16, 5**16) and triple_premise(5**16, 5**12)
                and not triple_premise(5**16 - 1, 5**12) and not triple_premise(5**16 + 1, 5**12))
    # planted violation drives exit status 2
    register_statistic("planted", lambda c, E, F, m: Row(E.n, "", 0, False, False, False))
    try:
        out = run_experiment({"p": 5, "E": {"kind": "random", "params": {"size": 4}},
                              "select": ["audit_triple_bound", "planted"], "seeds": 2,
                              "out": str(tmp_path / "r.csv")})
    finally:
        STATISTICS.pop("planted")
    clean = run_experiment({"p": 5, "E": {"kind": "random", "params": {"size": 4}},
                            "select": ["audit_triple_bound", "audit_bisector_bound"], "seeds": 2})
    ok = (not nonempty and not medium_open and boundary and in_range_violations == 0
          and out.exit_status == 2 and clean.exit_status == 0)
    k_findings = sum(f[0] == "K_constant" for f in findings)
    verdict(5, "conditional audits", ok,
            f"{reports} reports, {len(findings)} findings ({k_findings} K_constant), "
            f"premise ranges empty for all primes < 2^20, exit codes {out.exit_status}/{clean.exit_status}")


def test_6_certificate_soundness(verdict):
    t0 = time.perf_counter()
    failures, mutants_rejected, mutants, certs = [], 0, 0, 0
    rng = SplitMix64(9)
    regimes = ("medium_prime", "large_prime", "arbitrary")
    for i in range(210):
        q = QS[i % len(QS)]
        ctx = make_field(*FIELDS[q])
        n = 2 + rng.below(24)
        E, F = random_set(ctx, n, rng.next()), random_set(ctx, n, rng.next())
        T = parse_tree_spec(TREES[rng.below(len(TREES))])
        regime = "large_q" if ctx.e > 1 else regimes[rng.below(3)]
        t = rng.below(4)
        params = CertifyParams.with_threshold(t, regime=regime) if t else CertifyParams(regime=regime)
        c = certify_tree(E, F, T, params)
        certs += 1
        if not check_certificate(c, E, F, T):
            failures.append(("check", q, i))
        for x, b in c.pin_bounds.items():
            pool = F.without(x)
            if pool.n and count_distinct_pinned_trees(ctx, T, x, pool) < b:
                failures.append(("bound", q, i, x))
        if c.pins.n:
            mutants += 1
            bad = inflate_bound(c, lambda x: count_distinct_pinned_trees(ctx, T, x, F.without(x)))
            mutants_rejected += not check_certificate(bad, E, F, T)
        over = overlap_pools(c)
        if over is not None:
            mutants += 1
            mutants_rejected += not check_certificate(over, E, F, T)
    elapsed = time.perf_counter() - t0
    ok = not failures and certs >= 200 and mutants_rejected == mutants and mutants > 0 and elapsed < 600
    verdict(6, "certificate soundness", ok,
            f"{certs} certificates, {len(failures)} failures, {mutants_rejected}/{mutants} mutants rejected, "
            f"{elapsed:.0f}s")


def test_7_structural_echo(verdict):
    T = parse_tree_spec("vertices=2 edges=1-2 pin=1")
    mismatches, n_inst = 0, 0
    for q, ctx, K, n, _, s in instances(140, 10, 30, min_n=2):
        E = random_set(ctx, n, s)
        t = min(len(pinned_nonzero_distances(x, E)) for x in E)
        for thr in (t, t + 1, max(0, t - 1)):
            regime = "large_q" if ctx.e > 1 else "arbitrary"
            c = certify_tree(E, E, T, CertifyParams.with_threshold(thr, regime=regime))
            if c.pins != popular_pins(E, E, thr):
                mismatches += 1
        # at t every pin survives
        if certify_tree(E, E, T, CertifyParams.with_threshold(t, regime="large_q" if ctx.e > 1 else "arbitrary")).pins != E:
            mismatches += 1
        n_inst += 1
    verdict(7, "k=1 extraction equals popular_pins", mismatches == 0, f"{n_inst} instances, {mismatches} mismatches")


def _strip_elapsed(data: bytes):
    rows = list(csv.reader(io.StringIO(data.decode())))
    return [r[:-1] for r in rows]


def test_8_determinism(verdict, monkeypatch):
    monkeypatch.delenv("FFGEOM_THREADS", raising=False)
    cfg = {"p": 7, "E": {"kind": "random", "params": {"size": 10}}, "F": {"kind": "random", "params": {"size": 10}},
           "select": ["T*", "Q", "audit_incidence_bound", "audit_triple_bound", "certify", "trees"],
           "tree": "vertices=3 edges=1-2,2-3 pin=1", "seeds": 12, "seed_start": 100}
    a = export(run_experiment({**cfg, "workers": 1}))
    b = export(run_experiment({**cfg, "workers": 1}))
    c = export(run_experiment({**cfg, "workers": 3}))
    monkeypatch.setenv("FFGEOM_THREADS", "2")
    d = export(run_experiment({**cfg, "workers": 8}))
    same = _strip_elapsed(a) == _strip_elapsed(b) == _strip_elapsed(c) == _strip_elapsed(d)
    verdict(8, "determinism", same and len(_strip_elapsed(a)) == 1 + 12 * 6,
            "two serial runs, 3 workers and FFGEOM_THREADS=2 produce identical CSV")
