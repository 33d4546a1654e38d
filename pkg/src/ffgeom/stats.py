"""Distance sets, isosceles triple counts and bisector energy.

Each count has a vectorised fast path and a naive ``*_bruteforce`` oracle
that loops over the defining tuples directly.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .plane import (Coords, Point, PointSet, bisector, distance, distance_matrix, distances_from,
                    isotropic_groups, LineMultiset)

DENSE_HISTOGRAM_MAX_Q = 2**12
_CHUNK = 1 << 22  # max matrix entries materialised at once

PAPER = "paper"
STRICT = "strict"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class SphereHistogram:
    pin: Point
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class TripleCount:
    value: int
    mode: str = PAPER

    def __int__(self):
        return self.value


def distance_set(E: PointSet) -> frozenset[int]:
    if E.n == 0:
        return frozenset()
    rows = max(1, _CHUNK // E.n)
    out = set()
    for start in range(0, E.n, rows):
        out.update(np.unique(distance_matrix(E.ctx, E[start:start + rows], E)).tolist())
    return frozenset(out)


def pinned_nonzero_distances(x: Point, E: PointSet) -> frozenset[int]:
    d = distances_from(E.ctx, x, E)
    return frozenset(np.unique(d[d != 0]).tolist())


def sphere_histogram(x: Point, E: PointSet) -> SphereHistogram:
    d = distances_from(E.ctx, x, E)
    if E.ctx.q <= DENSE_HISTOGRAM_MAX_Q:
        dense = np.bincount(d, minlength=E.ctx.q)
        counts = {int(k): int(dense[k]) for k in np.flatnonzero(dense)}
    else:
        counts = dict(sorted(Counter(d.tolist()).items()))
    return SphereHistogram((int(x[0]), int(x[1])), counts)


def _check_mode(mode, allowed):
    if mode not in allowed:
        raise ValueError(f"mode must be one of {allowed}, got {mode!r}")


def equal_distance_triples(F: PointSet, E: PointSet, nonzero_apex: bool = False) -> int:
    """#{(x, b, c) in F x E x E : ||x-b|| = ||x-c||}, i.e. sum of squared sphere counts.

    With ``nonzero_apex`` only spheres of nonzero radius contribute.
    """
    ctx = E.ctx
    if F.n == 0 or E.n == 0:
        return 0
    rows = max(1, _CHUNK // E.n)
    total = 0
    for start in range(0, F.n, rows):
        D = distance_matrix(ctx, F[start:start + rows], E)
        keys = np.arange(D.shape[0], dtype=np.int64)[:, None] * ctx.q + D
        if nonzero_apex:
            keys = keys[D != 0]
        _, cnt = np.unique(keys, return_counts=True)
        total += int((cnt.astype(np.int64) ** 2).sum())
    return total


def zero_distance_pairs(E: PointSet) -> tuple[np.ndarray, np.ndarray]:
    """Ordered index pairs (b, c), b != c, with ||b - c|| = 0.

    Such pairs lie on a common isotropic line, so E is bucketed by isotropic
    line and pairs are formed inside each bucket.
    """
    bs, cs = [], []
    for g in isotropic_groups(E):
        g = np.asarray(g, dtype=np.int64)
        ii, jj = np.meshgrid(g, g, indexing="ij")
        mask = ii != jj
        bs.append(ii[mask])
        cs.append(jj[mask])
    if not bs:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(bs), np.concatenate(cs)


def isosceles_triples(F: PointSet, E: PointSet, mode: str = PAPER) -> TripleCount:
    """Triples (a, b, c) in F x E x E with ||a-b|| = ||a-c|| and ||b-c|| != 0.

    In ``strict`` mode the common distance ||a-b|| must also be nonzero.
    """
    _check_mode(mode, (PAPER, STRICT))
    ctx = E.ctx
    strict = mode == STRICT
    total = equal_distance_triples(F, E, nonzero_apex=strict)
    if F.n == 0 or E.n == 0:
        return TripleCount(0, mode)
    # remove b == c
    if strict:
        total -= sum(int(np.count_nonzero(distances_from(ctx, b, F))) for b in E)
    else:
        total -= F.n * E.n
    # remove b != c with ||b - c|| = 0, testing every apex directly
    bi, ci = zero_distance_pairs(E)
    step = max(1, _CHUNK // max(F.n, 1))
    for start in range(0, len(bi), step):
        d1 = distance_matrix(ctx, F, Coords(E.xs[bi[start:start + step]], E.ys[bi[start:start + step]]))
        d2 = distance_matrix(ctx, F, Coords(E.xs[ci[start:start + step]], E.ys[ci[start:start + step]]))
        hit = d1 == d2
        if strict:
            hit &= d1 != 0
        total -= int(np.count_nonzero(hit))
    return TripleCount(total, mode)


def isosceles_triples_bruteforce(F: PointSet, E: PointSet, mode: str = PAPER) -> TripleCount:
    _check_mode(mode, (PAPER, STRICT))
    ctx = E.ctx
    dFE = [[distance(ctx, a, b) for b in E] for a in F]
    dEE = [[distance(ctx, b, c) for c in E] for b in E]
    count = 0
    for ai in range(F.n):
        row = dFE[ai]
        for bi in range(E.n):
            if mode == STRICT and row[bi] == 0:
                continue
            for cj in range(E.n):
                if row[bi] == row[cj] and dEE[bi][cj] != 0:
                    count += 1
    return TripleCount(count, mode)


def _bisector_keys(E: PointSet):
    """Canonical bisector key and nonzero-distance flag for every ordered pair a != b."""
    ctx = E.ctx
    n = E.n
    ia, ib = np.nonzero(~np.eye(n, dtype=bool))
    ax, ay, bx, by = E.xs[ia], E.ys[ia], E.xs[ib], E.ys[ib]
    two = ctx.element(2)
    A = ctx.mul(ctx.sub(bx, ax), two)
    B = ctx.mul(ctx.sub(by, ay), two)
    C = ctx.sub(ctx.add(ctx.square(bx), ctx.square(by)), ctx.add(ctx.square(ax), ctx.square(ay)))
    lead = np.where(A != 0, A, B)
    s = ctx.inv(lead)
    Bn, Cn = ctx.mul(B, s), ctx.mul(C, s)
    q = ctx.q
    keys = (A != 0).astype(np.int64) * q * q + Bn * q + Cn
    d = ctx.add(ctx.square(ctx.sub(bx, ax)), ctx.square(ctx.sub(by, ay)))
    return keys, d != 0


def bisector_energy(E: PointSet, variant: str = PAPER) -> int:
    """#{(a,b,c,d) in E^4 : a != b, c != d, B(a,b) = B(c,d), ||a-b|| != 0}.

    The ``symmetric`` variant also requires ||c-d|| != 0.
    """
    _check_mode(variant, (PAPER, SYMMETRIC))
    if E.n < 2:
        return 0
    keys, nz = _bisector_keys(E)
    uniq, inv = np.unique(keys, return_inverse=True)
    m_all = np.bincount(inv, minlength=len(uniq)).astype(np.int64)
    m_nz = np.bincount(inv[nz], minlength=len(uniq)).astype(np.int64) if nz.any() else np.zeros_like(m_all)
    if variant == SYMMETRIC:
        return int((m_nz * m_nz).sum())
    return int((m_nz * m_all).sum())


def bisector_energy_bruteforce(E: PointSet, variant: str = PAPER) -> int:
    """Quadruple loop; lines compared by proportionality of raw (a, b, c) coefficients."""
    _check_mode(variant, (PAPER, SYMMETRIC))
    ctx = E.ctx
    pairs = [(a, b) for a in E for b in E if a != b]
    if not pairs:
        return 0
    two = ctx.element(2)
    raw = np.array([
        (ctx.mul(two, ctx.sub(b[0], a[0])), ctx.mul(two, ctx.sub(b[1], a[1])),
         ctx.sub(ctx.add(ctx.mul(b[0], b[0]), ctx.mul(b[1], b[1])),
                 ctx.add(ctx.mul(a[0], a[0]), ctx.mul(a[1], a[1]))))
        for a, b in pairs], dtype=np.int64)
    nz = np.array([distance(ctx, a, b) != 0 for a, b in pairs])
    u, v = raw[:, None, :], raw[None, :, :]
    same = np.ones((len(pairs), len(pairs)), dtype=bool)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        same &= ctx.mul(u[..., i], v[..., j]) == ctx.mul(u[..., j], v[..., i])
    first = nz[:, None]
    if variant == SYMMETRIC:
        first = first & nz[None, :]
    return int(np.count_nonzero(same & first))


def bisector_lines(E: PointSet, nonzero_only: bool = True) -> LineMultiset:
    """Multiset of bisectors B(a, b) over ordered pairs a != b (at nonzero distance by default)."""
    ctx = E.ctx
    L = LineMultiset()
    for a in E:
        for b in E:
            if a != b and (not nonzero_only or distance(ctx, a, b) != 0):
                L.add(bisector(ctx, a, b))
    return L
