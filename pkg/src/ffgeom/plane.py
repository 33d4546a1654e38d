"""Points, the quadratic distance form, circles and lines in F_q^2."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import EqualPoints
from .field import FieldCtx, sqrt_field

Point = tuple[int, int]

FULL_PLANE_LIMIT = 2**22


class PointSet:
    """Deduplicated points of F_q^2 kept in lexicographic order."""

    __slots__ = ("ctx", "points", "xs", "ys", "_index")

    def __init__(self, ctx: FieldCtx, points: Iterable = ()):
        pts = set()
        for pt in points:
            x, y = pt
            x, y = int(x), int(y)
            if not (0 <= x < ctx.q and 0 <= y < ctx.q):
                raise ValueError(f"point {pt} is not canonical in F_{ctx.q}")
            pts.add((x, y))
        self.ctx = ctx
        self.points: tuple[Point, ...] = tuple(sorted(pts))
        self.xs = np.fromiter((pt[0] for pt in self.points), dtype=np.int64, count=len(self.points))
        self.ys = np.fromiter((pt[1] for pt in self.points), dtype=np.int64, count=len(self.points))
        self._index = None

    @classmethod
    def full_plane(cls, ctx: FieldCtx) -> "PointSet":
        if ctx.q**2 > FULL_PLANE_LIMIT:
            raise ValueError(f"full plane of F_{ctx.q} has too many points")
        return cls(ctx, ((x, y) for x in range(ctx.q) for y in range(ctx.q)))

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PointSet(self.ctx, self.points[i])
        return self.points[i]

    def index(self, pt: Point) -> int:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.points)}
        return self._index[tuple(pt)]

    def __contains__(self, pt) -> bool:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.points)}
        return tuple(pt) in self._index

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.ctx == other.ctx and self.points == other.points

    def __hash__(self):
        return hash((self.ctx.q, self.points))

    def __repr__(self):
        return f"PointSet(q={self.ctx.q}, n={self.n})"

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.ctx, self.points + other.points)

    def without(self, *pts: Point) -> "PointSet":
        drop = {tuple(p) for p in pts}
        return PointSet(self.ctx, (p for p in self.points if p not in drop))

    def isdisjoint(self, other: "PointSet") -> bool:
        return not set(self.points) & set(other.points)

    def issubset(self, other: "PointSet") -> bool:
        return all(p in other for p in self.points)


class Coords:
    """Bare coordinate arrays (repetitions allowed) accepted by :func:`distance_matrix`."""

    __slots__ = ("xs", "ys")

    def __init__(self, xs, ys):
        self.xs = np.asarray(xs, dtype=np.int64)
        self.ys = np.asarray(ys, dtype=np.int64)


def distance(ctx: FieldCtx, u: Point, v: Point) -> int:
    """||u - v|| = (u_x - v_x)^2 + (u_y - v_y)^2 as a field element."""
    dx = ctx.sub(int(u[0]), int(v[0]))
    dy = ctx.sub(int(u[1]), int(v[1]))
    return ctx.add(ctx.mul(dx, dx), ctx.mul(dy, dy))


def distances_from(ctx: FieldCtx, x: Point, E: PointSet) -> np.ndarray:
    """Vector of ||x - y|| for y in E, in E's order."""
    dx = ctx.sub(E.xs, int(x[0]))
    dy = ctx.sub(E.ys, int(x[1]))
    return ctx.add(ctx.square(dx), ctx.square(dy))


def distance_matrix(ctx: FieldCtx, A: PointSet, B: PointSet) -> np.ndarray:
    dx = ctx.sub(A.xs[:, None], B.xs[None, :])
    dy = ctx.sub(A.ys[:, None], B.ys[None, :])
    return ctx.add(ctx.square(dx), ctx.square(dy))


def circle_points(ctx: FieldCtx, center: Point, radius: int,
                  domain: PointSet | None = None, full_plane: bool = False) -> PointSet:
    """Points y with ||center - y|| = radius.

    With ``full_plane=True`` the whole of F_q^2 is the domain and the circle
    is enumerated column by column through square roots, in O(q) time.
    """
    if full_plane:
        cx, cy = int(center[0]), int(center[1])
        out = []
        for x in range(ctx.q):
            dx = ctx.sub(x, cx)
            rest = ctx.sub(int(radius), ctx.mul(dx, dx))
            for r in sqrt_field(ctx, rest):
                out.append((x, ctx.add(cy, r)))
        return PointSet(ctx, out)
    if domain is None:
        raise ValueError("either a domain or full_plane=True is required")
    d = distances_from(ctx, center, domain)
    return PointSet(ctx, (domain.points[i] for i in np.flatnonzero(d == int(radius))))


def isotropic_directions(ctx: FieldCtx) -> frozenset[Point]:
    """Directions (1, i) with 1 + i^2 = 0; (0, 1) is never isotropic."""
    return frozenset((1, i) for i in sqrt_field(ctx, ctx.minus_one))


def isotropic_groups(E: PointSet) -> list[list[int]]:
    """Indices of E grouped by the isotropic line they lie on (groups of size >= 2)."""
    ctx = E.ctx
    groups = []
    for _, i in sorted(isotropic_directions(ctx)):
        # points on the line through (x, y) with direction (1, i) share y - i*x
        key = ctx.sub(E.ys, ctx.mul(E.xs, i))
        buckets = defaultdict(list)
        for idx, kv in enumerate(key.tolist()):
            buckets[kv].append(idx)
        groups.extend(b for _, b in sorted(buckets.items()) if len(b) > 1)
    return groups


def max_isotropic_line_count(E: PointSet) -> int:
    """Largest number of points of E on a single isotropic line."""
    ctx = E.ctx
    best = 0
    for _, i in isotropic_directions(ctx):
        if E.n == 0:
            break
        key = ctx.sub(E.ys, ctx.mul(E.xs, i))
        best = max(best, int(np.unique(key, return_counts=True)[1].max()))
    return best


@dataclass(frozen=True)
class LineF:
    """The line {(x, y): a x + b y = c}, scaled so the first nonzero of (a, b) is 1."""
    a: int
    b: int
    c: int
    isotropic: bool

    def contains(self, ctx: FieldCtx, pt: Point) -> bool:
        return ctx.add(ctx.mul(self.a, int(pt[0])), ctx.mul(self.b, int(pt[1]))) == self.c


def make_line(ctx: FieldCtx, a: int, b: int, c: int) -> LineF:
    a, b, c = int(a), int(b), int(c)
    if a == 0 and b == 0:
        raise ValueError("(a, b) must not both be zero")
    s = ctx.inv(a if a else b)
    a, b, c = ctx.mul(a, s), ctx.mul(b, s), ctx.mul(c, s)
    iso = ctx.add(ctx.mul(a, a), ctx.mul(b, b)) == 0
    return LineF(a, b, c, iso)


def bisector(ctx: FieldCtx, a: Point, b: Point) -> LineF:
    """Perpendicular bisector {z : ||z - a|| = ||z - b||}."""
    a, b = (int(a[0]), int(a[1])), (int(b[0]), int(b[1]))
    if a == b:
        raise EqualPoints(f"bisector of {a} with itself")
    two = ctx.element(2)
    la = ctx.mul(two, ctx.sub(b[0], a[0]))
    lb = ctx.mul(two, ctx.sub(b[1], a[1]))
    nb = ctx.add(ctx.mul(b[0], b[0]), ctx.mul(b[1], b[1]))
    na = ctx.add(ctx.mul(a[0], a[0]), ctx.mul(a[1], a[1]))
    return make_line(ctx, la, lb, ctx.sub(nb, na))


class LineMultiset:
    """Lines with positive multiplicities m(l)."""

    def __init__(self, entries=None):
        self.entries: Counter[LineF] = Counter()
        if entries:
            items = entries.items() if hasattr(entries, "items") else ((l, 1) for l in entries)
            for line, m in items:
                self.add(line, m)

    def add(self, line: LineF, m: int = 1):
        if m < 1:
            raise ValueError("multiplicity must be positive")
        self.entries[line] += m

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def sum_squares(self) -> int:
        return sum(m * m for m in self.entries.values())

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())


def incidences(F: PointSet, L: LineMultiset) -> int:
    """Point-line incidences, lines counted with multiplicity.

    Lines are grouped by their (a, b) coefficients; for each group the value
    a x + b y is tabulated once over F and looked up per line.
    """
    ctx = F.ctx
    if F.n == 0 or not L.entries:
        return 0
    by_normal = defaultdict(list)
    for line, m in L.entries.items():
        by_normal[(line.a, line.b)].append((line.c, m))
    total = 0
    for (a, b), lines in by_normal.items():
        vals = ctx.add(ctx.mul(F.xs, a), ctx.mul(F.ys, b))
        u, cnt = np.unique(vals, return_counts=True)
        table = dict(zip(u.tolist(), cnt.tolist()))
        total += sum(m * table.get(c, 0) for c, m in lines)
    return total


def incidences_bruteforce(F: PointSet, L: LineMultiset) -> int:
    return sum(m for pt in F for line, m in L.entries.items() if line.contains(F.ctx, pt))
