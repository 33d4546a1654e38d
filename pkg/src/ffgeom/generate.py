"""Seeded point-set generators.

All randomness comes from SplitMix64 (Steele, Lea and Flood's 64-bit
mixer), so a seed yields the same points in any implementation:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)                       (all mod 2^64)

Bounded draws use rejection sampling on ``next() % n``; random subsets are
prefixes of a Fisher-Yates shuffle (swap position i with a uniform
position in [i, N)) of the lexicographic plane order, where point (x, y)
has index x*q + y.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoIsotropicLines, SizeExceedsPlane
from .field import FieldCtx
from .plane import PointSet, circle_points, isotropic_directions

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

KINDS = ("random", "grid", "line", "isotropic_line", "circle_union", "product")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def sample(self, N: int, m: int) -> list[int]:
        """First m entries of a Fisher-Yates shuffle of range(N), without materialising it."""
        if m > N:
            raise ValueError(f"cannot draw {m} of {N}")
        swapped: dict[int, int] = {}
        out = []
        for i in range(m):
            j = i + self.below(N - i)
            vi, vj = swapped.get(i, i), swapped.get(j, j)
            swapped[j] = vi
            out.append(vj)
        return out


def derive_seed(seed: int, stream: int) -> int:
    """Independent sub-seed for a numbered stream of one base seed."""
    return SplitMix64((int(seed) ^ ((stream * GOLDEN) & MASK64)) & MASK64).next()


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items(), key=str)), self.seed))


def _size(spec, limit, what):
    n = int(spec.params.get("size", limit))
    if n < 0:
        raise ValueError("size must be nonnegative")
    if n > limit:
        raise SizeExceedsPlane(f"{what}: requested {n} points but only {limit} exist")
    return n


def generate(ctx: FieldCtx, spec: GenSpec) -> PointSet:
    q = ctx.q
    rng = SplitMix64(spec.seed)
    kind, prm = spec.kind, spec.params
    if kind == "random":
        n = _size(spec, q * q, "random")
        return PointSet(ctx, (divmod(v, q) for v in rng.sample(q * q, n)))
    if kind == "grid":
        side = int(prm.get("side", 2))
        if side > q:
            raise SizeExceedsPlane(f"grid side {side} exceeds q = {q}")
        return PointSet(ctx, ((x, y) for x in range(side) for y in range(side)))
    if kind in ("line", "isotropic_line"):
        n = _size(spec, q, kind)
        if kind == "line":
            slope = ctx.element(int(prm.get("slope", 1)))
        else:
            dirs = sorted(isotropic_directions(ctx))
            if not dirs:
                raise NoIsotropicLines(f"-1 is not a square in F_{q}")
            slope = dirs[0][1]
        offset = ctx.element(int(prm.get("intercept", 0)))
        xs = range(n) if n == q else rng.sample(q, n)
        return PointSet(ctx, ((x, ctx.add(ctx.mul(slope, x), offset)) for x in xs))
    if kind == "circle_union":
        center = tuple(int(c) for c in prm.get("center", (0, 0)))
        radii = prm.get("radii", [1])
        pts = []
        for r in radii:
            pts.extend(circle_points(ctx, center, ctx.element(int(r)), full_plane=True))
        return PointSet(ctx, pts)
    # product A x B of seeded random coordinate sets
    a, b = int(prm.get("a", 2)), int(prm.get("b", 2))
    if a > q or b > q:
        raise SizeExceedsPlane(f"product factors {a}, {b} exceed q = {q}")
    A = rng.sample(q, a)
    B = rng.sample(q, b)
    return PointSet(ctx, ((x, y) for x in A for y in B))
