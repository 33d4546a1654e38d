"""Pinned trees, edge-length vectors and distinct-tree counting."""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from math import perm

import numpy as np

from .errors import BadPin, EmptyPool, IncompleteEmbedding, NotATree, ParseError, TooLarge
from .field import FieldCtx
from .plane import Coords, Point, PointSet, distance, distance_matrix, distances_from

DEFAULT_BUDGET = 10**7

ALL = "all"
NONZERO = "nonzero"


@dataclass(frozen=True)
class TreeSpec:
    """A tree on vertices 1..num_vertices with a pinned vertex.

    Edges are stored as (i, j) with i < j, sorted lexicographically, which
    is the canonical order used for edge-length vectors.
    """
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    pin: int

    @classmethod
    def build(cls, num_vertices: int, edges, pin: int) -> "TreeSpec":
        n = int(num_vertices)
        if n < 2:
            raise NotATree("a tree needs at least one edge")
        canon = []
        for i, j in edges:
            i, j = int(i), int(j)
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise NotATree(f"bad edge {i}-{j}")
            canon.append((min(i, j), max(i, j)))
        canon.sort()
        if len(canon) != n - 1 or len(set(canon)) != len(canon):
            raise NotATree(f"{n} vertices need exactly {n - 1} distinct edges")
        parent = list(range(n + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in canon:
            ri, rj = find(i), find(j)
            if ri == rj:
                raise NotATree(f"edge {i}-{j} closes a cycle")
            parent[ri] = rj
        if not 1 <= int(pin) <= n:
            raise BadPin(f"pin {pin} not in 1..{n}")
        return cls(n, tuple(canon), int(pin))

    @property
    def k(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return sorted([j for i, j in self.edges if i == v] + [i for i, j in self.edges if j == v])

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def text(self) -> str:
        es = ",".join(f"{i}-{j}" for i, j in self.edges)
        return f"vertices={self.num_vertices} edges={es} pin={self.pin}"

    def __str__(self):
        return self.text()

    def induced(self, vertices, pin: int) -> "TreeSpec":
        """Subtree on ``vertices`` (order-preserving relabel to 1..m), pinned at ``pin``."""
        vs = sorted(set(vertices))
        relabel = {v: i + 1 for i, v in enumerate(vs)}
        es = [(relabel[i], relabel[j]) for i, j in self.edges if i in relabel and j in relabel]
        return TreeSpec.build(len(vs), es, relabel[pin])

    def component(self, start: int, removed: int) -> set[int]:
        """Vertices reachable from ``start`` without passing through ``removed``."""
        seen, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for w in self.neighbors(v):
                if w != removed and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def drop_pin_leaf(self) -> "TreeSpec":
        """T minus a degree-one pin, re-pinned at the pin's neighbour."""
        (u,) = self.neighbors(self.pin)
        rest = set(range(1, self.num_vertices + 1)) - {self.pin}
        return self.induced(rest, u)

    def split_at_pin(self) -> tuple["TreeSpec", "TreeSpec"]:
        """Two subtrees sharing only the pin: the branch of the smallest neighbour, and the rest."""
        v = self.pin
        first = self.neighbors(v)[0]
        branch = self.component(first, v)
        rest = set(range(1, self.num_vertices + 1)) - branch
        return self.induced(branch | {v}, v), self.induced(rest, v)


_GRAMMAR = re.compile(r"^vertices=(\d+)\s+edges=(\d+-\d+(?:,\d+-\d+)*)\s+pin=(\d+)$")


def parse_tree_spec(text: str) -> TreeSpec:
    """Parse ``vertices=<n> edges=<i>-<j>[,<i>-<j>]* pin=<v>``."""
    m = _GRAMMAR.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse tree spec {text!r}")
    edges = [tuple(int(t) for t in e.split("-")) for e in m.group(2).split(",")]
    return TreeSpec.build(int(m.group(1)), edges, int(m.group(3)))


def path_tree(k: int, pin: int = 1) -> TreeSpec:
    return TreeSpec.build(k + 1, [(i, i + 1) for i in range(1, k + 1)], pin)


def star_tree(k: int) -> TreeSpec:
    return TreeSpec.build(k + 1, [(1, j) for j in range(2, k + 2)], 1)


@dataclass(frozen=True)
class Embedding:
    assignment: dict[int, Point] = field(default_factory=dict)

    def __post_init__(self):
        pts = [tuple(p) for p in self.assignment.values()]
        if len(set(pts)) != len(pts):
            raise ValueError("embedding is not injective")

    def __getitem__(self, v):
        return self.assignment[v]


def edge_length_vector(ctx: FieldCtx, T: TreeSpec, emb: Embedding) -> tuple[int, ...]:
    missing = [v for v in range(1, T.num_vertices + 1) if v not in emb.assignment]
    if missing:
        raise IncompleteEmbedding(f"vertices {missing} are not assigned")
    return tuple(distance(ctx, emb[i], emb[j]) for i, j in T.edges)


def _bfs_order(T: TreeSpec):
    """(vertex, parent, edge index) for every non-pin vertex, parents first."""
    edge_index = {e: t for t, e in enumerate(T.edges)}
    order, seen, todo = [], {T.pin}, deque([T.pin])
    while todo:
        v = todo.popleft()
        for w in T.neighbors(v):
            if w not in seen:
                seen.add(w)
                order.append((w, v, edge_index[(min(v, w), max(v, w))]))
                todo.append(w)
    return order


def count_distinct_pinned_trees(ctx: FieldCtx, T: TreeSpec, x: Point, pool: PointSet,
                                mode: str = NONZERO, budget: int = DEFAULT_BUDGET) -> int:
    """Number of distinct edge-length vectors over injective embeddings with pin -> x.

    Vertices are placed in breadth-first order from the pin so every new
    vertex fixes exactly one edge length; in ``nonzero`` mode branches with
    a zero edge are cut immediately.
    """
    if mode not in (ALL, NONZERO):
        raise ValueError(f"mode must be 'all' or 'nonzero', got {mode!r}")
    x = (int(x[0]), int(x[1]))
    pool = pool.without(x)
    m, k = pool.n, T.k
    if perm(m, k) > budget:
        raise TooLarge(f"{m}P{k} = {perm(m, k)} embeddings exceeds budget {budget}")
    if m < k:
        return 0
    pts = Coords(np.concatenate(([x[0]], pool.xs)), np.concatenate(([x[1]], pool.ys)))
    D = distance_matrix(ctx, pts, pts).tolist()  # index 0 is the pin
    order = _bfs_order(T)
    nonzero = mode == NONZERO
    pos = {T.pin: 0}
    used = [False] * (m + 1)
    used[0] = True
    vec = [0] * k
    seen = set()

    def place(depth):
        if depth == k:
            seen.add(tuple(vec))
            return
        v, parent, t = order[depth]
        row = D[pos[parent]]
        for i in range(1, m + 1):
            if used[i]:
                continue
            d = row[i]
            if nonzero and d == 0:
                continue
            used[i] = True
            pos[v] = i
            vec[t] = d
            place(depth + 1)
            used[i] = False

    place(0)
    return len(seen)


def count_distinct_pinned_trees_bruteforce(ctx: FieldCtx, T: TreeSpec, x: Point, pool: PointSet,
                                           mode: str = NONZERO) -> int:
    """Enumerate every injective assignment of the non-pin vertices and collect vectors."""
    x = (int(x[0]), int(x[1]))
    others = [v for v in range(1, T.num_vertices + 1) if v != T.pin]
    candidates = [pt for pt in pool if pt != x]
    vectors = set()
    for choice in itertools.permutations(candidates, len(others)):
        emb = Embedding({T.pin: x, **dict(zip(others, choice))})
        vec = edge_length_vector(ctx, T, emb)
        if mode == NONZERO and 0 in vec:
            continue
        vectors.add(vec)
    return len(vectors)


# -- sound lower bound by the pool-splitting induction -------------------------

def split_pool(pool: PointSet, strategy: str = "alternate") -> tuple[PointSet, PointSet]:
    """Deterministic split into two disjoint halves.

    ``alternate`` deals points by lexicographic rank (even ranks first),
    ``halves`` cuts the sorted list in the middle.
    """
    if strategy == "alternate":
        return pool[0::2], pool[1::2]
    if strategy == "halves":
        h = (pool.n + 1) // 2
        return pool[:h], pool[h:]
    raise ValueError(f"unknown split strategy {strategy!r}")


@dataclass
class BoundNode:
    """One step of the lower-bound recursion."""
    case: str  # base | deg1 | split
    tree: str
    pin: Point
    pool_size: int
    subpools: list[PointSet]
    value: int
    distinct_distances: int = 0
    children: list["BoundNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "tree": self.tree,
            "pin": list(self.pin),
            "pool_size": self.pool_size,
            "subpool_sizes": [s.n for s in self.subpools],
            "value": str(self.value),
            "distinct_distances": self.distinct_distances,
            "children": [c.to_dict() for c in self.children],
        }


def pinned_tree_lower_bound(ctx: FieldCtx, T: TreeSpec, x: Point, pool: PointSet,
                            params=None) -> tuple[int, BoundNode]:
    """A lower bound on ``count_distinct_pinned_trees(..., mode='nonzero')``.

    * one edge: the number of nonzero distances from x into the pool;
    * pin of degree one: split the pool into P1, P2; every nonzero distance
      from x into P2 is realised by some y, and each such y carries at least
      the recursive bound for T minus the pin, pinned at y, inside P1;
    * otherwise: cut T at the pin into two subtrees, bound each over one of
      two disjoint halves, and multiply.
    """
    x = (int(x[0]), int(x[1]))
    pool = pool.without(x)
    if pool.n == 0:
        raise EmptyPool("no points available for the non-pin vertices")
    strategy = getattr(params, "split_strategy", "alternate") if params is not None else "alternate"
    return _lower_bound(ctx, T, x, pool, strategy)


def _lower_bound(ctx, T, x, pool, strategy):
    if pool.n == 0 or pool.n < T.k:
        return 0, BoundNode("empty", T.text(), x, pool.n, [], 0)
    if T.k == 1:
        d = distances_from(ctx, x, pool)
        val = len(np.unique(d[d != 0]))
        return val, BoundNode("base", T.text(), x, pool.n, [pool], val, val)
    if T.degree(T.pin) == 1:
        T1 = T.drop_pin_leaf()
        P1, P2 = split_pool(pool, strategy)
        d = distances_from(ctx, x, P2)
        best = {}
        for idx in np.flatnonzero(d != 0):
            delta = int(d[idx])
            b, node = _lower_bound(ctx, T1, P2.points[idx], P1, strategy)
            if delta not in best or b > best[delta][0]:
                best[delta] = (b, node)
        if not best:
            return 0, BoundNode("deg1", T.text(), x, pool.n, [P1, P2], 0, 0)
        worst = min(b for b, _ in best.values())
        val = len(best) * worst
        children = [best[delta][1] for delta in sorted(best)]
        return val, BoundNode("deg1", T.text(), x, pool.n, [P1, P2], val, len(best), children)
    T1, T2 = T.split_at_pin()
    P1, P2 = split_pool(pool, strategy)
    b1, n1 = _lower_bound(ctx, T1, x, P1, strategy)
    b2, n2 = _lower_bound(ctx, T2, x, P2, strategy)
    val = b1 * b2
    return val, BoundNode("split", T.text(), x, pool.n, [P1, P2], val, 0, [n1, n2])
