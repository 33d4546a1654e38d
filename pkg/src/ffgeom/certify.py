"""Mechanical execution of the pinned-tree extraction argument.

:func:`certify_tree` runs the induction on the number of edges exactly as a
proof would, on concrete point sets:

* one edge: keep the pins with many nonzero distances into the vertex pool;
* pin of degree one: halve the vertex pool into F1, F2, extract good pins
  F2' of F2 for the smaller tree inside F1, cut the pin pool into greedy
  blocks of size |F2'| and keep, per block, the pins with many distances
  into F2';
* pin of higher degree: cut the tree at the pin into T1, T2 and run the two
  extractions one after another on halves of both pools.

The returned :class:`Certificate` records every pool, block and threshold.
Per-pin bounds come from :func:`ffgeom.trees.pinned_tree_lower_bound` and are
sound regardless of whether the asymptotic size hypotheses hold.
:func:`check_certificate` re-derives everything independently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import perm

from .errors import BadBlockSize, EmptyInput, RegimeMismatch
from .exact import Surd, iroot_floor
from .plane import Point, PointSet, max_isotropic_line_count
from .stats import pinned_nonzero_distances
from .trees import (DEFAULT_BUDGET, BoundNode, TreeSpec, count_distinct_pinned_trees,
                    pinned_tree_lower_bound, split_pool)

SCHEMA_VERSION = "1"

MEDIUM_PRIME = "medium_prime"
LARGE_PRIME = "large_prime"
LARGE_Q = "large_q"
ARBITRARY = "arbitrary"
REGIMES = (MEDIUM_PRIME, LARGE_PRIME, LARGE_Q, ARBITRARY)


@dataclass(frozen=True)
class CertifyParams:
    regime: str = MEDIUM_PRIME
    K: Fraction = Fraction(4)
    threshold_rule: str = "paper"  # "paper" or "override"
    threshold: Fraction | None = None
    split_strategy: str = "alternate"
    enumeration_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "K", Fraction(self.K))
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.K < 4:
            raise ValueError("K must be at least 4")
        if self.threshold_rule not in ("paper", "override"):
            raise ValueError(f"unknown threshold rule {self.threshold_rule!r}")
        if self.threshold_rule == "override":
            if self.threshold is None:
                raise ValueError("override rule needs a threshold")
            object.__setattr__(self, "threshold", Fraction(self.threshold))

    @classmethod
    def with_threshold(cls, t, **kw) -> "CertifyParams":
        return cls(threshold_rule="override", threshold=Fraction(t), **kw)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "K": str(self.K),
            "threshold_rule": self.threshold_rule,
            "threshold": None if self.threshold is None else str(self.threshold),
            "split_strategy": self.split_strategy,
            "enumeration_budget": str(self.enumeration_budget),
        }


def pin_threshold(params: CertifyParams, ctx, n: int) -> Surd:
    """Distinct-distance threshold a pin must reach, for pools of size n.

    p/129 for medium prime sets, p/24 (or q/24) for large sets, and
    n^(2/3) / (8(K+1)) over arbitrary fields.
    """
    if params.threshold_rule == "override":
        return Surd.of(params.threshold)
    if params.regime == MEDIUM_PRIME:
        return Surd(Fraction(ctx.p, 129))
    if params.regime == LARGE_PRIME:
        return Surd(Fraction(ctx.p, 24))
    if params.regime == LARGE_Q:
        return Surd(Fraction(ctx.q, 24))
    return Surd(1 / (8 * (params.K + 1)), ((n, Fraction(2, 3)),))


# -- size hypotheses, all compared exactly ------------------------------------

def medium_hypothesis(n: int, p: int, k: int) -> bool:
    """5 * 2^(16k) * p^(5/4) <= n <= p^(4/3)."""
    return (Surd(5 * 2 ** (16 * k), ((p, Fraction(5, 4)),)) <= n
            and n**3 <= p**4)


def large_hypothesis(n: int, r: int, k: int) -> bool:
    """n >= 4 * 2^(16k) * r^(4/3)."""
    return n**3 >= (4 * 2 ** (16 * k)) ** 3 * r**4


def size_range(n: int, p: int, k: int) -> str:
    """Which part of the prime-field size range n falls into.

    ``large`` above 4*2^(16k)*p^(4/3); ``below`` under 5*2^(16k)*p^(5/4);
    otherwise ``medium`` up to p^(4/3) and ``gap`` beyond it.
    """
    if large_hypothesis(n, p, k):
        return "large"
    if Surd(5 * 2 ** (16 * k), ((p, Fraction(5, 4)),)) > n:
        return "below"
    return "medium" if n**3 <= p**4 else "gap"


def gap_subset_size(p: int) -> int:
    """floor(p^(4/3)), the size a gap-range set is cut down to."""
    return iroot_floor(p**4, 3)


def triple_premise(n: int, p: int) -> bool:
    """5 p^(5/4) <= n <= p^(4/3), via 5^4 p^5 <= n^4 and n^3 <= p^4."""
    return 5**4 * p**5 <= n**4 and n**3 <= p**4


def triple_premise_range(p: int) -> tuple[int, int]:
    """Integer bounds (lo, hi) of the sizes satisfying :func:`triple_premise`; empty when lo > hi."""
    lo = iroot_floor(5**4 * p**5, 4)
    if lo**4 < 5**4 * p**5:
        lo += 1
    return lo, iroot_floor(p**4, 3)


def bigsize_premise(n_e: int, n_f: int, p: int) -> dict[str, bool]:
    return {
        "E_ge_4p": n_e >= 4 * p,
        "F_ge_8p": n_f >= 8 * p,
        "F_E2_ge_64p4": n_f * n_e**2 >= 64 * p**4,
    }


def char_restriction(n: int, char: int) -> bool:
    """n <= char^(4/3), via n^3 <= char^4."""
    return n**3 <= char**4


def isotropic_cap(k: int, K, n_f: int) -> Surd:
    """M = 4^-1 (16K)^-(k-1) floor(n_f/8)^((2/3)^(k-1))."""
    K = Fraction(K)
    return Surd(Fraction(1, 4) / (16 * K) ** (k - 1), ((n_f // 8, Fraction(2, 3) ** (k - 1)),))


# -- extraction primitives -----------------------------------------------------

def popular_pins(E: PointSet, F: PointSet, threshold) -> PointSet:
    """Pins x in F with |Delta*_x(E)| >= threshold (threshold compared exactly)."""
    t = Surd.of(threshold)
    return PointSet(F.ctx, (x for x in F if Surd(len(pinned_nonzero_distances(x, E))) >= t))


def greedy_blocks(E: PointSet, block_size: int) -> list[PointSet]:
    """floor(|E| / block_size) disjoint blocks of consecutive points in lexicographic order."""
    if not 1 <= block_size <= E.n:
        raise BadBlockSize(f"block size {block_size} not in 1..{E.n}")
    s = E.n // block_size
    return [E[j * block_size:(j + 1) * block_size] for j in range(s)]


@dataclass
class CertNode:
    case: str  # base | deg1 | split | empty
    tree: str
    pin_pool: PointSet
    vertex_pool: PointSet
    extracted: PointSet
    threshold: Surd | None = None
    subpools: dict[str, PointSet] = field(default_factory=dict)
    blocks: list[PointSet] = field(default_factory=list)
    block_extracted: list[PointSet] = field(default_factory=list)
    s: int | None = None
    sub_bound: int = 0
    children: list["CertNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class Certificate:
    regime: str
    params: CertifyParams
    tree: TreeSpec
    pins: PointSet
    per_pin_bound: int
    pin_bounds: dict[Point, int]
    root: CertNode
    bound_traces: dict[Point, BoundNode]
    sound: bool
    hypothesis_in_range: bool
    flags: dict = field(default_factory=dict)

    @property
    def recursion(self) -> list[CertNode]:
        return list(self.root.walk())

    def to_json(self) -> dict:
        from .schema import certificate_to_json
        return certificate_to_json(self)


def _working_sets(E: PointSet, F: PointSet, T: TreeSpec, params: CertifyParams):
    """Validate the regime and apply the gap-range restriction; returns (E, F, flags)."""
    ctx = E.ctx
    if E.n == 0 or F.n == 0:
        raise EmptyInput("E and F must be non-empty")
    if F.ctx != ctx:
        raise RegimeMismatch("E and F live over different fields")
    if params.regime in (MEDIUM_PRIME, LARGE_PRIME) and ctx.e != 1:
        raise RegimeMismatch(f"regime {params.regime} needs a prime field")
    if E.n != F.n:
        raise RegimeMismatch(f"regime {params.regime} needs |E| = |F| (got {E.n}, {F.n})")
    n, k, p = E.n, T.k, ctx.p
    flags = {}
    if params.regime in (MEDIUM_PRIME, LARGE_PRIME):
        rng = size_range(n, p, k)
        flags["size_range"] = rng
        if rng == "gap":
            m = gap_subset_size(p)
            E, F = E[:m], F[:m]
            flags["restricted_to"] = m
        if params.regime == LARGE_PRIME:
            flags["bigsize_premise"] = bigsize_premise(E.n, F.n, p)
    return E, F, flags


def _hypothesis(E: PointSet, F: PointSet, T: TreeSpec, params: CertifyParams) -> bool:
    ctx, n, k = E.ctx, E.n, T.k
    if params.regime == MEDIUM_PRIME:
        return medium_hypothesis(n, ctx.p, k)
    if params.regime == LARGE_PRIME:
        return large_hypothesis(n, ctx.p, k)
    if params.regime == LARGE_Q:
        return large_hypothesis(n, ctx.q, k)
    cap = isotropic_cap(k, params.K, F.n)
    iso = max_isotropic_line_count(E.union(F))
    return char_restriction(n, ctx.p) and Surd(iso) <= cap


def _sub_bound(ctx, T: TreeSpec, pins: PointSet, pool: PointSet, params) -> int:
    vals = []
    for x in pins:
        rest = pool.without(x)
        vals.append(pinned_tree_lower_bound(ctx, T, x, rest, params)[0] if rest.n else 0)
    return min(vals) if vals else 0


def _extract(ctx, T: TreeSpec, pins: PointSet, verts: PointSet, params: CertifyParams) -> CertNode:
    if pins.n == 0 or verts.n == 0:
        return CertNode("empty", T.text(), pins, verts, PointSet(ctx))
    if T.k == 1:
        thr = pin_threshold(params, ctx, verts.n)
        out = popular_pins(verts, pins, thr)
        node = CertNode("base", T.text(), pins, verts, out, thr)
    elif T.degree(T.pin) == 1:
        F1, F2 = split_pool(verts, params.split_strategy)
        child = _extract(ctx, T.drop_pin_leaf(), F2, F1, params)
        F2p = child.extracted
        node = CertNode("deg1", T.text(), pins, verts, PointSet(ctx),
                        subpools={"F1": F1, "F2": F2}, children=[child])
        if 0 < F2p.n <= pins.n:
            thr = pin_threshold(params, ctx, F2p.n)
            node.threshold = thr
            node.s = pins.n // F2p.n
            node.blocks = greedy_blocks(pins, F2p.n)
            node.block_extracted = [popular_pins(F2p, G, thr) for G in node.blocks]
            acc = []
            for G in node.block_extracted:
                acc.extend(G.points)
            node.extracted = PointSet(ctx, acc)
        else:
            node.s = pins.n // F2p.n if F2p.n else 0
    else:
        T1, T2 = T.split_at_pin()
        E1, E2 = split_pool(pins, params.split_strategy)
        F1, F2 = split_pool(verts, params.split_strategy)
        node = CertNode("split", T.text(), pins, verts, PointSet(ctx),
                        subpools={"E1": E1, "E2": E2, "F1": F1, "F2": F2})
        acc = []
        for i, Ei in ((1, E1), (2, E2)):
            first = _extract(ctx, T1, Ei, F1, params)
            F2p = F2[:first.extracted.n]
            node.subpools[f"F2'{i}"] = F2p
            second = _extract(ctx, T2, first.extracted, F2p, params)
            node.children += [first, second]
            acc.extend(second.extracted.points)
        node.extracted = PointSet(ctx, acc)
    node.sub_bound = _sub_bound(ctx, T, node.extracted, verts, params)
    return node


def certify_tree(E: PointSet, F: PointSet, T: TreeSpec, params: CertifyParams | None = None) -> Certificate:
    """Run the extraction for (T, pin) with pins from E and tree vertices from F."""
    params = params or CertifyParams()
    ctx = E.ctx
    E, F, flags = _working_sets(E, F, T, params)
    in_range = _hypothesis(E, F, T, params)
    root = _extract(ctx, T, E, F, params)
    pin_bounds, traces = {}, {}
    for x in root.extracted:
        pool = F.without(x)
        if pool.n == 0:
            pin_bounds[x], traces[x] = 0, BoundNode("empty", T.text(), x, 0, [], 0)
            continue
        pin_bounds[x], traces[x] = pinned_tree_lower_bound(ctx, T, x, pool, params)
    blocks_ok = all(n.s is None or n.s >= 2 for n in root.walk() if n.case == "deg1" and n.blocks)
    flags["block_count_at_least_two"] = blocks_ok
    return Certificate(
        regime=params.regime,
        params=params,
        tree=T,
        pins=root.extracted,
        per_pin_bound=min(pin_bounds.values()) if pin_bounds else 0,
        pin_bounds=pin_bounds,
        root=root,
        bound_traces=traces,
        sound=True,
        hypothesis_in_range=in_range,
        flags=flags,
    )


# -- independent re-verification -------------------------------------------------

class _Reject(Exception):
    pass


def _require(cond, why):
    if not cond:
        raise _Reject(why)


def _pairwise_disjoint(pools) -> bool:
    seen = set()
    for P in pools:
        pts = set(P.points)
        if seen & pts:
            return False
        seen |= pts
    return True


def _check_node(ctx, node: CertNode, T: TreeSpec, pins: PointSet, verts: PointSet, params):
    _require(node.tree == T.text(), "tree mismatch")
    _require(node.pin_pool == pins and node.vertex_pool == verts, "pools mismatch")
    _require(node.extracted.issubset(pins), "extracted pins outside pin pool")
    if pins.n == 0 or verts.n == 0:
        _require(node.case == "empty" and node.extracted.n == 0, "empty node")
        return
    if T.k == 1:
        _require(node.case == "base", "expected base case")
        thr = pin_threshold(params, ctx, verts.n)
        _require(node.threshold == thr, "threshold mismatch")
        _require(node.extracted == popular_pins(verts, pins, thr), "base extraction mismatch")
    elif T.degree(T.pin) == 1:
        _require(node.case == "deg1", "expected deg1 case")
        F1, F2 = node.subpools["F1"], node.subpools["F2"]
        _require(_pairwise_disjoint([F1, F2]), "F1, F2 overlap")
        _require((F1, F2) == split_pool(verts, params.split_strategy), "vertex split mismatch")
        (child,) = node.children
        _check_node(ctx, child, T.drop_pin_leaf(), F2, F1, params)
        F2p = child.extracted
        if 0 < F2p.n <= pins.n:
            thr = pin_threshold(params, ctx, F2p.n)
            _require(node.threshold == thr, "threshold mismatch")
            _require(node.s == pins.n // F2p.n, "block count mismatch")
            _require(len(node.blocks) == node.s, "block list length")
            _require(all(G.n == F2p.n for G in node.blocks), "unequal blocks")
            _require(_pairwise_disjoint(node.blocks), "blocks overlap")
            _require(all(G.issubset(pins) for G in node.blocks), "block outside pin pool")
            _require(node.blocks == greedy_blocks(pins, F2p.n), "greedy blocks mismatch")
            _require(len(node.block_extracted) == len(node.blocks), "block extraction list")
            acc = []
            for G, Gp in zip(node.blocks, node.block_extracted):
                _require(Gp == popular_pins(F2p, G, thr), "block extraction mismatch")
                acc.extend(Gp.points)
            _require(node.extracted == PointSet(ctx, acc), "union mismatch")
        else:
            _require(node.extracted.n == 0 and not node.blocks, "no blocks expected")
    else:
        _require(node.case == "split", "expected split case")
        T1, T2 = T.split_at_pin()
        E1, E2 = node.subpools["E1"], node.subpools["E2"]
        F1, F2 = node.subpools["F1"], node.subpools["F2"]
        _require(_pairwise_disjoint([E1, E2]) and _pairwise_disjoint([F1, F2]), "sub-pools overlap")
        _require((E1, E2) == split_pool(pins, params.split_strategy), "pin split mismatch")
        _require((F1, F2) == split_pool(verts, params.split_strategy), "vertex split mismatch")
        _require(len(node.children) == 4, "split node needs four children")
        acc = []
        for i, Ei in ((1, E1), (2, E2)):
            first, second = node.children[2 * i - 2], node.children[2 * i - 1]
            _check_node(ctx, first, T1, Ei, F1, params)
            F2p = node.subpools[f"F2'{i}"]
            _require(F2p == F2[:first.extracted.n], "F2' mismatch")
            _check_node(ctx, second, T2, first.extracted, F2p, params)
            acc.extend(second.extracted.points)
        _require(node.extracted == PointSet(ctx, acc), "union mismatch")
    _require(node.sub_bound <= _sub_bound(ctx, T, node.extracted, verts, params), "sub-bound too large")


def _check_trace(trace: BoundNode):
    for node in trace.walk():
        _require(_pairwise_disjoint(node.subpools), "bound trace sub-pools overlap")
        for P in node.subpools:
            _require(node.pin not in P, "bound trace sub-pool contains its pin")


def check_certificate(c: Certificate, E: PointSet, F: PointSet, T: TreeSpec) -> bool:
    """True iff every recorded step re-derives and every per-pin bound is sound."""
    try:
        _check_certificate(c, E, F, T)
    except _Reject:
        return False
    return True


def explain_certificate(c: Certificate, E: PointSet, F: PointSet, T: TreeSpec) -> str | None:
    """Reason the certificate is rejected, or None if it checks."""
    try:
        _check_certificate(c, E, F, T)
    except _Reject as exc:
        return str(exc)
    return None


def _check_certificate(c, E, F, T):
    params = c.params
    _require(c.tree == T, "tree mismatch")
    _require(c.regime == params.regime, "regime mismatch")
    try:
        E, F, _ = _working_sets(E, F, T, params)
    except (EmptyInput, RegimeMismatch) as exc:
        raise _Reject(str(exc))
    ctx = E.ctx
    _check_node(ctx, c.root, T, E, F, params)
    _require(c.pins == c.root.extracted, "pins differ from extraction")
    _require(set(c.pin_bounds) == set(c.pins.points), "pin bound keys")
    _require(c.hypothesis_in_range == _hypothesis(E, F, T, params), "hypothesis flag mismatch")
    for x in c.pins:
        pool = F.without(x)
        claimed = c.pin_bounds[x]
        _require(claimed >= 0, "negative bound")
        if pool.n == 0:
            _require(claimed == 0, "bound with empty pool")
            continue
        trace = c.bound_traces[x]
        _check_trace(trace)
        recomputed, _ = pinned_tree_lower_bound(ctx, T, x, pool, params)
        _require(trace.value == recomputed, "trace value mismatch")
        _require(claimed <= recomputed, "claimed bound exceeds the sound recursion")
        if perm(pool.n, T.k) <= params.enumeration_budget:
            exact = count_distinct_pinned_trees(ctx, T, x, pool, "nonzero", params.enumeration_budget)
            _require(exact >= claimed, "claimed bound exceeds the exact count")
    expected = min(c.pin_bounds.values()) if c.pin_bounds else 0
    _require(c.per_pin_bound == expected, "per-pin bound is not the minimum")
    _require(c.sound, "certificate not marked sound")
