"""Numerical audits of the counting inequalities on concrete point sets.

Left-hand sides are exact integers.  Right-hand sides are exact rationals
when possible; otherwise they are evaluated with mpmath at 50 significant
digits and compared with a relative tolerance of 1e-9, with the report
marked ``borderline`` whenever the two sides are that close.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import RegimeMismatch, RestrictionViolated
from .exact import Surd
from .certify import char_restriction, isotropic_cap, triple_premise
from .plane import LineMultiset, PointSet, incidences, max_isotropic_line_count
from .stats import PAPER, bisector_energy, isosceles_triples

DPS = 50
REL_TOL = Fraction(1, 10**9)


@dataclass
class AuditReport:
    inequality: str
    lhs: int
    rhs: object  # Fraction, Surd or mpmath.mpf
    holds: bool
    borderline: bool
    premise_in_range: bool
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    rhs_error: str = "0"

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("a witness is present exactly when the inequality fails")

    @property
    def rhs_text(self) -> str:
        if isinstance(self.rhs, Fraction):
            return str(self.rhs)
        if isinstance(self.rhs, Surd):
            return mpmath.nstr(self.rhs.to_mpf(DPS), 30)
        return mpmath.nstr(self.rhs, 30)

    @property
    def rhs_float(self) -> float:
        if isinstance(self.rhs, Surd):
            return float(self.rhs.to_mpf(DPS))
        return float(self.rhs)

    def to_json(self) -> dict:
        from .schema import audit_to_json
        return audit_to_json(self)


def _finish(name, lhs, rhs, premise, witness_info, details=None, exact=None, rhs_error="0"):
    """Assemble a report; ``exact`` overrides the tolerance-based verdict."""
    if isinstance(rhs, Fraction):
        gap = abs(Fraction(lhs) - rhs)
        borderline = gap <= rhs * REL_TOL
        holds = lhs <= rhs if exact is None else exact
    else:
        val = rhs.to_mpf(DPS) if isinstance(rhs, Surd) else rhs
        with mpmath.workdps(DPS):
            tol = val * mpmath.mpf(1) / 10**9
            borderline = bool(abs(lhs - val) <= tol)
            holds = bool(lhs <= val + tol) if exact is None else exact
    witness = None if holds else dict(witness_info, lhs=lhs, rhs=str(rhs))
    return AuditReport(name, lhs, rhs, holds, bool(borderline), premise, witness, details or {}, rhs_error)


def _require_prime(ctx, what):
    if ctx.e != 1:
        raise RegimeMismatch(f"{what} is stated over prime fields only")


def audit_triple_bound(E: PointSet, mode: str = PAPER) -> AuditReport:
    """T*(E) <= |E|^3/p + 5 p^(2/3) |E|^(5/3) + 5 p^(1/4) |E|^2."""
    ctx = E.ctx
    _require_prime(ctx, "the isosceles triple bound")
    p, n = ctx.p, E.n
    lhs = isosceles_triples(E, E, mode).value
    with mpmath.workdps(DPS):
        P, N = mpmath.mpf(p), mpmath.mpf(n)
        rhs = N**3 / P + 5 * P ** (mpmath.mpf(2) / 3) * N ** (mpmath.mpf(5) / 3) \
            + 5 * P ** (mpmath.mpf(1) / 4) * N**2
    return _finish("triple_bound", lhs, rhs, triple_premise(n, p),
                   {"p": p, "n": n}, {"mode": mode}, rhs_error="1e-45")


def audit_bisector_bound(E: PointSet, variant: str = PAPER) -> AuditReport:
    """Q(E) <= 4|E|^4/p^2 + 10 p |E|^2 (exact rational comparison)."""
    ctx = E.ctx
    _require_prime(ctx, "the bisector energy bound")
    p, n = ctx.p, E.n
    lhs = bisector_energy(E, variant)
    rhs = Fraction(4 * n**4, p**2) + 10 * p * n**2
    return _finish("bisector_bound", lhs, rhs, True, {"p": p, "n": n}, {"variant": variant})


def audit_incidence_bound(F: PointSet, L: LineMultiset) -> AuditReport:
    """I(F, L) <= |F||L|/p + p^(1/2) |F|^(1/2) (sum m(l)^2)^(1/2).

    Decided exactly: with D = p*I - |F||L|, the bound holds iff D <= 0 or
    D^2 <= p^3 |F| sum m(l)^2.
    """
    ctx = F.ctx
    _require_prime(ctx, "the incidence bound")
    p, nF, nL, m2 = ctx.p, F.n, L.total, L.sum_squares()
    lhs = incidences(F, L)
    D = p * lhs - nF * nL
    exact = D <= 0 or D * D <= p**3 * nF * m2
    with mpmath.workdps(DPS):
        rhs = mpmath.mpf(nF * nL) / p + mpmath.sqrt(mpmath.mpf(p) * nF * m2)
    details = {"p": p, "n_F": nF, "lines": nL, "distinct_lines": len(L), "sum_m2": m2}
    return _finish("incidence_bound", lhs, rhs, True, details, details, exact=exact, rhs_error="1e-45")


def audit_K_constant(E: PointSet, K=4, mode: str = PAPER, strict: bool = False) -> AuditReport:
    """T*(E) <= K |E|^(7/3); reports the observed K' = T*(E) / |E|^(7/3).

    The statement needs |E|^3 <= char^4.  Outside that range the report is
    still produced with ``premise_in_range`` false, unless ``strict``.
    """
    ctx = E.ctx
    n = E.n
    premise = char_restriction(n, ctx.p)
    if strict and not premise:
        raise RestrictionViolated(f"|E| = {n} exceeds char^(4/3) for char {ctx.p}")
    K = Fraction(K)
    lhs = isosceles_triples(E, E, mode).value
    rhs = Surd(K, ((n, Fraction(7, 3)),))
    exact = Surd(lhs) <= rhs
    with mpmath.workdps(DPS):
        k_obs = mpmath.mpf(0) if n == 0 else mpmath.mpf(lhs) / mpmath.power(n, mpmath.mpf(7) / 3)
    details = {"K": str(K), "K_observed": mpmath.nstr(k_obs, 20), "n": n, "char": ctx.p}
    return _finish("K_constant", lhs, rhs, premise, {"n": n, "K": str(K)}, details, exact=exact)


def audit_M_condition(E: PointSet, F: PointSet, k: int, K=4) -> AuditReport:
    """Isotropic-line cap: no isotropic line holds more than M points of E or F.

    Also evaluates whether halved pools inherit the cap, for the degree-one
    step (first inequality) and for every split k = k1 + k2 (second).
    """
    K = Fraction(K)
    nF = F.n
    lhs = max_isotropic_line_count(E.union(F))
    M = isotropic_cap(k, K, nF)
    exact = Surd(lhs) <= M
    half = nF // 2
    inherit = {}
    if k >= 2:
        inherit["MIH"] = isotropic_cap(k - 1, K, half) >= M
        inherit["MIH2"] = {f"k1={k1}": isotropic_cap(k - k1, K, half) >= M for k1 in range(1, k)}
    n = max(E.n, nF)
    details = {
        "k": k, "K": str(K), "M": str(M), "M_value": mpmath.nstr(M.to_mpf(DPS), 20),
        "half_size": half, "M_below_quarter_n": M < Fraction(n, 4), **inherit,
    }
    premise = E.n == nF and char_restriction(nF, E.ctx.p)
    return _finish("M_condition", lhs, M, premise, {"n_E": E.n, "n_F": nF, "k": k}, details, exact=exact)
