from fractions import Fraction

import jsonschema
import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ffgeom import (LineMultiset, PointSet, audit_bisector_bound, audit_incidence_bound, audit_K_constant,
                    audit_M_condition, audit_triple_bound, bisector_lines, make_field)
from ffgeom.audit import AuditReport
from ffgeom.errors import RegimeMismatch, RestrictionViolated
from ffgeom.plane import make_line
from ffgeom.schema import AUDIT_SCHEMA

from conftest import random_set


def test_triple_bound_full_f3(f3):
    r = audit_triple_bound(PointSet.full_plane(f3))
    assert r.lhs == 216 and r.holds and not r.premise_in_range
    with mpmath.workdps(30):
        rhs = 243 + 5 * mpmath.cbrt(9) * mpmath.power(9, mpmath.mpf(5) / 3) + 5 * mpmath.root(3, 4) * 81
    assert abs(r.rhs_float - float(rhs)) < 1e-9
    assert r.rhs_float == pytest.approx(1181.01, abs=0.01)
    jsonschema.validate(r.to_json(), AUDIT_SCHEMA)


def test_triple_bound_small(f5):
    r = audit_triple_bound(PointSet(f5, [(1, 1)]))
    assert r.lhs == 0 and r.holds and r.witness is None
    E = random_set(make_field(11), 40, 5)
    r = audit_triple_bound(E)
    assert not r.premise_in_range and r.holds
    with pytest.raises(RegimeMismatch):
        audit_triple_bound(random_set(make_field(3, 2), 5, 0))


def test_bisector_bound_values(f5):
    r = audit_bisector_bound(PointSet(f5, [(0, 0), (0, 1)]))
    assert r.lhs == 4 and r.rhs == Fraction(64, 25) + 200 and r.holds
    r = audit_bisector_bound(PointSet(f5, [(0, 0), (0, 1), (0, 2)]))
    assert r.lhs == 12 and r.rhs == Fraction(324, 25) + 450 and r.holds
    r = audit_bisector_bound(PointSet(f5, [(2, 2)]))
    assert r.lhs == 0 and r.holds
    assert audit_bisector_bound(random_set(f5, 8, 1), "symmetric").details["variant"] == "symmetric"


def test_incidence_bound_values(f5):
    L = LineMultiset()
    L.add(make_line(f5, 0, 1, 0))
    r = audit_incidence_bound(PointSet(f5, [(0, 0)]), L)
    assert r.lhs == 1 and r.holds
    assert r.rhs_float == pytest.approx(0.2 + 5**0.5, rel=1e-12)
    assert audit_incidence_bound(PointSet(f5), L).lhs == 0


def test_incidence_exact_decision_agrees_with_mpmath():
    for seed in range(40):
        ctx = make_field((5, 7, 11)[seed % 3])
        F, E = random_set(ctx, 3 + seed, seed), random_set(ctx, 2 + seed % 9, seed + 7)
        r = audit_incidence_bound(F, bisector_lines(E))
        assert r.holds == (r.lhs <= r.rhs_float * (1 + 1e-12))


def test_K_constant(f3, f5):
    r = audit_K_constant(PointSet.full_plane(f3))
    assert float(r.details["K_observed"]) == pytest.approx(216 / 9 ** (7 / 3), rel=1e-12)
    assert float(r.details["K_observed"]) == pytest.approx(1.28200, abs=1e-5)
    assert r.holds and not r.premise_in_range
    with pytest.raises(RestrictionViolated):
        audit_K_constant(PointSet.full_plane(f3), strict=True)
    one = audit_K_constant(PointSet(f5, [(0, 0)]))
    assert one.lhs == 0 and one.holds and one.premise_in_range
    assert one.details["K_observed"] == "0.0"


def test_M_condition(f3, f5):
    r = audit_M_condition(random_set(f3, 6, 0), random_set(f3, 6, 1), k=1)
    assert r.lhs == 0 and r.holds
    line = PointSet(f5, [(t, 2 * t % 5) for t in range(5)])
    r = audit_M_condition(line, line, k=1)
    assert r.lhs == 5 and not r.holds and r.witness is not None  # M = floor(5/8)/4 = 0
    F64 = random_set(make_field(11), 64, 3)
    r = audit_M_condition(F64, F64, k=2, K=4)
    assert r.details["M"] == "1/64" or Fraction(r.details["M_value"]) == Fraction(1, 64)
    assert "MIH" in r.details and "k1=1" in r.details["MIH2"]


def test_witness_invariant():
    with pytest.raises(ValueError):
        AuditReport("x", 1, Fraction(2), True, False, True, witness={"n": 1})
    with pytest.raises(ValueError):
        AuditReport("x", 3, Fraction(2), False, False, True, witness=None)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(0, 40), st.integers(1, 20), st.integers(0, 2**40))
def test_incidence_bound_never_violated(p, nF, nE, seed):
    ctx = make_field(p)
    r = audit_incidence_bound(random_set(ctx, nF, seed), bisector_lines(random_set(ctx, nE, seed + 1)))
    assert r.holds and r.premise_in_range


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 40), st.integers(0, 2**40))
def test_reports_always_record_premise(p, n, seed):
    E = random_set(make_field(p), n, seed)
    for r in (audit_triple_bound(E), audit_bisector_bound(E), audit_K_constant(E)):
        assert isinstance(r.premise_in_range, bool)
        assert (r.witness is None) == r.holds
        jsonschema.validate(r.to_json(), AUDIT_SCHEMA)
