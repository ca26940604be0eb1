from fractions import Fraction

import pytest

import oracles
from verlinde_kit import ConfigurationError, DomainError, build_twisted_datum, shift_identity, twisted_alcove_points
from verlinde_kit.cartan import ip
from verlinde_kit.twisted import twisted_alcove_records

CASES = [("A2", 2, "A1", 2), ("A3", 2, "C2", 1), ("D4", 3, "G2", 1), ("A4", 2, "B2", 2), ("D4", 2, "B3", 1)]


@pytest.mark.parametrize("base,r,kind,a0", CASES)
def test_invariant_type(base, r, kind, a0):
    tw = build_twisted_datum(base, r)
    assert tw.invariant.type_name == kind
    assert tw.a0 == a0


@pytest.mark.parametrize("base,r", [("A2", 2), ("A3", 2), ("D4", 3), ("A4", 2), ("D4", 2)])
def test_shift_identity_exact(base, r):
    lhs, rhs = shift_identity(build_twisted_datum(base, r))
    assert isinstance(lhs, Fraction) and lhs == rhs


@pytest.mark.parametrize("key", sorted(oracles.TWISTED_COMARKS))
def test_alcove_counts_match_comarks(key):
    tw = build_twisted_datum(*key)
    marks = oracles.TWISTED_COMARKS[key]
    assert [len(twisted_alcove_points(tw, k)) for k in range(6)] == [oracles.comark_count(marks, k) for k in range(6)]


def test_theta_length():
    for base, r in [("A2", 2), ("A3", 2), ("D4", 3)]:
        tw = build_twisted_datum(base, r)
        assert ip(tw.base, tw.theta_under, tw.theta_under) == Fraction(2 * tw.a0, tw.r)


def test_parity_rule():
    tw = build_twisted_datum("A2", 2)
    assert tw.parity_coupled
    for k in range(6):
        recs = twisted_alcove_records(tw, k)
        assert all(rec["spin_parity"] == k % 2 for rec in recs)
    assert [p.coords for p in twisted_alcove_points(tw, 2)] == [(0,), (2,)]
    assert [p.coords for p in twisted_alcove_points(tw, 3)] == [(1,), (3,)]
    assert not build_twisted_datum("A3", 2).parity_coupled


def test_rejects():
    with pytest.raises(ConfigurationError):
        build_twisted_datum("B2", 2)
    with pytest.raises(ConfigurationError):
        build_twisted_datum("A2", 3)
    with pytest.raises(DomainError):
        twisted_alcove_points(build_twisted_datum("A2", 2), -1)
