from __future__ import annotations

from fractions import Fraction

import pytest

from qbailey.partitions import partitions_in_box, weight
from qbailey.qcore import FAcc, FactoredQ, FactoredSum, qm, qpow
from qbailey.wfunctions import FAMILIES, h_skew, w_limit_formula, w_multi, w_single, w_staircase

B = qm(Fraction(2, 3), 1)
PARAMS = {"full": (qm(3, 2), B), "a": (B,), "b": (B,), "ab": (B,), "s_up": (), "s_down": ()}


def test_h_skew_one_variable_is_one():
    assert h_skew((3,), (1,), 1) == FactoredQ.one()


def test_h_skew_trivial_lengths():
    assert h_skew((1, 1), (1, 1), 1) == FactoredQ.one()
    assert h_skew((2, 1), (1, 1), 1) == FactoredQ.one()


@pytest.mark.parametrize("family", FAMILIES)
def test_empty_partitions_give_one(family):
    assert w_single(family, qpow(3), (0, 0), (0, 0), PARAMS[family], 1) == FactoredQ.one()


@pytest.mark.parametrize("c", [1, 2, 5])
def test_s_down_single_box(c):
    expected = FAcc().factor(Fraction(1), -2 * c).freeze()
    assert w_single("s_down", qpow(c), (1,), (0,), (), 1) == expected


def test_non_strip_vanishes():
    assert w_single("a", qpow(3), (2, 2), (0, 0), (B,), 1).is_zero()


def test_a_family_is_limit_of_full():
    x, lam, mu = qpow(3), (2, 1), (1, 0)
    wa = w_single("a", x, lam, mu, (B,), 1)
    A = 40
    wf = w_single("full", x, lam, mu, (qpow(A), B), 1)
    scaled = wf * FactoredQ(1, -2 * A * (weight(lam) - weight(mu)))
    assert scaled.lower(16) == wa.lower(16)


@pytest.mark.parametrize("family", FAMILIES)
def test_multi_single_variable_is_single(family):
    xs = (qm(-2, 1),)
    got = w_multi(family, xs, (2,), (1,), PARAMS[family], 1)
    assert got.equals(w_single(family, xs[0], (2,), (1,), PARAMS[family], 1))


@pytest.mark.parametrize("family", FAMILIES)
def test_multi_symmetric_in_variables(family):
    x1, x2 = qpow(3), qm(-2, 1)
    for lam in [(1, 1), (2, 1), (2, 0)]:
        u = w_multi(family, (x1, x2), lam, (0, 0), PARAMS[family], 1)
        v = w_multi(family, (x2, x1), lam, (0, 0), PARAMS[family], 1)
        assert u.equals(v), (family, lam)


def test_multi_three_variables_symmetric():
    xs = (qpow(3), qm(-2, 1), qm(Fraction(1, 3), 2))
    perm = (xs[2], xs[0], xs[1])
    lam = (2, 1, 0)
    assert w_multi("a", xs, lam, (0, 0, 0), (B,), 1).equals(w_multi("a", perm, lam, (0, 0, 0), (B,), 1))


def test_staircase_empty():
    assert w_staircase("a", (2, 1), (0, 0), (B,), 1).equals(FactoredSum.of(FactoredQ.one()))


def test_staircase_single_variable_matches_single():
    got = w_staircase("a", (1,), (1,), (qpow(1),), 1)
    assert got.equals(w_single("a", qpow(1), (1,), (0,), (qpow(1),), 1))


def test_limit_formula_examples():
    assert w_limit_formula("a", (0, 0), 0, 2) == FactoredQ.one()
    assert w_limit_formula("s_up", (2,), 0, 1) == FactoredQ(1, -4)
    expected = FAcc(1, -2).factor(Fraction(1), 4).factor(Fraction(1), 2, -1).freeze()
    assert w_limit_formula("s_up", (1, 0), 0, 2) == expected


def limit_threshold(family: str, mu, delta: int, n: int, T: int) -> int:
    """Smallest K from which the staircase value agrees with the limit through q^T."""
    v = delta + n if family == "a" else 1
    return T + 1 + v * weight(mu) + max(mu)


@pytest.mark.parametrize("family", ["a", "s_up"])
@pytest.mark.parametrize("n,delta", [(1, 0), (1, 1), (2, 0), (2, 1)])
def test_staircase_reaches_limit(family, n, delta):
    T = 6
    for mu in partitions_in_box((2,) * n):
        params = (qpow(delta + n - 1).deformed(1),) if family == "a" else ()
        K = limit_threshold(family, mu, delta, n, T)
        lim = w_limit_formula(family, mu, delta, n).lower(2 * T)
        for extra in (0, 1):
            assert w_staircase(family, (K + extra,) * n, mu, params, 1).lower(2 * T) == lim


def test_unknown_family():
    with pytest.raises(ValueError):
        w_single("nope", qpow(1), (1,), (0,), (), 1)
