from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qbailey.jackson import OmegaParams, cocycle_sides, omega_multi, omega_single
from qbailey.partitions import is_horizontal_strip, partitions_in_box
from qbailey.qcore import FAcc, PoleError, QMono, qm, qpow

P = OmegaParams(r=qpow(1), a=qpow(3), b=qpow(4))
GENERIC = OmegaParams(r=qm(2, 1), a=qm(Fraction(1, 3), 3), b=qm(-1, 2))


def _mono(rng: random.Random) -> QMono:
    return QMono(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3])), rng.randint(1, 6))


def test_empty_is_one():
    for lam in [(0,), (0, 0)]:
        value = omega_single(lam, lam, qpow(2), P).lower(10)
        assert value.coefficient(0) == 1 and len(value.coeffs) == 1


def test_one_box_is_first_block():
    # with mu empty only (x^-1, ax)_1 / (qbx, qb/ax)_1 survives
    x = qm(3, 2)
    a, b = P.a, P.b
    expected = (FAcc().poch(x.inv(), 1).poch(a * x, 1)
                .poch((b * x).shift(2), 1, -1).poch((b / (a * x)).shift(2), 1, -1).freeze())
    assert omega_single((1,), (0,), x, P).equals(expected)


def test_one_box_pole_at_unit_ratio():
    # x = q^2 makes qb/(ax) = 1, so (qb/ax)_1 vanishes in the denominator
    with pytest.raises(PoleError):
        omega_single((1,), (0,), qpow(2), P).lower(20)


def test_nonstrip_pair_can_be_nonzero():
    hits = []
    for lam in partitions_in_box((2, 2)):
        for mu in partitions_in_box(lam):
            if not is_horizontal_strip(lam, mu):
                if not omega_single(lam, mu, qm(3, 2), GENERIC).lower(40).is_zero():
                    hits.append((lam, mu))
    assert hits


def test_multi_single_block_is_single():
    got = omega_multi((1,), (0,), (), (qpow(2),), P)
    assert got.equals(omega_single((1,), (0,), qpow(2), P))


def test_multi_split_independence():
    p = GENERIC
    xs = (qpow(2), qm(3, 1), qm(-1, 3))
    lam = (2, 1)
    first = omega_multi(lam, (0, 0), xs[:1], xs[1:], p)
    second = omega_multi(lam, (0, 0), xs[:2], xs[2:], p)
    assert first.equals(second)


def test_cocycle_diagonal():
    lhs, rhs = cocycle_sides((1, 1), (1, 1), qpow(1), qpow(2), qpow(3), qpow(5))
    assert lhs.equals(rhs)


def test_cocycle_one_box():
    lhs, rhs = cocycle_sides((1,), (0,), qpow(1), qpow(2), qpow(3), qpow(5))
    assert lhs.equals(rhs)


@pytest.mark.parametrize("seed", range(3))
def test_cocycle_random(seed):
    rng = random.Random(seed)
    u, v, a, b = (_mono(rng) for _ in range(4))
    lhs, rhs = cocycle_sides((1, 1), (0, 0), u, v, a, b)
    assert lhs.equals(rhs)


def test_cocycle_needs_containment():
    with pytest.raises(ValueError):
        cocycle_sides((1, 0), (2, 0), qpow(1), qpow(2), qpow(3), qpow(5))


def test_cocycle_at_removable_point():
    # v = q t makes 0/0 factors appear; the sides agree as limits
    u, v, a, b = qpow(6), qpow(2), qm(Fraction(3, 2), 6), qm(Fraction(-1, 3), 2)
    for nu, mu in [((1, 0), (1, 0)), ((1, 0), (0, 0)), ((2, 1), (0, 0))]:
        lhs, rhs = cocycle_sides(nu, mu, u, v, a, b)
        assert lhs.equals(rhs)
