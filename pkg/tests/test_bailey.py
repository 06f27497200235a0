from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qbailey.bailey import (
    LEMMA,
    MULTILATERAL,
    UNILATERAL,
    ParamEnv,
    m_entry,
    m_entry_verbatim,
    m_inv_entry,
    n_entry,
    orbit_points,
    s_entry,
    unit_alpha,
    verify_inverse,
    verify_lemma_commutation,
    verify_orbit_invariance,
)
from qbailey.qcore import FAcc, FactoredQ, FactoredSum, qm, qpow
from qbailey.wfunctions import w_staircase

B = qm(Fraction(2, 3), 1)
ONE = FactoredSum.of(FactoredQ.one())


def test_m_empty_column_is_one():
    env = ParamEnv.general(2, B)
    for nu in [(0, 0), (1, 0), (2, 1)]:
        assert m_entry(nu, (0, 0), env).equals(ONE)


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_m_one_variable_first_column(nu):
    b = ParamEnv.general(1, B).b
    expected = FAcc(-1, 2)
    expected.factor(b.scale, b.half, 1, b.eps).factor(Fraction(1), 2 * nu)
    expected.factor(Fraction(1), 2, -1).factor(b.scale, b.half + 2 * nu + 2, -1, b.eps)
    assert m_entry((nu,), (1,), ParamEnv.general(1, B)).equals(expected.freeze())


def test_multilateral_differs_from_unilateral():
    env = ParamEnv.special(1, 0)
    uni = m_entry((2,), (1,), env, UNILATERAL)
    multi = m_entry((2,), (1,), env, MULTILATERAL)
    assert not uni.equals(multi)


def test_inverse_empty_entry():
    env = ParamEnv.general(2, B)
    assert m_inv_entry((0, 0), (0, 0), env).equals(ONE)


def test_inverse_one_box_at_special_b():
    # the (1 - b q^2)/(1 - b) factor is reached as a limit at b = 1
    rep = verify_inverse((1,), ParamEnv.special(1, 0), MULTILATERAL)
    assert rep.ok, rep.summary()


def test_mismatched_pairing_is_not_inverse():
    rep = verify_inverse((2, 1), ParamEnv.general(2, qpow(3)), LEMMA)
    assert not rep.ok and rep.failures


@pytest.mark.parametrize("norm", [UNILATERAL, MULTILATERAL])
def test_inverse_small_boxes(norm):
    env = ParamEnv.special(2, 1) if norm == MULTILATERAL else ParamEnv.general(2, qpow(3))
    rep = verify_inverse((2, 1), env, norm)
    assert rep.ok and rep.checked > 0, rep.summary()


def test_inverse_one_variable_generic():
    rep = verify_inverse((3,), ParamEnv.general(1, B))
    assert rep.ok and rep.checked == 10, rep.summary()


def test_s_trivial_index():
    env = ParamEnv.general(2, B, sigma=qm(2, 1), rho=qm(-1, 4))
    assert s_entry((0, 0), env) == FactoredQ.one()


def test_weak_s_example():
    assert s_entry((2,), ParamEnv.special(1, 0)) == FactoredQ(1, 8)


def test_weak_n_example():
    env = ParamEnv.special(1, 0)
    got = n_entry((1,), (1,), env)
    pre = FAcc(1, 4).poch(qpow(1), 1).poch(qpow(1), 1, -1).poch(qpow(1), 1, -1).freeze()
    expected = w_staircase("s_up", (1,), (1,), (), 1) * pre
    assert got.equals(expected)


def test_unit_alpha_examples():
    assert unit_alpha((0, 0), ParamEnv.general(2, B)) == FactoredQ.one()
    assert unit_alpha((2,), ParamEnv.special(1, 0), MULTILATERAL) == FactoredQ(1, 2)
    expected = FAcc(-1).factor(Fraction(1), 2, -1).freeze()
    assert unit_alpha((1,), ParamEnv.special(1, 1), MULTILATERAL) == expected


def test_unit_alpha_multilateral_empty_is_f_delta():
    value = unit_alpha((0, 0), ParamEnv.special(2, 0), MULTILATERAL)
    expected = FAcc(Fraction(1, 2)).factor(Fraction(-1), 2, -1).freeze()
    assert value == expected


@pytest.mark.parametrize("sigma,rho", [(qm(2, 1), qm(-1, 4)), (qm(Fraction(1, 3), 3), qm(5, 1))])
def test_strong_commutation(sigma, rho):
    env = ParamEnv.general(2, B, sigma=sigma, rho=rho)
    rep = verify_lemma_commutation((2, 2), env)
    assert rep.ok and rep.checked > 0, rep.summary()


def test_strong_commutation_one_variable_special_b():
    env = ParamEnv.general(1, qpow(1), sigma=qm(2, 1), rho=qm(-1, 2))
    rep = verify_lemma_commutation((2,), env)
    assert rep.ok, rep.summary()


def test_weak_commutation():
    rep = verify_lemma_commutation((1, 1), ParamEnv.special(2, 0))
    assert rep.ok and rep.checked > 0, rep.summary()


def test_commutation_empty_column():
    env = ParamEnv.special(2, 0)
    for nu in [(1, 0), (1, 1), (2, 1)]:
        left = FactoredSum()
        for mu in [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)]:
            if all(a >= b for a, b in zip(nu, mu)):
                left = left + n_entry(nu, mu, env) * m_entry(mu, (0, 0), env)
        assert left.equals(m_entry(nu, (0, 0), env))


def test_orbit_one_variable_reflection():
    env = ParamEnv.special(1, 0)
    for lam in range(0, 3):
        for nu in range(lam, lam + 2):
            assert m_entry_verbatim((nu,), (lam,), env).equals(m_entry_verbatim((nu,), (-lam,), env))


@pytest.mark.parametrize("delta", [0, 1])
def test_orbit_invariance_one_variable(delta):
    env = ParamEnv.special(1, delta)
    for lam in range(0, 4):
        rep = verify_orbit_invariance((3,), (lam,), env)
        assert rep.ok, rep.summary()


def test_orbit_points_two_variables():
    env = ParamEnv.special(2, 1)
    rng = random.Random(3)
    for _ in range(5):
        lam = (rng.randint(0, 3), rng.randint(-2, 2))
        pts = orbit_points(lam, env)
        assert lam in pts
        assert len(pts) <= 8
    rep = verify_orbit_invariance((2, 1), (1, 0), env)
    assert rep.ok, rep.summary()


def test_identity_element_trivial():
    env = ParamEnv.special(1, 0)
    a = m_entry_verbatim((2,), (1,), env)
    assert a.equals(m_entry_verbatim((2,), (1,), env))
