from __future__ import annotations

from fractions import Fraction

import pytest

from qbailey.qcore import (
    FAcc,
    FactoredQ,
    FactoredSum,
    NotInvertibleError,
    QMono,
    QSeries,
    factored_lower,
    qm,
    qpoch_finite,
    qpoch_infinite,
    qpoch_partition,
    qpow,
    series_add,
    series_invert,
    series_mul,
)


def S(coeffs: dict, order: int = 20) -> QSeries:
    """Series from whole-unit exponents."""
    return QSeries({2 * e: c for e, c in coeffs.items()}, order)


def test_add_cancels():
    assert series_add(S({0: 1, 1: 1}), S({0: 1, 1: -1})) == S({0: 2})


def test_add_identity():
    s = S({0: 3, 2: -1})
    assert series_add(s, QSeries({}, 20)) == s


def test_half_integer_grid():
    h = QSeries({1: 1}, 20)
    assert (h + h).coeffs == {1: Fraction(2)}


def test_mul_difference_of_squares():
    assert series_mul(S({0: 1, 1: 1}), S({0: 1, 1: -1})) == S({0: 1, 2: -1})


def test_mul_identity():
    s = S({0: 1, 3: Fraction(2, 3)})
    assert s * QSeries.one(20) == s


def test_triple_product_expansion():
    p = S({0: 1, 1: -1}) * S({0: 1, 2: -1}) * S({0: 1, 3: -1})
    assert p == S({0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1})


def test_invert_geometric():
    inv = series_invert(S({0: 1, 1: -1}))
    assert [inv.coefficient(e) for e in range(10)] == [1] * 10


def test_invert_factors_out_monomial():
    inv = series_invert(S({1: 1, 2: -1}))
    assert inv.valuation() == -2
    assert [inv.coefficient(e) for e in range(-1, 5)] == [1] * 6


def test_invert_scalar():
    assert series_invert(S({0: 2})) == S({0: Fraction(1, 2)})


def test_invert_zero_raises():
    with pytest.raises(NotInvertibleError):
        series_invert(QSeries({}, 10))


def test_truncation_order_propagates():
    a = QSeries({0: 1}, 6)
    b = QSeries({0: 1}, 10)
    assert (a + b).order == 6
    assert (a * b).order == 6


def test_qpoch_finite_definition():
    f = qpoch_finite(qpow(1), 2)
    assert factored_lower(f, 20) == S({0: 1, 1: -1, 2: -1, 3: 1})


def test_qpoch_finite_empty():
    assert qpoch_finite(qm(7, 3), 0) == FactoredQ.one()


def test_qpoch_finite_negative_length():
    assert qpoch_finite(qpow(2), -1) == FAcc().factor(Fraction(1), 2, -1).freeze()


def test_qpoch_infinite_pentagonal_start():
    assert qpoch_infinite(qpow(1), 14) == S({0: 1, 1: -1, 2: -1, 5: 1, 7: 1}, 14)


def test_qpoch_infinite_beyond_order():
    assert qpoch_infinite(qpow(8), 14) == QSeries.one(14)


def test_qpoch_infinite_scaled_base():
    assert qpoch_infinite(qm(2, 1), 4) == S({0: 1, 1: -2, 2: -2}, 4)


def test_qpoch_partition():
    f = qpoch_partition(qpow(3), (2, 1), 1)
    expected = FAcc().factor(Fraction(1), 6).factor(Fraction(1), 8).factor(Fraction(1), 4).freeze()
    assert f == expected
    assert qpoch_partition(qpow(3), (), 1) == FactoredQ.one()
    assert qpoch_partition(qpow(1), (1,), 0) == FAcc().factor(Fraction(1), 2).freeze()


def test_lower_monomial():
    assert factored_lower(FactoredQ(3, 4), 10) == S({2: 3}, 10)


def test_lower_cancels_before_expanding():
    f = FAcc().factor(Fraction(1), 2).factor(Fraction(1), 2, -1).freeze()
    assert factored_lower(f, 10) == QSeries.one(10)


def test_zero_factor_bookkeeping():
    x = FAcc().factor(Fraction(1), 2).freeze()
    f = FAcc().factor(Fraction(1), 0).factor(Fraction(1), 0, -1).mul(x).freeze()
    assert factored_lower(f, 10) == factored_lower(x, 10)


def test_deformed_zero_factor_is_a_limit():
    b = qpow(0).deformed(1)
    # (1 - b q^2)/(1 - b) at b -> 1 is a pole, while (1 - b)/(1 - b) is 1
    ratio = FAcc().factor(b.scale, b.half, 1, b.eps).factor(b.scale, b.half, -1, b.eps).freeze()
    assert factored_lower(ratio, 10) == QSeries.one(10)


def test_factored_sum_exact_equality():
    one_minus_q = FAcc().factor(Fraction(1), 2).freeze()
    a = FactoredSum([FactoredQ.one(), FactoredQ(-1, 2)])
    assert a.equals(FactoredSum.of(one_minus_q))
    assert not a.equals(FactoredSum.of(FactoredQ.one()))


def test_mono_arithmetic():
    m = QMono(Fraction(2), 3)
    assert (m * m.inv()) == QMono(Fraction(1), 0)
    assert m.shift(2).half == 5
    assert m.exp == Fraction(3, 2)
