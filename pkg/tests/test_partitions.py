from __future__ import annotations

from math import comb

from qbailey.partitions import (
    dominant_representative,
    enumerate_box,
    enumerate_chains,
    hyperoctahedral_orbit,
    is_horizontal_strip,
    lattice_shells,
    partitions_below,
    partitions_of_weight_at_most,
    stats,
)


def test_stats_partition():
    assert tuple(stats((3, 1))) == (4, 1, 3, 10)


def test_stats_zero():
    assert tuple(stats((0, 0, 0))) == (0, 0, 0, 0)


def test_stats_lattice_point():
    s = stats((-2, 1))
    assert s.weight == -1
    assert s.n_conj == 3
    assert s.n2 == 5


def test_horizontal_strip():
    assert is_horizontal_strip((3, 1), (2, 1))
    assert not is_horizontal_strip((3, 3), (1, 1))
    assert is_horizontal_strip((4, 2, 1), (4, 2, 1))


def test_enumerate_box():
    assert set(enumerate_box(1, (2,))) == {(0,), (1,), (2,)}
    assert set(enumerate_box(2, (1, 1))) == {(0, 0), (1, 0), (1, 1)}
    assert len(list(enumerate_box(2, (2, 2)))) == comb(4, 2)


def test_box_count_matches_binomial():
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            assert len(list(enumerate_box(n, (m,) * n))) == comb(n + m, n)


def test_chains():
    assert len(list(enumerate_chains((1,), 2))) == 2
    assert len(list(enumerate_chains((1,), 3))) == 3
    assert len(list(enumerate_chains((2, 1), 2))) == 5


def test_chain_count_is_sum_over_subpartitions():
    top = (2, 1)
    direct = sum(len(partitions_below(mu)) for mu in partitions_below(top))
    assert len(list(enumerate_chains(top, 3))) == direct


def test_lattice_shells():
    assert list(lattice_shells(1, 0)) == [(0,)]
    assert set(lattice_shells(1, 2)) == {(-2,), (2,)}
    assert len(list(lattice_shells(2, 1))) == 8
    for n in (1, 2, 3):
        for L in range(1, 4):
            assert len(set(lattice_shells(n, L))) == (2 * L + 1) ** n - (2 * L - 1) ** n


def test_hyperoctahedral_orbit():
    assert set(hyperoctahedral_orbit((0, 0))) == {(0, 0)}
    assert set(hyperoctahedral_orbit((3,))) == {(3,), (-3,)}
    assert len(set(hyperoctahedral_orbit((2, 1)))) == 8
    assert len(set(hyperoctahedral_orbit((3, 2, 1)))) == 48


def test_dominant_representative():
    assert tuple(dominant_representative((-1, 3))) == (3, 1)


def test_weight_bounded_enumeration():
    parts = partitions_of_weight_at_most(2, 3)
    assert all(sum(p) <= 3 for p in parts)
    assert len(parts) == 1 + 1 + 2 + 2
