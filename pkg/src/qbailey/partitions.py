"""Partitions, lattice points and the enumerators behind every sum.

Partitions are plain tuples of non-negative integers, weakly decreasing and
padded with zeros to a fixed length n.  Lattice points are tuples in Z^n.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterator, NamedTuple, Sequence

Partition = tuple
LatticePoint = tuple


class Stats(NamedTuple):
    weight: int  # |lam|
    n_of: int  # n(lam) = sum (i-1) lam_i
    n_conj: int  # n(lam') = sum C(lam_i, 2)
    n2: int  # sum lam_i^2


def pad(lam: Sequence[int], n: int) -> Partition:
    """Pad (or check) a partition to exactly n parts."""
    lam = tuple(lam)
    if len(lam) > n:
        if any(lam[n:]):
            raise ValueError(f"{lam} has more than {n} nonzero parts")
        return lam[:n]
    return lam + (0,) * (n - len(lam))


def is_partition(lam: Sequence[int]) -> bool:
    return all(p >= 0 for p in lam) and all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def binom2(m: int) -> int:
    """C(m, 2) = m(m-1)/2 for every integer m."""
    return m * (m - 1) // 2


def weight(lam: Sequence[int]) -> int:
    return sum(lam)


def n_of(lam: Sequence[int]) -> int:
    return sum(i * p for i, p in enumerate(lam))


def n_conj(lam: Sequence[int]) -> int:
    return sum(binom2(p) for p in lam)


def n2(lam: Sequence[int]) -> int:
    return sum(p * p for p in lam)


def stats(lam: Sequence[int]) -> Stats:
    return Stats(weight(lam), n_of(lam), n_conj(lam), n2(lam))


def contains(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """mu is contained in lam (componentwise, equal lengths)."""
    return all(m <= l for l, m in zip(lam, mu))


def is_horizontal_strip(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam_1 >= mu_1 >= lam_2 >= mu_2 >= ... >= lam_n >= mu_n >= 0."""
    n = max(len(lam), len(mu))
    lam = tuple(lam) + (0,) * (n - len(lam))
    mu = tuple(mu) + (0,) * (n - len(mu))
    for i in range(n):
        nxt = lam[i + 1] if i + 1 < n else 0
        if not (lam[i] >= mu[i] >= nxt):
            return False
    return mu[-1] >= 0 if n else True


def partitions_in_box(cap: Sequence[int]) -> list[Partition]:
    """All partitions mu with mu_i <= cap_i, graded-lexicographic order."""
    cap = tuple(cap)
    n = len(cap)
    out: list[Partition] = []

    def rec(i: int, upper: int, prefix: tuple) -> None:
        if i == n:
            out.append(prefix)
            return
        for v in range(min(upper, cap[i]) + 1):
            rec(i + 1, v, prefix + (v,))

    rec(0, cap[0] if n else 0, ())
    out.sort(key=lambda p: (sum(p), p))
    return out


def enumerate_box(n: int, cap: Sequence[int]) -> Iterator[Partition]:
    return iter(partitions_in_box(pad(cap, n)))


def partitions_below(lam: Sequence[int]) -> list[Partition]:
    """Sub-partitions of lam (the interval [0, lam] under containment)."""
    return partitions_in_box(tuple(lam))


def partitions_between(mu: Sequence[int], lam: Sequence[int]) -> list[Partition]:
    """Partitions kappa with mu <= kappa <= lam."""
    return [k for k in partitions_in_box(tuple(lam)) if contains(k, mu)]


def partitions_of_weight_at_most(n: int, w: int) -> list[Partition]:
    """All partitions with at most n parts and |mu| <= w."""
    out: list[Partition] = []

    def rec(i: int, upper: int, left: int, prefix: tuple) -> None:
        if i == n:
            out.append(prefix)
            return
        for v in range(min(upper, left) + 1):
            rec(i + 1, v, left - v, prefix + (v,))

    rec(0, w, w, ())
    out.sort(key=lambda p: (sum(p), p))
    return out


def enumerate_chains(top: Sequence[int], N: int) -> Iterator[tuple[Partition, ...]]:
    """Chains mu^(N-1) <= ... <= mu^1 <= top, yielded as (mu^1, ..., mu^(N-1))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    top = tuple(top)

    def rec(level: int, upper: Partition, prefix: tuple) -> Iterator[tuple]:
        if level == N:
            yield prefix
            return
        for mu in partitions_below(upper):
            yield from rec(level + 1, mu, prefix + (mu,))

    yield from rec(1, top, ())


def horizontal_strips_below(lam: Sequence[int], floor: Sequence[int] | None = None) -> list[Partition]:
    """All nu with lam/nu a horizontal strip (and nu containing ``floor``)."""
    lam = tuple(lam)
    n = len(lam)
    floor = tuple(floor) if floor is not None else (0,) * n
    ranges = []
    for i in range(n):
        lo = lam[i + 1] if i + 1 < n else 0
        lo = max(lo, floor[i])
        if lo > lam[i]:
            return []
        ranges.append(range(lo, lam[i] + 1))
    return [tuple(p) for p in product(*ranges)]


def lattice_shells(n: int, L: int) -> Iterator[LatticePoint]:
    """Points of Z^n with max |coordinate| exactly L, in lexicographic order."""
    if L < 0:
        raise ValueError("L must be >= 0")
    if L == 0:
        yield (0,) * n
        return
    for p in product(range(-L, L + 1), repeat=n):
        if max(abs(c) for c in p) == L:
            yield p


def hyperoctahedral_orbit(v: Sequence) -> list[tuple]:
    """Distinct images of v under coordinate permutations and sign changes."""
    v = tuple(v)
    seen = set()
    out = []
    for perm in permutations(v):
        for signs in product((1, -1), repeat=len(v)):
            w = tuple(s * x for s, x in zip(signs, perm))
            if w not in seen:
                seen.add(w)
                out.append(w)
    out.sort()
    return out


def dominant_representative(x: Sequence) -> tuple:
    """The weakly decreasing vector of absolute values in the orbit of x."""
    return tuple(sorted((abs(c) for c in x), reverse=True))
