"""Identity registry and the exact verification engine.

Each registry row builds one or more checks.  A check is a pair of sides that
are either exact rational functions (FactoredQ / FactoredSum, compared by
exact equality) or truncated series (QSeries, compared coefficient by
coefficient up to the requested order).  Orders given to the public API are
in whole units of q; internally exponents are half-units.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt
from typing import Any, Callable, Iterable, Sequence

from .bailey import (
    MULTILATERAL,
    ParamEnv,
    f_delta,
    m_entry,
    n_entry,
    orbit_points,
    s_entry,
    unit_alpha,
    verify_orbit_invariance,
)
from .partitions import (
    binom2,
    contains,
    hyperoctahedral_orbit,
    lattice_shells,
    n2,
    n_conj,
    n_of,
    partitions_below,
    partitions_in_box,
    partitions_of_weight_at_most,
    weight,
)
from .qcore import (
    FAcc,
    FactoredQ,
    FactoredSum,
    IndeterminateError,
    NotInvertibleError,
    PoleError,
    QMono,
    QSeries,
    poch_inf,
    to_half,
)
from .wfunctions import staircase, w_single, w_staircase

ONE = Fraction(1)
Side = Any  # QSeries | FactoredQ | FactoredSum


class StabilizationError(RuntimeError):
    """A lattice sum did not settle within the shell cap."""


class UnknownIdentityError(KeyError):
    """No registry row has the requested name."""


# ---------------------------------------------------------------------------
# Monomial parameters
# ---------------------------------------------------------------------------


def parse_mono(text: str | QMono) -> QMono:
    """Parse ``c*q^e`` (c rational, e a multiple of 1/2), e.g. ``-1/3*q^5/2``, ``2q``, ``q^-1``, ``3``."""
    if isinstance(text, QMono):
        return text
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty monomial")
    if "q" not in s:
        return QMono(Fraction(s), 0)
    head, _, tail = s.partition("q")
    head = head.rstrip("*")
    if head in ("", "+"):
        c = ONE
    elif head == "-":
        c = -ONE
    else:
        c = Fraction(head)
    if not tail:
        e = ONE
    elif tail.startswith("^"):
        e = Fraction(tail[1:].strip("()"))
    else:
        raise ValueError(f"cannot parse monomial {text!r}")
    if c == 0:
        raise ValueError("monomial scale must be nonzero")
    return QMono(c, to_half(e))


def format_mono(m: QMono) -> str:
    e = Fraction(m.half, 2)
    if e == 0:
        return str(m.scale)
    head = "" if m.scale == 1 else ("-" if m.scale == -1 else f"{m.scale}*")
    return f"{head}q" if e == 1 else f"{head}q^{e}"


def _q(half: int) -> QMono:
    return QMono(ONE, half)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class Check:
    """One comparison inside a registry row."""

    label: str
    lhs: Side
    rhs: Side


@dataclass
class IdentityReport:
    """Outcome of one verification.

    ``verified_order`` and mismatch exponents are in half-units.
    """

    name: str
    params: dict
    status: str  # match | mismatch | error
    verified_order: int | None = None
    first_mismatch: tuple[int, Fraction, Fraction] | None = None
    term_counts: tuple[int, int] = (0, 0)
    elapsed: float = 0.0
    lhs: QSeries | None = None
    rhs: QSeries | None = None
    failed_check: str | None = None
    message: str = ""
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "match"


def as_series(x: Side, h: int) -> QSeries:
    """Lower any side to a QSeries exact through half-order ``h``."""
    if isinstance(x, QSeries):
        return x.truncate(h) if x.order is None or x.order > h else x
    if isinstance(x, (FactoredQ, FactoredSum)):
        return x.lower(h)
    if isinstance(x, (int, Fraction)):
        return QSeries({0: x}, h)
    raise TypeError(f"cannot lower {type(x).__name__}")


def _is_exact(x: Side) -> bool:
    return isinstance(x, (FactoredQ, FactoredSum))


def _exact_equal(a: Side, b: Side) -> bool:
    a = a if isinstance(a, FactoredSum) else FactoredSum.of(a)
    return a.equals(b)


def _locate_mismatch(a: Side, b: Side, h: int, limit: int = 400):
    """First differing exponent of two exact sides, searching beyond ``h`` if needed."""
    order = h
    while True:
        m = as_series(a, order).first_mismatch(as_series(b, order))
        if m is not None or order >= h + limit:
            return m
        order += max(20, order - h + 20)


def compare(check: Check, h: int) -> tuple[bool, tuple | None, QSeries, QSeries]:
    """(equal, first mismatch, lowered lhs, lowered rhs)."""
    ls, rs = as_series(check.lhs, h), as_series(check.rhs, h)
    if _is_exact(check.lhs) and _is_exact(check.rhs):
        if _exact_equal(check.lhs, check.rhs):
            return True, None, ls, rs
        return False, _locate_mismatch(check.lhs, check.rhs, h), ls, rs
    mm = ls.first_mismatch(rs)
    return mm is None, mm, ls, rs


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------


def lattice_sum(summand: Callable[[tuple], Side | None], n: int, T, shell_cap: int = 60) -> QSeries:
    """Sum of ``summand`` over Z^n, exact through order T.

    Shells max|lam_i| = L are added in turn.  The sum stops once two
    consecutive shells have every term above the truncation order; the
    quadratic exponents of the registry summands make later shells vanish too.
    """
    h = to_half(T)
    total = QSeries({}, h)
    quiet = 0
    for L in range(shell_cap + 1):
        shell = QSeries({}, h)
        live = False
        for p in lattice_shells(n, L):
            v = summand(p)
            if v is None:
                continue
            s = as_series(v, h)
            if not s.is_zero():
                live = True
                shell = shell + s
        total = total + shell
        quiet = 0 if live else quiet + 1
        if quiet >= 2 and L >= 2:
            return total
    raise StabilizationError(f"lattice sum over Z^{n} did not settle within {shell_cap} shells")


def chain_total(tops: Iterable[tuple], top_term: Callable[[tuple], Side],
                step_term: Callable[[tuple, tuple], Side], N: int) -> FactoredSum:
    """Exact sum over chains mu^(N-1) <= ... <= mu^1 with mu^1 in ``tops``.

    The summand is top_term(mu^1) times the product of step_term(mu^(k-1), mu^k).
    Inner sums depend only on the level and the partition above, so they are memoised.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    one = FactoredSum.of(FactoredQ.one())
    if N == 1:
        return one
    memo: dict[tuple, FactoredSum] = {}

    def inner(level: int, prev: tuple) -> FactoredSum:
        if level == N:
            return one
        key = (level, prev)
        if key not in memo:
            tot = FactoredSum()
            for mu in partitions_below(prev):
                tot = tot + _as_sum(step_term(prev, mu)) * inner(level + 1, mu)
            memo[key] = tot
        return memo[key]

    total = FactoredSum()
    for mu1 in tops:
        total = total + inner(2, tuple(mu1)) * _as_sum(top_term(tuple(mu1)))
    return total


def chain_sum(top_term: Callable[[tuple], Side], step_term: Callable[[tuple, tuple], Side],
              n: int, N: int, T) -> QSeries:
    """Chain sum with |mu^1| <= T, lowered to order T.

    Needs a summand whose valuation is at least |mu^1|, which holds when the
    top term carries q^|mu^1| and every other factor has non-negative valuation.
    """
    h = to_half(T)
    total = QSeries({}, h)
    if N == 1:
        return QSeries.one(h)
    for mu1 in partitions_of_weight_at_most(n, h // 2):
        total = total + chain_total([mu1], top_term, step_term, N).lower(h)
    return total


def _as_sum(x: Side) -> FactoredSum:
    return x if isinstance(x, FactoredSum) else FactoredSum.of(x)


def det(rows: Sequence[Sequence[Any]]):
    """Determinant by cofactor expansion along the first row (any commutative ring)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 1:
        return rows[0][0]
    out = None
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def det_series(entries: Sequence[Sequence[QSeries]]) -> QSeries:
    """Determinant of a matrix of truncated series; the result carries its own valid order."""
    return det([list(r) for r in entries])


def gordon_count(k: int, i: int, Nmax: int) -> list[int]:
    """B_{k,i}(m) for m = 0..Nmax.

    Partitions b_1 >= b_2 >= ... with b_j - b_{j+k-1} >= 2 and at most i - 1
    parts equal to 1.  Counted through part frequencies f_v: the difference
    condition is f_v + f_(v+1) <= k - 1.
    """
    if k < 2 or not 1 <= i <= k:
        raise ValueError("need k >= 2 and 1 <= i <= k")
    if Nmax < 0:
        return []
    # dp[f][w]: choices for parts 1..v with f_v = f and weight w
    dp = [[0] * (Nmax + 1) for _ in range(k)]
    for f in range(min(i - 1, Nmax) + 1):
        dp[f][f] = 1
    for v in range(2, Nmax + 1):
        new = [[0] * (Nmax + 1) for _ in range(k)]
        for fprev in range(k):
            row = dp[fprev]
            for f in range(k - fprev):
                add = f * v
                if add > Nmax:
                    break
                target = new[f]
                for w in range(Nmax + 1 - add):
                    c = row[w]
                    if c:
                        target[w + add] += c
        dp = new
    if Nmax == 0:
        return [1]
    return [sum(dp[f][w] for f in range(k)) for w in range(Nmax + 1)]


def gordon_series(k: int, i: int, T) -> QSeries:
    h = to_half(T)
    counts = gordon_count(k, i, h // 2)
    return QSeries({2 * m: c for m, c in enumerate(counts)}, h)


def ag_product(k: int, i: int, T) -> QSeries:
    """prod over m >= 1, m not 0, +-i mod 2k+1, of 1/(1 - q^m)."""
    if k < 2 or not 1 <= i <= k:
        raise ValueError("need k >= 2 and 1 <= i <= k")
    h = to_half(T)
    mod = 2 * k + 1
    acc = FAcc()
    for m in range(1, h // 2 + 1):
        if m % mod not in (0, i, mod - i):
            acc.factor(ONE, 2 * m, -1)
    return acc.freeze().lower(h)


# ---------------------------------------------------------------------------
# Shared q-Pochhammer products
# ---------------------------------------------------------------------------


def _pp(acc: FAcc, base: QMono, lam: Sequence[int], k: int, sign: int = 1) -> None:
    """(base; q, t)_lam ** sign with t = q^k."""
    for i, part in enumerate(lam):
        acc.poch(base.shift(-2 * k * i), part, sign)


def _pair_diff(acc: FAcc, lam: Sequence[int], k: int, sign: int = 1) -> None:
    """prod_{i<j} (q t^(j-i))_{lam_i-lam_j} / (q t^(j-i-1))_{lam_i-lam_j}."""
    n = len(lam)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = lam[i - 1] - lam[j - 1]
            acc.poch(_q(2 + 2 * k * (j - i)), d, sign)
            acc.poch(_q(2 + 2 * k * (j - i - 1)), d, -sign)


def _pair_t(acc: FAcc, lam: Sequence[int], k: int) -> None:
    """prod_{i<j} (t^(j-i+1))_{lam_i-lam_j} / (t^(j-i))_{lam_i-lam_j}."""
    n = len(lam)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = lam[i - 1] - lam[j - 1]
            acc.poch(_q(2 * k * (j - i + 1)), d, 1)
            acc.poch(_q(2 * k * (j - i)), d, -1)


def _pair_b(acc: FAcc, lam: Sequence[int], b: QMono, k: int, top: int = 3) -> None:
    """prod_{i<j} (b t^(top-i-j))_{lam_i+lam_j} / (b t^(top-1-i-j))_{lam_i+lam_j}."""
    n = len(lam)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            s = lam[i - 1] + lam[j - 1]
            acc.poch(b.shift(2 * k * (top - i - j)), s, 1)
            acc.poch(b.shift(2 * k * (top - 1 - i - j)), s, -1)


def _wp(acc: FAcc, lam: Sequence[int], b: QMono, k: int) -> None:
    """prod_i (1 - b t^(2-2i) q^(2 lam_i)) / (1 - b t^(2-2i))."""
    for i in range(1, len(lam) + 1):
        base = b.shift(2 * k * (2 - 2 * i))
        acc.factor(base.scale, base.half + 4 * lam[i - 1], 1, base.eps)
        acc.factor(base.scale, base.half, -1, base.eps)


def _pinf_n(x: QMono, n: int, k: int, h: int) -> FactoredQ:
    """(x)_{inf^n} = prod_{i=1}^n (x t^(1-i); q)_inf."""
    acc = FAcc()
    for i in range(n):
        acc.mul(poch_inf(x.shift(-2 * k * i), h))
    return acc.freeze()


def _deformed(b: QMono) -> QMono:
    """Treat b as a limit point so that special values such as b = 1 are reached by continuity."""
    return b if b.eps else b.deformed(1)


# ---------------------------------------------------------------------------
# One-variable Bailey machinery
# ---------------------------------------------------------------------------


def classical_m(n: int, k: int, b: QMono) -> FactoredQ:
    """1/((q)_{n-k} (qb)_{n+k}); zero for k > n."""
    if k > n:
        return FactoredQ.zero_value()
    return FAcc().poch(_q(2), n - k, -1).poch(b.shift(2), n + k, -1).freeze()


def classical_unit_alpha(k: int, b: QMono) -> FactoredQ:
    """alpha_k = (1 - b q^(2k)) (b)_k (-1)^k q^C(k,2) / ((1 - b) (q)_k), the pair of beta = delta_{n0}."""
    acc = FAcc((-1) ** (k % 2), 2 * binom2(k))
    acc.factor(b.scale, b.half + 4 * k, 1, b.eps)
    acc.factor(b.scale, b.half, -1, b.eps)
    acc.poch(b, k, 1).poch(_q(2), k, -1)
    return acc.freeze()


def bilateral_unit_alpha(k: int, delta: int) -> FactoredQ:
    """(-1)^k q^C(k,2) f(delta) on Z, the bilateral pair of beta = delta_{n0} relative to b = q^delta."""
    acc = FAcc((-1) ** (k % 2), 2 * binom2(k))
    if delta == 1:
        acc.factor(ONE, 2, -1)
    return acc.freeze()


@dataclass
class AlphaSeq:
    """A sequence alpha_k with known support (None means unbounded) and a valuation floor."""

    value: Callable[[int], FactoredQ]
    lo: int | None
    hi: int | None
    floor: int  # half-units

    def __call__(self, k: int) -> FactoredQ:
        if (self.lo is not None and k < self.lo) or (self.hi is not None and k > self.hi):
            return FactoredQ.zero_value()
        return self.value(k)


def _random_alpha(seed: int, lo: int, hi: int) -> AlphaSeq:
    rng = random.Random(seed)
    table = {}
    for k in range(lo, hi + 1):
        c = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
        table[k] = FactoredQ.monomial(c, 2 * rng.randint(0, 2))
    return AlphaSeq(lambda k: table[k], lo, hi, 0)


def alpha_sequence(kind: str, seed: int, *, bilateral: bool, b: QMono | None = None,
                   delta: int = 0, paule: bool = False) -> AlphaSeq:
    """The unit pair, or a seeded random finitely supported sequence."""
    if kind == "random":
        return _random_alpha(seed, -3 if bilateral else 0, 3)
    if kind != "unit":
        raise ValueError("alpha must be 'unit' or 'random'")
    if bilateral:
        if paule:
            # Paule's kernel is the classical one divided by (q)_delta
            return AlphaSeq(lambda k: FactoredQ((-1) ** (k % 2), 2 * binom2(k)), None, None, 0)
        return AlphaSeq(lambda k: bilateral_unit_alpha(k, delta), None, None, 0)
    return AlphaSeq(lambda k: classical_unit_alpha(k, b), 0, None, min(0, b.half))


def _beta(m: int, alpha: AlphaSeq, kernel: Callable[[int, int], FactoredQ], lo: int) -> FactoredSum:
    tot = FactoredSum()
    start = lo if alpha.lo is None else max(lo, alpha.lo)
    for k in range(start, m + 1):
        a = alpha(k)
        if not a.is_zero():
            tot = tot + kernel(m, k) * a
    return tot


def strong_s(k: int, x: QMono, sigma: QMono, rho: QMono) -> FactoredQ:
    """(sigma)_k (rho)_k (xq/(sigma rho))^k / ((xq/sigma)_k (xq/rho)_k), any integer k."""
    xq = x.shift(2)
    acc = FAcc()
    acc.mul_mono(xq / (sigma * rho), k)
    acc.poch(sigma, k).poch(rho, k).poch(xq / sigma, k, -1).poch(xq / rho, k, -1)
    return acc.freeze()


def strong_n(i: int, j: int, x: QMono, sigma: QMono, rho: QMono) -> FactoredQ:
    """(xq/(rho sigma))_{i-j} (rho)_j (sigma)_j (xq/(rho sigma))^j / ((q)_{i-j} (xq/rho)_i (xq/sigma)_i)."""
    if j > i:
        return FactoredQ.zero_value()
    xq = x.shift(2)
    c = xq / (sigma * rho)
    acc = FAcc()
    acc.poch(c, i - j).poch(rho, j).poch(sigma, j).mul_mono(c, j)
    acc.poch(_q(2), i - j, -1).poch(xq / rho, i, -1).poch(xq / sigma, i, -1)
    return acc.freeze()


def two_param_m(i: int, j: int, a: QMono, b: QMono) -> FactoredQ:
    """M(a, b)_{ij} = (b/a)_{i-j} (b)_{i+j} (1 - a q^(2j)) a^(i-j) / ((q)_{i-j} (aq)_{i+j} (1 - a))."""
    if j > i:
        return FactoredQ.zero_value()
    acc = FAcc()
    acc.poch(b / a, i - j).poch(b, i + j)
    acc.factor(a.scale, a.half + 4 * j, 1, a.eps)
    acc.factor(a.scale, a.half, -1, a.eps)
    acc.mul_mono(a, i - j)
    acc.poch(_q(2), i - j, -1).poch(a.shift(2), i + j, -1)
    return acc.freeze()


# ---------------------------------------------------------------------------
# Multiple Rogers-Selberg, Watson and lattice summands
# ---------------------------------------------------------------------------


def wellpoised_term(mu: Sequence[int], n: int, N: int, b: QMono, k: int = 1) -> FactoredQ:
    """Summand of the well-poised side of the multiple Rogers-Selberg identity."""
    w = weight(mu)
    acc = FAcc((-1) ** (w % 2))
    acc.mul_mono(b, N * w)
    acc.mul_q(2 * (N * w + (2 * N + 1) * n_conj(mu)) + 2 * k * ((1 - 2 * N) * n_of(mu) + (1 - n) * w))
    _pp(acc, b.shift(2 * k * (1 - n)), mu, k, 1)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    _wp(acc, mu, b, k)
    _pair_diff(acc, mu, k)
    _pair_t(acc, mu, k)
    _pair_b(acc, mu, b, k)
    _pair_b(acc, mu, b.shift(2), k, top=2)
    return acc.freeze()


def rs_top_term(mu: Sequence[int], n: int, b: QMono, k: int = 1) -> FactoredQ:
    """Outermost chain factor of the balanced side."""
    w = weight(mu)
    acc = FAcc()
    acc.mul_q(2 * w + 4 * n_conj(mu) + 2 * k * (1 - n) * w)
    acc.mul_mono(b, w)
    _pair_t(acc, mu, k)
    _pair_diff(acc, mu, k)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    return acc.freeze()


def rs_step_term(prev: Sequence[int], mu: Sequence[int], n: int, b: QMono, k: int = 1,
                 inner: str = "iterated") -> FactoredSum:
    """Inner chain factor.

    ``iterated`` is the factor produced by applying the weak lemma matrix once
    more; ``printed`` is the shorter factor q^|mu| t^(2 n(mu)).
    """
    w = weight(mu)
    acc = FAcc()
    if inner == "iterated":
        acc.mul_q(2 * w + 4 * n_conj(mu) - 2 * k * (n - 1) * w)
        acc.mul_mono(b.shift(2), w)
    elif inner == "printed":
        acc.mul_q(2 * w + 4 * k * n_of(mu))
    else:
        raise ValueError("inner must be 'iterated' or 'printed'")
    _pair_diff(acc, mu, k)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    return w_staircase("s_up", prev, mu, (), k) * acc.freeze()


def watson_lhs(mu0: Sequence[int], b: QMono, sigmas: Sequence[QMono], rhos: Sequence[QMono],
               k: int = 1) -> FactoredSum:
    """Balanced side of the generalized Watson transformation (sigma_1..sigma_N in order)."""
    n = len(mu0)
    N = len(sigmas)
    qb = b.shift(2)
    sN, rN = sigmas[-1], rhos[-1]
    pre = FAcc()
    _pp(pre, qb, mu0, k, 1)
    _pp(pre, qb / (sN * rN), mu0, k, 1)
    _pp(pre, qb / sN, mu0, k, -1)
    _pp(pre, qb / rN, mu0, k, -1)

    def level_term(level: int, prev: tuple, mu: tuple) -> FactoredSum:
        s_up, r_up = sigmas[N - level], rhos[N - level]
        s_lo, r_lo = sigmas[N - level - 1], rhos[N - level - 1]
        acc = FAcc()
        acc.mul_q(2 * weight(mu) + 4 * k * n_of(mu))
        _pp(acc, qb / (r_lo * s_lo), mu, k, 1)
        _pp(acc, s_up, mu, k, 1)
        _pp(acc, r_up, mu, k, 1)
        _pp(acc, qb / s_lo, mu, k, -1)
        _pp(acc, qb / r_lo, mu, k, -1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
        _pair_diff(acc, mu, k)
        s = (r_up * s_up / qb).shift(2 * k * (n - 1))
        return w_staircase("ab", prev, mu, (s,), k) * acc.freeze()

    memo: dict[tuple, FactoredSum] = {}
    one = FactoredSum.of(FactoredQ.one())

    def inner(level: int, prev: tuple) -> FactoredSum:
        if level == N:
            return one
        key = (level, prev)
        if key not in memo:
            tot = FactoredSum()
            for mu in partitions_below(prev):
                tot = tot + level_term(level, prev, mu) * inner(level + 1, mu)
            memo[key] = tot
        return memo[key]

    return inner(1, tuple(mu0)) * pre.freeze()


def watson_rhs(mu0: Sequence[int], b: QMono, sigmas: Sequence[QMono], rhos: Sequence[QMono],
               k: int = 1, form: str = "restored") -> FactoredSum:
    """Well-poised side; ``restored`` includes the factor (b t^(2-2n))^|mu| that ``printed`` omits."""
    if form not in ("restored", "printed"):
        raise ValueError("form must be 'restored' or 'printed'")
    n = len(mu0)
    tot = FactoredSum()
    for mu in partitions_below(mu0):
        w = weight(mu)
        acc = FAcc((-1) ** (w % 2))
        acc.mul_q(2 * w + 2 * n_conj(mu) + 2 * k * n_of(mu))
        if form == "restored":
            acc.mul_mono(b.shift(2 * k * (2 - 2 * n)), w)
        _pp(acc, b.shift(2 * k * (1 - n)), mu, k, 1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
        _wp(acc, mu, b, k)
        _pair_diff(acc, mu, k)
        _pair_b(acc, mu, b, k)
        env = ParamEnv.general(n, b, k)
        for s, r in zip(sigmas, rhos):
            acc.mul(s_entry(mu, env.with_sigma_rho(s, r)))
        tot = tot + w_staircase("a", mu0, mu, (b.shift(2 * k * (1 - n)),), k) * acc.freeze()
    return tot


def watson_matrix_form(mu0: Sequence[int], b: QMono, sigmas, rhos, k: int = 1) -> FactoredSum:
    """sum_mu M_{mu0 mu} (prod_k S_mu(sigma_k, rho_k)) alpha_mu with the unit pair."""
    n = len(mu0)
    env = ParamEnv.general(n, b, k)
    tot = FactoredSum()
    for mu in partitions_below(mu0):
        t = m_entry(mu0, mu, env) * unit_alpha(mu, env)
        for s, r in zip(sigmas, rhos):
            t = t * s_entry(mu, env.with_sigma_rho(s, r))
        tot = tot + t
    return tot


def box_lhs(n: int, N: int, M: int, b: QMono, k: int = 1, inner: str = "iterated") -> FactoredSum:
    """Balanced side of the terminating box identity (mu^0 = M^n)."""

    def top(mu1: tuple) -> FactoredQ:
        w = weight(mu1)
        acc = FAcc((-1) ** (w % 2))
        acc.mul_q(2 * ((M + 1) * w + n_conj(mu1)) + 2 * k * ((1 - n) * w + n_of(mu1)))
        acc.mul_mono(b, w)
        _pair_t(acc, mu1, k)
        _pair_diff(acc, mu1, k)
        _pp(acc, _q(-2 * M), mu1, k, 1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), mu1, k, -1)
        return acc.freeze()

    def step(prev: tuple, mu: tuple) -> FactoredSum:
        return rs_step_term(prev, mu, n, b, k, inner)

    total = chain_total(partitions_in_box((M,) * n), top, step, N)
    pre = FAcc()
    _pp(pre, b.shift(2), (M,) * n, k, 1)
    return total * pre.freeze()


def box_rhs(n: int, N: int, M: int, b: QMono, k: int = 1) -> FactoredSum:
    tot = FactoredSum()
    for mu in partitions_in_box((M,) * n):
        w = weight(mu)
        acc = FAcc()
        acc.mul_mono(b, N * w)
        acc.mul_q(2 * ((N + M) * w + 2 * N * n_conj(mu)) + 2 * k * ((2 - 2 * N) * n_of(mu) + (1 - n) * w))
        _pp(acc, _q(-2 * M), mu, k, 1)
        _pp(acc, b.shift(2 + 2 * M), mu, k, -1)
        _pp(acc, b.shift(2 * k * (1 - n)), mu, k, 1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
        _wp(acc, mu, b, k)
        _pair_diff(acc, mu, k)
        _pair_t(acc, mu, k)
        _pair_b(acc, mu, b, k)
        _pair_b(acc, mu, b.shift(2), k, top=2)
        tot = tot + acc.freeze()
    return tot


def _ratio_inf(acc: FAcc, a: int, b: int) -> None:
    """(q^a)_inf / (q^b)_inf for integers a, b."""
    if b >= a:
        acc.poch(_q(2 * a), b - a, 1)
    else:
        acc.poch(_q(2 * b), a - b, -1)


def symmetric_summand(v: Sequence[Fraction], z: Sequence[Fraction], N: int, pair_form: str = "weight") -> FactoredQ:
    """Multilateral well-poised summand at t = q as a function of the shifted point v = mu + z.

    The z-only prefactor is dropped.  ``pair_form="weight"`` uses
    (q^a)_inf/(t q^a)_inf for each pair exponent a = +-v_i +- v_j; ``"printed"``
    uses its reciprocal (q^(1+a))_inf/(t^-1 q^(1+a))_inf.
    """
    n = len(v)
    v = [Fraction(x) for x in v]
    z = [Fraction(x) for x in z]
    acc = FAcc()
    e = sum((N - 1) * (v[i] ** 2 - z[i] ** 2) for i in range(n))
    if (2 * e).denominator != 1:
        raise ValueError("v - z must be integral")
    acc.mul_q(int(2 * e))
    for i in range(n):
        c = 1 - z[i] + (n - 1 - i)
        for sgn in (1, -1):
            a, b = c + sgn * v[i], 1 + 2 * sgn * v[i]
            if a.denominator != 1 or b.denominator != 1:
                raise ValueError("the shift z must make every exponent integral")
            _ratio_inf(acc, int(a), int(b))
    mult = 1 if pair_form == "weight" else -1
    for i in range(n):
        for j in range(i + 1, n):
            for a in (v[i] - v[j], v[j] - v[i], v[i] + v[j], -v[i] - v[j]):
                acc.factor(ONE, int(2 * a), mult)
    return acc.freeze()


def theorem_shift(n: int, delta: int) -> tuple[Fraction, ...]:
    """z_i = n - i (delta = 0) or n - i + 1/2 (delta = 1)."""
    return tuple(Fraction(n - i) + Fraction(delta, 2) for i in range(1, n + 1))


def pentagonal_term(lam: Sequence[int], n: int, delta: int) -> FactoredQ:
    acc = FAcc((-1) ** (weight(lam) % 2))
    acc.mul_q(2 * ((delta + n - 1) * weight(lam) + n_conj(lam) + n2(lam) - n_of(lam)))
    acc.mul(f_delta(n, delta))
    acc.mul_scalar(factorial(n))
    _lattice_pairs(acc, lam, n, delta)
    return acc.freeze()


def rr_sum_term(mu: Sequence[int], n: int, delta: int) -> FactoredQ:
    acc = FAcc()
    acc.mul_q(2 * ((delta + n - 1) * weight(mu) + n2(mu)))
    for i in range(1, n + 1):
        acc.poch(_q(2 * (n + 1 - i)), mu[i - 1], -1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acc.factor(ONE, 2 * (j - i + mu[i - 1] - mu[j - 1]), 1)
            acc.factor(ONE, 2 * (j - i), -2)
    return acc.freeze()


def rr_product_term(lam: Sequence[int], n: int, delta: int) -> FactoredQ:
    acc = FAcc((-1) ** (weight(lam) % 2))
    acc.mul_q(2 * ((2 * delta + 3 * (n - 1)) * weight(lam) + 2 * n2(lam) - 3 * n_of(lam) + n_conj(lam)))
    acc.mul(f_delta(n, delta))
    acc.mul_scalar(factorial(n))
    _lattice_pairs(acc, lam, n, delta)
    return acc.freeze()


def _lattice_pairs(acc: FAcc, lam: Sequence[int], n: int, delta: int) -> None:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acc.factor(ONE, 2 * (j - i + lam[i - 1] - lam[j - 1]), 1)
            acc.factor(ONE, 2 * (j - i), -2)
            acc.factor(ONE, 2 * (delta + 2 * n - i - j + lam[i - 1] + lam[j - 1]), 1)
            acc.factor(ONE, 2 * (delta + 2 * n - i - j), -2)


def ag_lattice_term(mu: Sequence[int], n: int, N: int, bq: bool) -> FactoredQ:
    c = 1 if bq else 0
    acc = FAcc()
    for i in range(1, n + 1):
        m = mu[i - 1]
        acc.mul_scalar((-1) ** (m % 2))
        if bq:
            lin = 2 * n * N + (1 - n) - (2 * N - 1) * (i - 1)
        else:
            lin = 2 * N * n - N + 1 - n - (2 * N - 1) * (i - 1)
        acc.mul_q(2 * (lin * m + (2 * N + 1) * binom2(m)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acc.factor(ONE, 2 * (j - i + mu[i - 1] - mu[j - 1]), 1)
            acc.factor(ONE, 2 * (2 * n + c - i - j + mu[i - 1] + mu[j - 1]), 1)
    return acc.freeze()


def ag_lattice_prefactor(n: int, bq: bool) -> FactoredQ:
    c = 1 if bq else 0
    acc = FAcc()
    if bq:
        for i in range(1, n + 1):
            acc.factor(ONE, 2 * (2 * n - 2 * i + 1), -1)
    else:
        for i in range(1, n):
            acc.factor(-ONE, 2 * (n - i), -1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            acc.factor(ONE, 2 * (j - i), -2)
            acc.factor(ONE, 2 * (2 * n + c - i - j), -2)
    return acc.freeze()


def ag_lattice_side(n: int, N: int, bq: bool, T, shell_cap: int = 60) -> QSeries:
    h = to_half(T)
    s = lattice_sum(lambda m: ag_lattice_term(m, n, N, bq), n, T, shell_cap)
    return s * ag_lattice_prefactor(n, bq).lower(h)


def ag_wellpoised_side(n: int, N: int, bq: bool, T) -> QSeries:
    """Well-poised partition sum at b = t^(2n-2) or q t^(2n-2), t = q, by continuity in b."""
    h = to_half(T)
    b = _deformed(_q(2 * (2 * n - 2) + (2 if bq else 0)))
    tot = QSeries({}, h)
    for mu in partitions_of_weight_at_most(n, h // 2):
        tot = tot + wellpoised_term(mu, n, N, b).lower(h)
    return tot


def _theta3(p: int, A: int, B: int, order: int) -> FactoredQ:
    """(p, q^A, q^B; p)_inf with p = q^p; every exponent in half-units."""
    acc = FAcc()
    for e in (p, A, B):
        acc.mul(poch_inf(_q(e), order, step=p))
    return acc.freeze()


def ag_det_side(n: int, N: int, bq: bool, T) -> QSeries:
    """Determinant form; the working order is raised until the result is exact through T."""
    h = to_half(T)
    P = 2 * (2 * N + 1)
    sh = 1 if bq else 0
    cz = Fraction(1, 2) if bq else Fraction(0)
    pre = FAcc(Fraction(1, 2) * (-1) ** (binom2(n) % 2))
    if bq:
        for i in range(1, n + 1):
            pre.mul_q(int(2 * (n - i) * (n - i + Fraction(1, 2))))
            pre.factor(ONE, 2 * (2 * n - 2 * i + 1), -1)
    else:
        for i in range(1, n + 1):
            pre.mul_q(2 * (n - i) ** 2)
        for i in range(1, n):
            pre.factor(-ONE, 2 * (n - i), -1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            pre.factor(ONE, 2 * (j - i), -2)
            pre.factor(ONE, 2 * (2 * n + sh - i - j), -2)
    pre_f = pre.freeze()
    extra = 0
    while True:
        work = h + extra
        rows = []
        for i in range(1, n + 1):
            row = []
            g = 2 * n - 2 * i + 1 + sh
            for j in range(1, n + 1):
                e1 = int(2 * (j - 1) * (n - i + cz))
                x = _theta3(P, 2 * (g * N + (j - 1)), 2 * (2 * N + 2 - g * N - j), work + abs(e1))
                y = _theta3(P, 2 * (g * N - (j - 1)), 2 * (2 * N - g * N + j), work + abs(e1))
                xs = (x * FactoredQ.monomial(1, e1)).lower(work)
                ys = (y * FactoredQ.monomial(1, -e1)).lower(work)
                row.append(xs + ys)
            rows.append(row)
        d = det_series(rows)
        out = d * pre_f.lower(work)
        if out.order is not None and out.order >= h:
            return out.truncate(h)
        extra += 40
        if extra > 2000:
            raise StabilizationError("determinant side did not reach the requested order")


def dn_det_sides(c: Sequence[int]) -> tuple[FactoredSum, FactoredSum]:
    """Both sides of the D_n determinant evaluation at x_i = q^(c_i)."""
    n = len(c)
    lhs = FAcc()
    for i in range(n):
        for j in range(i + 1, n):
            lhs.factor(ONE, 2 * (c[i] - c[j]), 1)
            lhs.factor(ONE, 2 * (c[i] + c[j]), 1)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = 2 * (j * c[i])
            row.append(FactoredSum([FactoredQ.monomial(1, e), FactoredQ.monomial(1, -e)]))
        rows.append(row)
    d = det(rows)
    pre = FAcc(Fraction(1, 2) * (-1) ** (binom2(n) % 2))
    for i in range(n):
        pre.mul_q(2 * (n - 1 - i) * c[i])
    return FactoredSum.of(lhs.freeze()), d * pre.freeze()


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

ParamType = str  # int | mono | monos | part | ints | choice:a|b


@dataclass(frozen=True)
class IdentitySpec:
    """A registry row: parameter schema, defaults, default grid and the check builder."""

    name: str
    summary: str
    schema: dict
    defaults: dict
    build: Callable[[dict, int], list[Check]]
    grid: tuple = ()
    order_default: Callable[[dict], int] | None = None

    def default_order(self, params: dict) -> int:
        if self.order_default is not None:
            return self.order_default(params)
        return {1: 30, 2: 12}.get(int(params.get("n", 1)), 8)


REGISTRY: dict[str, IdentitySpec] = {}


def register(spec: IdentitySpec) -> IdentitySpec:
    REGISTRY[spec.name] = spec
    return spec


def coerce_param(kind: ParamType, value):
    """Convert a CLI or config string to the schema type."""
    if kind == "int":
        if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
            raise ValueError(f"expected an integer, got {value!r}")
        return int(value)
    if kind == "mono":
        return parse_mono(value)
    if kind == "monos":
        if isinstance(value, str):
            return tuple(parse_mono(v) for v in value.split(";") if v.strip())
        return tuple(parse_mono(v) for v in value)
    if kind in ("part", "ints"):
        if isinstance(value, str):
            return tuple(int(v) for v in value.replace("(", "").replace(")", "").split(",") if v.strip())
        return tuple(int(v) for v in value)
    if kind.startswith("choice:"):
        options = kind[len("choice:"):].split("|")
        if str(value) not in options:
            raise ValueError(f"expected one of {options}, got {value!r}")
        return str(value)
    raise ValueError(f"unknown parameter kind {kind!r}")


def resolve_params(spec: IdentitySpec, params: dict | None) -> dict:
    out = dict(spec.defaults)
    for key, value in (params or {}).items():
        if key not in spec.schema:
            raise ValueError(f"{spec.name} has no parameter {key!r}")
        out[key] = coerce_param(spec.schema[key], value)
    for key, kind in spec.schema.items():
        out[key] = coerce_param(kind, out[key])
    return out


def _sampled_monos(seed: int, count: int) -> tuple[QMono, ...]:
    """Seeded nonzero rational scales and exponents in {1/2, 1, 3/2, 2, 5/2}."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        num = rng.choice([-3, -2, -1, 1, 2, 3, 5, 7])
        den = rng.choice([1, 2, 3, 5])
        out.append(QMono(Fraction(num, den), rng.randint(1, 5)))
    return tuple(out)


def _check_alpha_kind(p: dict) -> None:
    if p["alpha"] not in ("unit", "random"):
        raise ValueError("alpha must be 'unit' or 'random'")


# --- classical and one-variable rows ---------------------------------------


def _jacobi(p: dict, h: int) -> list[Check]:
    z = p["z"]
    lhs = FAcc()
    work = h + 2 * abs(z.half) + 2  # the factors can have negative valuation
    lhs.mul(poch_inf(_q(2), work)).mul(poch_inf(_q(2) / z, work)).mul(poch_inf(z, work))
    terms = {}
    # the exponent m^2 - m + m z.half/2 is at most h only for |m| <= bound
    bound = isqrt(h) + abs(z.half) + 3
    for m in range(-bound, bound + 1):
        e = 2 * binom2(m) + m * z.half
        if e <= h:
            terms[e] = terms.get(e, 0) + (-1) ** (m % 2) * z.scale**m
    return [Check("product = theta series", lhs.freeze(), QSeries(terms, h))]


register(IdentitySpec(
    "jacobi_triple", "Jacobi triple product (q, q/z, z)_inf as a bilateral theta series",
    {"z": "mono"}, {"z": parse_mono("-q")}, _jacobi,
    grid=tuple({"z": f"{c}*q^{e}"} for c, e in [(1, "1/2"), (-1, "1/2"), (2, "1/2"), (-2, 1), (1, 1),
                                                  ("1/2", 1), (-1, 2), (2, 2), ("1/2", 2), (-2, "1/2")]),
    order_default=lambda p: 40))


def _ag_sum_side(k: int, i: int, h: int) -> QSeries:
    tot = QSeries({}, h)
    for ns in partitions_of_weight_at_most(k - 1, h // 2):
        if sum(x * x for x in ns) * 2 > h:
            continue
        acc = FAcc()
        acc.mul_q(2 * (sum(x * x for x in ns) + sum(ns[i - 1:])))
        for j in range(k - 1):
            nxt = ns[j + 1] if j + 1 < k - 1 else 0
            acc.poch(_q(2), ns[j] - nxt, -1)
        tot = tot + acc.freeze().lower(h)
    return tot


def _ag_classical(p: dict, h: int) -> list[Check]:
    k, i = p["k"], p["i"]
    if k < 2 or not 1 <= i <= k:
        raise ValueError("need k >= 2 and 1 <= i <= k")
    s = _ag_sum_side(k, i, h)
    prod = ag_product(k, i, Fraction(h, 2))
    return [Check("sum = product", s, prod),
            Check("product = Gordon partition counts", prod, gordon_series(k, i, Fraction(h, 2)))]


register(IdentitySpec(
    "ag_classical", "Andrews-Gordon identities: nested sum, product, and Gordon's partition counts",
    {"k": "int", "i": "int"}, {"k": 2, "i": 2}, _ag_classical,
    grid=({"k": 2, "i": 1}, {"k": 2, "i": 2}, {"k": 3, "i": 1}, {"k": 3, "i": 3}),
    order_default=lambda p: 30))


def _terminating_weak(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    b, top = _deformed(p["b"]), p["top"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=False, b=b)

    def kern(m, k):
        return classical_m(m, k, b)

    lhs = FactoredSum()
    for m in range(top + 1):
        w = FAcc().mul_mono(b, m).mul_q(2 * m * m).poch(_q(2), top - m, -1).freeze()
        lhs = lhs + _beta(m, alpha, kern, 0) * w
    rhs = FactoredSum()
    for k in range(top + 1):
        a = alpha(k)
        if not a.is_zero():
            rhs = rhs + FAcc().mul_mono(b, k).mul_q(2 * k * k).mul(classical_m(top, k, b)).mul(a).freeze()
    return [Check("terminating weak lemma", lhs, rhs)]


_ALPHA = "choice:unit|random"

register(IdentitySpec(
    "weak_bl_terminating_1d", "terminating weak Bailey lemma, one variable",
    {"b": "mono", "top": "int", "alpha": _ALPHA, "seed": "int"},
    {"b": parse_mono("2/3*q"), "top": 4, "alpha": "unit", "seed": 0}, _terminating_weak,
    grid=({"alpha": "unit"}, {"alpha": "random", "seed": 1}, {"b": "q", "alpha": "unit"})))


def _weak_sum_bound(b: QMono, floor: int, h: int) -> int:
    m = 0
    while 2 * m * m + m * min(b.half, 0) + floor <= h:
        m += 1
    return m


def _nonterminating_weak(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    b = _deformed(p["b"])
    if b.half < 0:
        raise ValueError("b needs non-negative q-valuation for convergence")
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=False, b=b)
    top = _weak_sum_bound(b, alpha.floor, h)

    def kern(m, k):
        return classical_m(m, k, b)

    lhs = QSeries({}, h)
    for m in range(top + 1):
        w = FAcc().mul_mono(b, m).mul_q(2 * m * m).freeze()
        lhs = lhs + (_beta(m, alpha, kern, 0) * w).lower(h)
    s = FactoredSum()
    for k in range(top + 1):
        a = alpha(k)
        if not a.is_zero():
            s = s + FAcc().mul_mono(b, k).mul_q(2 * k * k).mul(a).freeze()
    rhs = s.lower(h) * poch_inf(b.shift(2), h, power=-1).lower(h)
    return [Check("non-terminating weak lemma", lhs, rhs)]


register(IdentitySpec(
    "weak_bl_nonterminating_1d", "non-terminating weak Bailey lemma, one variable",
    {"b": "mono", "alpha": _ALPHA, "seed": "int"},
    {"b": parse_mono("2/3*q"), "alpha": "unit", "seed": 0}, _nonterminating_weak,
    grid=({"alpha": "unit"}, {"alpha": "random", "seed": 2}, {"b": "1", "alpha": "unit"})))


def _paule_kernel(delta: int):
    def kern(m: int, k: int) -> FactoredQ:
        if k > m or m + k + delta < 0:
            return FactoredQ.zero_value()
        return FAcc().poch(_q(2), m - k, -1).poch(_q(2), m + k + delta, -1).freeze()
    return kern


def _bilateral_nonterminating(p: dict, h: int) -> list[Check]:
    """Paule's normalisation with top -> infinity."""
    _check_alpha_kind(p)
    delta = p["delta"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=True, delta=delta, paule=True)
    kern = _paule_kernel(delta)
    top = _weak_sum_bound(_q(0), alpha.floor, h) + 1
    lhs = QSeries({}, h)
    for m in range(top + 1):
        w = FactoredQ.monomial(1, 2 * (m * m + delta * m))
        lhs = lhs + (_beta(m, alpha, kern, -m - delta) * w).lower(h)
    s = FactoredSum()
    for k in range(-top - 1, top + 1):
        a = alpha(k)
        if not a.is_zero():
            s = s + a * FactoredQ.monomial(1, 2 * (k * k + delta * k))
    rhs = s.lower(h) * poch_inf(_q(2), h, power=-1).lower(h)
    return [Check("bilateral non-terminating lemma", lhs, rhs)]


register(IdentitySpec(
    "bilateral_nonterminating_1d", "bilateral non-terminating Bailey lemma in Paule's normalisation",
    {"delta": "int", "alpha": _ALPHA, "seed": "int"},
    {"delta": 0, "alpha": "unit", "seed": 0}, _bilateral_nonterminating,
    grid=({"delta": 0}, {"delta": 1}, {"delta": 0, "alpha": "random", "seed": 3},
          {"delta": 1, "alpha": "random", "seed": 4})))


def _paule_pair(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    delta, top = p["delta"], p["top"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=True, delta=delta, paule=True)
    kern = _paule_kernel(delta)
    lhs = FactoredSum()
    for j in range(top + 1):
        w = FAcc().mul_q(2 * (j * j + delta * j)).poch(_q(2), top - j, -1).freeze()
        lhs = lhs + _beta(j, alpha, kern, -j - delta) * w
    rhs = FactoredSum()
    for k in range(-top - delta, top + 1):
        a = alpha(k)
        if not a.is_zero():
            rhs = rhs + kern(top, k) * a * FactoredQ.monomial(1, 2 * (k * k + delta * k))
    checks = [Check("primed pair is a Bailey pair", lhs, rhs)]
    # the weak multilateral N at n = 1 is Paule's N conjugated by D = (q)_nu (q^(1+delta))_nu
    env = ParamEnv.special(1, delta)
    for nu in range(top + 1):
        for mu in range(nu + 1):
            paule = FAcc().mul_q(2 * (mu * mu + delta * mu)).poch(_q(2), nu - mu, -1)
            paule.poch(_q(2), nu).poch(_q(2 + 2 * delta), nu)
            paule.poch(_q(2), mu, -1).poch(_q(2 + 2 * delta), mu, -1)
            checks.append(Check(f"weak N[{nu},{mu}] matches Paule's kernel",
                                n_entry((nu,), (mu,), env), paule.freeze()))
    return checks


register(IdentitySpec(
    "paule_pair_1d", "Paule's bilateral Bailey pair map and the weak lemma matrix at n = 1",
    {"delta": "int", "top": "int", "alpha": _ALPHA, "seed": "int"},
    {"delta": 0, "top": 4, "alpha": "unit", "seed": 0}, _paule_pair,
    grid=({"delta": 0}, {"delta": 1}, {"delta": 0, "alpha": "random", "seed": 5},
          {"delta": 1, "alpha": "random", "seed": 6})))


def _strong_common(b: QMono, sigma: QMono, rho: QMono, top: int, alpha: AlphaSeq,
                   lo: Callable[[int], int], kern) -> tuple[FactoredSum, FactoredSum]:
    lhs = FactoredSum()
    for m in range(top + 1):
        lhs = lhs + _beta(m, alpha, kern, lo(m)) * strong_n(top, m, b, sigma, rho)
    rhs = FactoredSum()
    for k in range(lo(top), top + 1):
        a = alpha(k)
        if not a.is_zero():
            rhs = rhs + kern(top, k) * strong_s(k, b, sigma, rho) * a
    return lhs, rhs


def _classical_strong(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    b = _deformed(p["b"])
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=False, b=b)
    lhs, rhs = _strong_common(b, p["sigma"], p["rho"], p["top"], alpha, lambda m: 0,
                              lambda m, k: classical_m(m, k, b))
    return [Check("strong lemma", lhs, rhs)]


register(IdentitySpec(
    "classical_strong_bl_1d", "classical strong Bailey lemma in series form",
    {"b": "mono", "sigma": "mono", "rho": "mono", "top": "int", "alpha": _ALPHA, "seed": "int"},
    {"b": parse_mono("2/3*q"), "sigma": parse_mono("2*q"), "rho": parse_mono("-1/3*q^5/2"), "top": 4,
     "alpha": "unit", "seed": 0}, _classical_strong,
    grid=({"alpha": "unit"}, {"alpha": "random", "seed": 7}, {"b": "q", "sigma": "3*q^1/2", "rho": "-q^2"})))


def _bilateral_kernel(delta: int):
    b = _q(2 * delta)

    def kern(m: int, k: int) -> FactoredQ:
        if k > m or m + k < -delta:
            return FactoredQ.zero_value()
        return FAcc().poch(_q(2), m - k, -1).poch(b.shift(2), m + k, -1).freeze()
    return kern


def _strong_bilateral(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    delta = p["delta"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=True, delta=delta)
    lhs, rhs = _strong_common(_q(2 * delta), p["sigma"], p["rho"], p["top"], alpha,
                              lambda m: -m - delta, _bilateral_kernel(delta))
    return [Check("strong bilateral lemma", lhs, rhs)]


register(IdentitySpec(
    "strong_bilateral_1d", "strong bilateral Bailey lemma",
    {"delta": "int", "sigma": "mono", "rho": "mono", "top": "int", "alpha": _ALPHA, "seed": "int"},
    {"delta": 0, "sigma": parse_mono("2*q"), "rho": parse_mono("-1/3*q^5/2"), "top": 3, "alpha": "random",
     "seed": 0}, _strong_bilateral,
    grid=({"delta": 0}, {"delta": 1}, {"delta": 0, "alpha": "unit"}, {"delta": 1, "alpha": "unit"})))


def _weak_bilateral(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    delta, top = p["delta"], p["top"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=True, delta=delta)
    kern = _bilateral_kernel(delta)
    lhs = FactoredSum()
    for m in range(top + 1):
        w = FAcc().mul_q(2 * m * (m + delta)).poch(_q(2), top - m, -1).freeze()
        lhs = lhs + _beta(m, alpha, kern, -m - delta) * w
    rhs = FactoredSum()
    for k in range(-top - delta, top + 1):
        a = alpha(k)
        if not a.is_zero():
            rhs = rhs + kern(top, k) * a * FactoredQ.monomial(1, 2 * k * (k + delta))
    return [Check("weak bilateral lemma", lhs, rhs)]


register(IdentitySpec(
    "weak_bilateral_1d", "weak bilateral Bailey lemma",
    {"delta": "int", "top": "int", "alpha": _ALPHA, "seed": "int"},
    {"delta": 0, "top": 4, "alpha": "random", "seed": 0}, _weak_bilateral,
    grid=({"delta": 0}, {"delta": 1}, {"delta": 0, "alpha": "unit"}, {"delta": 1, "alpha": "unit"})))


def _nonterminating_bilateral(p: dict, h: int) -> list[Check]:
    _check_alpha_kind(p)
    delta = p["delta"]
    alpha = alpha_sequence(p["alpha"], p["seed"], bilateral=True, delta=delta)
    kern = _bilateral_kernel(delta)
    top = _weak_sum_bound(_q(0), alpha.floor, h) + 1
    lhs = QSeries({}, h)
    for m in range(top + 1):
        w = FactoredQ.monomial(1, 2 * m * (m + delta))
        lhs = lhs + (_beta(m, alpha, kern, -m - delta) * w).lower(h)
    s = FactoredSum()
    for k in range(-top - 1, top + 1):
        a = alpha(k)
        if not a.is_zero():
            s = s + a * FactoredQ.monomial(1, 2 * k * (k + delta))
    rhs = s.lower(h) * poch_inf(_q(2 + 2 * delta), h, power=-1).lower(h)
    return [Check("non-terminating bilateral lemma", lhs, rhs)]


register(IdentitySpec(
    "nonterminating_bilateral_1d", "non-terminating bilateral Bailey lemma relative to b = q^delta",
    {"delta": "int", "alpha": _ALPHA, "seed": "int"},
    {"delta": 0, "alpha": "unit", "seed": 0}, _nonterminating_bilateral,
    grid=({"delta": 0}, {"delta": 1}, {"delta": 0, "alpha": "random", "seed": 8},
          {"delta": 1, "alpha": "random", "seed": 9})))


def _mat(f: Callable[[int, int], FactoredQ], size: int) -> list[list[FactoredQ]]:
    return [[f(i, j) for j in range(size + 1)] for i in range(size + 1)]


def _matmul(A, B) -> list[list[FactoredSum]]:
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            tot = FactoredSum()
            for l in range(size):
                if not A[i][l].is_zero() and not B[l][j].is_zero():
                    tot = tot + A[i][l] * B[l][j]
            row.append(tot)
        out.append(row)
    return out


def _matrix_checks(label: str, A, B) -> list[Check]:
    return [Check(f"{label}[{i},{j}]", _as_sum(A[i][j]), _as_sum(B[i][j]))
            for i in range(len(A)) for j in range(len(A))]


def _two_param(p: dict, h: int) -> list[Check]:
    a, b, c, size = p["a"], p["b"], p["c"], p["size"]
    Mab = _mat(lambda i, j: two_param_m(i, j, a, b), size)
    Mbc = _mat(lambda i, j: two_param_m(i, j, b, c), size)
    Mac = _mat(lambda i, j: two_param_m(i, j, a, c), size)
    Mba = _mat(lambda i, j: two_param_m(i, j, b, a), size)
    ident = [[FactoredQ.one() if i == j else FactoredQ.zero_value() for j in range(size + 1)]
             for i in range(size + 1)]
    return _matrix_checks("M(b,c)M(a,b) = M(a,c)", _matmul(Mbc, Mab), Mac) + \
        _matrix_checks("M(b,a)M(a,b) = I", _matmul(Mba, Mab), ident)


register(IdentitySpec(
    "two_param_composition_1d", "two-parameter Bailey matrices: composition and inverse",
    {"a": "mono", "b": "mono", "c": "mono", "size": "int"},
    {"a": parse_mono("2/3*q"), "b": parse_mono("-3*q^1/2"), "c": parse_mono("5/2*q^2"), "size": 4}, _two_param,
    grid=({}, {"a": "q^1/2", "b": "2*q", "c": "-1/5*q^3/2"})))


def _bressoud(p: dict, h: int) -> list[Check]:
    b, c, sigma, rho, size = p["b"], p["c"], p["sigma"], p["rho"], p["size"]
    d = (b * c).shift(2) / (sigma * rho)

    def S(x: QMono, i: int) -> FactoredQ:
        return strong_s(i, x, sigma, rho)

    Mcd = _mat(lambda i, j: two_param_m(i, j, c, d), size)
    Mbd = _mat(lambda i, j: two_param_m(i, j, b, d), size)
    Mcb = _mat(lambda i, j: two_param_m(i, j, c, b), size)
    left = [[Mcd[i][j] * S(c, j) / S(c, i) for j in range(size + 1)] for i in range(size + 1)]
    conj = [[Mbd[i][j] * S(b, j) / S(b, i) for j in range(size + 1)] for i in range(size + 1)]
    return _matrix_checks("Bressoud relation", left, _matmul(conj, Mcb))


register(IdentitySpec(
    "bressoud_relation_1d", "Bressoud's matrix relation for qbc = d rho sigma",
    {"b": "mono", "c": "mono", "sigma": "mono", "rho": "mono", "size": "int"},
    {"b": parse_mono("2/3*q"), "c": parse_mono("-3*q^1/2"), "sigma": parse_mono("2*q"),
     "rho": parse_mono("-1/3*q^5/2"), "size": 3}, _bressoud,
    grid=({}, {"b": "q^1/2", "c": "5*q^2", "sigma": "-q", "rho": "3*q^3/2"})))


# --- multiple rows -------------------------------------------------------------


def _default_sigmas(p: dict) -> tuple[tuple[QMono, ...], tuple[QMono, ...]]:
    N = p["N"]
    if p.get("sigmas"):
        sig, rho = p["sigmas"], p["rhos"]
        if len(sig) != N or len(rho) != N:
            raise ValueError("need N sigmas and N rhos")
        return tuple(sig), tuple(rho)
    mon = _sampled_monos(p["seed"], 2 * N)
    return mon[:N], mon[N:]


def _watson(p: dict, h: int) -> list[Check]:
    mu0 = p["mu0"]
    b = _deformed(p["b"])
    sig, rho = _default_sigmas(p)
    lhs = watson_lhs(mu0, b, sig, rho)
    rhs = watson_rhs(mu0, b, sig, rho, form=p["form"])
    return [Check("balanced = well-poised", lhs, rhs),
            Check("well-poised = iterated lemma matrices", rhs, watson_matrix_form(mu0, b, sig, rho))]


register(IdentitySpec(
    "watson_multiple", "generalized Watson transformation after N lemma steps from the unit pair",
    {"N": "int", "mu0": "part", "b": "mono", "sigmas": "monos", "rhos": "monos", "seed": "int",
     "form": "choice:restored|printed"},
    {"N": 2, "mu0": (2, 1), "b": parse_mono("2/3*q"), "sigmas": (), "rhos": (), "seed": 0, "form": "restored"},
    _watson,
    grid=tuple({"N": N, "mu0": m, "seed": s} for N in (1, 2) for m in ("1,1", "2,1") for s in (0, 1, 2))))


def _watson_box(p: dict, h: int) -> list[Check]:
    n, N, M = p["n"], p["N"], p["M"]
    b = _deformed(p["b"])
    return [Check("balanced = well-poised", box_lhs(n, N, M, b, inner=p["inner"]), box_rhs(n, N, M, b))]


register(IdentitySpec(
    "watson_box", "terminating box case mu^0 = M^n with sigma_i, rho_i -> infinity",
    {"n": "int", "N": "int", "M": "int", "b": "mono", "inner": "choice:iterated|printed"},
    {"n": 2, "N": 2, "M": 2, "b": parse_mono("2/3*q"), "inner": "iterated"}, _watson_box,
    grid=({"n": 1, "N": 2, "M": 2}, {"n": 1, "N": 3, "M": 2}, {"n": 2, "N": 2, "M": 2},
          {"n": 2, "N": 3, "M": 2})))


def _rogers_selberg(p: dict, h: int) -> list[Check]:
    n, N, k = p["n"], p["N"], p["t_power"]
    b = _deformed(p["b"])
    if b.half < 0:
        raise ValueError("b needs non-negative q-valuation")
    T = Fraction(h, 2)
    chain = chain_sum(lambda mu: rs_top_term(mu, n, b, k),
                      lambda prev, mu: rs_step_term(prev, mu, n, b, k, p["inner"]), n, N, T)
    lhs = chain * _pinf_n(b.shift(2), n, k, h).lower(h)
    rhs = QSeries({}, h)
    for mu in partitions_of_weight_at_most(n, h // 2):
        rhs = rhs + wellpoised_term(mu, n, N, b, k).lower(h)
    return [Check("balanced = well-poised", lhs, rhs)]


register(IdentitySpec(
    "rogers_selberg_multiple", "generalized Rogers-Selberg identity (sigma, rho, mu^0 -> infinity)",
    {"n": "int", "N": "int", "b": "mono", "t_power": "int", "inner": "choice:iterated|printed"},
    {"n": 2, "N": 3, "b": parse_mono("2/3*q"), "t_power": 1, "inner": "iterated"}, _rogers_selberg,
    grid=({"n": 1, "N": 2}, {"n": 1, "N": 3}, {"n": 2, "N": 2}, {"n": 2, "N": 3},
          {"n": 2, "N": 2, "t_power": 2})))


def _summand_symmetry(p: dict, h: int) -> list[Check]:
    n, N, delta = p["n"], p["N"], p["delta"]
    z = theorem_shift(n, delta)
    b = _deformed(_q(2 * (2 * n - 2) + 2 * delta))
    form = p["pair_form"]

    def S(mu: Sequence[int]) -> FactoredQ:
        return symmetric_summand([m + zi for m, zi in zip(mu, z)], z, N, form)

    zero = (0,) * n
    base_l, base_s = wellpoised_term(zero, n, N, b), S(zero)
    checks = []
    for mu in partitions_in_box((2,) * n):
        left = FactoredSum.of(wellpoised_term(mu, n, N, b) * base_s)
        checks.append(Check(f"well-poised summand / symmetric summand constant at {mu}",
                            left, FactoredSum.of(S(mu) * base_l)))
    rng = random.Random(p["seed"])
    env = ParamEnv.special(n, delta)

    def entry(mu: tuple) -> FactoredSum:
        return FactoredSum.of(S(mu))

    for _ in range(p["points"]):
        lam = tuple(rng.randint(-3, 3) for _ in range(n))
        ref = entry(lam)
        for image in orbit_points(lam, env):
            if image != lam:
                checks.append(Check(f"orbit {lam} -> {image}", entry(image), ref))
    return checks


register(IdentitySpec(
    "summand_symmetry", "hyperoctahedral symmetry of the multilateral well-poised summand",
    {"n": "int", "N": "int", "delta": "int", "points": "int", "seed": "int",
     "pair_form": "choice:weight|printed"},
    {"n": 2, "N": 2, "delta": 0, "points": 20, "seed": 0, "pair_form": "weight"}, _summand_symmetry,
    grid=tuple({"n": n, "delta": d} for n in (1, 2) for d in (0, 1))))


def _nu_default(p: dict) -> tuple:
    if p.get("nu"):
        nu = tuple(p["nu"])
        if len(nu) != p["n"]:
            raise ValueError("nu must have n parts")
        return nu
    return {1: (3,), 2: (2, 1), 3: (1, 1, 0)}.get(p["n"], (1,) * p["n"])


def _first_iteration(p: dict, h: int) -> list[Check]:
    n, delta = p["n"], p["delta"]
    nu = _nu_default(p)
    env = ParamEnv.special(n, delta)
    lhs = FAcc()
    _pp(lhs, _q(2 * (delta + 2 * n - 1)), nu, 1)
    rhs = FactoredSum()
    for kap in partitions_below(nu):
        M = m_entry(nu, kap, env, MULTILATERAL)
        for lam in orbit_points(kap, env):
            rhs = rhs + M * (s_entry(lam, env) * unit_alpha(lam, env, MULTILATERAL))
    checks = [Check("first iteration", lhs.freeze(), rhs)]
    if n == 1:
        checks.append(Check("first iteration, verbatim sum over Z", lhs.freeze(), _first_iteration_verbatim(nu[0], delta)))
    return checks


def _first_iteration_verbatim(nu: int, delta: int) -> FactoredSum:
    """n = 1: the closed-form summand read at every integer lam, no symmetry used."""
    b = _deformed(_q(2 * delta))
    tot = FactoredSum()
    for lam in range(-nu - delta - 1, nu + 1):
        w = w_single("a", _q(2 * nu), (lam,), (0,), (b,), 1, strict=False)
        acc = FAcc((-1) ** (lam % 2))
        acc.mul_q(2 * ((2 * delta + 1) * lam + binom2(lam) + lam * lam))
        acc.mul(f_delta(1, delta))
        tot = tot + w * acc.freeze()
    return tot


register(IdentitySpec(
    "first_iteration", "first lemma step from the unit pair, multilateral form",
    {"n": "int", "delta": "int", "nu": "part"}, {"n": 2, "delta": 0, "nu": ()}, _first_iteration,
    grid=tuple({"n": n, "delta": d} for n in (1, 2) for d in (0, 1))))


def _second_iteration(p: dict, h: int) -> list[Check]:
    n, delta = p["n"], p["delta"]
    nu = _nu_default(p)
    env = ParamEnv.special(n, delta)
    top = _q(2 * (delta + 2 * n - 1))
    lhs = FactoredSum()
    lhs_matrix = FactoredSum()
    for mu in partitions_below(nu):
        acc = FAcc()
        acc.mul_q(2 * ((delta + n) * weight(mu) + n2(mu)))
        _pp(acc, top, nu, 1, 1)
        _pp(acc, _q(2 * n), mu, 1, -1)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                acc.factor(ONE, 2 * (j - i + mu[i - 1] - mu[j - 1]), 1)
                acc.factor(ONE, 2 * (j - i), -1)
        lhs = lhs + w_staircase("s_up", nu, mu, (), 1) * acc.freeze()
        tail = FAcc()
        _pp(tail, top, mu, 1)
        lhs_matrix = lhs_matrix + n_entry(nu, mu, env) * tail.freeze()
    rhs = FactoredSum()
    for kap in partitions_below(nu):
        M = m_entry(nu, kap, env, MULTILATERAL)
        for lam in orbit_points(kap, env):
            s = s_entry(lam, env)
            rhs = rhs + M * (s * s * unit_alpha(lam, env, MULTILATERAL))
    return [Check("second iteration", lhs, rhs), Check("balanced side = weak matrix N applied", lhs, lhs_matrix)]


register(IdentitySpec(
    "second_iteration", "second lemma step, multilateral form",
    {"n": "int", "delta": "int", "nu": "part"}, {"n": 2, "delta": 0, "nu": ()}, _second_iteration,
    grid=tuple({"n": n, "delta": d} for n in (1, 2) for d in (0, 1))))


def _pentagonal(p: dict, h: int) -> list[Check]:
    n, delta = p["n"], p["delta"]
    T = Fraction(h, 2)
    lhs = _pinf_n(_q(2 * (delta + 2 * n - 1)), n, 1, h).lower(h)
    rhs = lattice_sum(lambda lam: pentagonal_term(lam, n, delta), n, T, p["shell_cap"])
    checks = [Check("product = lattice sum", lhs, rhs)]
    if n == 1:
        euler = {}
        for m in range(-isqrt(h) - 2, isqrt(h) + 3):
            e = m * (3 * m - 1)
            if e <= h:
                euler[e] = euler.get(e, 0) + (-1) ** (m % 2)
        scaled = lhs * (FAcc().factor(ONE, 2, 1).freeze().lower(h) if delta == 1 else QSeries.one(h))
        checks.append(Check("reduces to Euler's pentagonal series", scaled, QSeries(euler, h)))
    return checks


register(IdentitySpec(
    "pentagonal_multiple", "multiple Euler pentagonal number theorem (t = q)",
    {"n": "int", "delta": "int", "shell_cap": "int"}, {"n": 1, "delta": 0, "shell_cap": 60}, _pentagonal,
    grid=({"n": 1, "delta": 0}, {"n": 1, "delta": 1}, {"n": 2, "delta": 0}, {"n": 2, "delta": 1},
          {"n": 3, "delta": 0}),
    order_default=lambda p: {1: 40, 2: 16}.get(int(p.get("n", 1)), 10)))


def _rr(p: dict, h: int) -> list[Check]:
    n, delta = p["n"], p["delta"]
    T = Fraction(h, 2)
    lhs = lattice_sum(lambda mu: rr_sum_term(mu, n, delta), n, T, p["shell_cap"])
    s = lattice_sum(lambda lam: rr_product_term(lam, n, delta), n, T, p["shell_cap"])
    rhs = s * _pinf_n(_q(2 * (delta + 2 * n - 1)), n, 1, h).inverse().lower(h)
    checks = [Check("sum side = product side", lhs, rhs)]
    if n == 1:
        checks.append(Check("Rogers-Ramanujan product", rhs, ag_product(2, 2 - delta, T)))
        checks.append(Check("difference-two partition counts", rhs, gordon_series(2, 2 - delta, T)))
    return checks


register(IdentitySpec(
    "rr_multiple", "multiple Rogers-Ramanujan identities (t = q)",
    {"n": "int", "delta": "int", "shell_cap": "int"}, {"n": 1, "delta": 0, "shell_cap": 60}, _rr,
    grid=({"n": 1, "delta": 0}, {"n": 1, "delta": 1}, {"n": 2, "delta": 0}, {"n": 2, "delta": 1})))


def _ag_rows(bq: bool, form: str):
    def build(p: dict, h: int) -> list[Check]:
        n, N = p["n"], p["N"]
        T = Fraction(h, 2)
        lat = ag_lattice_side(n, N, bq, T, p["shell_cap"])
        if form == "lattice":
            return [Check("lattice form = well-poised partition sum", lat, ag_wellpoised_side(n, N, bq, T))]
        d = ag_det_side(n, N, bq, T)
        checks = [Check("determinant form = lattice form", d, lat)]
        if n == 1:
            i = 1 if bq else N
            qb = _q(4 if bq else 2)
            prod = d * poch_inf(qb, h, power=-1).lower(h)
            checks.append(Check(f"determinant / (qb)_inf = Andrews-Gordon product (k={N}, i={i})",
                                prod, ag_product(N, i, T)))
            checks.append(Check("Andrews-Gordon product = Gordon counts", prod, gordon_series(N, i, T)))
        return checks
    return build


for _bq, _tag in ((False, "b1"), (True, "bq")):
    _spec_b = "b = t^(2n-2)" if not _bq else "b = q t^(2n-2)"
    register(IdentitySpec(
        f"ag_lattice_{_tag}", f"Andrews-Gordon extreme case, lattice form at {_spec_b}",
        {"n": "int", "N": "int", "shell_cap": "int"}, {"n": 1, "N": 2, "shell_cap": 60}, _ag_rows(_bq, "lattice"),
        grid=tuple({"n": n, "N": N} for n in (1, 2) for N in (2, 3))))
    register(IdentitySpec(
        f"ag_det_{_tag}", f"Andrews-Gordon extreme case, determinant form at {_spec_b}",
        {"n": "int", "N": "int", "shell_cap": "int"}, {"n": 1, "N": 2, "shell_cap": 60}, _ag_rows(_bq, "det"),
        grid=tuple({"n": n, "N": N} for n in (1, 2) for N in (2, 3))))


def _det_eval(p: dict, h: int) -> list[Check]:
    n = p["n"]
    c = p["c"]
    if not c:
        rng = random.Random(p["seed"])
        c = tuple(rng.randint(-4, 6) for _ in range(n))
    if len(c) != n:
        raise ValueError("need n exponents")
    lhs, rhs = dn_det_sides(c)
    return [Check(f"D_n determinant evaluation at exponents {tuple(c)}", lhs, rhs)]


register(IdentitySpec(
    "det_eval_dn", "D_n determinant evaluation at x_i = q^(c_i)",
    {"n": "int", "c": "ints", "seed": "int"}, {"n": 2, "c": (), "seed": 0}, _det_eval,
    grid=tuple({"n": n, "seed": s} for n in (2, 3) for s in range(5))))


# ---------------------------------------------------------------------------
# Verification entry point
# ---------------------------------------------------------------------------


def get_spec(name: str) -> IdentitySpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownIdentityError(name) from None


def verify(name: str, params: dict | None = None, T=None) -> IdentityReport:
    """Build every check of a registry row and compare exactly through order T (whole units)."""
    spec = get_spec(name)
    p = resolve_params(spec, params)
    if T is None:
        T = spec.default_order(p)
    h = to_half(T)
    if h < 0:
        raise ValueError("order must be non-negative")
    shown = {k: (format_mono(v) if isinstance(v, QMono) else
                 ";".join(format_mono(x) for x in v) if isinstance(v, tuple) and v and isinstance(v[0], QMono)
                 else v) for k, v in p.items()}
    start = time.perf_counter()
    report = IdentityReport(name, shown, "match", verified_order=h)
    try:
        checks = spec.build(p, h)
        first = True
        for chk in checks:
            good, mm, ls, rs = compare(chk, h)
            report.checks.append((chk.label, good))
            if first:
                report.lhs, report.rhs = ls, rs
                report.term_counts = (len(ls.coeffs), len(rs.coeffs))
                first = False
            if not good and report.status == "match":
                report.status = "mismatch"
                report.failed_check = chk.label
                report.first_mismatch = mm
                report.lhs, report.rhs = ls, rs
                report.term_counts = (len(ls.coeffs), len(rs.coeffs))
        if report.status == "match":
            orders = [s.order for s in (report.lhs, report.rhs) if s is not None and s.order is not None]
            report.verified_order = min(orders + [h])
        elif report.first_mismatch is not None:
            report.verified_order = report.first_mismatch[0] - 1
        else:
            report.verified_order = None
    except (PoleError, IndeterminateError, NotInvertibleError, StabilizationError, ZeroDivisionError,
            ValueError) as exc:
        report.status = "error"
        report.message = f"{type(exc).__name__}: {exc}"
        report.verified_order = None
    report.elapsed = time.perf_counter() - start
    return report


def registry_names() -> list[str]:
    return list(REGISTRY)


def side_series(name: str, side: str, params: dict | None = None, T=None) -> QSeries:
    """One side of the first check of a registry row, lowered to order T."""
    spec = get_spec(name)
    p = resolve_params(spec, params)
    if T is None:
        T = spec.default_order(p)
    h = to_half(T)
    chk = spec.build(p, h)[0]
    if side not in ("lhs", "rhs"):
        raise ValueError("side must be 'lhs' or 'rhs'")
    return as_series(chk.lhs if side == "lhs" else chk.rhs, h)


__all__ = [
    "Check", "IdentityReport", "IdentitySpec", "REGISTRY", "StabilizationError", "UnknownIdentityError",
    "ag_det_side", "ag_lattice_side", "ag_product", "as_series", "chain_sum", "chain_total", "det",
    "det_series", "dn_det_sides", "format_mono", "gordon_count", "gordon_series", "lattice_sum",
    "parse_mono", "registry_names", "side_series", "symmetric_summand", "verify",
]
