"""Elliptic-type skew W-functions of BC_n type at p = 0.

All values are rational functions of q once the parameters are monomials
``c q^e`` and ``t = q^k``.  A single-variable W is a product and comes back as
a FactoredQ; multi-variable W is a sum over interlacing sequences and comes
back as a FactoredSum.

Families (parameter tuple in brackets):

``full``    W_{lam/mu}(x; a, b)             [a, b]
``a``       W^a_{lam/mu}(x; b)   (a -> 0)   [b]
``b``       W^b_{lam/mu}(x; a)   (b -> 0)   [a]
``ab``      W^{ab}_{lam/mu}(x; s)           [s]
``s_up``    W^{s up}_{lam/mu}(x)            []
``s_down``  W^{s down}_{lam/mu}(x)          []
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .partitions import horizontal_strips_below, is_horizontal_strip, is_partition, n_conj, n_of, weight
from .qcore import FAcc, FactoredQ, FactoredSum, QMono, ONE_MONO

FAMILIES = ("full", "a", "b", "ab", "s_up", "s_down")
_NPARAMS = {"full": 2, "a": 1, "b": 1, "ab": 1, "s_up": 0, "s_down": 0}

# Range of the second product in H (the pairs i < j-1).  "extended" lets j run
# to n+1 with lam_{n+1} = 0; "inner" stops at j = n.  Unskewed W agrees for both.
H_SECOND_RANGE = "extended"


def _tq(k: int, j: int) -> QMono:
    """t^j = q^(k j)."""
    return QMono(ONE_MONO.scale, 2 * k * j)


def _h_into(acc: FAcc, lam: Sequence[int], mu: Sequence[int], k: int, b: QMono | None,
            second_range: str | None = None) -> None:
    """Multiply ``acc`` by H_{lam/mu}(t, b); ``b=None`` gives the b -> 0 limit."""
    n = len(lam)
    rng = second_range or H_SECOND_RANGE
    # 0-based i, j here; the familiar 1-based indices are i+1, j+1.
    for i in range(n):
        for j in range(i + 1, n):
            L = mu[j - 1] - lam[j]
            if L == 0:
                continue
            d = j - i
            acc.poch(QMono(ONE_MONO.scale, 2 * (mu[i] - mu[j - 1]) + 2 * k * d), L, 1)
            acc.poch(QMono(ONE_MONO.scale, 2 * (mu[i] - mu[j - 1] + 1) + 2 * k * (d - 1)), L, -1)
            acc.poch(QMono(ONE_MONO.scale, 2 * (lam[i] - mu[j - 1] + 1) + 2 * k * (d - 1)), L, 1)
            acc.poch(QMono(ONE_MONO.scale, 2 * (lam[i] - mu[j - 1]) + 2 * k * d), L, -1)
            if b is not None:
                acc.poch(b.shift(2 * (lam[i] + lam[j]) + 2 * k * (1 - i - j)), L, 1)
                acc.poch(b.shift(2 * (lam[i] + lam[j] + 1) + 2 * k * (-i - j)), L, -1)
    if b is None:
        return
    jmax = n + 1 if rng == "extended" else n
    for i in range(n):
        for j in range(i + 2, jmax):
            lj = lam[j] if j < n else 0
            L = mu[j - 1] - lj
            if L == 0:
                continue
            acc.poch(b.shift(2 * (mu[i] + lj + 1) + 2 * k * (-1 - i - j)), L, 1)
            acc.poch(b.shift(2 * (mu[i] + lj) + 2 * k * (-i - j)), L, -1)


def h_skew(lam: Sequence[int], mu: Sequence[int], k: int, b: QMono | None = None,
           second_range: str | None = None) -> FactoredQ:
    """The coefficient H_{lam/mu}(t, b) with t = q^k (b=None: the b -> 0 limit)."""
    lam, mu = _same_length(lam, mu)
    acc = FAcc()
    _h_into(acc, lam, mu, k, b, second_range)
    return acc.freeze()


def _same_length(lam, mu) -> tuple[tuple, tuple]:
    lam, mu = tuple(lam), tuple(mu)
    n = max(len(lam), len(mu))
    return lam + (0,) * (n - len(lam)), mu + (0,) * (n - len(mu))


def _ppoch(acc: FAcc, base: QMono, lam: Sequence[int], k: int, sign: int) -> None:
    """Multiply by (base; q, t)_lam ** sign."""
    for i, part in enumerate(lam):
        acc.poch(base.shift(-2 * k * i), part, sign)


def _theta_part(acc: FAcc, lam, mu, k: int, b: QMono, with_t: bool) -> None:
    """The product over i of the b-dependent "very-well-poised" factors."""
    n = len(lam)
    for i in range(n):
        I = i + 1
        bt = b.shift(2 * k * (1 - 2 * I))
        nxt = lam[i + 1] if i + 1 < n else 0
        acc.factor(bt.scale, bt.half + 4 * mu[i], 1, bt.eps)
        acc.factor(bt.scale, bt.half, -1, bt.eps)
        acc.poch(bt, mu[i] + nxt, 1)
        acc.poch(b.shift(2 + 2 * k * (-2 * I)), mu[i] + nxt, -1)
        if with_t:
            acc.mul_q(2 * k * I * (mu[i] - nxt))


def _t_shift(acc: FAcc, lam, mu, k: int) -> None:
    """t^(-n(lam) + |mu| + n(mu))."""
    acc.mul_q(2 * k * (-n_of(lam) + weight(mu) + n_of(mu)))


def _neg_power(acc: FAcc, base: QMono, m: int) -> None:
    """(-base)^m."""
    acc.mul_scalar((-1) ** (m % 2))
    acc.mul_mono(base, m)


def w_single(family: str, x: QMono, lam: Sequence[int], mu: Sequence[int], params: Sequence[QMono],
             k: int, *, strict: bool = True) -> FactoredQ:
    """Single-variable skew W_{lam/mu}(x; params) with t = q^k.

    With ``strict`` (the default) the value is 0 unless lam/mu is a
    horizontal strip.  With ``strict=False`` the closed form is evaluated
    verbatim, which is what integer vectors that are not partitions need.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown W family {family!r}")
    params = tuple(params)
    if len(params) != _NPARAMS[family]:
        raise ValueError(f"family {family!r} takes {_NPARAMS[family]} parameter(s)")
    lam, mu = _same_length(lam, mu)
    if strict and not (is_partition(lam) and is_partition(mu) and is_horizontal_strip(lam, mu)):
        return FactoredQ.zero_value()
    xinv = x.inv()
    acc = FAcc()
    if family == "full":
        a, b = params
        _h_into(acc, lam, mu, k, b)
        ax = a * x
        qbx_t = (b * x).shift(2 - 2 * k)
        qb_axt = (b / ax).shift(2 - 2 * k)
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, ax, lam, k, 1)
        _ppoch(acc, qbx_t, mu, k, 1)
        _ppoch(acc, qb_axt, mu, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
        _ppoch(acc, ax, mu, k, -1)
        _ppoch(acc, (b * x).shift(2), lam, k, -1)
        _ppoch(acc, (b / ax).shift(2), lam, k, -1)
        _theta_part(acc, lam, mu, k, b, True)
    elif family == "a":
        (b,) = params
        _h_into(acc, lam, mu, k, b)
        _neg_power(acc, (b / x).shift(2), weight(mu) - weight(lam))
        acc.mul_q(2 * (n_conj(mu) - n_conj(lam)))
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, (b * x).shift(2 - 2 * k), mu, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
        _ppoch(acc, (b * x).shift(2), lam, k, -1)
        _theta_part(acc, lam, mu, k, b, False)
    elif family == "b":
        (a,) = params
        _h_into(acc, lam, mu, k, None)
        _t_shift(acc, lam, mu, k)
        ax = a * x
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, ax, lam, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
        _ppoch(acc, ax, mu, k, -1)
    elif family == "ab":
        (s,) = params
        _h_into(acc, lam, mu, k, None)
        _t_shift(acc, lam, mu, k)
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, (s / x).shift(2 - 2 * k), mu, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
        _ppoch(acc, (s / x).shift(2), lam, k, -1)
    elif family == "s_up":
        _h_into(acc, lam, mu, k, None)
        _neg_power(acc, xinv.shift(2), weight(mu) - weight(lam))
        acc.mul_q(2 * (n_conj(mu) - n_conj(lam)))
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
    else:  # s_down
        _h_into(acc, lam, mu, k, None)
        _t_shift(acc, lam, mu, k)
        _ppoch(acc, xinv, lam, k, 1)
        _ppoch(acc, xinv, mu, k, -1)
    return acc.freeze()


def _recursion_params(family: str, params: tuple, k: int, ell: int) -> tuple:
    """Parameters of the first-variable factor when ``ell`` variables remain."""
    if family == "full":
        a, b = params
        return (a.shift(4 * k * ell), b.shift(2 * k * ell))
    if family == "a":
        return (params[0].shift(2 * k * ell),)
    if family == "b":
        return (params[0].shift(4 * k * ell),)
    if family == "ab":
        return (params[0].shift(-2 * k * ell),)
    return ()


def _recursion_weight(family: str, k: int, ell: int, strip: int) -> int:
    """Extra power of q (half-units) attached to the first-variable factor."""
    if family == "a":
        return 4 * k * ell * strip
    if family == "s_up":
        return 2 * k * ell * strip
    return 0


def _intermediates(lam: tuple, mu: tuple, ell: int) -> list[tuple]:
    """nu with lam/nu a strip, mu <= nu, and nu_{i+ell} <= mu_i."""
    n = len(lam)
    out = []
    for nu in horizontal_strips_below(lam, mu):
        if all(nu[i + ell] <= mu[i] for i in range(n - ell)):
            out.append(nu)
    return out


@lru_cache(maxsize=None)
def _w_multi_cached(family: str, xs: tuple, lam: tuple, mu: tuple, params: tuple, k: int) -> FactoredSum:
    if len(xs) == 1:
        return FactoredSum.of(w_single(family, xs[0], lam, mu, params, k))
    ell = len(xs) - 1
    y, rest = xs[0], xs[1:]
    y_shift = y.shift(-2 * k * ell)
    first_params = _recursion_params(family, params, k, ell)
    terms: list[FactoredQ] = []
    for nu in _intermediates(lam, mu, ell):
        inner = _w_multi_cached(family, rest, nu, mu, params, k)
        if inner.is_structurally_zero():
            continue
        head = w_single(family, y_shift, lam, nu, first_params, k)
        if head.is_zero():
            continue
        extra = _recursion_weight(family, k, ell, weight(lam) - weight(nu))
        if extra:
            head = head * FactoredQ(1, extra)
        terms.extend(head * t for t in inner.terms)
    return FactoredSum(terms)


def w_multi(family: str, xs: Sequence[QMono], lam: Sequence[int], mu: Sequence[int],
            params: Sequence[QMono], k: int) -> FactoredSum:
    """Multi-variable skew W_{lam/mu}(x_1, ..., x_m; params) via the branching recursion."""
    if family not in FAMILIES:
        raise ValueError(f"unknown W family {family!r}")
    xs = tuple(xs)
    if not xs:
        raise ValueError("need at least one variable")
    lam, mu = _same_length(lam, mu)
    if not (is_partition(lam) and is_partition(mu)):
        raise ValueError("w_multi takes partitions; use w_staircase for lattice points")
    if any(m > l for l, m in zip(lam, mu)):
        return FactoredSum()
    return _w_multi_cached(family, xs, lam, mu, tuple(params), k)


def staircase(z: Sequence, k: int, shift: int = 0) -> tuple[QMono, ...]:
    """The principal specialisation q^(z_i) t^(n-i) (times q^shift), as monomials.

    ``z`` entries may be ints or half-integers (Fractions); ``shift`` is in
    half-units.
    """
    from fractions import Fraction

    n = len(z)
    out = []
    for i, zi in enumerate(z):
        h = Fraction(zi) * 2
        if h.denominator != 1:
            raise ValueError("staircase exponents must lie in (1/2)Z")
        out.append(QMono(ONE_MONO.scale, int(h) + 2 * k * (n - 1 - i) + shift))
    return tuple(out)


def w_staircase(family: str, nu: Sequence[int], lam: Sequence[int], params: Sequence[QMono], k: int,
                shift: int = 0) -> FactoredSum:
    """W_lam(q^(nu_i) t^(n-i) q^shift; params), the specialisation used in Bailey matrices.

    ``shift`` is in half-units.  ``nu`` may be any integer vector.
    """
    xs = staircase(nu, k, shift)
    n = len(xs)
    lam = tuple(lam) + (0,) * (n - len(lam))
    return w_multi(family, xs, lam, (0,) * n, params, k)


def w_limit_formula(family: str, mu: Sequence[int], delta: int, n: int) -> FactoredQ:
    """Coefficient-wise limit of the t = q staircase value as every x_i -> 0.

    ``family="a"`` is W^a_mu(q^K t^(n-i); b = q^(delta+n-1)) and
    ``family="s_up"`` is W^{s up}_mu(q^K t^(n-i)), both for K -> infinity.
    """
    if family not in ("a", "s_up"):
        raise ValueError("limit formulas exist for families 'a' and 's_up' only")
    mu = tuple(mu) + (0,) * (n - len(mu))
    one = ONE_MONO.scale
    acc = FAcc()
    acc.mul_q(-2 * (delta + n if family == "a" else 1) * weight(mu))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = mu[i - 1] - mu[j - 1]
            acc.poch(QMono(one, 2 * (j - i + 1)), d, 1)
            acc.poch(QMono(one, 2 * (j - i)), d, -1)
            if family == "a":
                s = mu[i - 1] + mu[j - 1]
                acc.poch(QMono(one, 2 * (delta + 1 + 2 * n - i - j)), s, 1)
                acc.poch(QMono(one, 2 * (delta + 2 * n - i - j)), s, -1)
    return acc.freeze()
