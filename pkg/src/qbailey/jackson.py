"""Jackson coefficients omega_{lam/mu} at p = 0 and their multivariable recursion.

Every parameter is a monomial ``c q^e`` (QMono) and ``t = q^k``.  Values are
exact rational functions of q returned as FactoredSum, because the closed form
contains a multivariable W-function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .partitions import contains, is_partition, pad, partitions_between
from .qcore import FAcc, FactoredQ, FactoredSum, QMono, ONE_MONO
from .wfunctions import w_staircase


@dataclass(frozen=True)
class OmegaParams:
    """The parameters r, a, b of omega together with t = q^k."""

    r: QMono
    a: QMono
    b: QMono
    k: int = 1

    def shifted(self, power: int) -> "OmegaParams":
        """(r; a r^(2 power), b r^power), the parameters of the leading block in the recursion."""
        rp = self.r**power
        return OmegaParams(self.r, self.a * rp * rp, self.b * rp, self.k)


def _q(half: int) -> QMono:
    return QMono(ONE_MONO.scale, half)


def _pp(acc: FAcc, base: QMono, lam: Sequence[int], k: int, sign: int = 1) -> None:
    for i, part in enumerate(lam):
        acc.poch(base.shift(-2 * k * i), part, sign)


def omega_prefactor(x: QMono, lam: Sequence[int], mu: Sequence[int], p: OmegaParams) -> FactoredQ:
    """Everything in omega_{lam/mu}(x) except the W-function."""
    n = len(lam)
    k, r, a, b = p.k, p.r, p.a, p.b
    xinv, ax = x.inv(), a * x
    br = b / r
    acc = FAcc()
    _pp(acc, xinv, lam, k, 1)
    _pp(acc, ax, lam, k, 1)
    _pp(acc, (b * x).shift(2), lam, k, -1)
    _pp(acc, (b / ax).shift(2), lam, k, -1)
    _pp(acc, (br * x).shift(2), mu, k, 1)
    _pp(acc, (b / (ax * r)).shift(2), mu, k, 1)
    _pp(acc, xinv, mu, k, -1)
    _pp(acc, ax, mu, k, -1)
    _pp(acc, r, mu, k, 1)
    _pp(acc, br.shift(2 * k * (1 - n)), mu, k, 1)
    _pp(acc, (br / r).shift(2), mu, k, -1)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    for i in range(1, n + 1):
        base = br.shift(2 * k * (2 - 2 * i))
        acc.factor(base.scale, base.half + 4 * mu[i - 1], 1, base.eps)
        acc.factor(base.scale, base.half, -1, base.eps)
        acc.mul_q((2 + 2 * k * (2 * i - 2)) * mu[i - 1])
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = mu[i - 1] - mu[j - 1]
            s = mu[i - 1] + mu[j - 1]
            acc.poch(_q(2 + 2 * k * (j - i)), d, 1)
            acc.poch(_q(2 + 2 * k * (j - i - 1)), d, -1)
            acc.poch(br.shift(2 * k * (3 - i - j)), s, 1)
            acc.poch(br.shift(2 * k * (2 - i - j)), s, -1)
    return acc.freeze()


def omega_single(lam: Sequence[int], mu: Sequence[int], x: QMono, p: OmegaParams) -> FactoredSum:
    """omega_{lam/mu}(x; r; a, b) for one variable x and n-part partitions lam, mu."""
    lam, mu = tuple(lam), tuple(mu)
    n = max(len(lam), len(mu), 1)
    lam, mu = pad(lam, n), pad(mu, n)
    if not (is_partition(lam) and is_partition(mu)):
        raise ValueError("omega takes partitions")
    if not contains(lam, mu):
        return FactoredSum()
    pre = omega_prefactor(x, lam, mu, p)
    if pre.is_zero():
        return FactoredSum()
    k = p.k
    w_a = p.b.shift(2 * k * (2 - 2 * n))
    w_b = (p.b / p.r).shift(2 * k * (1 - n))
    w = w_staircase("full", lam, mu, (w_a, w_b), k)
    return w * pre


def omega_multi(lam: Sequence[int], tau: Sequence[int], ys: Sequence[QMono], zs: Sequence[QMono],
                p: OmegaParams) -> FactoredSum:
    """omega_{lam/tau}(y, z; r; a, b) by splitting the variables into ``ys`` and ``zs``.

    The ``zs`` block (split_count = len(zs) variables) carries (a, b); the
    ``ys`` block is evaluated at r^(-split_count) y with (a r^(2 split_count),
    b r^split_count).  Each block recurses until one variable is left.
    """
    ys, zs = tuple(ys), tuple(zs)
    if not ys and not zs:
        raise ValueError("need at least one variable")
    if not zs:
        return _omega_vars(lam, tau, ys, p)
    if not ys:
        return _omega_vars(lam, tau, zs, p)
    n = max(len(lam), len(tau))
    lam, tau = pad(lam, n), pad(tau, n)
    split_count = len(zs)
    shift = p.r ** (-split_count)
    head_params = p.shifted(split_count)
    total = FactoredSum()
    for mu in partitions_between(tau, lam):
        inner = _omega_vars(mu, tau, zs, p)
        if inner.is_structurally_zero():
            continue
        head = _omega_vars(lam, mu, tuple(y * shift for y in ys), head_params)
        total = total + head * inner
    return total


def _omega_vars(lam, tau, xs: tuple, p: OmegaParams) -> FactoredSum:
    """omega over a list of variables, peeling off the last variable each time."""
    if len(xs) == 1:
        return omega_single(lam, tau, xs[0], p)
    return omega_multi(lam, tau, xs[:-1], xs[-1:], p)


DEFORM_WEIGHTS = (1, 2, 3, 5)


def cocycle_sides(nu: Sequence[int], mu: Sequence[int], u: QMono, v: QMono, a: QMono, b: QMono,
                  k: int = 1) -> tuple[FactoredSum, FactoredSum]:
    """Both sides of the cocycle identity for omega.

    LHS: omega_{nu/mu}((uv)^-1; uv; a(uv)^2, b uv).
    RHS: sum over mu <= lam <= nu of omega_{nu/lam}(v^-1; v; a(vu)^2, bvu) omega_{lam/mu}(u^-1; u; a u^2, b u).

    Both sides are rational in u, v, a, b, and the closed form has removable
    0/0 points (for example v = q t).  Undeformed parameters are therefore
    deformed with distinct weights so every such point is read as a limit.
    """
    n = max(len(nu), len(mu))
    nu, mu = pad(nu, n), pad(mu, n)
    if not contains(nu, mu):
        raise ValueError("the cocycle identity needs mu contained in nu")
    u, v, a, b = (x if x.eps else x.deformed(w) for x, w in zip((u, v, a, b), DEFORM_WEIGHTS))
    uv = u * v
    lhs = omega_single(nu, mu, uv.inv(), OmegaParams(uv, a * uv * uv, b * uv, k))
    rhs = FactoredSum()
    outer = OmegaParams(v, a * uv * uv, b * uv, k)
    inner_p = OmegaParams(u, a * u * u, b * u, k)
    for lam in partitions_between(mu, nu):
        left = omega_single(nu, lam, v.inv(), outer)
        if left.is_structurally_zero():
            continue
        rhs = rhs + left * omega_single(lam, mu, u.inv(), inner_p)
    return lhs, rhs
