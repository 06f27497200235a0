"""BC_n Bailey matrices at p = 0 in the unilateral and multilateral normalizations.

Entries are exact rational functions of q (FactoredSum).  The unilateral
family works for any monomial b; the multilateral family needs the
specialisation b = q^(m + 2k(n-1)), t = q^k.

Pairings that invert each other: the unilateral M with the unilateral
inverse, and the multilateral M with the multilateral inverse.  Mixing the
unilateral M with the multilateral-style inverse (``"lemma"``) is kept as a
diagnostic; it does not give the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .partitions import (
    contains,
    hyperoctahedral_orbit,
    is_partition,
    n_conj,
    n_of,
    pad,
    partitions_in_box,
    weight,
)
from .qcore import FAcc, FactoredQ, FactoredSum, IndeterminateError, QMono, ONE_MONO, PoleError, qpow
from .wfunctions import staircase, w_single, w_staircase

UNILATERAL = "unilateral"
MULTILATERAL = "multilateral"
LEMMA = "lemma"  # unilateral M against the inverse with the multilateral-style prefactor


@dataclass(frozen=True)
class ParamEnv:
    """Rank n, t = q^k, the parameter b, and optional sigma, rho.

    Build with :meth:`general` for an arbitrary monomial b, or with
    :meth:`special` for b = q^(m + 2k(n-1)).
    """

    n: int
    k: int = 1
    m: int | None = None
    b_override: QMono | None = None
    sigma: QMono | None = None
    rho: QMono | None = None

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise ValueError("need n >= 1 and k >= 0")
        if (self.m is None) == (self.b_override is None):
            raise ValueError("give exactly one of m and b_override")
        if (self.sigma is None) != (self.rho is None):
            raise ValueError("sigma and rho come together")

    @classmethod
    def general(cls, n: int, b: QMono, k: int = 1, sigma: QMono | None = None,
                rho: QMono | None = None) -> "ParamEnv":
        return cls(n=n, k=k, b_override=b, sigma=sigma, rho=rho)

    @classmethod
    def special(cls, n: int, m: int, k: int = 1, sigma: QMono | None = None,
                rho: QMono | None = None) -> "ParamEnv":
        if m < 0:
            raise ValueError("m must be non-negative")
        return cls(n=n, k=k, m=m, sigma=sigma, rho=rho)

    @property
    def b(self) -> QMono:
        """b, marked as a limit point so that special values are reached by continuity."""
        base = self.b_override if self.b_override is not None else qpow(self.m + 2 * self.k * (self.n - 1))
        return base if base.eps else base.deformed(1)

    @property
    def strong(self) -> bool:
        return self.sigma is not None

    def t(self, j: int = 1) -> QMono:
        return QMono(ONE_MONO.scale, 2 * self.k * j)

    def z(self) -> tuple[Fraction, ...]:
        """Shift vector z_i = m/2 + k(n-i) of the multilateral specialisation."""
        if self.m is None:
            raise ValueError("z needs the (m, k) specialisation")
        return tuple(Fraction(self.m, 2) + self.k * (self.n - i) for i in range(1, self.n + 1))

    def with_sigma_rho(self, sigma: QMono | None, rho: QMono | None) -> "ParamEnv":
        return ParamEnv(self.n, self.k, self.m, self.b_override, sigma, rho)


def _q(half: int) -> QMono:
    return QMono(ONE_MONO.scale, half)


def _pp(acc: FAcc, base: QMono, lam: Sequence[int], k: int, sign: int = 1) -> None:
    """(base; q, t)_lam ** sign."""
    for i, part in enumerate(lam):
        acc.poch(base.shift(-2 * k * i), part, sign)


def _pair_product(acc: FAcc, lam: Sequence[int], env: ParamEnv, *, diff: bool = True,
                  b_sum: bool = False) -> None:
    """prod_{i<j} (q t^(j-i))/(q t^(j-i-1))_{lam_i-lam_j} and, optionally,
    (b t^(3-i-j))/(b t^(2-i-j))_{lam_i+lam_j}."""
    n, k, b = env.n, env.k, env.b
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = lam[i - 1] - lam[j - 1]
            s = lam[i - 1] + lam[j - 1]
            if diff:
                acc.poch(_q(2 + 2 * k * (j - i)), d, 1)
                acc.poch(_q(2 + 2 * k * (j - i - 1)), d, -1)
            if b_sum:
                acc.poch(b.shift(2 * k * (3 - i - j)), s, 1)
                acc.poch(b.shift(2 * k * (2 - i - j)), s, -1)


def _wp_factor(acc: FAcc, lam: Sequence[int], env: ParamEnv) -> None:
    """prod_i (1 - b t^(2-2i) q^(2 lam_i)) / (1 - b t^(2-2i))."""
    b, k = env.b, env.k
    for i in range(1, env.n + 1):
        base = b.shift(2 * k * (2 - 2 * i))
        acc.factor(base.scale, base.half + 4 * lam[i - 1], 1, base.eps)
        acc.factor(base.scale, base.half, -1, base.eps)


def _check_index(lam: Sequence[int], n: int, lattice_ok: bool) -> tuple:
    lam = tuple(lam)
    if len(lam) < n:
        lam = lam + (0,) * (n - len(lam))
    lam = pad(lam, n) if is_partition(lam) else lam
    if len(lam) != n:
        raise ValueError(f"index {lam} does not have {n} parts")
    if not lattice_ok and not is_partition(lam):
        raise ValueError(f"{lam} is not a partition")
    return lam


# ---------------------------------------------------------------------------
# M and its inverse
# ---------------------------------------------------------------------------


def m_prefactor(lam: Sequence[int], env: ParamEnv, normalization: str = UNILATERAL) -> FactoredQ:
    """The lambda-only part of M_{nu lam}."""
    n, k, b = env.n, env.k, env.b
    lam = tuple(lam)
    acc = FAcc()
    w, nl, nc = weight(lam), n_of(lam), n_conj(lam)
    if normalization == UNILATERAL:
        acc.mul_scalar((-1) ** (w % 2))
        acc.mul_q(2 * (2 * w + nc) + 2 * k * (nl + 2 * (1 - n) * w))
        acc.mul_mono(b, w)
        _pp(acc, b.shift(2 * k * (1 - n)), lam, k, 1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), lam, k, -1)
        _pair_product(acc, lam, env, b_sum=True)
    elif normalization == MULTILATERAL:
        if env.m is None:
            raise ValueError("the multilateral normalization needs b = q^(m + 2k(n-1))")
        acc.mul_q(2 * (w + 2 * k * nl + k * (1 - n) * w + env.m * w))
        _pair_product(acc, lam, env, b_sum=True)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    return acc.freeze()


def m_entry(nu: Sequence[int], lam: Sequence[int], env: ParamEnv,
            normalization: str = UNILATERAL) -> FactoredSum:
    """M_{nu lam}: prefactor times W^a_lam(q^nu t^delta; b t^(1-n))."""
    n = env.n
    nu = _check_index(nu, n, True)
    lam = _check_index(lam, n, normalization == MULTILATERAL)
    if not is_partition(lam):
        return m_entry_lattice(nu, lam, env)
    pre = m_prefactor(lam, env, normalization)
    w = w_staircase("a", nu, lam, (env.b.shift(2 * env.k * (1 - n)),), env.k)
    return w * pre


def m_entry_lattice(nu: Sequence[int], lam: Sequence[int], env: ParamEnv) -> FactoredSum:
    """Multilateral M_{nu lam} for an integer vector lam.

    The entry is defined through the hyperoctahedral symmetry: lam + z is
    moved to its dominant representative.  Points whose orbit is not regular
    have a vanishing pair product and give 0.
    """
    rep = orbit_partition(lam, env)
    if rep is None:
        return FactoredSum()
    return m_entry(nu, rep, env, MULTILATERAL)


def orbit_partition(lam: Sequence[int], env: ParamEnv) -> tuple | None:
    """The partition kappa with kappa + z in the orbit of lam + z, or None.

    None is returned when the orbit meets no partition or when lam + z has
    a stabiliser (non-regular orbit).
    """
    z = env.z()
    v = [Fraction(l) + zi for l, zi in zip(lam, z)]
    absv = sorted((abs(x) for x in v), reverse=True)
    if len(set(absv)) != len(absv):
        return None
    kappa = tuple(a - zi for a, zi in zip(absv, z))
    if any(x.denominator != 1 for x in kappa):
        return None
    kappa = tuple(int(x) for x in kappa)
    if not is_partition(kappa):
        return None
    return kappa


def m_inv_prefactor_row(lam: Sequence[int], env: ParamEnv, normalization: str) -> FactoredQ:
    """The lam-only (row) part of the inverse."""
    n, k, b = env.n, env.k, env.b
    acc = FAcc()
    w = weight(lam)
    if normalization == UNILATERAL:
        acc.mul_q(-2 * w)
    elif normalization in (MULTILATERAL, LEMMA):
        if normalization == MULTILATERAL and env.m is None:
            raise ValueError("the multilateral normalization needs b = q^(m + 2k(n-1))")
        acc.mul_scalar((-1) ** (w % 2))
        acc.mul_q(2 * k * ((n - 1) * w - n_of(lam)) + 2 * n_conj(lam))
        _pp(acc, b.shift(2 * k * (1 - n)), lam, k, 1)
        _pp(acc, _q(2 + 2 * k * (n - 1)), lam, k, -1)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    _wp_factor(acc, lam, env)
    return acc.freeze()


def m_inv_prefactor_col(mu: Sequence[int], env: ParamEnv, normalization: str) -> FactoredQ:
    """The mu-only (column) part of the inverse."""
    n, k, b = env.n, env.k, env.b
    acc = FAcc()
    acc.mul_q(2 * weight(mu) + 4 * k * n_of(mu))
    _pp(acc, b.shift(2), mu, k, -1)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    _pair_product(acc, mu, env)
    return acc.freeze()


def m_inv_entry(lam: Sequence[int], mu: Sequence[int], env: ParamEnv,
                normalization: str = UNILATERAL) -> FactoredSum:
    """Inverse entry M^{-1}_{lam mu}: prefactors times W^b_mu(q^lam t^delta; b t^(2-2n))."""
    n = env.n
    lam = _check_index(lam, n, normalization == MULTILATERAL)
    mu = _check_index(mu, n, False)
    pre = m_inv_prefactor_row(lam, env, normalization) * m_inv_prefactor_col(mu, env, normalization)
    w = w_staircase("b", lam, mu, (env.b.shift(2 * env.k * (2 - 2 * n)),), env.k)
    return w * pre


# ---------------------------------------------------------------------------
# S, N and the unit pair
# ---------------------------------------------------------------------------


def s_entry(lam: Sequence[int], env: ParamEnv) -> FactoredQ:
    """Diagonal S_lam: the strong form when sigma, rho are bound, else the weak limit."""
    n, k, b = env.n, env.k, env.b
    lam = _check_index(lam, n, True)
    acc = FAcc()
    w = weight(lam)
    qb = b.shift(2)
    if env.strong:
        sig, rho = env.sigma, env.rho
        acc.mul_mono(qb / (sig * rho), w)
        _pp(acc, sig, lam, k, 1)
        _pp(acc, rho, lam, k, 1)
        _pp(acc, qb / sig, lam, k, -1)
        _pp(acc, qb / rho, lam, k, -1)
    else:
        acc.mul_mono(qb, w)
        acc.mul_q(-4 * k * n_of(lam) + 4 * n_conj(lam))
    return acc.freeze()


def n_entry(nu: Sequence[int], mu: Sequence[int], env: ParamEnv) -> FactoredSum:
    """N_{nu mu}; strong form with sigma, rho bound, otherwise the weak limit."""
    n, k, b = env.n, env.k, env.b
    nu = _check_index(nu, n, False)
    mu = _check_index(mu, n, False)
    if not contains(nu, mu):
        return FactoredSum()
    qb = b.shift(2)
    acc = FAcc()
    _pp(acc, qb, nu, k, 1)
    _pp(acc, qb, mu, k, -1)
    _pp(acc, _q(2 + 2 * k * (n - 1)), mu, k, -1)
    _pair_product(acc, mu, env)
    w = weight(mu)
    if env.strong:
        sig, rho = env.sigma, env.rho
        acc.mul_q(2 * w + 4 * k * n_of(mu))
        _pp(acc, qb / (sig * rho), nu, k, 1)
        _pp(acc, qb / sig, nu, k, -1)
        _pp(acc, qb / rho, nu, k, -1)
        _pp(acc, sig, mu, k, 1)
        _pp(acc, rho, mu, k, 1)
        s = (sig * rho / qb).shift(2 * k * (n - 1))
        wv = w_staircase("ab", nu, mu, (s,), k)
    else:
        acc.mul_q(2 * w + 4 * n_conj(mu) - 2 * k * (n - 1) * w)
        acc.mul_mono(qb, w)
        wv = w_staircase("s_up", nu, mu, (), k)
    return wv * acc.freeze()


def f_delta(n: int, delta: int) -> Fraction | FactoredQ:
    """The orbit normalisation f(delta) as a FactoredQ."""
    from math import factorial

    acc = FAcc(Fraction(1, factorial(n)))
    if delta == 0:
        for i in range(1, n):
            acc.factor(Fraction(-1), 2 * (n - i), -1)
    elif delta == 1:
        for i in range(1, n + 1):
            acc.factor(Fraction(1), 2 * (1 + 2 * n - 2 * i), -1)
    else:
        raise ValueError("delta must be 0 or 1")
    return acc.freeze()


def unit_alpha(lam: Sequence[int], env: ParamEnv, normalization: str = UNILATERAL) -> FactoredQ:
    """alpha of the unit Bailey pair beta = delta_{lam,0}.

    Unilateral: q^(-|lam|) prod (1 - b t^(2-2i) q^(2 lam_i))/(1 - b t^(2-2i)).
    Multilateral (m = delta, k = 1): (-1)^|lam| t^((n-1)|lam| - n(lam)) q^(n(lam')) f(delta),
    for lam anywhere in Z^n.
    """
    n, k = env.n, env.k
    if normalization == UNILATERAL:
        lam = _check_index(lam, n, False)
        acc = FAcc()
        acc.mul_q(-2 * weight(lam))
        _wp_factor(acc, lam, env)
        out = acc.freeze()
        if out.is_pole():
            raise PoleError("unit alpha has a pole at this b; use the multilateral form")
        return out
    if normalization == MULTILATERAL:
        if env.m not in (0, 1) or k != 1:
            raise ValueError("the multilateral unit pair needs m = delta in {0, 1} and k = 1")
        lam = tuple(lam)
        if len(lam) != n:
            raise ValueError(f"index {lam} does not have {n} parts")
        w = weight(lam)
        acc = FAcc((-1) ** (w % 2))
        acc.mul_q(2 * k * ((n - 1) * w - n_of(lam)) + 2 * n_conj(lam))
        acc.mul(f_delta(n, env.m))
        return acc.freeze()
    raise ValueError(f"unknown normalization {normalization!r}")


# ---------------------------------------------------------------------------
# Matrix-level checks
# ---------------------------------------------------------------------------


@dataclass
class MatrixReport:
    """Outcome of an exact entrywise matrix check."""

    name: str
    ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def summary(self) -> str:
        state = "ok" if self.ok else "FAIL"
        return f"{self.name}: {state} ({self.checked} entries, {len(self.failures)} failures, {len(self.errors)} errors)"


def _box(box: Sequence[int], n: int) -> list[tuple]:
    return partitions_in_box(pad(tuple(box), n))


def inverse_pairing(normalization: str) -> tuple[str, str]:
    """(M normalization, inverse normalization) for a named pairing."""
    return {
        UNILATERAL: (UNILATERAL, UNILATERAL),
        MULTILATERAL: (MULTILATERAL, MULTILATERAL),
        LEMMA: (UNILATERAL, LEMMA),
    }[normalization]


def verify_inverse(box: Sequence[int], env: ParamEnv, normalization: str = UNILATERAL) -> MatrixReport:
    """sum_mu M_{lam mu} M^{-1}_{mu nu} == delta_{lam nu} exactly for lam, nu in the box."""
    m_norm, inv_norm = inverse_pairing(normalization)
    parts = _box(box, env.n)
    rep = MatrixReport(f"inverse[{normalization}]", True)
    for lam in parts:
        for nu in parts:
            if not contains(lam, nu):
                continue
            total = FactoredSum()
            try:
                for mu in parts:
                    if contains(lam, mu) and contains(mu, nu):
                        total = total + m_entry(lam, mu, env, m_norm) * m_inv_entry(mu, nu, env, inv_norm)
                target = FactoredSum.of(FactoredQ.one()) if lam == nu else FactoredSum()
                good = total.equals(target)
            except (PoleError, IndeterminateError, ZeroDivisionError) as exc:
                rep.errors.append((lam, nu, str(exc)))
                rep.ok = False
                continue
            rep.checked += 1
            if not good:
                rep.ok = False
                rep.failures.append((lam, nu))
    return rep


def verify_lemma_commutation(box: Sequence[int], env: ParamEnv, normalization: str = UNILATERAL) -> MatrixReport:
    """(N M)_{nu lam} == (M S)_{nu lam} exactly for nu, lam in the box."""
    parts = _box(box, env.n)
    rep = MatrixReport(f"commutation[{normalization}]", True)
    for nu in parts:
        for lam in parts:
            if not contains(nu, lam):
                continue
            try:
                left = FactoredSum()
                for mu in parts:
                    if contains(nu, mu) and contains(mu, lam):
                        left = left + n_entry(nu, mu, env) * m_entry(mu, lam, env, normalization)
                right = m_entry(nu, lam, env, normalization) * s_entry(lam, env)
                good = left.equals(right)
            except (PoleError, IndeterminateError, ZeroDivisionError) as exc:
                rep.errors.append((nu, lam, str(exc)))
                rep.ok = False
                continue
            rep.checked += 1
            if not good:
                rep.ok = False
                rep.failures.append((nu, lam))
    return rep


def orbit_points(lam: Sequence[int], env: ParamEnv) -> list[tuple]:
    """All integer vectors mu with mu + z in the hyperoctahedral orbit of lam + z."""
    z = env.z()
    v = tuple(Fraction(l) + zi for l, zi in zip(lam, z))
    out = []
    for w in hyperoctahedral_orbit(v):
        mu = tuple(a - zi for a, zi in zip(w, z))
        if all(x.denominator == 1 for x in mu):
            out.append(tuple(int(x) for x in mu))
    return sorted(set(out))


def verify_orbit_invariance(nu: Sequence[int], lam: Sequence[int], env: ParamEnv,
                            entry: Callable[[tuple], FactoredSum] | None = None) -> MatrixReport:
    """Every orbit image of lam + z gives the same value.

    ``entry`` defaults to the multilateral M column: evaluated verbatim at
    lattice indices for n = 1 and through :func:`m_entry` otherwise.
    """
    if entry is None:
        if env.n == 1:
            def entry(mu: tuple) -> FactoredSum:
                return m_entry_verbatim(nu, mu, env)
        else:
            def entry(mu: tuple) -> FactoredSum:
                return m_entry(nu, mu, env, MULTILATERAL)
    rep = MatrixReport("orbit", True)
    pts = orbit_points(lam, env)
    ref = entry(tuple(lam))
    for mu in pts:
        rep.checked += 1
        try:
            good = entry(mu).equals(ref)
        except (PoleError, IndeterminateError, ZeroDivisionError) as exc:
            rep.errors.append((mu, str(exc)))
            rep.ok = False
            continue
        if not good:
            rep.ok = False
            rep.failures.append(mu)
    return rep


def m_entry_verbatim(nu: Sequence[int], lam: Sequence[int], env: ParamEnv) -> FactoredSum:
    """Multilateral M_{nu lam} for n = 1 with the closed form read at any integer lam.

    No symmetry is used, so orbit invariance of this value is a genuine check.
    """
    if env.n != 1:
        raise ValueError("verbatim lattice evaluation is implemented for n = 1 only")
    nu = _check_index(nu, 1, True)
    lam = tuple(lam)
    if len(lam) != 1:
        raise ValueError(f"index {lam} does not have 1 part")
    pre = m_prefactor(lam, env, MULTILATERAL)
    x = staircase(nu, env.k)[0]
    w = w_single("a", x, lam, (0,), (env.b,), env.k, strict=False)
    return FactoredSum.of(w * pre)


def apply_matrix(entries: Callable[[tuple, tuple], FactoredSum], rows: Iterable[tuple],
                 seq: dict[tuple, FactoredQ | FactoredSum]) -> dict[tuple, FactoredSum]:
    """(A x)_r = sum_c A_{r c} x_c over the support of ``seq``."""
    out = {}
    for r in rows:
        total = FactoredSum()
        for c, v in seq.items():
            total = total + entries(r, c) * v
        out[r] = total
    return out
