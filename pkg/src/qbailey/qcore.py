"""Exact truncated q-series and factored q-Pochhammer products.

Exponents live on the grid (1/2)Z and are stored as integers counting
half-units, so ``q**(3/2)`` has ``half == 3``.  Coefficients are
``fractions.Fraction``.  Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Union

Number = Union[int, Fraction]
ExpLike = Union[int, Fraction, str]


class PoleError(ArithmeticError):
    """Raised when lowering a product that has an uncancelled zero denominator."""


class IndeterminateError(ArithmeticError):
    """Raised when a limit cannot be resolved from leading-order data."""


class NotInvertibleError(ArithmeticError):
    pass


def to_half(e: ExpLike) -> int:
    """Convert an exponent (int, Fraction or "p/q" string) to half-units."""
    f = Fraction(e) * 2
    if f.denominator != 1:
        raise ValueError(f"exponent {e} is not on the half-integer grid")
    return f.numerator


def from_half(h: int) -> Fraction:
    return Fraction(h, 2)


def fmt_exp(h: int) -> str:
    return str(h // 2) if h % 2 == 0 else f"{h}/2"


class QMono(NamedTuple):
    """The scalar ``scale * q**(half/2)``; used as the base of a Pochhammer symbol.

    ``eps`` marks a deformed parameter ``scale * q**(half/2) * (1 - e)**eps`` with
    ``e -> 0``.  It only matters when a factor ``(1 - base)`` would be exactly
    zero: the factor then counts as ``eps * e`` instead of an exact zero, which
    is how values at special parameters are taken as limits.
    """

    scale: Fraction
    half: int
    eps: int = 0

    @property
    def exp(self) -> Fraction:
        return Fraction(self.half, 2)

    def __mul__(self, other: "QMono") -> "QMono":  # type: ignore[override]
        return QMono(self.scale * other.scale, self.half + other.half, self.eps + other.eps)

    def __truediv__(self, other: "QMono") -> "QMono":
        return QMono(self.scale / other.scale, self.half - other.half, self.eps - other.eps)

    def inv(self) -> "QMono":
        return QMono(1 / self.scale, -self.half, -self.eps)

    def shift(self, half: int) -> "QMono":
        """Multiply by ``q**(half/2)``."""
        return QMono(self.scale, self.half + half, self.eps)

    def __pow__(self, m: int) -> "QMono":  # type: ignore[override]
        return QMono(self.scale**m, self.half * m, self.eps * m)

    def __repr__(self) -> str:
        c = "" if self.scale == 1 else f"{self.scale}*"
        d = f"*(1-e)^{self.eps}" if self.eps else ""
        return f"{c}q^{fmt_exp(self.half)}{d}"

    def deformed(self, eps: int = 1) -> "QMono":
        """The same monomial marked as a limit point (see the class docstring)."""
        return QMono(self.scale, self.half, eps)


def qm(scale: Number = 1, exp: ExpLike = 0) -> QMono:
    """Build ``scale * q**exp`` from user-facing values."""
    return QMono(Fraction(scale), to_half(exp))


def qpow(exp: ExpLike) -> QMono:
    return QMono(Fraction(1), to_half(exp))


ONE_MONO = QMono(Fraction(1), 0)


# ---------------------------------------------------------------------------
# Truncated Laurent series
# ---------------------------------------------------------------------------


class QSeries:
    """Laurent series in ``q**(1/2)`` known exactly up to ``order`` (half-units).

    ``order=None`` marks an exact finite Laurent polynomial.  Coefficients with
    exponent above ``order`` are never stored.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping[int, Number] | None = None, order: int | None = None):
        out: dict[int, Fraction] = {}
        if coeffs:
            for h, c in coeffs.items():
                if c and (order is None or h <= order):
                    out[h] = c if isinstance(c, Fraction) else Fraction(c)
        self.coeffs = out
        self.order = order

    # construction helpers -------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[ExpLike, Number], order: ExpLike | None = None) -> "QSeries":
        return cls({to_half(e): c for e, c in terms.items()}, None if order is None else to_half(order))

    @classmethod
    def from_list(cls, coeffs: Iterable[Number], order: int | None = None) -> "QSeries":
        """Integer-exponent coefficient list starting at q^0; ``order`` in whole units."""
        lst = list(coeffs)
        if order is None:
            order = len(lst) - 1
        return cls({2 * i: c for i, c in enumerate(lst)}, 2 * order)

    @classmethod
    def zero(cls, order: int | None = None) -> "QSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order: int | None = None) -> "QSeries":
        return cls({0: 1}, order)

    @classmethod
    def monomial(cls, c: Number, half: int, order: int | None = None) -> "QSeries":
        return cls({half: c}, order)

    # basic queries ----------------------------------------------------------
    def coefficient(self, e: ExpLike) -> Fraction:
        h = to_half(e)
        if self.order is not None and h > self.order:
            raise ValueError("coefficient above truncation order")
        return self.coeffs.get(h, Fraction(0))

    def valuation(self) -> int | None:
        """Smallest half-exponent with nonzero coefficient, or None for zero."""
        return min(self.coeffs) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def truncate(self, order: int | None) -> "QSeries":
        if order is None:
            return self
        if self.order is not None and order > self.order:
            raise ValueError("cannot raise truncation order")
        return QSeries(self.coeffs, order)

    def coefficient_list(self, start: int = 0) -> list[Fraction]:
        """Coefficients of q^start, q^(start+1), ... up to the order (integer grid)."""
        if self.order is None:
            raise ValueError("exact polynomial has no natural length")
        return [self.coeffs.get(2 * i, Fraction(0)) for i in range(start, self.order // 2 + 1)]

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries({0: other}, None)
        return NotImplemented

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = _min_order(self.order, other.order)
        out = {h: c for h, c in self.coeffs.items() if order is None or h <= order}
        for h, c in other.coeffs.items():
            if order is not None and h > order:
                continue
            v = out.get(h, 0) + c
            if v:
                out[h] = v
            else:
                out.pop(h, None)
        return QSeries(out, order)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({h: -c for h, c in self.coeffs.items()}, self.order)

    def __sub__(self, other) -> "QSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c: Number, half: int = 0) -> "QSeries":
        """Multiply by ``c * q**(half/2)``; the order shifts with the monomial."""
        if not c:
            return QSeries({}, None if self.order is None else self.order + half)
        order = None if self.order is None else self.order + half
        return QSeries({h + half: v * c for h, v in self.coeffs.items()}, order)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = _product_order(self, other)
        out: dict[int, Fraction] = {}
        bitems = sorted(other.coeffs.items())
        for ha, ca in self.coeffs.items():
            for hb, cb in bitems:
                h = ha + hb
                if order is not None and h > order:
                    break
                out[h] = out.get(h, 0) + ca * cb
        return QSeries({h: c for h, c in out.items() if c}, order)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "QSeries":
        if m < 0:
            return self.inverse() ** (-m)
        result = QSeries.one(None)
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def inverse(self, order: int | None = None) -> "QSeries":
        """Multiplicative inverse.  ``order`` is required for exact non-monomials."""
        if not self.coeffs:
            raise NotInvertibleError("not invertible: zero series")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        if len(self.coeffs) == 1 and self.order is None:
            return QSeries({-v: 1 / lead}, None)
        if self.order is not None:
            # u = q^-v * self is known to order self.order - v; 1/self = q^-v / u
            rel = self.order - v
            target = rel - v if order is None else min(order, rel - v)
        else:
            if order is None:
                raise NotInvertibleError("exact series inverse needs a truncation order")
            target = order
        L = target + v  # relative length needed for the unit part
        unit = {h - v: c for h, c in self.coeffs.items() if h - v <= L}
        inv: dict[int, Fraction] = {0: 1 / lead}
        keys = sorted(k for k in unit if k > 0)
        for i in range(1, L + 1):
            s = Fraction(0)
            for k in keys:
                if k > i:
                    break
                b = inv.get(i - k)
                if b:
                    s += unit[k] * b
            if s:
                inv[i] = -s / lead
        return QSeries({h - v: c for h, c in inv.items()}, target)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return self * other.inverse()

    # comparison -------------------------------------------------------------
    def first_mismatch(self, other: "QSeries") -> tuple[int, Fraction, Fraction] | None:
        """First exponent (half-units) up to the common order where the series differ."""
        order = _min_order(self.order, other.order)
        keys = sorted(set(self.coeffs) | set(other.coeffs))
        for h in keys:
            if order is not None and h > order:
                break
            a = self.coeffs.get(h, Fraction(0))
            b = other.coeffs.get(h, Fraction(0))
            if a != b:
                return h, a, b
        return None

    def agrees_with(self, other: "QSeries") -> bool:
        return self.first_mismatch(other) is None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSeries({0: other}, None)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for h, c in self.items():
                parts.append(f"{c}*q^{fmt_exp(h)}" if h else str(c))
            body = " + ".join(parts)
        tail = "" if self.order is None else f" + O(q^{fmt_exp(self.order + 1)})"
        return f"QSeries({body}{tail})"


def _min_order(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _product_order(a: QSeries, b: QSeries) -> int | None:
    def val(s: QSeries) -> int:
        v = s.valuation()
        if v is None:
            # an all-zero truncated series behaves like O(q^(order+1/2))
            return s.order + 1 if s.order is not None else 0
        return v

    cands = []
    if a.order is not None:
        cands.append(a.order + val(b) if b.coeffs or b.order is not None else a.order)
    if b.order is not None:
        cands.append(b.order + val(a) if a.coeffs or a.order is not None else b.order)
    return min(cands) if cands else None


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_invert(a: QSeries, order: int | None = None) -> QSeries:
    return a.inverse(order)


def series_sum(terms: Iterable[QSeries], order: int) -> QSeries:
    """Sum many series, truncating every term at ``order``."""
    out: dict[int, Fraction] = {}
    for s in terms:
        if s.order is not None and s.order < order:
            raise ValueError("summand known to a lower order than requested")
        for h, c in s.coeffs.items():
            if h <= order:
                out[h] = out.get(h, 0) + c
    return QSeries({h: c for h, c in out.items() if c}, order)


# ---------------------------------------------------------------------------
# Factored products
# ---------------------------------------------------------------------------

FactorKey = tuple  # (Fraction scale, int half>0)


class FactoredQ:
    """``scalar * q**(mono/2) * prod (1 - c q**(e/2))**m`` in canonical form.

    Canonical form keeps only factors with ``e > 0``; factors with ``e < 0`` are
    rewritten as ``-c q^e (1 - c^-1 q^-e)`` and ``e == 0`` factors fold into the
    scalar, except the exact-zero factor ``(1 - q^0)`` whose net multiplicity is
    kept in ``zeros``.  ``zeros > 0`` means the value is 0, ``zeros < 0`` a pole.

    ``soft`` is the order in the deformation variable ``e`` (see QMono.eps)
    coming from factors that vanish only in the limit; the value is the
    leading coefficient ``scalar * ... * e**soft``.
    """

    __slots__ = ("scalar", "mono", "factors", "zeros", "soft")

    def __init__(self, scalar: Number = 1, mono: int = 0,
                 factors: Mapping[FactorKey, int] | None = None, zeros: int = 0, soft: int = 0):
        self.scalar = Fraction(scalar)
        self.mono = mono
        self.factors = dict(factors) if factors else {}
        self.zeros = zeros
        self.soft = soft

    @classmethod
    def build(cls, scalar: Number = 1, mono: int = 0,
              triples: Iterable[tuple[Fraction, int, int]] = ()) -> "FactoredQ":
        """Canonicalise a list of ``(c, e_half, multiplicity)`` factors."""
        acc = FAcc(scalar, mono)
        for c, e, m in triples:
            acc.factor(c, e, m)
        return acc.freeze()

    @classmethod
    def one(cls) -> "FactoredQ":
        return cls()

    @classmethod
    def zero_value(cls) -> "FactoredQ":
        return cls(0)

    @classmethod
    def monomial(cls, c: Number, half: int = 0) -> "FactoredQ":
        return cls(c, half)

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.scalar == 0 or self.zeros > 0

    def is_pole(self) -> bool:
        return self.scalar != 0 and (self.zeros < 0 or (self.zeros == 0 and self.soft < 0))

    def limit_is_zero(self) -> bool:
        """Zero once the deformation is removed."""
        return self.is_zero() or self.soft > 0

    def valuation(self) -> int | None:
        """Exact valuation in half-units (every canonical factor is 1 + O(q))."""
        if self.limit_is_zero():
            return None
        if self.is_pole():
            raise PoleError(f"pole: {self!r}")
        return self.mono

    # arithmetic -------------------------------------------------------------
    def __mul__(self, other) -> "FactoredQ":
        if isinstance(other, (int, Fraction)):
            return FactoredQ(self.scalar * other, self.mono, self.factors, self.zeros, self.soft)
        if not isinstance(other, FactoredQ):
            return NotImplemented
        if len(other.factors) > len(self.factors):
            big, small = other.factors, self.factors
        else:
            big, small = self.factors, other.factors
        f = dict(big)
        for k, m in small.items():
            v = f.get(k, 0) + m
            if v:
                f[k] = v
            else:
                del f[k]
        return FactoredQ(self.scalar * other.scalar, self.mono + other.mono, f, self.zeros + other.zeros,
                         self.soft + other.soft)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredQ":
        if self.scalar == 0:
            raise PoleError("inverse of exact zero")
        return FactoredQ(1 / self.scalar, -self.mono, {k: -m for k, m in self.factors.items()}, -self.zeros,
                         -self.soft)

    def __truediv__(self, other) -> "FactoredQ":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self * other.inverse()

    def __pow__(self, m: int) -> "FactoredQ":
        if m < 0:
            return self.inverse() ** (-m)
        return FactoredQ(self.scalar**m, self.mono * m, {k: v * m for k, v in self.factors.items() if v * m},
                         self.zeros * m, self.soft * m)

    def __neg__(self) -> "FactoredQ":
        return FactoredQ(-self.scalar, self.mono, self.factors, self.zeros, self.soft)

    def canonical(self) -> tuple:
        """Hashable canonical key; every exact zero maps to the same key."""
        if self.is_zero():
            return ("zero",)
        return (self.scalar, self.mono, self.zeros, self.soft, tuple(sorted(self.factors.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactoredQ):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        if self.is_zero():
            return "FactoredQ(0)"
        parts = [str(self.scalar)]
        if self.mono:
            parts.append(f"q^{fmt_exp(self.mono)}")
        for (c, e), m in sorted(self.factors.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            cs = "" if c == 1 else f"{c}*"
            parts.append(f"(1-{cs}q^{fmt_exp(e)})^{m}")
        if self.zeros:
            parts.append(f"(1-q^0)^{self.zeros}")
        if self.soft:
            parts.append(f"e^{self.soft}")
        return "FactoredQ(" + " ".join(parts) + ")"

    # lowering ---------------------------------------------------------------
    def lower(self, order: int) -> QSeries:
        """Expand to a QSeries exact through ``order`` (half-units)."""
        if self.limit_is_zero():
            return QSeries({}, order)
        if self.is_pole():
            raise PoleError(f"pole: {self!r}")
        L = order - self.mono
        if L < 0:
            return QSeries({}, order)
        active = [(c, e, m) for (c, e), m in self.factors.items() if e <= L]
        g = 0
        for _, e, _ in active:
            g = gcd(g, e)
        if g == 0:
            return QSeries({self.mono: self.scalar}, order)
        n = L // g
        integral = all(c.denominator == 1 for c, _, _ in active)
        arr: list = [0] * (n + 1)
        arr[0] = 1 if integral else Fraction(1)
        for c, e, m in active:
            s = e // g
            cc = c.numerator if integral else c
            if m > 0:
                for _ in range(m):
                    for i in range(n, s - 1, -1):
                        v = arr[i - s]
                        if v:
                            arr[i] -= cc * v
            else:
                for _ in range(-m):
                    for i in range(s, n + 1):
                        v = arr[i - s]
                        if v:
                            arr[i] += cc * v
        sc = self.scalar
        mono = self.mono
        return QSeries({mono + i * g: sc * v for i, v in enumerate(arr) if v}, order)


class FAcc:
    """Mutable accumulator used to assemble a FactoredQ factor by factor."""

    __slots__ = ("scalar", "mono", "factors", "zeros", "soft")

    def __init__(self, scalar: Number = 1, mono: int = 0):
        self.scalar = Fraction(scalar)
        self.mono = mono
        self.factors: dict[FactorKey, int] = {}
        self.zeros = 0
        self.soft = 0

    def factor(self, c: Fraction, e: int, m: int = 1, eps: int = 0) -> "FAcc":
        """Multiply by ``(1 - c q^(e/2) (1 - e)^eps)**m`` to leading order."""
        if not m or not c:
            return self
        if e == 0:
            if c != 1:
                self.scalar *= (1 - c) ** m
            elif eps:
                self.soft += m
                self.scalar *= Fraction(eps) ** m
            else:
                self.zeros += m
            return self
        if e < 0:
            self.scalar *= (-c) ** m
            self.mono += e * m
            c = 1 / c
            e = -e
        key = (c, e)
        v = self.factors.get(key, 0) + m
        if v:
            self.factors[key] = v
        else:
            del self.factors[key]
        return self

    def poch(self, base: QMono, length: int, sign: int = 1, step: int = 2) -> "FAcc":
        """Multiply by ``(base; q^(step/2))_length ** sign`` (length may be negative)."""
        c, e, p = base
        if length >= 0:
            for i in range(length):
                self.factor(c, e + i * step, sign, p)
        else:
            for i in range(-length):
                self.factor(c, e + (length + i) * step, -sign, p)
        return self

    def mul_mono(self, base: QMono, power: int = 1) -> "FAcc":
        self.scalar *= base.scale**power
        self.mono += base.half * power
        return self

    def mul_q(self, half: int) -> "FAcc":
        self.mono += half
        return self

    def mul_scalar(self, c: Number) -> "FAcc":
        self.scalar *= c
        return self

    def mul(self, f: FactoredQ, power: int = 1) -> "FAcc":
        if power == 0:
            return self
        if f.scalar == 0:
            if power < 0:
                raise PoleError("division by exact zero")
            self.scalar = Fraction(0)
            return self
        self.scalar *= f.scalar**power
        self.mono += f.mono * power
        self.zeros += f.zeros * power
        self.soft += f.soft * power
        for k, m in f.factors.items():
            v = self.factors.get(k, 0) + m * power
            if v:
                self.factors[k] = v
            else:
                del self.factors[k]
        return self

    def freeze(self) -> FactoredQ:
        return FactoredQ(self.scalar, self.mono, self.factors, self.zeros, self.soft)


# ---------------------------------------------------------------------------
# Pochhammer symbols
# ---------------------------------------------------------------------------


def qpoch_finite(base: QMono, m: int) -> FactoredQ:
    """(base; q)_m, with (a; q)_m = 1/(a q^m; q)_{-m} for m < 0."""
    return FAcc().poch(base, m).freeze()


def qpoch_partition(base: QMono, lam, k: int) -> FactoredQ:
    """(base; q, t)_lam = prod_i (base t^(1-i); q)_{lam_i} with t = q^k."""
    acc = FAcc()
    for i, part in enumerate(lam):
        acc.poch(base.shift(-2 * k * i), part)
    return acc.freeze()


def poch_inf(base: QMono, order: int, step: int = 2, power: int = 1) -> FactoredQ:
    """(base; q^(step/2))_inf ** power as a finite product exact through ``order``.

    Factors with non-positive exponent are kept exactly; the remaining ones are
    included while they can still affect coefficients up to ``order``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    c, e, p = base
    acc = FAcc()
    if c == 0:
        return acc.freeze()
    i = 0
    while e + i * step <= 0:
        acc.factor(c, e + i * step, power, p)
        i += 1
    limit = order - acc.mono if acc.scalar else order
    while e + i * step <= limit:
        acc.factor(c, e + i * step, power, p)
        i += 1
    return acc.freeze()


def qpoch_infinite(base: QMono, order: int, step: int = 2) -> QSeries:
    """(base; q^(step/2))_inf truncated at ``order`` (half-units).

    A factor equal to (1 - q^0) makes the product the zero series.
    """
    return poch_inf(base, order, step).lower(order)


def factored_lower(f: FactoredQ, order: int) -> QSeries:
    return f.lower(order)


def expand_polynomial(f: FactoredQ) -> dict[int, Fraction]:
    """Exact Laurent expansion of a product with no negative multiplicities."""
    if f.limit_is_zero():
        return {}
    if f.is_pole() or any(m < 0 for m in f.factors.values()):
        raise ValueError("not a polynomial: negative multiplicity present")
    deg = sum(e * m for (_, e), m in f.factors.items())
    g = 0
    for (_, e) in f.factors:
        g = gcd(g, e)
    if g == 0:
        return {f.mono: f.scalar}
    n = deg // g
    integral = all(c.denominator == 1 for (c, _) in f.factors)
    arr: list = [0] * (n + 1)
    arr[0] = 1 if integral else Fraction(1)
    top = 0
    for (c, e), m in f.factors.items():
        s = e // g
        cc = c.numerator if integral else c
        for _ in range(m):
            top += s
            for i in range(top, s - 1, -1):
                v = arr[i - s]
                if v:
                    arr[i] -= cc * v
    return {f.mono + i * g: f.scalar * v for i, v in enumerate(arr) if v}


def _min_floor(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class FactoredSum:
    """A finite sum of FactoredQ terms (an exact rational function of q).

    Terms sharing the same factor structure are merged by adding scalars.
    """

    __slots__ = ("terms", "floor")

    def __init__(self, terms: Iterable[FactoredQ] = (), floor: int | None = None):
        merged: dict[tuple, FactoredQ] = {}
        low = floor
        for t in terms:
            if t.is_zero():
                continue
            low = t.soft if low is None else min(low, t.soft)
            key = (t.mono, t.zeros, t.soft, frozenset(t.factors.items()))
            old = merged.get(key)
            if old is None:
                merged[key] = t
            else:
                s = old.scalar + t.scalar
                if s:
                    merged[key] = FactoredQ(s, t.mono, t.factors, t.zeros, t.soft)
                else:
                    del merged[key]
        self.terms = list(merged.values())
        # lowest deformation order ever present; corrections below order 0
        # are not tracked, so a negative floor blocks taking the limit
        self.floor = low

    @classmethod
    def of(cls, f: FactoredQ) -> "FactoredSum":
        return cls([f])

    def is_structurally_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "FactoredSum":
        if isinstance(other, FactoredQ):
            return FactoredSum(self.terms + [other], self.floor)
        if isinstance(other, FactoredSum):
            return FactoredSum(self.terms + other.terms, _min_floor(self.floor, other.floor))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "FactoredSum":
        return FactoredSum([-t for t in self.terms], self.floor)

    def __sub__(self, other) -> "FactoredSum":
        if isinstance(other, FactoredQ):
            other = FactoredSum([other])
        return self + (-other)

    def __mul__(self, other) -> "FactoredSum":
        if isinstance(other, (int, Fraction)):
            return FactoredSum([t * other for t in self.terms], self.floor)
        if isinstance(other, FactoredQ):
            floor = None if self.floor is None or other.is_zero() else self.floor + other.soft
            return FactoredSum([t * other for t in self.terms], floor)
        if isinstance(other, FactoredSum):
            floor = None
            if self.floor is not None and other.floor is not None:
                floor = self.floor + other.floor
            return FactoredSum([a * b for a in self.terms for b in other.terms], floor)
        return NotImplemented

    __rmul__ = __mul__

    def limit_terms(self) -> list[FactoredQ]:
        """Leading-order terms once every deformation is removed.

        Terms of positive order vanish in the limit.  A negative leading order
        is a genuine pole unless the leading coefficients cancel, in which case
        the limit needs more than leading-order data and an error is raised.
        """
        if self.floor is not None and self.floor < 0:
            if not self.terms or min(t.soft for t in self.terms) >= 0:
                raise IndeterminateError("poles cancelled; the limit needs higher-order terms")
        live = []
        for t in self.terms:
            if t.zeros < 0:
                raise PoleError(f"pole in term {t!r}")
            live.append(t)
        if not live:
            return []
        smin = min(t.soft for t in live)
        if smin > 0:
            return []
        lead = [FactoredQ(t.scalar, t.mono, t.factors, t.zeros) for t in live if t.soft == smin]
        if smin < 0:
            if FactoredSum(lead).is_exactly_zero():
                raise IndeterminateError("leading poles cancel; the limit needs higher-order terms")
            raise PoleError("the sum has a pole at this parameter point")
        return lead

    def valuation_bound(self) -> int | None:
        """Lower bound on the valuation (exact unless terms cancel)."""
        vals = [t.valuation() for t in self.limit_terms()]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def lower(self, order: int) -> QSeries:
        return series_sum((t.lower(order) for t in self.limit_terms()), order)

    @staticmethod
    def _common_denominator(terms: list[FactoredQ]) -> FactoredQ:
        den: dict[FactorKey, int] = {}
        mono = 0
        for t in terms:
            for k, m in t.factors.items():
                if m < 0 and -m > den.get(k, 0):
                    den[k] = -m
            mono = min(mono, t.mono)
        return FactoredQ(1, -mono, den)

    def common_denominator(self) -> FactoredQ:
        """Product of the worst negative multiplicities over the limit terms."""
        return self._common_denominator(self.limit_terms())

    def numerator(self) -> dict[int, Fraction]:
        """Exact Laurent polynomial equal to this sum times common_denominator()."""
        terms = self.limit_terms()
        den = self._common_denominator(terms)
        out: dict[int, Fraction] = {}
        for t in terms:
            for h, c in expand_polynomial(t * den).items():
                out[h] = out.get(h, 0) + c
        return {h: c for h, c in out.items() if c}

    def is_exactly_zero(self) -> bool:
        return not self.numerator()

    def equals(self, other) -> bool:
        if isinstance(other, FactoredQ):
            other = FactoredSum([other])
        return (self - other).is_exactly_zero()

    def __repr__(self) -> str:
        return "FactoredSum(" + " + ".join(repr(t) for t in self.terms) + ")" if self.terms else "FactoredSum(0)"
