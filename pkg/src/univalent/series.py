"""Truncated Laurent-type power series in one variable.

A :class:`TruncatedSeries` stores the coefficients of ``z**v .. z**(v+order)``
and stands for ``sum c_k z**k + O(z**(v+order+1))``.  The first unknown
exponent ``v + order + 1`` is called the *precision*.  Every operation returns
the largest order that is determined by its inputs; nothing is zero-padded
behind the caller's back.

Two numeric modes exist.  ``exact`` stores :class:`~univalent.gaussian.QQi`
coefficients and is the ground truth for identity checks; ``approx`` stores
Python complex numbers and leans on numpy for the quadratic kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ModeError, NormalizationError, TruncationError
from .gaussian import QQi, to_qqi

__all__ = [
    "Mode",
    "TruncatedSeries",
    "log_series",
    "exp_series",
    "pow_series",
    "substitute_power",
    "compose",
]

APPROX_UNIT_TOL = 1e-12
_QZERO = QQi(0)
_QONE = QQi(1)


class Mode(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


def infer_mode(values: Iterable) -> Mode:
    for x in values:
        if isinstance(x, (float, complex, np.floating, np.complexfloating)):
            return Mode.APPROX
    return Mode.EXACT


def scalar_for(x, mode: Mode):
    """Convert a scalar into the coefficient type of ``mode``."""
    if mode is Mode.EXACT:
        try:
            return to_qqi(x)
        except TypeError:
            raise ModeError(f"cannot use inexact scalar {x!r} in exact mode") from None
    if isinstance(x, QQi):
        return complex(x)
    return complex(x)


def _zero(mode: Mode):
    return _QZERO if mode is Mode.EXACT else 0j


def _is_zero(x) -> bool:
    return not x


def _mul_exact(a: Sequence, b: Sequence, n: int) -> list:
    """First ``n`` terms of the Cauchy product, skipping exact zeros."""
    out = [_QZERO] * n
    nz_b = [(j, bj) for j, bj in enumerate(b[:n]) if bj]
    for i, ai in enumerate(a[:n]):
        if not ai:
            continue
        for j, bj in nz_b:
            k = i + j
            if k >= n:
                break
            out[k] = out[k] + ai * bj
    return out


def _mul_approx(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n]


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    valuation: int
    coeffs: tuple
    mode: Mode

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise TruncationError("a truncated series must retain at least one term")

    # -- construction ---------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Sequence, valuation: int = 0, order: int | None = None,
                    mode: Mode | str | None = None) -> "TruncatedSeries":
        """Build ``sum coeffs[k] z**(valuation+k)``.

        ``order`` defaults to ``len(coeffs) - 1``; a larger order declares the
        missing coefficients to be known zeros (polynomial input).
        """
        coeffs = list(coeffs)
        mode = Mode(mode) if mode is not None else infer_mode(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise TruncationError("order must be non-negative")
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        conv = [scalar_for(c, mode) for c in coeffs]
        conv.extend([_zero(mode)] * (order + 1 - len(conv)))
        return cls(valuation, tuple(conv), mode)

    @classmethod
    def zero(cls, order: int, valuation: int = 0, mode: Mode | str = Mode.EXACT):
        mode = Mode(mode)
        return cls(valuation, (_zero(mode),) * (order + 1), mode)

    @classmethod
    def one(cls, order: int, mode: Mode | str = Mode.EXACT):
        return cls.monomial(0, order, mode=mode)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1, mode: Mode | str = Mode.EXACT):
        """``coeff * z**k`` known exactly through ``z**(k+order)``."""
        mode = Mode(mode)
        cs = [_zero(mode)] * (order + 1)
        cs[0] = scalar_for(coeff, mode)
        return cls(k, tuple(cs), mode)

    # -- inspection -----------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def precision(self) -> int:
        """First exponent whose coefficient is unknown."""
        return self.valuation + len(self.coeffs)

    def coeff(self, k: int):
        if k < self.valuation:
            return _zero(self.mode)
        if k >= self.precision:
            raise TruncationError(f"coefficient of z^{k} lies beyond precision {self.precision}")
        return self.coeffs[k - self.valuation]

    def __getitem__(self, k: int):
        return self.coeff(k)

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def exponents(self) -> range:
        return range(self.valuation, self.precision)

    def is_exact(self) -> bool:
        return self.mode is Mode.EXACT

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.valuation == other.valuation and self.mode == other.mode
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.valuation, self.mode, self.coeffs))

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return (f"TruncatedSeries(valuation={self.valuation}, order={self.order}, "
                f"mode={self.mode.value}, coeffs=[{terms}{more}])")

    # -- conversions ----------------------------------------------------
    def to_approx(self) -> "TruncatedSeries":
        if self.mode is Mode.APPROX:
            return self
        return TruncatedSeries(self.valuation, tuple(complex(c) for c in self.coeffs), Mode.APPROX)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        if order < 0:
            raise TruncationError("order must be non-negative")
        return TruncatedSeries(self.valuation, self.coeffs[: order + 1], self.mode)

    def truncate_to_precision(self, precision: int) -> "TruncatedSeries":
        return self.truncate(precision - self.valuation - 1)

    def normalized(self) -> "TruncatedSeries":
        """Drop leading zero coefficients (valuation rises, order falls)."""
        k = 0
        while k < len(self.coeffs) - 1 and _is_zero(self.coeffs[k]):
            k += 1
        if k == 0:
            return self
        return TruncatedSeries(self.valuation + k, self.coeffs[k:], self.mode)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``z**k`` (exact, order preserved)."""
        return TruncatedSeries(self.valuation + k, self.coeffs, self.mode)

    # -- ring operations ------------------------------------------------
    def _check_mode(self, other: "TruncatedSeries"):
        if self.mode is not other.mode:
            raise ModeError(f"mode mismatch: {self.mode.value} vs {other.mode.value}")

    def _aligned(self, other: "TruncatedSeries"):
        self._check_mode(other)
        v = min(self.valuation, other.valuation)
        p = min(self.precision, other.precision)
        if p <= v:
            raise TruncationError("sum retains no terms")
        z = _zero(self.mode)
        a = [self.coeff(k) if k >= self.valuation else z for k in range(v, p)]
        b = [other.coeff(k) if k >= other.valuation else z for k in range(v, p)]
        return v, a, b

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + self._constant(other)
        v, a, b = self._aligned(other)
        return TruncatedSeries(v, tuple(x + y for x, y in zip(a, b)), self.mode)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self - self._constant(other)
        v, a, b = self._aligned(other)
        return TruncatedSeries(v, tuple(x - y for x, y in zip(a, b)), self.mode)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncatedSeries(self.valuation, tuple(-c for c in self.coeffs), self.mode)

    def _constant(self, c) -> "TruncatedSeries":
        # A bare scalar is known exactly; give it enough order to not truncate.
        order = max(self.precision, 1)
        return TruncatedSeries.monomial(0, order, scalar_for(c, self.mode), self.mode)

    def scale(self, c) -> "TruncatedSeries":
        c = scalar_for(c, self.mode)
        return TruncatedSeries(self.valuation, tuple(c * x for x in self.coeffs), self.mode)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_mode(other)
        n = min(self.order, other.order) + 1
        if self.mode is Mode.EXACT:
            cs = _mul_exact(self.coeffs, other.coeffs, n)
        else:
            cs = _mul_approx(self.as_array(), other.as_array(), n).tolist()
        return TruncatedSeries(self.valuation + other.valuation, tuple(cs), self.mode)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = None
        base = self
        while True:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if not n:
                break
            base = base * base
        if result is None:
            return TruncatedSeries.one(self.order, self.mode)
        return result

    def reciprocal(self) -> "TruncatedSeries":
        u = self.normalized()
        c0 = u.coeffs[0]
        if _is_zero(c0):
            raise ZeroDivisionError("reciprocal of a series with no nonzero known term")
        n = len(u.coeffs)
        if u.mode is Mode.EXACT:
            inv0 = _QONE / c0
            nz = [(k, uk) for k, uk in enumerate(u.coeffs) if k and uk]
            v = [inv0]
            for m in range(1, n):
                acc = _QZERO
                for k, uk in nz:
                    if k > m:
                        break
                    vk = v[m - k]
                    if vk:
                        acc = acc + uk * vk
                v.append(-acc * inv0)
            cs = tuple(v)
        else:
            a = u.as_array()
            v = np.zeros(n, dtype=complex)
            v[0] = 1.0 / a[0]
            for m in range(1, n):
                v[m] = -np.dot(a[1 : m + 1], v[m - 1 :: -1]) / a[0]
            cs = tuple(v.tolist())
        return TruncatedSeries(-u.valuation, cs, u.mode)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = scalar_for(other, self.mode)
            return self.scale((_QONE if self.mode is Mode.EXACT else 1.0) / c)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal().scale(other)

    # -- calculus -------------------------------------------------------
    def derivative(self) -> "TruncatedSeries":
        v = self.valuation
        cs = [c * k for c, k in zip(self.coeffs, range(v, self.precision))]
        if v == 0:
            # the constant term dies; the result starts at z^0 again
            if len(cs) == 1:
                raise TruncationError("derivative retains no terms")
            return TruncatedSeries(0, tuple(cs[1:]), self.mode)
        return TruncatedSeries(v - 1, tuple(cs), self.mode)

    def evaluate(self, z):
        """Value of the retained terms at ``z`` (no tail estimate)."""
        exact = self.mode is Mode.EXACT and not isinstance(z, (float, complex))
        if exact:
            z = to_qqi(z)
            acc = _QZERO
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc * z ** self.valuation if self.valuation >= 0 else acc / z ** (-self.valuation)
        z = complex(z)
        a = self.as_array()
        acc = np.polyval(a[::-1], z) if len(a) else 0j
        return complex(acc * z ** self.valuation)


# -- transcendental operations -------------------------------------------

def _unit_constant_coeffs(u: TruncatedSeries, what: str) -> list:
    """Coefficients of z^0 .. z^(precision-1) of ``u`` after checking u(0) = 1."""
    for k in range(u.valuation, 0):
        c = u.coeff(k)
        if not (c == 0 if u.mode is Mode.EXACT else abs(c) == 0):
            raise NormalizationError(f"{what}: series has a pole term at z^{k}")
    if u.precision <= 0:
        raise TruncationError(f"{what}: constant term is not known")
    c0 = u.coeff(0)
    if u.mode is Mode.EXACT:
        ok = c0 == 1
    else:
        ok = abs(c0 - 1) <= APPROX_UNIT_TOL
    if not ok:
        raise NormalizationError(f"{what}: constant term must equal 1, got {c0}")
    return [u.coeff(k) for k in range(0, u.precision)]


def log_series(u: TruncatedSeries) -> TruncatedSeries:
    """Principal logarithm of a series with constant term 1.

    Uses ``n L_n = n u_n - sum_{k<n} k L_k u_{n-k}`` (from ``u L' = u'``).
    """
    c = _unit_constant_coeffs(u, "log_series")
    n = len(c)
    if u.mode is Mode.EXACT:
        L = [_QZERO] * n
        nz = [(j, cj) for j, cj in enumerate(c) if j and cj]
        for m in range(1, n):
            acc = c[m] * m
            for j, cj in nz:
                if j >= m:
                    break
                lk = L[m - j]
                if lk:
                    acc = acc - lk * (m - j) * cj
            L[m] = acc / m
        return TruncatedSeries(0, tuple(L), Mode.EXACT)
    a = np.array(c, dtype=complex)
    L = np.zeros(n, dtype=complex)
    for m in range(1, n):
        k = np.arange(1, m)
        L[m] = (m * a[m] - np.dot(k * L[1:m], a[m - 1 : 0 : -1])) / m
    return TruncatedSeries(0, tuple(L.tolist()), Mode.APPROX)


def exp_series(L: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with zero constant term (``E' = L' E``)."""
    for k in range(L.valuation, 1):
        if k >= L.precision:
            break
        c = L.coeff(k)
        if c != 0:
            raise NormalizationError(f"exp_series: nonzero coefficient at z^{k}")
    if L.precision <= 0:
        raise TruncationError("exp_series: constant term is not known")
    n = L.precision
    lc = [L.coeff(k) for k in range(0, n)]
    if L.mode is Mode.EXACT:
        E = [_QONE] + [_QZERO] * (n - 1)
        nz = [(k, lk * k) for k, lk in enumerate(lc) if k and lk]
        for m in range(1, n):
            acc = _QZERO
            for k, klk in nz:
                if k > m:
                    break
                ek = E[m - k]
                if ek:
                    acc = acc + klk * ek
            E[m] = acc / m
        return TruncatedSeries(0, tuple(E), Mode.EXACT)
    a = np.array(lc, dtype=complex)
    E = np.zeros(n, dtype=complex)
    E[0] = 1.0
    for m in range(1, n):
        k = np.arange(1, m + 1)
        E[m] = np.dot(k * a[1 : m + 1], E[m - 1 :: -1]) / m
    return TruncatedSeries(0, tuple(E.tolist()), Mode.APPROX)


def pow_series(u: TruncatedSeries, e) -> TruncatedSeries:
    """``u**e = exp(e log u)`` for ``u(0) = 1`` and rational (or real) ``e``.

    Evaluated with the one-pass recurrence ``n v_n = sum ((e+1)k - n) u_k v_{n-k}``
    obtained from ``u v' = e u' v``; it agrees with ``exp(e*log(u))`` term by term.
    """
    c = _unit_constant_coeffs(u, "pow_series")
    n = len(c)
    if u.mode is Mode.EXACT:
        if isinstance(e, float):
            raise ModeError("exact pow_series needs a rational exponent")
        e = to_qqi(e)
        e1 = e + 1
        v = [_QONE] + [_QZERO] * (n - 1)
        nz = [(k, ck) for k, ck in enumerate(c) if k and ck]
        for m in range(1, n):
            acc = _QZERO
            for k, ck in nz:
                if k > m:
                    break
                vk = v[m - k]
                if vk:
                    acc = acc + (e1 * k - m) * ck * vk
            v[m] = acc / m
        return TruncatedSeries(0, tuple(v), Mode.EXACT)
    e = complex(e) if isinstance(e, (complex, QQi)) else float(e)
    a = np.array(c, dtype=complex)
    v = np.zeros(n, dtype=complex)
    v[0] = 1.0
    for m in range(1, n):
        k = np.arange(1, m + 1)
        v[m] = np.dot(((e + 1) * k - m) * a[1 : m + 1], v[m - 1 :: -1]) / m
    return TruncatedSeries(0, tuple(v.tolist()), Mode.APPROX)


def substitute_power(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """``f(z**m)``: exponents and truncation order scale by ``m``."""
    if m < 1:
        raise ValueError("substitute_power needs m >= 1")
    if m == 1:
        return f
    z = _zero(f.mode)
    cs = []
    for i, c in enumerate(f.coeffs):
        if i:
            cs.extend([z] * (m - 1))
        cs.append(c)
    cs.extend([z] * (m - 1))
    return TruncatedSeries(f.valuation * m, tuple(cs), f.mode)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(z))`` for a power series ``f`` and ``g`` with ``g(0) = 0``."""
    f._check_mode(g)
    if f.valuation < 0:
        raise NormalizationError("compose: outer series must be a power series")
    g = g.normalized()
    vg = g.valuation
    if vg < 1:
        raise NormalizationError("compose: inner series must vanish at 0")
    kmin = max(f.valuation, 1)
    prec = min(f.precision * vg, g.precision + (kmin - 1) * vg)
    vres = f.valuation * vg
    if prec <= vres:
        raise TruncationError("composition retains no terms")
    n = prec  # coefficients z^0 .. z^(prec-1)
    mode = f.mode
    zero = _zero(mode)
    gcs = [zero] * vg + list(g.coeffs)
    gcs = (gcs + [zero] * n)[:n]
    if mode is Mode.EXACT:
        acc = [zero] * n
        power = [_QONE] + [zero] * (n - 1)
        for k in range(0, f.precision):
            if k >= 1:
                power = _mul_exact(power, gcs, n)
            if k < f.valuation:
                continue
            fk = f.coeff(k)
            if fk:
                acc = [x + fk * p for x, p in zip(acc, power)]
    else:
        garr = np.array([complex(c) for c in gcs], dtype=complex)
        acc = np.zeros(n, dtype=complex)
        power = np.zeros(n, dtype=complex)
        power[0] = 1.0
        for k in range(0, f.precision):
            if k >= 1:
                power = _mul_approx(power, garr, n)
            if k < f.valuation:
                continue
            acc = acc + complex(f.coeff(k)) * power
        acc = acc.tolist()
    return TruncatedSeries(vres, tuple(acc[vres:prec]), mode)
