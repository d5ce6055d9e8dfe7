"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Scan points rotate a rational base map by roots of unity, so every coefficient
functional evaluates to an element of some Q(zeta_M).  Elements are sparse
maps ``k -> q`` standing for ``sum q zeta_M^k`` (exponents mod M).  Zero tests
reduce modulo the cyclotomic polynomial; signs of nonzero real elements come
from a high-precision evaluation, which is decisive once the value is known to
be nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .gaussian import QQi

__all__ = ["Cyclotomic", "cyclotomic_poly", "real_sign"]


def _poly_divexact(num: list, den: list) -> list:
    """Exact quotient of integer polynomials (coefficient lists, low degree first)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple:
    """Integer coefficients of Phi_M, low degree first."""
    if M < 1:
        raise ValueError("M must be positive")
    num = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


class Cyclotomic:
    __slots__ = ("M", "terms")

    def __init__(self, M: int, terms: dict | None = None):
        self.M = M
        clean: dict = {}
        for k, v in (terms or {}).items():
            k %= M
            clean[k] = clean.get(k, Fraction(0)) + Fraction(v)
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, M: int, terms: dict) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.M = M
        obj.terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def rational(cls, M: int, q) -> "Cyclotomic":
        return cls(M, {0: Fraction(q)})

    @classmethod
    def root(cls, M: int, k: int, scale=1) -> "Cyclotomic":
        """``scale * zeta_M^k``."""
        return cls(M, {k: Fraction(scale)})

    @classmethod
    def from_qqi(cls, M: int, q: QQi) -> "Cyclotomic":
        if M % 4:
            raise ValueError("i lies in Q(zeta_M) only when 4 divides M")
        return cls(M, {0: q.real, M // 4: q.imag})

    def _lift(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.M != self.M:
                raise ValueError("operands live in different cyclotomic fields")
            return other
        if isinstance(other, QQi):
            return Cyclotomic.from_qqi(self.M, other)
        return Cyclotomic.rational(self.M, other)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return Cyclotomic._raw(self.M, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.M, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        out: dict = {}
        M = self.M
        for i, x in self.terms.items():
            for j, y in o.terms.items():
                k = (i + j) % M
                out[k] = out.get(k, 0) + x * y
        return Cyclotomic._raw(M, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if len(self.terms) == 1:
            (k, v), = self.terms.items()
            return Cyclotomic._raw(self.M, {(k * n) % self.M: v ** n})
        result = Cyclotomic.rational(self.M, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic._raw(self.M, {(-k) % self.M: v for k, v in self.terms.items()})

    def abs2(self) -> "Cyclotomic":
        return self * self.conjugate()

    def reduced(self) -> tuple:
        """Coefficients in the power basis ``1, zeta, ..., zeta^(phi(M)-1)``."""
        phi = cyclotomic_poly(self.M)
        deg = len(phi) - 1
        c = [Fraction(0)] * max(self.M, deg + 1)
        for k, v in self.terms.items():
            c[k] += v
        for i in range(len(c) - 1, deg - 1, -1):
            q = c[i]
            if q:
                for j, p in enumerate(phi):
                    c[i - deg + j] -= q * p
        return tuple(c[:deg])

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def rational_value(self):
        """The element as a Fraction if it is rational, else ``None``."""
        r = self.reduced()
        if any(r[1:]):
            return None
        return r[0] if r else Fraction(0)

    def to_mp(self, dps: int = 50):
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for k, v in sorted(self.terms.items()):
                total += mpmath.mpf(v.numerator) / v.denominator * mpmath.expjpi(mpmath.mpf(2 * k) / self.M)
            return total

    def __complex__(self):
        return complex(self.to_mp(30))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QQi, Cyclotomic)):
            return (self - self._lift(other)).is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{v}*z^{k}" for k, v in sorted(self.terms.items())) or "0"
        return f"Cyclotomic[{self.M}]({body})"


def real_sign(v: Cyclotomic, dps: int = 60) -> int:
    """Sign of a real element: exact for zero and rationals, numeric otherwise."""
    if v.is_zero():
        return 0
    q = v.rational_value()
    if q is not None:
        return (q > 0) - (q < 0)
    while True:
        z = v.to_mp(dps)
        with mpmath.workdps(dps):
            if abs(z.real) > mpmath.mpf(10) ** (-(dps - 10)):
                return 1 if z.real > 0 else -1
        dps *= 2
        if dps > 20_000:  # pragma: no cover - nonzero algebraic numbers separate long before
            raise ArithmeticError("could not separate a nonzero value from 0")
