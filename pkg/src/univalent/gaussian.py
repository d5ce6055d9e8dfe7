"""Exact Gaussian rationals, the scalar field of exact-mode arithmetic.

A value is stored as ``(re + im*i) / den`` with integer numerators, a positive
denominator and ``gcd(re, im, den) == 1``.  This keeps one gcd per operation
instead of the two a pair of :class:`fractions.Fraction` would need.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = ["QQi", "is_exact_scalar", "to_qqi"]


def _reduce(a: int, b: int, d: int):
    if d < 0:
        a, b, d = -a, -b, -d
    g = math.gcd(math.gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return a, b, d


class QQi:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi) and im == 0:
            self._a, self._b, self._d = re._a, re._b, re._d
            self._hash = None
            return
        re = _as_fraction(re)
        im = _as_fraction(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._a, self._b, self._d = _reduce(a, b, d)
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "QQi":
        obj = cls.__new__(cls)
        obj._a, obj._b, obj._d = _reduce(a, b, d)
        obj._hash = None
        return obj

    @classmethod
    def parse(cls, text: str) -> "QQi":
        """Parse ``"3/4"``, ``"-2i"``, ``"1/2-3/4i"`` or ``"0.25+1i"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not part of an exponent or the start
        m = re.match(r"^(.*?)([+-])([^+-]*)$", body)
        if m and m.group(1) and not m.group(1).endswith(("e", "E")):
            real_part, sign, imag = m.group(1), m.group(2), m.group(3)
        else:
            real_part, sign, imag = "0", "", body
            if imag.startswith(("+", "-")):
                sign, imag = imag[0], imag[1:]
        imag = imag or "1"
        im = Fraction(imag)
        if sign == "-":
            im = -im
        return cls(Fraction(real_part), im)

    @property
    def real(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "QQi":
        return QQi._raw(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __neg__(self) -> "QQi":
        return QQi._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> "QQi":
        return self

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QQi._raw(self._a + o._a, self._b + o._b, self._d)
        return QQi._raw(self._a * o._d + o._a * self._d,
                        self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QQi._raw(self._a - o._a, self._b - o._b, self._d)
        return QQi._raw(self._a * o._d - o._a * self._d,
                        self._b * o._d - o._b * self._d, self._d * o._d)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        if b == 0 and e == 0:
            return QQi._raw(a * c, 0, self._d * o._d)
        return QQi._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by exact zero")
        # (a+bi)/d / ((c+ei)/f) = f (a+bi)(c-ei) / (d (c^2+e^2))
        a, b, c, e = self._a, self._b, o._a, o._b
        n2 = c * c + e * e
        return QQi._raw(o._d * (a * c + b * e), o._d * (b * c - a * e), self._d * n2)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (QQi(1) / self) ** (-n)
        result = QQi._raw(1, 0, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __repr__(self):
        return f"QQi({self})"

    def __str__(self):
        re_part, im_part = self.real, self.imag
        if im_part == 0:
            return str(re_part)
        if im_part == 1:
            im_s = "i"
        elif im_part == -1:
            im_s = "-i"
        else:
            im_s = f"{im_part}i"
        if re_part == 0:
            return im_s
        if not im_s.startswith("-"):
            im_s = "+" + im_s
        return f"{re_part}{im_s}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _coerce(x):
    if isinstance(x, QQi):
        return x
    if isinstance(x, bool):
        return QQi._raw(int(x), 0, 1)
    if isinstance(x, int):
        return QQi._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return QQi._raw(x.numerator, 0, x.denominator)
    return None


def is_exact_scalar(x) -> bool:
    return isinstance(x, (QQi, int, Fraction)) and not isinstance(x, float)


def to_qqi(x) -> QQi:
    """Coerce an exact scalar to :class:`QQi`; floats are rejected."""
    q = _coerce(x)
    if q is None:
        if isinstance(x, str):
            return QQi.parse(x)
        raise TypeError(f"not an exact scalar: {x!r}")
    return q
