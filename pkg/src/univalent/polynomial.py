"""Sparse polynomials with exact Gaussian-rational coefficients in named symbols.

Symbols are ``a<n>`` (coefficients of an S-class map), ``b<n>`` (coefficients
of a Sigma-class map) and ``D[q,j]`` (the q-th derivative at the j-th point).
Monomials are stored as sorted tuples so equal polynomials compare equal and
serialize to identical JSON.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Callable, Mapping

from .errors import SpecError
from .gaussian import QQi, to_qqi

__all__ = ["Poly", "symbol_key", "parse_symbol", "a", "b", "D"]

_SYM = re.compile(r"^(?:([ab])(\d+)|D\[(\d+),(\d+)\])$")


def parse_symbol(name: str):
    """``"a3" -> ("a", 3)``, ``"D[2,0]" -> ("D", 2, 0)``."""
    m = _SYM.match(name)
    if not m:
        raise SpecError(f"unknown symbol {name!r}")
    if m.group(1):
        return (m.group(1), int(m.group(2)))
    return ("D", int(m.group(3)), int(m.group(4)))


def symbol_key(name: str):
    p = parse_symbol(name)
    kind = {"a": 0, "b": 1, "D": 2}[p[0]]
    if kind == 2:
        return (kind, p[2], p[1])
    return (kind, p[1], 0)


def _exact(c) -> QQi:
    if isinstance(c, float):
        # decimal rendering, so 0.1 means 1/10 rather than its binary neighbour
        return QQi(Fraction(repr(c)))
    if isinstance(c, complex):
        return QQi(Fraction(repr(c.real)), Fraction(repr(c.imag)))
    try:
        return to_qqi(c)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad coefficient {c!r}") from exc


def _mono(items) -> tuple:
    merged: dict = {}
    for s, e in items:
        parse_symbol(s)
        if not isinstance(e, int) or e < 0:
            raise SpecError(f"exponent of {s} must be a non-negative integer")
        merged[s] = merged.get(s, 0) + e
    return tuple(sorted(((s, e) for s, e in merged.items() if e), key=lambda se: symbol_key(se[0])))


class Poly:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean: dict = {}
        for mono, c in (terms or {}).items():
            m = _mono(mono.items() if isinstance(mono, Mapping) else mono)
            c = _exact(c)
            clean[m] = clean[m] + c if m in clean else c
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "Poly":
        return cls({((name, power),): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]))

    def symbols(self) -> set:
        return {s for m in self._terms for s, _ in m}

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, QQi)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.sorted_terms()))

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono(m1 + m2)
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return Poly._from_clean(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    @classmethod
    def _from_clean(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = {m: c for m, c in terms.items() if c}
        return p

    def substitute(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Replace symbols by polynomials; unmapped symbols stay."""
        out = Poly()
        cache: dict = {}
        for mono, c in self._terms.items():
            term = Poly.constant(c)
            for s, e in mono:
                if s in mapping:
                    key = (s, e)
                    if key not in cache:
                        cache[key] = mapping[s] ** e
                    term = term * cache[key]
                else:
                    term = term * Poly.symbol(s, e)
            out = out + term
        return out

    def evaluate(self, value_of: Callable[[str], object]):
        """Sum of ``c * prod value_of(s)^e``; exact when every value is exact."""
        total = None
        for mono, c in self.sorted_terms():
            term = c
            for s, e in mono:
                term = term * value_of(s) ** e
            total = term if total is None else total + term
        return QQi(0) if total is None else total

    def weighted_degrees(self, weight: Callable[[str], int | None]) -> dict:
        """``monomial -> sum e * weight(s)``, ``None`` if some weight is undefined."""
        out = {}
        for mono in self._terms:
            d = 0
            for s, e in mono:
                w = weight(s)
                if w is None:
                    d = None
                    break
                d += w * e
            out[mono] = d
        return out

    def to_json_obj(self) -> list:
        return [{"coeff": str(c), "monomial": {s: e for s, e in m}} for m, c in self.sorted_terms()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "Poly":
        if not isinstance(obj, list):
            raise SpecError("a serialized polynomial is a list of terms")
        terms: dict = {}
        for t in obj:
            if not isinstance(t, dict) or "coeff" not in t or "monomial" not in t:
                raise SpecError(f"malformed term {t!r}")
            mono = _mono(t["monomial"].items())
            c = t["coeff"]
            c = QQi.parse(c) if isinstance(c, str) else _exact(c)
            terms[mono] = terms[mono] + c if mono in terms else c
        return cls._from_clean(terms)

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_obj(json.loads(text))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            m = "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)
            cs = str(c)
            if not m:
                parts.append(cs)
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"({cs})*{m}" if not c.is_real() else f"{cs}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def _mono_key(m: tuple):
    return tuple((symbol_key(s), e) for s, e in m)


def a(n: int, power: int = 1) -> Poly:
    return Poly.symbol(f"a{n}", power)


def b(n: int, power: int = 1) -> Poly:
    return Poly.symbol(f"b{n}", power)


def D(q: int, j: int, power: int = 1) -> Poly:
    return Poly.symbol(f"D[{q},{j}]", power)
