"""Normalized univalent maps of the disk (class S) and of its exterior (class Sigma).

An :class:`SClassMap` wraps the Taylor series ``z + a_2 z^2 + ...``.  A
:class:`SigmaClassMap` wraps ``z + b_0 + b_1/z + ...``; its series is stored in
the variable ``w = 1/z`` so that it reads ``w^-1 + b_0 + b_1 w + ...`` and the
ordinary truncation at high powers of ``w`` applies.  With that convention the
circle inversion ``F(z) = 1/f(1/z)`` is literally the series reciprocal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, NormalizationError
from .gaussian import QQi, to_qqi
from .series import Mode, TruncatedSeries

__all__ = [
    "SClassMap",
    "SigmaClassMap",
    "circle_inversion",
    "inverse_circle_inversion",
    "eval_derivative",
    "leading_b_index",
]


def _is_one(c, mode: Mode) -> bool:
    if mode is Mode.EXACT:
        return c == 1
    return c == 1 or abs(c - 1) <= 1e-13


@dataclass(frozen=True)
class SClassMap:
    """Truncated ``f(z) = z + sum a_n z^n`` with a proof-of-univalence tag.

    ``growth_radius`` is a radius ``rho`` with ``|a_n| <= n rho^(n-1)`` for
    every dropped coefficient: 1 from de Branges' theorem, smaller after a
    homotopy ``f(tz)/t``, 0 for a polynomial that is known exactly.
    """

    series: TruncatedSeries
    provenance: str
    params: dict = field(default_factory=dict, compare=False)
    growth_radius: float = 1.0

    def __post_init__(self):
        s = self.series
        if not self.provenance:
            raise NormalizationError("every S-class map needs a provenance tag")
        if s.valuation != 1:
            raise NormalizationError(f"S-class series must start at z^1, got z^{s.valuation}")
        if not _is_one(s.coeffs[0], s.mode):
            raise NormalizationError("S-class series must have a_1 = 1")

    @property
    def mode(self) -> Mode:
        return self.series.mode

    @property
    def order(self) -> int:
        """Number of known coefficients beyond ``z`` (``a_2 .. a_{order+1}``)."""
        return self.series.order

    @property
    def max_index(self) -> int:
        return self.series.order + 1

    def a(self, n: int):
        return self.series.coeff(n)

    def coefficients(self) -> list:
        """``[a_1, a_2, ..., a_{order+1}]``."""
        return list(self.series.coeffs)

    def to_approx(self) -> "SClassMap":
        return SClassMap(self.series.to_approx(), self.provenance, dict(self.params), self.growth_radius)


@dataclass(frozen=True)
class SigmaClassMap:
    """Truncated ``F(z) = z + b_0 + b_1 z^-1 + ...`` stored in ``w = 1/z``.

    ``omits_zero`` records that ``F`` extends with ``F(0) = 0`` (0 is not in
    ``F(|z|>1)``).  ``dilatation`` is a proven upper bound for the extremal
    dilatation ``k(F)`` when one is known; ``dilatation_exact`` marks it sharp.
    """

    series: TruncatedSeries
    provenance: str
    omits_zero: bool = True
    params: dict = field(default_factory=dict, compare=False)
    dilatation: float | None = None
    dilatation_exact: bool = False

    def __post_init__(self):
        s = self.series
        if not self.provenance:
            raise NormalizationError("every Sigma-class map needs a provenance tag")
        if s.valuation != -1:
            raise NormalizationError("Sigma-class series must start at w^-1 (the z term)")
        if not _is_one(s.coeffs[0], s.mode):
            raise NormalizationError("Sigma-class series must have leading coefficient 1")

    @property
    def mode(self) -> Mode:
        return self.series.mode

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def max_index(self) -> int:
        """Largest ``j`` with ``b_j`` known."""
        return self.series.order - 1

    def b(self, j: int):
        return self.series.coeff(j)

    def coefficients(self) -> list:
        """``[b_0, b_1, ..., b_{max_index}]``."""
        return list(self.series.coeffs[1:])

    def to_approx(self) -> "SigmaClassMap":
        return SigmaClassMap(self.series.to_approx(), self.provenance, self.omits_zero,
                             dict(self.params), self.dilatation, self.dilatation_exact)


def circle_inversion(f: SClassMap) -> SigmaClassMap:
    """``F_f(z) = 1/f(1/z)``; truncation order is preserved."""
    if not isinstance(f, SClassMap):
        raise NormalizationError("circle_inversion expects a normalized S-class map")
    s = f.series
    if s.coeff(1) != 1 and not _is_one(s.coeff(1), s.mode):
        raise NormalizationError("input must satisfy a_0 = 0, a_1 = 1")
    F = s.reciprocal()
    return SigmaClassMap(F, f.provenance + "|inversion", True, dict(f.params))


def inverse_circle_inversion(F: SigmaClassMap) -> SClassMap:
    """``f(z) = 1/F(1/z)``, the inverse of :func:`circle_inversion`."""
    if not F.omits_zero:
        raise NormalizationError("F does not omit 0, so 1/F(1/z) is not in S")
    s = F.series.reciprocal()
    return SClassMap(s, F.provenance + "|inversion", dict(F.params))


def _falling(n: int, q: int) -> int:
    out = 1
    for k in range(q):
        out *= n - k
    return out


def derivative_tail_bound(order_index: int, q: int, r: float, rho: float = 1.0) -> float:
    """Bound ``sum_{n > N} n (n)_q rho^(n-1) r^(n-q)`` with ``N = order_index``.

    The term ratio is decreasing in ``n``, so once it drops below one the rest
    is dominated by a geometric series.
    """
    if rho == 0 or r == 0 and q <= order_index:
        return 0.0
    x = rho * r
    if x >= 1:
        return math.inf
    n = order_index + 1
    total = 0.0
    while True:
        term = n * _falling(n, q) * rho ** (n - 1) * r ** (n - q) if n >= q else 0.0
        nxt = n + 1
        ratio = (nxt / n) * (nxt / (nxt - q)) * x if n >= q else None
        if ratio is not None and ratio < 1:
            total += term / (1 - ratio)
            return total
        total += term
        n += 1
        if n > 10_000_000:  # pragma: no cover - guarded by x < 1
            return math.inf


def eval_derivative(f: SClassMap, z0, q: int):
    """``(f^(q)(z0) from the retained terms, bound on the dropped terms)``."""
    if q < 0:
        raise DomainError("derivative order must be non-negative")
    r = abs(complex(z0))
    if r >= 1:
        raise DomainError(f"|z0| = {r} is not inside the unit disk")
    s = f.series
    exact = s.mode is Mode.EXACT and not isinstance(z0, (float, complex))
    if exact:
        z = to_qqi(z0)
        val = QQi(0)
    else:
        z = complex(z0)
        val = 0j
    for n in range(max(q, 1), s.precision):
        c = s.coeff(n)
        if not c:
            continue
        term = c * _falling(n, q)
        if exact:
            val = val + term * z ** (n - q)
        else:
            val = val + complex(term) * z ** (n - q)
    tail = derivative_tail_bound(s.precision - 1, q, r, f.growth_radius)
    return val, tail


def leading_b_index(F: SigmaClassMap, tol: float = 0.0):
    """Index ``m >= 1`` of the first nonzero ``b_m`` (``None`` for a translation)."""
    for j in range(1, F.max_index + 1):
        c = F.b(j)
        if F.mode is Mode.EXACT:
            if c:
                return j
        elif abs(c) > tol:
            return j
    return None
