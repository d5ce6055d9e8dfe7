"""Schwarzian derivatives of truncated series and the dilatation/distance scalars."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, SingularityError, TailError
from .maps import SClassMap, SigmaClassMap, leading_b_index
from .series import Mode, TruncatedSeries

__all__ = [
    "SchwarzianSeries",
    "BNormResult",
    "MetricValue",
    "schwarzian",
    "hyperbolic_density",
    "bnorm",
    "metric_from_dilatation",
    "homotopy_dilatation_bound",
    "homotopy_dilatation_leading",
    "schwarzian_coeff_bound",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SchwarzianSeries:
    """A truncated Schwarzian.

    ``domain == "disk"``: Taylor series in ``z``.  ``domain == "exterior"``: the
    series is in ``w = 1/z`` (same convention as :class:`SigmaClassMap`), so the
    required ``O(z^-4)`` decay reads "valuation >= 4".

    ``growth_radius`` certifies ``|s_k| <= C (k+4)^2 rho^(k+2)`` for the dropped
    coefficients (``None``: no bound known, e.g. for a bare series).
    """

    series: TruncatedSeries
    domain: str = "disk"
    growth_radius: float | None = None

    def __post_init__(self):
        if self.domain not in ("disk", "exterior"):
            raise DomainError(f"unknown domain tag {self.domain!r}")
        if self.domain == "exterior":
            s = self.series
            for k in range(s.valuation, min(4, s.precision)):
                if s.coeff(k):
                    raise DomainError("exterior Schwarzian must decay like z^-4")

    def coeff(self, k: int):
        return self.series.coeff(k)

    def evaluate(self, x):
        """Value at ``x``: a point of the disk, or ``z`` with ``|z| > 1`` on the exterior."""
        if self.domain == "exterior":
            return self.series.evaluate(1 / complex(x))
        return self.series.evaluate(x)


def _taylor_schwarzian(f: TruncatedSeries) -> TruncatedSeries:
    if f.valuation < 0:
        raise SingularityError("Schwarzian at 0 needs a Taylor series")
    d1 = f.derivative()
    if d1.valuation != 0 or not d1.coeffs[0]:
        raise SingularityError("f'(0) = 0: f is not locally univalent at the expansion point")
    if d1.order < 2:
        raise SingularityError("too few terms: the Schwarzian needs f through z^3")
    d2 = d1.derivative()
    p = d2 * d1.reciprocal()
    half = Fraction(1, 2) if f.mode is Mode.EXACT else 0.5
    s = p.derivative() - (p * p).scale(half)
    return s


def schwarzian(f) -> SchwarzianSeries:
    """``S_f = (f''/f')' - (f''/f')^2 / 2`` as a truncated series.

    Accepts a bare :class:`TruncatedSeries` (Taylor at 0), an :class:`SClassMap`
    or a :class:`SigmaClassMap`.  For ``F`` in Sigma, ``S_F(z) = w^4 S_g(w)``
    with ``w = 1/z`` and ``g = 1/F(1/w)``, so ``z^4 S_F(z) -> S_g(0) = -6 b_1``.
    """
    if isinstance(f, SClassMap):
        return SchwarzianSeries(_taylor_schwarzian(f.series), "disk", f.growth_radius)
    if isinstance(f, SigmaClassMap):
        g = f.series.reciprocal()
        s = _taylor_schwarzian(g)
        return SchwarzianSeries(s.shift(4), "exterior", 1.0)
    if isinstance(f, TruncatedSeries):
        return SchwarzianSeries(_taylor_schwarzian(f), "disk", None)
    raise TypeError(f"cannot take the Schwarzian of {type(f).__name__}")


def hyperbolic_density(z, domain: str = "disk") -> float:
    """``1/(1-|z|^2)`` on the disk, ``1/(|z|^2-1)`` on its exterior."""
    r2 = abs(complex(z)) ** 2
    if domain == "disk":
        if r2 >= 1:
            raise DomainError(f"|z| = {math.sqrt(r2)} is not inside the unit disk")
        return 1.0 / (1.0 - r2)
    if domain == "exterior":
        if r2 <= 1:
            raise DomainError(f"|z| = {math.sqrt(r2)} is not outside the unit disk")
        return 1.0 / (r2 - 1.0)
    raise DomainError(f"unknown domain tag {domain!r}")


_COEFF_CONST = 6 * math.e ** 2 / 16


def schwarzian_coeff_bound(k: int, rho: float = 1.0) -> float:
    """``|s_k| <= 6 e^2 (k+4)^2 / 16 * rho^(k+2)`` for a univalent map with growth radius rho.

    From ``|S_f(z)| <= 6/(1-|z|^2)^2`` and Cauchy's estimate on ``|z|^2 = k/(k+4)``.
    """
    return _COEFF_CONST * (k + 4) ** 2 * rho ** (k + 2)


def _tail(last: int, r: float, rho: float) -> float:
    """``sum_{k > last} schwarzian_coeff_bound(k, rho) r^k``."""
    if rho == 0 or r == 0:
        return 0.0
    x = rho * r
    if x >= 1:
        return math.inf
    total = 0.0
    k = last + 1
    while True:
        term = schwarzian_coeff_bound(k, rho) * r ** k
        ratio = ((k + 5) / (k + 4)) ** 2 * x
        if ratio < 1:
            return total + term / (1 - ratio)
        total += term
        k += 1


@dataclass(frozen=True)
class BNormResult:
    lower: float
    tail_note: str
    max_weighted_tail: float
    grid: tuple


def _grid_points(n_radii: int, n_angles: int, r_max: float):
    radii = [0.0] + [r_max * float(Fraction(i, n_radii)) for i in range(1, n_radii + 1)]
    angles = [2 * math.pi * float(Fraction(j, n_angles)) for j in range(n_angles)]
    return radii, angles


def bnorm(phi: SchwarzianSeries, n_radii: int = 32, n_angles: int = 64, r_max: float = 0.9,
          max_tail: float = 1e-3) -> BNormResult:
    """Certified lower bound for ``sup lambda^-2 |phi|`` over a polar grid.

    Points sit at radii ``r_max * i / n_radii`` and angles ``2 pi j / n_angles``;
    doubling either count refines the grid, so the bound never drops.  Each
    sample is reduced by the tail of the dropped coefficients and by a
    floating-point rounding allowance.  On the exterior the grid lives in the
    ``w = 1/z`` disk, where ``lambda^-2 |phi|`` becomes ``(1-|w|^2)^2 |S_g(w)|``.
    """
    if not 0 <= r_max < 1:
        raise DomainError("r_max must lie in [0, 1)")
    s = phi.series
    if phi.domain == "exterior":
        s = s.shift(-4)
    last = s.precision - 1
    if phi.growth_radius is None and r_max > 0:
        raise TailError("no coefficient bound for this Schwarzian: the truncation tail is uncontrolled")
    rho = phi.growth_radius or 0.0
    coeffs = np.array([complex(s.coeff(k)) for k in range(0, s.precision)], dtype=complex)
    absc = np.abs(coeffs)
    radii, angles = _grid_points(n_radii, n_angles, r_max)
    ks = np.arange(len(coeffs))
    best = 0.0
    worst_tail = 0.0
    ang = np.exp(1j * np.array(angles))
    for r in radii:
        tail = _tail(last, r, rho)
        tail += 4 * len(coeffs) * _EPS * float(np.dot(absc, r ** ks))
        weight = (1.0 - r * r) ** 2
        worst_tail = max(worst_tail, weight * tail)
        if weight * tail > max_tail:
            raise TailError(f"weighted truncation tail {weight * tail:.3e} at radius {r} exceeds {max_tail}; "
                            "raise the order or lower r_max")
        vals = np.polyval(coeffs[::-1], r * ang) if r > 0 else np.full(len(ang), coeffs[0])
        m = float(np.max(np.abs(vals)))
        best = max(best, weight * max(m - tail, 0.0))
    note = (f"grid {len(radii)}x{n_angles} up to r={r_max}; "
            f"max weighted tail {worst_tail:.3e}; value is a lower bound for the B-norm")
    return BNormResult(float(best), note, float(worst_tail), (n_radii, n_angles, r_max))


@dataclass(frozen=True)
class MetricValue:
    """Dilatation ``k``, Teichmueller distance ``tau = artanh k`` and Green value ``g = log k``."""

    k: float
    tau: float
    g: float

    def as_dict(self) -> dict:
        return {"k": self.k, "tau": self.tau, "g": "-inf" if self.g == -math.inf else self.g}


def metric_from_dilatation(k: float) -> MetricValue:
    k = float(k)
    if not 0 <= k < 1:
        raise DomainError(f"dilatation {k} outside [0, 1)")
    g = -math.inf if k == 0 else math.log(k)
    return MetricValue(k, math.atanh(k), g)


def _leading(F: SigmaClassMap, t):
    m = leading_b_index(F)
    at = abs(complex(t))
    if at > 1:
        raise DomainError(f"|t| = {at} exceeds 1")
    return m, at


def homotopy_dilatation_bound(F: SigmaClassMap, t) -> float:
    """``|t|^(m+1)`` for ``F_t(z) = t F(z/t)``, ``m`` the first index with ``b_m != 0``."""
    m, at = _leading(F, t)
    if m is None:
        return 0.0
    return at ** (m + 1)


def homotopy_dilatation_leading(F: SigmaClassMap, t) -> float:
    """Leading small-``t`` term ``((m+1)/2) |b_m| |t|^(m+1)`` of ``k(F_t)``."""
    m, at = _leading(F, t)
    if m is None:
        return 0.0
    return (m + 1) / 2 * abs(complex(F.b(m))) * at ** (m + 1)
