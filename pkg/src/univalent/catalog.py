"""Constructors for explicitly univalent maps and the two holomorphic homotopies.

Rotation convention: ``koebe(theta)`` has coefficients ``a_n = n e^{-i(n-1)theta}``,
i.e. it is ``z / (1 - e^{-i theta} z)^2``, and the root transforms inherit the
same unit.  Angles that are multiples of a quarter turn are carried as exact
Gaussian units so their equality cases run in exact arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NormalizationError
from .gaussian import QQi, to_qqi
from .maps import SClassMap, SigmaClassMap, leading_b_index
from .series import Mode, TruncatedSeries, pow_series, substitute_power

__all__ = [
    "DEFAULT_ORDER",
    "MAX_ORDER",
    "HomotopyParam",
    "unit",
    "unit_from_turns",
    "identity",
    "koebe",
    "koebe_root",
    "sigma_root_map",
    "sigma_identity",
    "affine_sigma",
    "homotopy_s",
    "homotopy_sigma",
    "small_k_extremal",
    "sigma_square_root_transform",
]

DEFAULT_ORDER = 64
MAX_ORDER = 512

_QUARTER_UNITS = {0: QQi(1), 1: QQi(0, 1), 2: QQi(-1), 3: QQi(0, -1)}


def _check_order(order: int):
    if not 0 <= order <= MAX_ORDER:
        raise DomainError(f"truncation order {order} outside [0, {MAX_ORDER}]")


def unit_from_turns(turns) -> QQi | complex:
    """``e^{2 pi i turns}``, exact when ``turns`` is a multiple of 1/4."""
    turns = Fraction(turns) if not isinstance(turns, float) else turns
    if isinstance(turns, Fraction) and (turns * 4).denominator == 1:
        return _QUARTER_UNITS[int(turns * 4) % 4]
    return cmath.exp(2j * math.pi * float(turns))


def unit(theta) -> QQi | complex:
    """``e^{i theta}``; exact for theta in {0, pi/2, pi, 3pi/2}."""
    if isinstance(theta, (QQi, complex)):
        return theta
    for k in range(4):
        if theta == k * math.pi / 2:
            return _QUARTER_UNITS[k]
    return cmath.exp(1j * float(theta))


def _is_exact(x) -> bool:
    return isinstance(x, (QQi, int, Fraction)) and not isinstance(x, bool)


def _abs(x) -> float:
    return abs(complex(x))


def _abs_le_one(x) -> bool:
    if _is_exact(x):
        return to_qqi(x).abs2() <= 1
    return abs(complex(x)) <= 1 + 1e-15


def _mode_for(*values) -> Mode:
    return Mode.EXACT if all(_is_exact(v) for v in values) else Mode.APPROX


def _conj(u):
    if isinstance(u, QQi):
        return u.conjugate()
    return complex(u).conjugate()


@dataclass(frozen=True)
class HomotopyParam:
    """Homotopy parameter ``t`` with ``|t| <= 1``."""

    t: object

    def __post_init__(self):
        if not _abs_le_one(self.t):
            raise DomainError(f"homotopy parameter |t| = {_abs(self.t)} exceeds 1")


def _param(t) -> object:
    return t.t if isinstance(t, HomotopyParam) else HomotopyParam(t).t


def identity(order: int = DEFAULT_ORDER, mode: Mode | str = Mode.EXACT) -> SClassMap:
    _check_order(order)
    s = TruncatedSeries.monomial(1, order, 1, mode)
    return SClassMap(s, "identity", {"kind": "identity"}, growth_radius=0.0)


def sigma_identity(order: int = DEFAULT_ORDER, mode: Mode | str = Mode.EXACT) -> SigmaClassMap:
    s = TruncatedSeries.monomial(-1, order, 1, mode)
    return SigmaClassMap(s, "identity", True, {"kind": "identity"}, 0.0, True)


def koebe(theta=0.0, order: int = DEFAULT_ORDER, *, rotation=None) -> SClassMap:
    """``kappa_theta(z) = z + sum n e^{-i(n-1)theta} z^n``.

    ``rotation`` may supply ``e^{i theta}`` directly (an exact Gaussian unit
    keeps the result exact).
    """
    _check_order(order)
    u = unit(theta) if rotation is None else rotation
    rho = _conj(u)
    mode = _mode_for(rho)
    if mode is Mode.EXACT:
        rho = to_qqi(rho)
        coeffs = [rho ** (n - 1) * n for n in range(1, order + 2)]
    else:
        rho = complex(rho)
        coeffs = [n * rho ** (n - 1) for n in range(1, order + 2)]
    s = TruncatedSeries.from_coeffs(coeffs, valuation=1, mode=mode)
    return SClassMap(s, "koebe", {"kind": "koebe", "theta": _param_repr(theta, rotation)})


def _param_repr(theta, rotation):
    return str(rotation) if rotation is not None else theta


def _root_series(c, m: int, exponent, order: int) -> TruncatedSeries:
    """Taylor series ``z (1 - c z^m)^exponent`` through ``z^(order+1)``."""
    mode = _mode_for(c, exponent)
    inner_order = -(-(order + 1) // m) - 1
    base = TruncatedSeries.from_coeffs([1, -c if mode is Mode.APPROX else -to_qqi(c)],
                                       order=max(inner_order, 1), mode=mode)
    if inner_order < 1:
        base = base.truncate(max(inner_order, 0))
    p = pow_series(base, exponent if mode is Mode.EXACT else float(exponent))
    return substitute_power(p, m).truncate(order).shift(1)


def koebe_root(m: int, theta=0.0, order: int = DEFAULT_ORDER, *, rotation=None) -> SClassMap:
    """``kappa_{m,theta}(z) = kappa_theta(z^m)^{1/m} = z (1 - e^{-i theta} z^m)^{-2/m}``."""
    if m < 1:
        raise DomainError("root transform needs m >= 1")
    _check_order(order)
    u = unit(theta) if rotation is None else rotation
    rho = _conj(u)
    s = _root_series(rho, m, Fraction(-2, m), order)
    return SClassMap(s, f"koebe_root(m={m})",
                     {"kind": "koebe_root", "m": m, "theta": _param_repr(theta, rotation)})


def sigma_root_map(m: int, t, order: int = DEFAULT_ORDER) -> SigmaClassMap:
    """``F_{m,t}(z) = z (1 - t z^{-(m+1)})^{2/(m+1)}`` with ``b_m = -2t/(m+1)``.

    ``m = 0`` is allowed and gives the rotated Koebe inversion ``z - 2t + t^2/z``.
    Its extremal dilatation is ``|t|``.
    """
    if m < 0:
        raise DomainError("sigma_root_map needs m >= 0")
    if not _abs_le_one(t):
        raise DomainError(f"|t| = {_abs(t)} exceeds 1")
    _check_order(order)
    mode = _mode_for(t)
    e = Fraction(2, m + 1)
    inner_order = order // (m + 1)
    tt = to_qqi(t) if mode is Mode.EXACT else complex(t)
    base = TruncatedSeries.from_coeffs([1, -tt], order=max(inner_order, 1), mode=mode)
    if inner_order < 1:
        base = base.truncate(0)
    p = pow_series(base, e if mode is Mode.EXACT else float(e))
    u = substitute_power(p, m + 1).truncate(order)
    return SigmaClassMap(u.shift(-1), f"sigma_root(m={m})", True,
                         {"kind": "sigma_root", "m": m, "t": str(t)}, _abs(t), True)


def _affine_omits_zero(b0, b1) -> bool:
    """Is ``0`` in the image of the closed disk under ``z + b0 + b1 conj(z)``?"""
    b0c, b1c = complex(b0), complex(b1)
    if _is_exact(b0) and to_qqi(b0) == 0:
        return True
    a = abs(b1c)
    if a < 1:
        z = (-b0c + b1c * b0c.conjugate()) / (1 - a * a)
        return abs(z) <= 1 + 1e-15
    # |b1| = 1: the disk collapses onto the segment [-2, 2] * sqrt(b1)
    s = -b0c / cmath.sqrt(b1c)
    return abs(s.imag) <= 1e-12 and abs(s.real) <= 2 + 1e-12


def affine_sigma(b0, b1, order: int = DEFAULT_ORDER) -> SigmaClassMap:
    """``F(z) = z + b0 + b1/z``; affine extension ``z + b0 + b1 conj(z)`` has dilatation ``|b1|``."""
    if not _abs_le_one(b1):
        raise DomainError(f"|b1| = {_abs(b1)} > 1: z + b0 + b1/z is not injective on |z| > 1")
    if order < 2:
        raise DomainError("affine_sigma needs order >= 2")
    s = TruncatedSeries.from_coeffs([1, b0, b1], valuation=-1, order=order)
    return SigmaClassMap(s, "affine", _affine_omits_zero(b0, b1),
                         {"kind": "affine", "b0": str(b0), "b1": str(b1)}, _abs(b1), True)


def _scaled(series: TruncatedSeries, t, offset: int) -> TruncatedSeries:
    """Multiply the coefficient of ``x^k`` by ``t^(k + offset)``."""
    mode = series.mode if _is_exact(t) else Mode.APPROX
    if mode is Mode.EXACT:
        t = to_qqi(t)
        coeffs = [c * t ** (k + offset) for k, c in zip(series.exponents(), series.coeffs)]
    else:
        t = complex(t)
        coeffs = [complex(c) * t ** (k + offset) for k, c in zip(series.exponents(), series.coeffs)]
    return TruncatedSeries(series.valuation, tuple(coeffs), mode)


def homotopy_s(f: SClassMap, t) -> SClassMap:
    """``f_t(z) = f(tz)/t``: ``a_n -> a_n t^(n-1)``; ``t = 0`` gives the identity."""
    t = _param(t)
    s = _scaled(f.series, t, -1)
    params = dict(f.params)
    params["homotopy_t"] = str(t)
    return SClassMap(s, f.provenance + "|homotopy", params, f.growth_radius * _abs(t))


def homotopy_sigma(F: SigmaClassMap, t) -> SigmaClassMap:
    """``F_t(z) = t F(z/t)``: ``b_n -> b_n t^(n+1)``; ``t = 0`` gives ``z``."""
    t = _param(t)
    s = _scaled(F.series, t, 1)
    m = leading_b_index(F)
    if m is None:
        k, sharp = 0.0, True
    elif F.dilatation_exact and F.dilatation is not None:
        k, sharp = F.dilatation * _abs(t) ** (m + 1), True
    else:
        k, sharp = _abs(t) ** (m + 1), False
    params = dict(F.params)
    params["homotopy_t"] = str(t)
    return SigmaClassMap(s, F.provenance + "|homotopy", F.omits_zero, params, k, sharp)


def small_k_extremal(n: int, k, t=1, order: int = DEFAULT_ORDER) -> SClassMap:
    """``f_{n-1,t}(z) = z (1 - k t z^(n-1))^(-2/(n-1)) = z + 2kt/(n-1) z^n + ...``.

    Extremal for ``|a_n| <= 2k/(n-1)`` among maps with ``k``-quasiconformal
    extensions fixing infinity, provided ``0 < k <= 1/(n^2+1)`` and ``|t| = 1``.
    """
    if n < 3:
        raise DomainError("small_k_extremal needs n >= 3")
    kmax = Fraction(1, n * n + 1)
    if _is_exact(k):
        k_ok = 0 < Fraction(k) <= kmax
    else:
        k_ok = 0 < float(k) <= float(kmax) * (1 + 1e-12)
    if not k_ok:
        raise DomainError(f"k = {k} outside (0, 1/(n^2+1)] = (0, {kmax}]")
    if _is_exact(t):
        if to_qqi(t).abs2() != 1:
            raise DomainError("small_k_extremal needs |t| = 1")
    elif abs(abs(complex(t)) - 1) > 1e-12:
        raise DomainError("small_k_extremal needs |t| = 1")
    _check_order(order)
    c = to_qqi(k) * to_qqi(t) if _mode_for(k, t) is Mode.EXACT else complex(k) * complex(t)
    s = _root_series(c, n - 1, Fraction(-2, n - 1), order)
    return SClassMap(s, f"small_k_extremal(n={n})",
                     {"kind": "small_k_extremal", "n": n, "k": str(k), "t": str(t)})


def sigma_square_root_transform(F: SigmaClassMap) -> SigmaClassMap:
    """``F_2(z) = F(z^2)^{1/2} = z + (b_0/2)/z + ...``, an odd map."""
    if not F.omits_zero:
        raise NormalizationError("F(z^2)^(1/2) needs the F(0) = 0 normalization")
    u = F.series.shift(1)  # 1 + b_0 w + b_1 w^2 + ...
    half = Fraction(1, 2) if F.mode is Mode.EXACT else 0.5
    v = pow_series(substitute_power(u, 2), half)
    return SigmaClassMap(v.shift(-1), F.provenance + "|sqrt2", True, dict(F.params),
                         F.dilatation, F.dilatation_exact)
