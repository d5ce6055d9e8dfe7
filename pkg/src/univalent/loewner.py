"""Univalent test maps from the radial Loewner equation with a piecewise-constant driver.

With ``w(z, t) = e^{-t} g(z, t)`` solving ``dw/dt = -w (1 + k w)/(1 - k w)``,
``k = e^{i lambda(t)}``, the map ``g(., T)`` lies in S for every ``T``.  The
coefficients of ``g`` obey

    dg/dt = -2 g h / (1 - h),    h = k e^{-t} g,

whose right-hand side at ``z^n`` only involves ``c_2 .. c_{n-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationError
from .maps import SClassMap
from .series import Mode, TruncatedSeries

__all__ = ["PiecewiseConstantDriver", "loewner_sample", "random_driver", "STEP_TOLERANCE"]

STEP_TOLERANCE = 1e-9
_MAX_STEPS_PER_UNIT = 1 << 15


@dataclass(frozen=True)
class PiecewiseConstantDriver:
    """``lambda(t) = values[i]`` on the i-th interval of length ``durations[i]``."""

    durations: tuple
    values: tuple

    def __post_init__(self):
        if len(self.durations) != len(self.values):
            raise DomainError("durations and values must have the same length")
        for d in self.durations:
            if not (d >= 0 and math.isfinite(d)):
                raise DomainError(f"bad piece duration {d}")
        for v in self.values:
            if not math.isfinite(v):
                raise DomainError("driver values must be finite")

    @classmethod
    def constant(cls, value: float, T: float) -> "PiecewiseConstantDriver":
        return cls((float(T),), (float(value),))

    @property
    def total_time(self) -> float:
        return float(sum(self.durations))


def _rhs(c: np.ndarray, t: float, kappa: complex) -> np.ndarray:
    # c holds the coefficients of z^1 .. z^N (c[0] == 1)
    n = len(c)
    h = kappa * math.exp(-t) * c
    # q = h / (1 - h) from q = h + h*q, both starting at z^1
    q = np.zeros(n, dtype=complex)
    q[0] = h[0]
    for m in range(1, n):
        q[m] = h[m] + np.dot(h[:m], q[m - 1 :: -1])
    # product g*q starts at z^2; shift to align with c's z^1 origin
    gq = np.convolve(c, q)[: n - 1]
    out = np.zeros(n, dtype=complex)
    out[1:] = -2.0 * gq
    return out


def _integrate(c0: np.ndarray, t0: float, dt_total: float, kappa: complex, steps: int) -> np.ndarray:
    c = c0.copy()
    h = dt_total / steps
    t = t0
    for _ in range(steps):
        k1 = _rhs(c, t, kappa)
        k2 = _rhs(c + 0.5 * h * k1, t + 0.5 * h, kappa)
        k3 = _rhs(c + 0.5 * h * k2, t + 0.5 * h, kappa)
        k4 = _rhs(c + h * k3, t + h, kappa)
        c = c + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return c


def _piece(c0, t0, duration, kappa, tol):
    steps = max(4, int(math.ceil(8 * duration)))
    prev = _integrate(c0, t0, duration, kappa, steps)
    cap = max(_MAX_STEPS_PER_UNIT, int(_MAX_STEPS_PER_UNIT * duration))
    while True:
        steps *= 2
        cur = _integrate(c0, t0, duration, kappa, steps)
        diff = float(np.max(np.abs(cur - prev)))
        if diff < tol:
            return cur
        if steps >= cap:
            raise IntegrationError(f"step halving stalled at difference {diff:.3e}", diff)
        prev = cur


def loewner_sample(driver: PiecewiseConstantDriver, order: int = 16, tol: float = STEP_TOLERANCE) -> SClassMap:
    """Coefficients ``a_1 .. a_{order+1}`` of the Loewner map at the driver's end time."""
    if order < 0:
        raise DomainError("order must be non-negative")
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    t = 0.0
    for d, lam in zip(driver.durations, driver.values):
        if d == 0:
            continue
        c = _piece(c, t, d, complex(math.cos(lam), math.sin(lam)), tol)
        t += d
    coeffs = [1.0 + 0j] + [complex(x) for x in c[1:]]
    s = TruncatedSeries(1, tuple(coeffs), Mode.APPROX)
    params = {"kind": "loewner", "durations": list(driver.durations), "values": list(driver.values)}
    return SClassMap(s, "loewner", params)


def random_driver(seed: int, pieces: int = 4, T: float = 1.0) -> PiecewiseConstantDriver:
    """Reproducible driver: random split of ``[0, T]`` with uniform angles."""
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(pieces))
    return PiecewiseConstantDriver(tuple(float(x) * T for x in w),
                                   tuple(float(x) for x in rng.uniform(0, 2 * math.pi, pieces)))
