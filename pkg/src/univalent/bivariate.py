"""Bivariate truncated polynomials in ``(X, Y)`` with ``i, j >= 1``.

Only what the Grunsky expansion needs: sums, truncated products and the
logarithm ``log(1 + P)``.  The kernel polynomial never has pure-``X`` or
pure-``Y`` terms, so neither does its logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModeError, TruncationError
from .gaussian import QQi
from .series import Mode, scalar_for

__all__ = ["BivariatePoly"]

_QZERO = QQi(0)


@dataclass(frozen=True)
class BivariatePoly:
    """Sparse map ``(i, j) -> coefficient`` with ``i + j <= cutoff``."""

    cutoff: int
    mode: Mode
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j) in self.terms:
            if i < 1 or j < 1:
                raise ValueError(f"exponent pair {(i, j)} must have i, j >= 1")
            if i + j > self.cutoff:
                raise TruncationError(f"exponent pair {(i, j)} exceeds cutoff {self.cutoff}")

    @classmethod
    def from_terms(cls, terms: dict, cutoff: int, mode: Mode | str | None = None):
        if mode is None:
            inexact = any(isinstance(v, (float, complex)) for v in terms.values())
            mode = Mode.APPROX if inexact else Mode.EXACT
        mode = Mode(mode)
        clean = {}
        for k, v in terms.items():
            v = scalar_for(v, mode)
            if v:
                clean[tuple(k)] = v
        return cls(cutoff, mode, clean)

    def coeff(self, i: int, j: int):
        if i + j > self.cutoff:
            raise TruncationError(f"({i}, {j}) lies beyond cutoff {self.cutoff}")
        return self.terms.get((i, j), _QZERO if self.mode is Mode.EXACT else 0j)

    def _check(self, other: "BivariatePoly"):
        if self.mode is not other.mode:
            raise ModeError("mode mismatch")

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        self._check(other)
        cutoff = min(self.cutoff, other.cutoff)
        out = {k: v for k, v in self.terms.items() if sum(k) <= cutoff}
        for k, v in other.terms.items():
            if sum(k) <= cutoff:
                out[k] = out[k] + v if k in out else v
        return BivariatePoly.from_terms(out, cutoff, self.mode)

    def scale(self, c) -> "BivariatePoly":
        c = scalar_for(c, self.mode)
        return BivariatePoly.from_terms({k: c * v for k, v in self.terms.items()}, self.cutoff, self.mode)

    def __mul__(self, other: "BivariatePoly") -> "BivariatePoly":
        self._check(other)
        cutoff = min(self.cutoff, other.cutoff)
        out: dict = {}
        for (i, j), v in self.terms.items():
            for (k, l), w in other.terms.items():
                if i + j + k + l > cutoff:
                    continue
                key = (i + k, j + l)
                out[key] = out[key] + v * w if key in out else v * w
        return BivariatePoly.from_terms(out, cutoff, self.mode)

    def to_dense(self, max_index: int) -> np.ndarray:
        a = np.zeros((max_index + 1, max_index + 1), dtype=complex)
        for (i, j), v in self.terms.items():
            if i <= max_index and j <= max_index:
                a[i, j] = complex(v)
        return a

    def log1p(self, max_index: int | None = None) -> "BivariatePoly":
        """``log(1 + self)`` restricted to ``i, j <= max_index``.

        Applying ``X d/dX`` to ``L = log(1 + P)`` gives ``(1 + P) X L_X = X P_X``,
        that is ``i c_ij = i p_ij - sum p_ab (i-a) c_{i-a, j-b}``.  The index box
        ``[1, max_index]^2`` is closed under this recurrence.
        """
        n = self.cutoff - 1 if max_index is None else max_index
        n = min(n, self.cutoff - 1)
        if n < 1:
            return BivariatePoly(self.cutoff, self.mode, {})
        ok = lambda i, j: i + j <= self.cutoff  # noqa: E731
        if self.mode is Mode.EXACT:
            p = self.terms
            c: dict = {}
            rows = {}
            for (a, b), v in p.items():
                rows.setdefault(a, []).append((b, v))
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if not ok(i, j):
                        continue
                    acc = p.get((i, j), _QZERO) * i
                    for a in range(1, i):
                        for b, pab in rows.get(a, ()):
                            if b >= j:
                                continue
                            cc = c.get((i - a, j - b))
                            if cc:
                                acc = acc - pab * cc * (i - a)
                    if acc:
                        c[(i, j)] = acc / i
            return BivariatePoly(self.cutoff, Mode.EXACT, c)
        P = self.to_dense(n)
        C = np.zeros_like(P)
        for i in range(1, n + 1):
            s = np.zeros(n + 1, dtype=complex)
            for a in range(1, i):
                s += np.convolve(P[a], (i - a) * C[i - a])[: n + 1]
            C[i] = P[i] - s / i
            C[i, 0] = 0.0
        terms = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if ok(i, j) and C[i, j] != 0:
                    terms[(i, j)] = complex(C[i, j])
        return BivariatePoly(self.cutoff, Mode.APPROX, terms)

    def log1p_by_powers(self) -> "BivariatePoly":
        """``sum_{k>=1} (-1)^(k+1) P^k / k``, the slow textbook expansion."""
        # P has total degree >= 2, so P^k vanishes below the cutoff once 2k > cutoff
        total = BivariatePoly(self.cutoff, self.mode, {})
        power = self
        k = 1
        while power.terms:
            sign = 1 if k % 2 else -1
            if self.mode is Mode.EXACT:
                total = total + power.scale(QQi(sign) / k)
            else:
                total = total + power.scale(sign / k)
            k += 1
            power = power * self
        return total
