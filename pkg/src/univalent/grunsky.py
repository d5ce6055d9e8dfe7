"""Grunsky coefficients, the weighted Grunsky matrix and its operator norm.

For ``F`` in Sigma, with ``X = 1/z`` and ``Y = 1/zeta``,

    (F(z) - F(zeta)) / (z - zeta) = 1 - sum_{k>=1} b_k sum_{i+j=k+1} X^i Y^j,

and ``alpha_mn`` is minus the ``X^m Y^n`` coefficient of its logarithm.  An
``N x N`` block therefore needs ``b_1 .. b_{2N-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .bivariate import BivariatePoly
from .catalog import sigma_square_root_transform
from .errors import ConvergenceError, DomainError, TruncationError
from .gaussian import QQi
from .maps import SigmaClassMap
from .schwarzian import MetricValue, metric_from_dilatation
from .series import Mode

__all__ = [
    "GrunskyMatrix",
    "GrunskyVector",
    "GrunskyCheck",
    "grunsky_coefficients",
    "grunsky_norm",
    "sampled_quadratic_form_sup",
    "grunsky_inequality_check",
    "caratheodory_lower_bound",
    "square_transform_matrix",
    "NORM_TOL",
]

NORM_TOL = 1e-10
MAX_ITER = 100_000
RESTART_SEED = 20240601
SQUARE_EVERY = 64
MAX_SQUARINGS = 40


@dataclass(frozen=True)
class GrunskyMatrix:
    """``alpha[m-1][n-1] = alpha_mn`` for ``1 <= m, n <= N``."""

    N: int
    alpha: tuple
    mode: Mode
    source: str = ""

    @property
    def weighted(self) -> np.ndarray:
        """``A_mn = sqrt(mn) alpha_mn`` as a complex array."""
        a = np.array([[complex(v) for v in row] for row in self.alpha], dtype=complex).reshape(self.N, self.N)
        w = np.sqrt(np.arange(1, self.N + 1, dtype=float))
        return a * np.outer(w, w)

    def entry(self, m: int, n: int):
        return self.alpha[m - 1][n - 1]

    def is_symmetric(self, tol: float = 0.0) -> bool:
        for m in range(self.N):
            for n in range(m + 1, self.N):
                a, b = self.alpha[m][n], self.alpha[n][m]
                if self.mode is Mode.EXACT:
                    if a != b:
                        return False
                elif abs(a - b) > tol:
                    return False
        return True

    def truncate(self, n: int) -> "GrunskyMatrix":
        if n > self.N:
            raise TruncationError(f"cannot extend a {self.N}x{self.N} Grunsky block to {n}")
        return GrunskyMatrix(n, tuple(tuple(r[:n]) for r in self.alpha[:n]), self.mode, self.source)


@dataclass(frozen=True)
class GrunskyVector:
    x: np.ndarray = field(compare=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        if x.ndim != 1:
            raise DomainError("Grunsky vector must be one-dimensional")
        if abs(float(np.vdot(x, x).real) - 1.0) > 1e-12:
            raise DomainError("Grunsky vector must have unit Euclidean norm")
        object.__setattr__(self, "x", x)

    @classmethod
    def normalized(cls, x) -> "GrunskyVector":
        x = np.asarray(x, dtype=complex)
        n = np.linalg.norm(x)
        if n == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(x / n)

    @classmethod
    def basis(cls, k: int, N: int) -> "GrunskyVector":
        x = np.zeros(N, dtype=complex)
        x[k - 1] = 1.0
        return cls(x)


def grunsky_coefficients(F: SigmaClassMap, N: int, mode: Mode | str | None = None) -> GrunskyMatrix:
    """``alpha_mn`` for ``1 <= m, n <= N`` via the bivariate logarithm."""
    if N < 1:
        raise DomainError("N must be positive")
    need = 2 * N - 1
    if F.max_index < need:
        raise TruncationError(f"an {N}x{N} Grunsky block needs b_1 .. b_{need}; map is known to b_{F.max_index}")
    series = F.series
    mode = Mode(mode) if mode is not None else series.mode
    if mode is Mode.APPROX:
        series = series.to_approx()
    elif series.mode is Mode.APPROX:
        raise DomainError("cannot compute exact Grunsky coefficients from an approximate map")
    terms = {}
    for k in range(1, need + 1):
        bk = series.coeff(k)
        if not bk:
            continue
        for i in range(1, k + 1):
            terms[(i, k + 1 - i)] = -bk
    P = BivariatePoly.from_terms(terms, 2 * N, mode)
    L = P.log1p(N)
    zero = QQi(0) if mode is Mode.EXACT else 0j
    alpha = tuple(tuple(-L.terms.get((m, n), zero) if (m, n) in L.terms else zero
                        for n in range(1, N + 1)) for m in range(1, N + 1))
    return GrunskyMatrix(N, alpha, mode, F.provenance)


def _power_phase(B: np.ndarray, v: np.ndarray, tol: float, iters: int, history: list):
    """Return (mu, state) with state "converged", "collapsed" or "stalled".

    Convergence is always judged on ``B``.  The vector is advanced with
    ``P = B^(2^s)``, where ``s`` grows by one after every ``SQUARE_EVERY``
    unconverged steps; clustered top eigenvalues (relative gaps near 1e-6
    are common for Grunsky matrices) then separate in a few hundred steps
    instead of millions.
    """
    mu = 0.0
    P = B
    squarings = 0
    for it in range(iters):
        w = B @ v
        mu = float(np.vdot(v, w).real)
        if np.linalg.norm(w) == 0.0:
            return 0.0, "collapsed"
        res = np.linalg.norm(w - mu * v)
        history.append(mu)
        if res <= tol * mu:
            return mu, "converged"
        if it and it % SQUARE_EVERY == 0 and squarings < MAX_SQUARINGS:
            P = P @ P
            P = (P + P.conj().T) / (2 * np.linalg.norm(P, 2))
            squarings += 1
        u = P @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return mu, "collapsed"
        v = u / nu
    return mu, "stalled"


def grunsky_norm(A, tol: float = NORM_TOL, max_iter: int = MAX_ITER) -> float:
    """Largest singular value of the weighted matrix by power iteration on ``A^H A``.

    Starts from the normalized all-ones vector; if that stalls or collapses
    onto the kernel, restarts once from a fixed seeded random vector.
    """
    M = A.weighted if isinstance(A, GrunskyMatrix) else np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise DomainError("Grunsky matrix has non-finite entries")
    n = M.shape[0]
    if n == 0 or not np.any(M):
        return 0.0
    B = M.conj().T @ M
    history: list = []
    v = np.ones(n, dtype=complex) / math.sqrt(n)
    mu, state = _power_phase(B, v, tol, max_iter // 2, history)
    if state == "converged":
        return math.sqrt(mu)
    rng = np.random.default_rng(RESTART_SEED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    mu, state = _power_phase(B, v, tol, max_iter - max_iter // 2, history)
    if state == "converged":
        return math.sqrt(mu)
    raise ConvergenceError(f"power iteration did not reach relative residual {tol}", history)


def _form(A: np.ndarray, x: np.ndarray) -> complex:
    return complex(x @ A @ x)


def sampled_quadratic_form_sup(A, samples: int = 100_000, seed: int = 0, refine: int = 8,
                               batch: int = 20_000):
    """Estimate ``sup |x^T A x|`` over unit vectors: random sampling, then local ascent.

    Returns ``(sampled, refined)``.  ``sampled`` is the best of the raw
    samples; ``refined`` polishes the ``refine`` best samples with BFGS.  Both
    are attained values, hence lower bounds for the true supremum.
    """
    M = A.weighted if isinstance(A, GrunskyMatrix) else np.asarray(A, dtype=complex)
    n = M.shape[0]
    rng = np.random.default_rng(seed)
    best_vals = np.empty(0)
    best_vecs = np.empty((0, n), dtype=complex)
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        X = rng.standard_normal((b, n)) + 1j * rng.standard_normal((b, n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        vals = np.abs(np.einsum("bi,ij,bj->b", X, M, X))
        vals = np.concatenate([best_vals, vals])
        vecs = np.concatenate([best_vecs, X])
        keep = np.argsort(-vals, kind="stable")[: max(refine, 1)]
        best_vals, best_vecs = vals[keep], vecs[keep]
        done += b
    sampled = float(best_vals[0]) if len(best_vals) else 0.0

    def neg(p):
        x = p[:n] + 1j * p[n:]
        nx = np.linalg.norm(x)
        if nx == 0:
            return 0.0
        x = x / nx
        return -abs(_form(M, x))

    refined = sampled
    for x0 in best_vecs[:refine]:
        res = minimize(neg, np.concatenate([x0.real, x0.imag]), method="BFGS", options={"gtol": 1e-12})
        refined = max(refined, -float(res.fun))
    return sampled, refined


@dataclass(frozen=True)
class GrunskyCheck:
    passed: bool
    value: float
    bound: float
    margin: float
    block_passed: bool
    block_worst: float


def grunsky_inequality_check(A: GrunskyMatrix, x: GrunskyVector, k: float, slack: float = 0.0) -> GrunskyCheck:
    """Compare ``|sum sqrt(mn) alpha_mn x_m x_n|`` with ``k``.

    Also checks every tail block ``m >= p, n >= q`` against the bound
    ``|x_p^T A_pq x_q|^2 <= |x_p|^2 |x_q|^2``; ``block_worst`` is the largest
    ratio of the two sides (at most 1 when the block inequality holds).
    """
    M = A.weighted
    xv = x.x
    if len(xv) != A.N:
        raise DomainError(f"vector length {len(xv)} does not match N = {A.N}")
    value = abs(_form(M, xv))
    margin = float(k) - value
    # suffix sums of x_m A_mn x_n over m >= p, n >= q
    T = (xv[:, None] * M * xv[None, :])[::-1, ::-1].cumsum(0).cumsum(1)[::-1, ::-1]
    tail2 = np.cumsum((np.abs(xv) ** 2)[::-1])[::-1]
    rhs = np.outer(tail2, tail2)
    lhs = np.abs(T) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), 0.0)
    worst = float(ratio.max()) if ratio.size else 0.0
    return GrunskyCheck(margin >= -slack, value, float(k), margin, worst <= 1.0 + 1e-12, worst)


def caratheodory_lower_bound(F: SigmaClassMap, N: int, mode: Mode | str | None = None) -> MetricValue:
    """Metric values of the truncated Grunsky norm, a lower bound for ``k(F)``."""
    return metric_from_dilatation(grunsky_norm(grunsky_coefficients(F, N, mode)))


def square_transform_matrix(F: SigmaClassMap, N: int, mode: Mode | str | None = None) -> GrunskyMatrix:
    """Grunsky block of ``F(z^2)^(1/2)``."""
    return grunsky_coefficients(sigma_square_root_transform(F), N, mode)
