"""Targeted checks: Zalcman subdominance, Grunsky convergence, small-dilatation sharpness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..catalog import koebe_root, small_k_extremal
from ..functionals import eval_functional, zalcman
from ..grunsky import NORM_TOL, grunsky_coefficients, grunsky_norm
from ..loewner import loewner_sample, random_driver
from ..maps import SigmaClassMap, circle_inversion
from ..series import Mode

__all__ = [
    "CheckReport",
    "zalcman_subdominance_check",
    "grunsky_convergence_check",
    "small_dilatation_check",
    "DEFAULT_LOEWNER_TIMES",
    "STABILIZATION_TOL",
]

STABILIZATION_TOL = 1e-6


@dataclass
class CheckReport:
    name: str
    rows: list
    passed: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "rows": self.rows}


def zalcman_subdominance_check(n_range=range(3, 9), m_range=range(1, 7)) -> CheckReport:
    """``|J_n(kappa_m)|`` against ``(n-1)^2``: equality at m = 1, strict below for m >= 2.

    ``|J_n(kappa_{m,theta})|`` does not depend on theta (J_n is homogeneous),
    so theta = 0 suffices and the comparison is exact.
    """
    rows = []
    ok = True
    for n in n_range:
        J = zalcman(n)
        bound = (n - 1) ** 2
        for m in m_range:
            v = eval_functional(J, koebe_root(m, 0, 2 * n - 2)).value
            a2 = v.abs2()
            if a2 == bound * bound:
                rel = "equal"
            elif a2 < bound * bound:
                rel = "strict"
            else:
                rel = "violation"
            want = "equal" if m == 1 else "strict"
            ok = ok and rel == want
            rows.append({"n": n, "m": m, "abs_value": math.sqrt(a2), "value": str(v), "bound": bound,
                         "relation": rel, "expected": want})
    return CheckReport("zalcman_subdominance", rows, ok)


def grunsky_convergence_check(maps, N_list, ceiling_slack: float = 1e-9,
                              monotone_slack: float = NORM_TOL,
                              stable_tol: float = STABILIZATION_TOL) -> CheckReport:
    """Truncated Grunsky norms per N for each ``(label, F)``.

    A row converges when the norms are monotone in N and the last increment
    is below ``stable_tol``; no rate is assumed.  Also records the ceiling
    ``norm <= k(F)`` when the dilatation is known and ``k - norm`` at the
    largest N.
    """
    N_list = sorted(N_list)
    rows = []
    ok = True
    for label, F in maps:
        if not isinstance(F, SigmaClassMap):
            raise TypeError("grunsky_convergence_check expects Sigma-class maps")
        A = grunsky_coefficients(F, N_list[-1], Mode.APPROX)
        norms = [grunsky_norm(A.truncate(N)) for N in N_list]
        mono = all(b >= a - monotone_slack for a, b in zip(norms, norms[1:]))
        k = F.dilatation
        below = k is None or all(x <= k + ceiling_slack for x in norms)
        last = norms[-1] - norms[-2] if len(norms) > 1 else None
        stable = None if last is None else abs(last) < stable_tol
        row = {
            "label": label,
            "N": list(N_list),
            "norms": norms,
            "k": k,
            "k_sharp": F.dilatation_exact,
            "monotone": mono,
            "below_ceiling": below,
            "last_step": last,
            "stabilized": stable,
            "gap": (k - norms[-1]) if k is not None else None,
        }
        ok = ok and mono and below and stable is not False
        rows.append(row)
    return CheckReport("grunsky_convergence", rows, ok)


DEFAULT_LOEWNER_TIMES = tuple(10.0 ** (-e / 2) for e in range(2, 11))


def small_dilatation_check(n_range=range(3, 7), seeds=range(6), times=DEFAULT_LOEWNER_TIMES,
                           N: int = 8, tol: float = 1e-6, pieces: int = 3) -> CheckReport:
    """Sharpness of ``|a_n| <= 2k/(n-1)`` for ``k = 1/(n^2+1)``.

    The extremal ``small_k_extremal`` must attain the bound exactly.  Loewner
    samples are kept when their truncated Grunsky norm (a lower bound for
    their dilatation) is at most ``k`` and then checked against the bound.
    """
    samples = []
    order = max(2 * N, max(n_range))
    for seed in seeds:
        for T in times:
            f = loewner_sample(random_driver(seed, pieces, T), order=order)
            kappa = grunsky_norm(grunsky_coefficients(circle_inversion(f), N))
            samples.append((seed, T, f, kappa))
    rows = []
    ok = True
    for n in n_range:
        k = Fraction(1, n * n + 1)
        bound = 2 * k / (n - 1)
        ext = small_k_extremal(n, k, 1, order=n)
        attained = ext.a(n) == bound
        kept = [(seed, T, abs(complex(f.a(n))), kap) for seed, T, f, kap in samples if kap <= float(k)]
        worst = max((v - float(bound) for _, _, v, _ in kept), default=None)
        sample_ok = worst is None or worst <= tol
        ok = ok and attained and sample_ok
        rows.append({
            "n": n, "k": str(k), "bound": str(bound), "extremal_a_n": str(ext.a(n)),
            "extremal_attains": attained, "samples": len(samples), "samples_kept": len(kept),
            "worst_excess": worst, "samples_ok": sample_ok,
        })
    return CheckReport("small_dilatation", rows, ok)
