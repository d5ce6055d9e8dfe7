"""Inequality scans over parametric families of univalent maps.

A root-transformed Koebe point is ``kappa_{m,theta}`` followed by the homotopy
``f(tz)/t``.  Its coefficients are ``a_n = a_n(kappa_{m,0}) s^(n-1)`` with
``s = t e^{-i theta/m}``, and with theta and arg t on the default grids ``s``
is a rational multiple of a root of unity of order ``16 m``.  Exact mode
therefore evaluates every point in a cyclotomic field and decides the sign of
``bound^2 - |J|^2`` exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from ..catalog import koebe_root
from ..cyclotomic import Cyclotomic, real_sign
from ..errors import UnivalentError
from ..loewner import STEP_TOLERANCE, loewner_sample, random_driver
from ..polynomial import parse_symbol
from ..series import Mode
from .config import FamilySpec, FunctionalEntry, ScanConfig

__all__ = ["FamilyPoint", "VerificationReport", "family_points", "run_scan", "evaluate_point"]

_DIGITS = 17


@dataclass(frozen=True)
class FamilyPoint:
    family: str
    key: tuple
    params: str
    data: tuple

    @property
    def is_extremal(self) -> bool:
        """The Koebe rotations with no homotopy shrinkage."""
        d = dict(self.data)
        return self.family == "koebe_root" and d["m"] == 1 and d["rho"] == Fraction(1)


@dataclass
class VerificationReport:
    records: list
    summary: dict
    config: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        s = self.summary
        if s["violations"] or s["unconfirmed"]:
            return 1
        if s["errors"]:
            return 2
        return 0


def family_points(fam: FamilySpec) -> list:
    pts = []
    if fam.kind == "koebe_root":
        for m in fam.m:
            for k in range(fam.angles):
                for rho in fam.t_moduli:
                    rho = Fraction(rho)
                    for j in range(fam.t_phases):
                        params = (f"m={m};theta=2pi*{k}/{fam.angles};"
                                  f"t={rho}*exp(2pi*i*{j}/{fam.t_phases})")
                        data = (("m", m), ("k", k), ("angles", fam.angles), ("rho", rho),
                                ("j", j), ("phases", fam.t_phases))
                        pts.append(FamilyPoint("koebe_root", (m, k, rho, j), params, data))
    elif fam.kind == "loewner":
        for seed in fam.seeds:
            for T in fam.T:
                params = f"seed={seed};T={T!r};pieces={fam.pieces}"
                data = (("seed", seed), ("T", T), ("pieces", fam.pieces))
                pts.append(FamilyPoint("loewner", (seed, T, fam.pieces), params, data))
    return pts


@lru_cache(maxsize=64)
def _base_coeffs(m: int, order: int) -> tuple:
    return tuple(koebe_root(m, 0, order).coefficients())


def _rotation_exponent(d: dict) -> tuple:
    """``(M, e)`` with ``s / |s| = zeta_M^e``."""
    m = d["m"]
    M = 16 * m
    e = d["j"] * (M // d["phases"]) - d["k"] * (16 // d["angles"])
    return M, e


def _koebe_values_exact(d: dict, need: int, order: int) -> dict:
    base = _base_coeffs(d["m"], order)
    M, e = _rotation_exponent(d)
    rho = d["rho"]
    return {n: Cyclotomic(M, {e * (n - 1): base[n - 1].real * rho ** (n - 1)}) for n in range(1, need + 1)}


def _koebe_values_approx(d: dict, need: int, order: int) -> dict:
    base = _base_coeffs(d["m"], order)
    M, e = _rotation_exponent(d)
    s = float(d["rho"]) * complex(math.cos(2 * math.pi * e / M), math.sin(2 * math.pi * e / M))
    return {n: complex(base[n - 1]) * s ** (n - 1) for n in range(1, need + 1)}


def _eval_poly(poly, values: dict, zero):
    total = zero
    for mono, c in poly.sorted_terms():
        term = c if not isinstance(zero, complex) else complex(c)
        for s, e in mono:
            term = term * values[parse_symbol(s)[1]] ** e
        total = total + term
    return total


def _fmt(x) -> str:
    with mpmath.workdps(40):
        return mpmath.nstr(mpmath.mpf(x), _DIGITS, strip_zeros=True, min_fixed=-5, max_fixed=20)


def _exact_abs_text(abs2: Cyclotomic):
    """``(text, mp value)`` of ``|J|``; the text is exact when |J| is rational."""
    q = abs2.rational_value()
    with mpmath.workdps(40):
        if q is not None:
            num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if num * num == q.numerator and den * den == q.denominator:
                r = Fraction(num, den)
                return str(r), mpmath.mpf(r.numerator) / r.denominator, r
            return _fmt(mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator)), \
                mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator), None
        v = mpmath.sqrt(abs2.to_mp(40).real)
        return _fmt(v), v, None


def _bound_text(entry: FunctionalEntry):
    q = entry.bound_abs2
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        r = Fraction(num, den)
        return str(r), r
    with mpmath.workdps(40):
        return _fmt(mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator)), None


def _record(entry, pt, abs_text, abs_dec, bound_text, bound_dec, margin_text, margin_dec,
            witness, tail, status, note=""):
    return {
        "functional_id": entry.ident,
        "family": pt.family,
        "params": pt.params,
        "abs_value": abs_text,
        "abs_value_decimal": abs_dec,
        "bound": bound_text,
        "bound_decimal": bound_dec,
        "bound_kind": entry.bound_kind,
        "margin": margin_text,
        "margin_decimal": margin_dec,
        "witness": witness,
        "tail_radius": tail,
        "status": status,
        "note": note,
        "_key": (entry.ident, pt.family, pt.key),
    }


def _exact_check(entry: FunctionalEntry, pt: FamilyPoint, values: dict, note: str = ""):
    d = dict(pt.data)
    M, _ = _rotation_exponent(d)
    J = _eval_poly(entry.spec.poly, values, Cyclotomic(M))
    abs2 = J.abs2()
    diff = Cyclotomic.rational(M, entry.bound_abs2) - abs2
    sign = real_sign(diff)
    abs_text, abs_mp, abs_q = _exact_abs_text(abs2)
    bound_text, bound_q = _bound_text(entry)
    with mpmath.workdps(40):
        bound_mp = mpmath.sqrt(mpmath.mpf(entry.bound_abs2.numerator) / entry.bound_abs2.denominator)
        if sign == 0:
            margin_text = "0"
        elif abs_q is not None and bound_q is not None:
            margin_text = str(bound_q - abs_q)
        else:
            margin_text = _fmt(bound_mp - abs_mp)
        margin_dec = float(bound_mp - abs_mp) if sign else 0.0
    status = "pass" if sign >= 0 else "violation"
    return _record(entry, pt, abs_text, float(abs_mp), bound_text, float(bound_mp), margin_text,
                   margin_dec, sign == 0, 0.0, status, note)


def _approx_check(entry, pt, values: dict, tol: float, coeff_err: float):
    v = _eval_poly(entry.spec.poly, values, 0j)
    absv = abs(v)
    tail = 0.0
    if coeff_err:
        for mono, c in entry.spec.poly.sorted_terms():
            upper = lower = abs(complex(c))
            for s, e in mono:
                av = abs(values[parse_symbol(s)[1]])
                upper *= (av + coeff_err) ** e
                lower *= av ** e
            tail += upper - lower
    bound = math.sqrt(entry.bound_abs2)
    bound_text, _ = _bound_text(entry)
    margin = bound - absv
    witness = abs(margin) < tol
    if margin < -(tail + tol):
        status = "violation"
    else:
        status = "pass"
    return _record(entry, pt, repr(absv), absv, bound_text, bound, repr(margin), margin, witness,
                   tail, status)


def evaluate_point(args) -> list:
    """All functionals at one family point (module-level so worker processes can run it)."""
    cfg, pt = args
    entries = cfg.functionals
    need = max((e.spec.max_coefficient_index() for e in entries), default=1)
    out = []
    try:
        if pt.family == "koebe_root":
            d = dict(pt.data)
            order = max(cfg.order, need - 1)
            if cfg.mode is Mode.EXACT:
                vals = _koebe_values_exact(d, need, order)
                return [_exact_check(e, pt, vals) for e in entries]
            vals = _koebe_values_approx(d, need, order)
            for e in entries:
                r = _approx_check(e, pt, vals, cfg.witness_tol, 0.0)
                if r["status"] == "violation":
                    # never trust a float alone: the point is exactly representable
                    r = _exact_check(e, pt, _koebe_values_exact(d, need, order),
                                     "approx margin negative; decided by exact re-evaluation")
                out.append(r)
            return out
        d = dict(pt.data)
        f = loewner_sample(random_driver(d["seed"], d["pieces"], d["T"]), order=max(need - 1, 1))
        vals = {n: complex(f.a(n)) for n in range(1, need + 1)}
        for e in entries:
            r = _approx_check(e, pt, vals, cfg.witness_tol, 10 * STEP_TOLERANCE)
            if r["status"] == "violation":
                r["status"] = "unconfirmed"
                r["note"] = "negative approx margin on a point with no exact representation"
            out.append(r)
        return out
    except (UnivalentError, ArithmeticError) as exc:
        return [_record(e, pt, "", math.nan, "", math.nan, "", math.nan, False, 0.0, "error",
                        f"{type(exc).__name__}: {exc}") for e in entries]


def _chunks(items: list, n: int) -> list:
    size = max(1, math.ceil(len(items) / (n * 4)))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _evaluate_chunk(args) -> list:
    cfg, pts = args
    out = []
    for pt in pts:
        out.extend(evaluate_point((cfg, pt)))
    return out


def _summary(cfg: ScanConfig, records: list) -> dict:
    finite = [r["margin_decimal"] for r in records if r["status"] != "error"]
    witnesses = [f"{r['functional_id']} @ {r['family']}[{r['params']}]" for r in records if r["witness"]]
    labels = {}
    for e in cfg.functionals:
        if e.bound_kind == "family-max":
            labels[e.ident] = "family-restricted"
    return {
        "checks": len(records),
        "passed": sum(r["status"] == "pass" for r in records),
        "violations": sum(r["status"] == "violation" for r in records),
        "unconfirmed": sum(r["status"] == "unconfirmed" for r in records),
        "errors": sum(r["status"] == "error" for r in records),
        "min_margin": min(finite) if finite else None,
        "witnesses": witnesses,
        "labels": labels,
        "config_hash": cfg.config_hash,
        "mode": cfg.mode.value,
    }


def run_scan(cfg: ScanConfig) -> VerificationReport:
    """Evaluate every (functional, family point) pair; output order is canonical."""
    points = [p for fam in cfg.families for p in family_points(fam)]
    if not cfg.functionals:
        records = []
    elif cfg.workers > 1 and len(points) > 1:
        chunks = _chunks(points, cfg.workers)
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(_evaluate_chunk, [(cfg, c) for c in chunks]))
        records = [r for part in parts for r in part]
    else:
        records = _evaluate_chunk((cfg, points))
    records.sort(key=lambda r: r["_key"])
    for r in records:
        del r["_key"]
    return VerificationReport(records, _summary(cfg, records), cfg.canonical())
