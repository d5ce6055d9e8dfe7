"""Homogeneous coefficient functionals: specs, evaluation, Sigma representation.

A functional is a :class:`~univalent.polynomial.Poly` in the symbols ``a2, a3, ...``
(coefficients of ``f``) and ``D[q,j]`` (``f^(q)(z_j)`` at a declared point).
Under ``f_t(z) = f(tz)/t`` the coefficient ``a_j`` picks up ``t^(j-1)``, which
fixes the homogeneity degree of coefficient-only functionals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import homotopy_s, koebe_root
from .errors import DomainError, SpecError, TruncationError
from .gaussian import QQi, to_qqi
from .maps import SClassMap, SigmaClassMap, eval_derivative, inverse_circle_inversion
from .polynomial import Poly, a, parse_symbol

__all__ = [
    "FunctionalSpec",
    "FunctionalValue",
    "NotHomogeneous",
    "SigmaRepresentation",
    "eval_functional",
    "zalcman",
    "bieberbach",
    "thm51",
    "thm52",
    "perturbed_zalcman",
    "named_functional",
    "parse_functional",
    "sigma_representation",
    "eval_sigma_representation",
    "a_in_terms_of_b",
    "homogeneity_degree",
    "check_homogeneity_numeric",
    "known_bound",
]


@dataclass(frozen=True)
class FunctionalSpec:
    """``poly`` in ``a_n`` and ``D[q,j]``; ``points[j] = (z_j, m_j)``."""

    poly: Poly
    points: tuple = ()
    name: str = ""
    declared_degree: int | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        zs = []
        for pt in self.points:
            if len(pt) != 2:
                raise SpecError("each point is a pair (z_j, m_j)")
            z, m = pt
            if not isinstance(m, int) or m < 0:
                raise SpecError("derivative order m_j must be a non-negative integer")
            if abs(complex(z)) >= 1:
                raise DomainError(f"point {z} is not inside the unit disk")
            if complex(z) == 0:
                raise DomainError("points must lie in the punctured disk")
            zs.append(complex(z))
        if len(set(zs)) != len(zs):
            raise SpecError("points must be distinct")
        for s in self.poly.symbols():
            p = parse_symbol(s)
            if p[0] == "b":
                raise SpecError(f"symbol {s} belongs to the Sigma representation, not to J")
            if p[0] == "a" and p[1] < 1:
                raise SpecError(f"coefficient index in {s} must be >= 1")
            if p[0] == "D":
                q, j = p[1], p[2]
                if j >= len(self.points):
                    raise SpecError(f"{s} refers to undeclared point {j}")
                if q > self.points[j][1]:
                    raise SpecError(f"{s} exceeds the declared order m_{j} = {self.points[j][1]}")

    @property
    def ident(self) -> str:
        return self.name or self.poly.to_json()

    def max_coefficient_index(self) -> int:
        idx = [parse_symbol(s)[1] for s in self.poly.symbols() if s.startswith("a")]
        return max(idx, default=1)

    def is_coefficient_only(self) -> bool:
        return all(not s.startswith("D") for s in self.poly.symbols())

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "poly": self.poly.to_json_obj(),
            "points": [[str(z) if isinstance(z, QQi) else repr(complex(z)), m] for z, m in self.points],
            "declared_degree": self.declared_degree,
        }


@dataclass(frozen=True)
class FunctionalValue:
    value: object
    tail_radius: float = 0.0

    def __post_init__(self):
        if not self.tail_radius >= 0:
            raise ValueError("tail_radius must be non-negative")

    @property
    def abs_value(self) -> float:
        return abs(complex(self.value))


def _coefficient(f: SClassMap, n: int):
    if n > f.max_index:
        raise TruncationError(f"a_{n} requested but the map is known only through a_{f.max_index}")
    return f.a(n)


def eval_functional(J: FunctionalSpec, f: SClassMap) -> FunctionalValue:
    """Exact for coefficient-only ``J`` on an exact map; derivative factors carry tail bounds."""
    if J.max_coefficient_index() > f.max_index:
        raise TruncationError(f"J needs a_{J.max_coefficient_index()}, map is known to a_{f.max_index}")
    derivs: dict = {}
    for s in J.poly.symbols():
        p = parse_symbol(s)
        if p[0] == "D":
            z = J.points[p[2]][0]
            derivs[s] = eval_derivative(f, z, p[1])
    exact = f.series.is_exact() and all(isinstance(v, QQi) for v, _ in derivs.values())

    def value_of(s):
        if s in derivs:
            v = derivs[s][0]
        else:
            v = _coefficient(f, parse_symbol(s)[1])
        return v if exact else complex(v)

    total = QQi(0) if exact else 0j
    tail = 0.0
    for mono, c in J.poly.sorted_terms():
        term = c if exact else complex(c)
        upper, lower = 1.0, 1.0
        for s, e in mono:
            v = value_of(s)
            term = term * v ** e
            if s in derivs:
                av, err = abs(complex(v)), derivs[s][1]
                upper *= (av + err) ** e
                lower *= av ** e
            else:
                av = abs(complex(v)) ** e
                upper *= av
                lower *= av
        total = total + term
        tail += abs(complex(c)) * (upper - lower)
    return FunctionalValue(total, tail)


def _named(poly: Poly, name: str, **params) -> FunctionalSpec:
    return FunctionalSpec(poly, (), name, None, params)


def zalcman(n: int) -> FunctionalSpec:
    """``a_n^2 - a_{2n-1}``."""
    if n < 2:
        raise DomainError("zalcman needs n >= 2")
    return _named(a(n, 2) - a(2 * n - 1), f"zalcman:{n}", family="zalcman", n=n)


def bieberbach(n: int) -> FunctionalSpec:
    if n < 2:
        raise DomainError("bieberbach needs n >= 2")
    return _named(a(n), f"bieberbach:{n}", family="bieberbach", n=n)


def thm51(n: int, p: int) -> FunctionalSpec:
    """``a_n^p - a_2^(p(n-1))``."""
    if n < 2 or p < 1:
        raise DomainError("thm51 needs n >= 2 and p >= 1")
    return _named(a(n, p) - a(2, p * (n - 1)), f"thm51:{n},{p}", family="thm51", n=n, p=p)


def thm52(n: int, p: int) -> FunctionalSpec:
    """``a_{n+1}^p - a_2^p a_n^p``."""
    if n < 2 or p < 1:
        raise DomainError("thm52 needs n >= 2 and p >= 1")
    return _named(a(n + 1, p) - a(2, p) * a(n, p), f"thm52:{n},{p}", family="thm52", n=n, p=p)


def perturbed_zalcman(n: int, P: Poly) -> FunctionalSpec:
    """``a_n^2 - a_{2n-1} + P(a_3, ..., a_{2n-2})``.

    ``P`` must be homogeneous of degree ``2n-2`` with real non-negative
    coefficients.  Its size on all of S cannot be checked here; scans only
    see ``P`` on their families.
    """
    if n < 3:
        raise DomainError("perturbed_zalcman needs n >= 3")
    if not isinstance(P, Poly):
        raise SpecError("P must be a polynomial")
    for mono, c in P.terms.items():
        if not c.is_real() or c.real < 0:
            raise SpecError(f"coefficient {c} of P is not a non-negative real")
        for s, _ in mono:
            p = parse_symbol(s)
            if p[0] != "a" or not 3 <= p[1] <= 2 * n - 2:
                raise SpecError(f"P may only use a_3 .. a_{2 * n - 2}, found {s}")
    d = homogeneity_degree(FunctionalSpec(P)) if P else 2 * n - 2
    if d != 2 * n - 2:
        raise SpecError(f"P must be homogeneous of degree {2 * n - 2}")
    poly = a(n, 2) - a(2 * n - 1) + P
    return FunctionalSpec(poly, (), f"perturbed_zalcman:{n}:{P.to_json()}", None,
                          {"family": "perturbed_zalcman", "n": n})


def named_functional(name: str, *args) -> FunctionalSpec:
    table = {"zalcman": zalcman, "bieberbach": bieberbach, "thm51": thm51, "thm52": thm52}
    if name not in table:
        raise SpecError(f"unknown functional {name!r}")
    try:
        return table[name](*args)
    except TypeError as exc:
        raise SpecError(f"bad arguments for {name}: {args}") from exc


def parse_functional(text: str) -> FunctionalSpec:
    """``"zalcman:3"``, ``"thm51:4,2"`` or ``"bieberbach:5"``."""
    name, _, rest = text.partition(":")
    try:
        args = [int(x) for x in rest.split(",")] if rest else []
    except ValueError as exc:
        raise SpecError(f"bad functional arguments in {text!r}") from exc
    return named_functional(name.strip(), *args)


def a_in_terms_of_b(n: int) -> list:
    """``[a_1, ..., a_n]`` as polynomials in ``b_0, b_1, ...``.

    From ``f(w) (1 + b_0 w + b_1 w^2 + ...) = w``:
    ``a_k = -sum_{j=0}^{k-2} b_j a_{k-1-j}``.
    """
    out = [Poly.constant(1)]
    for k in range(2, n + 1):
        acc = Poly()
        for j in range(0, k - 1):
            acc = acc - Poly.symbol(f"b{j}") * out[k - 2 - j]
        out.append(acc)
    return out


@dataclass(frozen=True)
class SigmaRepresentation:
    poly: Poly
    has_free_term: bool
    has_b1_terms: bool
    leading_b0_power: int
    leading_b0_part: Poly

    def satisfies_free_term_hypotheses(self) -> bool:
        """Syntactic check: no ``c b_0^d`` term, at least one term with ``b_1``."""
        return not self.has_free_term and self.has_b1_terms


def sigma_representation(J: FunctionalSpec) -> SigmaRepresentation:
    """Rewrite ``J`` in ``b_0, b_1, ...``; derivative symbols are left in place."""
    n = J.max_coefficient_index()
    reps = a_in_terms_of_b(n)
    mapping = {f"a{k}": reps[k - 1] for k in range(1, n + 1)}
    poly = J.poly.substitute(mapping)
    free = False
    b1 = False
    top = -1
    for mono in poly.terms:
        syms = dict(mono)
        if mono and set(syms) == {"b0"}:
            free = True
        if "b1" in syms:
            b1 = True
        if not any(s.startswith("D") for s in syms):
            top = max(top, syms.get("b0", 0))
    lead = Poly._from_clean({m: c for m, c in poly.terms.items() if dict(m).get("b0", 0) == top and top >= 0})
    return SigmaRepresentation(poly, free, b1, top, lead)


def eval_sigma_representation(rep, F: SigmaClassMap, J: FunctionalSpec | None = None):
    """Evaluate at ``F``; derivative symbols need ``J`` for the points and use ``f = 1/F(1/z)``."""
    poly = rep.poly if isinstance(rep, SigmaRepresentation) else rep
    exact = F.series.is_exact()
    f = None

    def value_of(s):
        nonlocal f
        p = parse_symbol(s)
        if p[0] == "b":
            v = F.b(p[1])
            return v if exact else complex(v)
        if p[0] == "D":
            if J is None:
                raise SpecError("derivative symbols need the declared points")
            if f is None:
                f = inverse_circle_inversion(F)
            return complex(eval_derivative(f, J.points[p[2]][0], p[1])[0])
        raise SpecError(f"unexpected symbol {s} in a Sigma representation")

    if exact and not any(s.startswith("D") for s in poly.symbols()):
        return poly.evaluate(value_of)
    total = 0j
    for mono, c in poly.sorted_terms():
        term = complex(c)
        for s, e in mono:
            term *= complex(value_of(s)) ** e
        total += term
    return total


@dataclass(frozen=True)
class NotHomogeneous:
    """Two monomials with different degrees."""

    first: tuple
    first_degree: int
    second: tuple
    second_degree: int

    def __bool__(self):
        return False


def _coefficient_weight(s: str):
    p = parse_symbol(s)
    return p[1] - 1 if p[0] == "a" else None


def homogeneity_degree(J: FunctionalSpec):
    """Degree ``d`` with ``J(f_t) = t^d J(f)``, or :class:`NotHomogeneous`.

    Coefficient symbols weigh ``j - 1``.  Functionals with derivative factors
    report their declared degree (``None`` if none was declared).
    """
    if not J.is_coefficient_only():
        return J.declared_degree
    degs = J.poly.weighted_degrees(_coefficient_weight)
    first = None
    for mono, d in sorted(degs.items(), key=lambda md: str(md[0])):
        if first is None:
            first = (mono, d)
        elif d != first[1]:
            return NotHomogeneous(first[0], first[1], mono, d)
    return 0 if first is None else first[1]


def check_homogeneity_numeric(J: FunctionalSpec, f: SClassMap, t_grid, degree: int | None = None):
    """``max_t |J(f_t) - t^d J(f)|`` over the grid (exact when everything is exact)."""
    d = homogeneity_degree(J) if degree is None else degree
    if d is None or isinstance(d, NotHomogeneous):
        raise SpecError("J has no homogeneity degree to check")
    base = eval_functional(J, f).value
    worst = Fraction(0)
    worst_f = 0.0
    exact_all = True
    for t in t_grid:
        ft = homotopy_s(f, t)
        v = eval_functional(J, ft).value
        if isinstance(v, QQi) and isinstance(base, QQi) and not isinstance(t, (float, complex)):
            r = (v - to_qqi(t) ** d * base).abs2()
            worst = max(worst, r)
        else:
            exact_all = False
            worst_f = max(worst_f, abs(complex(v) - complex(t) ** d * complex(base)))
    if exact_all:
        return worst if worst == 0 else math.sqrt(worst)
    return max(worst_f, math.sqrt(worst))


def known_bound(J: FunctionalSpec, m_max: int = 6, order: int | None = None):
    """A value whose modulus is the sharp bound for ``|J|`` (exact when possible).

    Unnamed or perturbed functionals get ``max_m |J(kappa_{m,0})|``; for a
    coefficient-only homogeneous ``J`` that is the rotation-free part of the
    family maximum, since ``|J(kappa_{m,theta})|`` does not depend on theta.
    """
    fam = J.params.get("family")
    n, p = J.params.get("n"), J.params.get("p")
    if fam == "zalcman":
        return QQi((n - 1) ** 2)
    if fam == "bieberbach":
        return QQi(n)
    if fam == "thm51":
        return QQi(2 ** (p * (n - 1)) - n ** p)
    if fam == "thm52":
        return QQi(2 ** p * n ** p - (n + 1) ** p)
    need = max(J.max_coefficient_index() - 1, 1)
    order = need if order is None else max(order, need)
    best = None
    for m in range(1, m_max + 1):
        v = eval_functional(J, koebe_root(m, 0, order)).value
        if best is None or v.abs2() > best.abs2():
            best = v
    return best
