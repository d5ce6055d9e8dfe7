"""Scan configuration: JSON schema, defaults and the canonical hash."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from ..errors import ConfigError, SpecError
from ..functionals import FunctionalSpec, known_bound, parse_functional
from ..gaussian import QQi
from ..polynomial import Poly
from ..series import Mode

__all__ = ["FamilySpec", "FunctionalEntry", "ScanConfig", "config_from_dict", "load_config", "default_config",
           "DEFAULT_T_MODULI", "CONFIG_SCHEMA_DOC"]

DEFAULT_T_MODULI = ("1/10", "1/4", "1/2", "3/4", "9/10", "1")

CONFIG_SCHEMA_DOC = """\
{
  "functionals": ["zalcman:3", "thm51:4,2", {"name": "my_j", "poly": [...], "bound": "1"}],
  "families": [
    {"kind": "koebe_root", "m": [1, 2, 3], "angles": 16, "t_moduli": ["1/2", "1"], "t_phases": 8},
    {"kind": "loewner", "seeds": [0, 1, 2], "T": [0.5, 2.0], "pieces": 4}
  ],
  "order": 64,
  "mode": "exact",
  "witness_tol": 1e-9,
  "m_max": 6,
  "workers": 1,
  "out": "report",
  "format": "both"
}"""


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    m: tuple = (1, 2, 3, 4, 5, 6)
    angles: int = 16
    t_moduli: tuple = DEFAULT_T_MODULI
    t_phases: int = 8
    seeds: tuple = ()
    T: tuple = (1.0,)
    pieces: int = 4

    def canonical(self) -> dict:
        if self.kind == "koebe_root":
            return {"kind": self.kind, "m": list(self.m), "angles": self.angles,
                    "t_moduli": [str(Fraction(t)) for t in self.t_moduli], "t_phases": self.t_phases}
        return {"kind": self.kind, "seeds": list(self.seeds), "T": [float(t) for t in self.T],
                "pieces": self.pieces}


@dataclass(frozen=True)
class FunctionalEntry:
    """A functional and the bound it is checked against.

    ``bound_abs2`` is the exact square of the bound; ``bound_kind`` says where
    it came from ("sharp" for the named inequalities, "family-max" for the
    maximum over the root-transformed Koebe maps, "override" for a config value).
    """

    spec: FunctionalSpec
    bound_abs2: Fraction
    bound_text: str
    bound_kind: str

    @property
    def ident(self) -> str:
        return self.spec.ident


@dataclass(frozen=True)
class ScanConfig:
    functionals: tuple
    families: tuple
    order: int = 64
    mode: Mode = Mode.EXACT
    witness_tol: float = 1e-9
    m_max: int = 6
    workers: int = 1
    out: str | None = None
    format: str = "both"
    raw: dict = field(default_factory=dict, compare=False)

    def canonical(self) -> dict:
        """Everything that can change the report; workers and output paths excluded."""
        return {
            "functionals": [self.raw_functional(e) for e in self.functionals],
            "families": [f.canonical() for f in self.families],
            "order": self.order,
            "mode": self.mode.value,
            "witness_tol": self.witness_tol,
            "m_max": self.m_max,
        }

    @staticmethod
    def raw_functional(e: FunctionalEntry) -> dict:
        return {"id": e.ident, "poly": e.spec.poly.to_json_obj(), "bound": e.bound_text,
                "bound_kind": e.bound_kind}

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_overrides(self, **kw) -> "ScanConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "mode" in kw:
            kw["mode"] = _mode(kw["mode"])
        cfg = replace(self, **kw)
        _validate(cfg)
        return cfg


def _mode(v) -> Mode:
    try:
        return Mode(v)
    except ValueError:
        raise ConfigError(f"mode must be 'exact' or 'approx', got {v!r}") from None


def _bound_from_text(text) -> Fraction:
    try:
        q = QQi.parse(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad bound {text!r}") from exc
    if not q.is_real() or q.real < 0:
        raise ConfigError(f"bound {text!r} must be a non-negative rational")
    return q.real * q.real


def _functional(entry, m_max: int) -> FunctionalEntry:
    try:
        if isinstance(entry, str):
            spec = parse_functional(entry)
            override = None
        elif isinstance(entry, dict):
            if "poly" in entry:
                spec = FunctionalSpec(Poly.from_json_obj(entry["poly"]), (), str(entry.get("name", "")))
            elif "name" in entry:
                spec = parse_functional(entry["name"])
            else:
                raise ConfigError(f"functional entry needs 'name' or 'poly': {entry!r}")
            override = entry.get("bound")
        else:
            raise ConfigError(f"bad functional entry {entry!r}")
        if not spec.is_coefficient_only():
            raise ConfigError("scan functionals must be coefficient-only")
        if override is not None:
            return FunctionalEntry(spec, _bound_from_text(override), str(override), "override")
        fam = spec.params.get("family")
        v = known_bound(spec, m_max)
        kind = "sharp" if fam else "family-max"
        text = str(v) if fam else f"|J(kappa_m,0)| max over m<={m_max}"
        return FunctionalEntry(spec, v.abs2(), text, kind)
    except SpecError as exc:
        raise ConfigError(str(exc)) from exc


def _family(d) -> FamilySpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"family entry needs a 'kind': {d!r}")
    kind = d["kind"]
    try:
        if kind == "koebe_root":
            m = tuple(int(x) for x in d.get("m", (1, 2, 3, 4, 5, 6)))
            angles = int(d.get("angles", 16))
            phases = int(d.get("t_phases", 8))
            moduli = tuple(Fraction(str(t)) for t in d.get("t_moduli", DEFAULT_T_MODULI))
            if not m or min(m) < 1:
                raise ConfigError("koebe_root family needs m >= 1 and a nonempty m list")
            if angles not in (1, 2, 4, 8, 16) or phases not in (1, 2, 4, 8):
                raise ConfigError("angles must divide 16 and t_phases must divide 8")
            if not moduli or any(not 0 <= t <= 1 for t in moduli):
                raise ConfigError("t_moduli must be a nonempty list inside [0, 1]")
            return FamilySpec(kind, m=m, angles=angles, t_moduli=moduli, t_phases=phases)
        if kind == "loewner":
            seeds = tuple(int(s) for s in d.get("seeds", ()))
            T = tuple(float(t) for t in d.get("T", (1.0,)))
            pieces = int(d.get("pieces", 4))
            if not seeds or not T or pieces < 1 or any(t < 0 for t in T):
                raise ConfigError("loewner family needs seeds, non-negative T values and pieces >= 1")
            return FamilySpec(kind, seeds=seeds, T=T, pieces=pieces)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad family entry {d!r}: {exc}") from exc
    raise ConfigError(f"unknown family kind {kind!r}")


def _validate(cfg: ScanConfig):
    if not cfg.families:
        raise ConfigError("at least one family is required")
    if not 1 <= cfg.order <= 512:
        raise ConfigError("order must lie in [1, 512]")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.format not in ("json", "csv", "both"):
        raise ConfigError("format must be json, csv or both")
    need = max((e.spec.max_coefficient_index() for e in cfg.functionals), default=1)
    if cfg.order + 1 < need:
        raise ConfigError(f"order {cfg.order} does not reach a_{need}")


def config_from_dict(d: dict) -> ScanConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - {"functionals", "families", "order", "mode", "witness_tol", "m_max",
                        "workers", "out", "format"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    m_max = int(d.get("m_max", 6))
    funcs = d.get("functionals", [])
    if not isinstance(funcs, list):
        raise ConfigError("functionals must be a list")
    fams = d.get("families", [{"kind": "koebe_root"}])
    if not isinstance(fams, list):
        raise ConfigError("families must be a list")
    try:
        cfg = ScanConfig(
            functionals=tuple(_functional(e, m_max) for e in funcs),
            families=tuple(_family(f) for f in fams),
            order=int(d.get("order", 64)),
            mode=_mode(d.get("mode", "exact")),
            witness_tol=float(d.get("witness_tol", 1e-9)),
            m_max=m_max,
            workers=int(d.get("workers", 1)),
            out=d.get("out"),
            format=str(d.get("format", "both")),
            raw=d,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    _validate(cfg)
    return cfg


def load_config(path) -> ScanConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(d)


def default_config() -> ScanConfig:
    """Zalcman n = 3..6 over the root-transformed Koebe grid."""
    return config_from_dict({"functionals": [f"zalcman:{n}" for n in range(3, 7)],
                             "families": [{"kind": "koebe_root"}]})
