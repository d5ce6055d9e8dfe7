"""Command-line entry point: ``univalent scan|zalcman|grunsky|catalog|report``.

Exit codes: 0 all checks pass, 1 a violation (or an unconfirmed one) was
found, 2 configuration, I/O or runtime failure.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import catalog as cat
from .errors import ConfigError, UnivalentError
from .gaussian import QQi
from .maps import SigmaClassMap
from .series import Mode

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


def _fail(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_ERROR)


def _int_range(text: str) -> list:
    """``"3-6"`` or ``"1,2,5"``."""
    out = []
    try:
        for part in text.split(","):
            if "-" in part.strip()[1:]:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise click.BadParameter(f"expected integers like '3-6' or '1,2,5', got {text!r}") from None
    return out


def _scalar(text: str):
    """Exact rational/Gaussian when possible, float or complex otherwise."""
    try:
        return QQi.parse(text) if "i" in text else Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return complex(text.replace("i", "j")) if "i" in text else float(text)
        except ValueError:
            raise click.BadParameter(f"not a number: {text!r}") from None


@click.group()
def main():
    """Coefficient inequalities, Grunsky norms and Schwarzians for univalent maps."""


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON scan config.")
@click.option("--order", type=int, help="Truncation order (overrides the config).")
@click.option("--mode", type=click.Choice(["exact", "approx"]), help="Numeric mode.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "both"]), help="Report format.")
@click.option("--figures/--no-figures", default=False, help="Also write PNG figures.")
def scan(config_path, order, mode, out_dir, workers, fmt, figures):
    """Run an inequality scan and write the report."""
    from .verifier.config import default_config, load_config
    from .verifier.report import emit_report
    from .verifier.scan import run_scan

    try:
        cfg = load_config(config_path) if config_path else default_config()
        cfg = cfg.with_overrides(order=order, mode=mode, workers=workers, format=fmt,
                                 out=out_dir)
    except (ConfigError, UnivalentError) as exc:
        _fail(str(exc))
    report = run_scan(cfg)
    target = cfg.out or "scan_report"
    try:
        paths = emit_report(report, target, cfg.format)
        if figures:
            from .verifier.plotting import render_figures
            paths += render_figures(report, target)
    except OSError as exc:
        _fail(f"cannot write report: {exc}")
    s = report.summary
    click.echo(f"checks={s['checks']} passed={s['passed']} violations={s['violations']} "
               f"unconfirmed={s['unconfirmed']} errors={s['errors']} min_margin={s['min_margin']} "
               f"witnesses={len(s['witnesses'])} config_hash={s['config_hash'][:16]}")
    for p in paths:
        click.echo(f"wrote {p}")
    sys.exit(report.exit_code)


@main.command()
@click.option("--n", "n_text", default="3-8", show_default=True, help="Range of n.")
@click.option("--m", "m_text", default="1-6", show_default=True, help="Range of root orders m.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write the table as JSON.")
def zalcman(n_text, m_text, out_path):
    """Tabulate |J_n(kappa_m)| against (n-1)^2."""
    from .verifier.checks import zalcman_subdominance_check

    n_vals = _int_range(n_text)
    if min(n_vals) < 3:
        _fail("n must be >= 3")
    rep = zalcman_subdominance_check(n_vals, _int_range(m_text))
    for r in rep.rows:
        click.echo(f"n={r['n']:2d} m={r['m']:2d} |J|={r['abs_value']:<12.6g} bound={r['bound']:<4d} {r['relation']}")
    _write_json(out_path, rep.as_dict())
    sys.exit(EXIT_OK if rep.passed else EXIT_VIOLATION)


@main.command()
@click.option("--m", "m_text", default="1,2,3", show_default=True, help="Indices m of F_{m,t}.")
@click.option("--t", "t_text", default="1/2", show_default=True, help="Parameter t.")
@click.option("--N", "n_text", default="1,2,4,8,16,32,64", show_default=True, help="Truncation sizes.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Write JSON table and figure here.")
def grunsky(m_text, t_text, n_text, out_dir):
    """Truncated Grunsky norms of F_{m,t} for growing N."""
    from .verifier.checks import grunsky_convergence_check

    N_list = _int_range(n_text)
    t = _scalar(t_text)
    order = 2 * max(N_list) + 1
    try:
        maps = [(f"F_{{{m},{t_text}}}", cat.sigma_root_map(m, t, order)) for m in _int_range(m_text)]
        rep = grunsky_convergence_check(maps, N_list)
    except UnivalentError as exc:
        _fail(str(exc))
    for r in rep.rows:
        click.echo(f"{r['label']}: k={r['k']} norms=" + " ".join(f"{x:.10f}" for x in r["norms"])
                   + f" monotone={r['monotone']} stabilized={r['stabilized']} below_k={r['below_ceiling']}"
                   + (f" gap={r['gap']:.3e}" if r["gap"] is not None else ""))
    if out_dir:
        from .verifier.plotting import plot_grunsky_convergence

        Path(out_dir).mkdir(parents=True, exist_ok=True)
        _write_json(Path(out_dir) / "grunsky.json", rep.as_dict())
        plot_grunsky_convergence(rep.rows, Path(out_dir) / "grunsky.png")
    sys.exit(EXIT_OK if rep.passed else EXIT_VIOLATION)


_CATALOG = ("koebe", "koebe_root", "sigma_root_map", "affine_sigma", "small_k_extremal")


@main.command(name="catalog")
@click.argument("name", type=click.Choice(_CATALOG))
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--n", type=int, default=3, show_default=True)
@click.option("--theta", default="0", show_default=True, help="Angle in radians.")
@click.option("--t", "t_text", default="1", show_default=True)
@click.option("--k", "k_text", default="1/10", show_default=True)
@click.option("--b0", default="0")
@click.option("--b1", default="0")
@click.option("--order", type=int, default=10, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "approx"]), default="exact", show_default=True)
def catalog_cmd(name, m, n, theta, t_text, k_text, b0, b1, order, mode):
    """Print the coefficients of a catalog map as JSON."""
    try:
        th = float(theta)
        if name == "koebe":
            f = cat.koebe(th, order)
        elif name == "koebe_root":
            f = cat.koebe_root(m, th, order)
        elif name == "sigma_root_map":
            f = cat.sigma_root_map(m, _scalar(t_text), order)
        elif name == "affine_sigma":
            f = cat.affine_sigma(_scalar(b0), _scalar(b1), order)
        else:
            f = cat.small_k_extremal(n, _scalar(k_text), _scalar(t_text), order)
    except (UnivalentError, ValueError) as exc:
        _fail(str(exc))
    if Mode(mode) is Mode.APPROX:
        f = f.to_approx()
    key = "b" if isinstance(f, SigmaClassMap) else "a"
    start = 0 if key == "b" else 1
    coeffs = {f"{key}{i + start}": str(c) for i, c in enumerate(f.coefficients())}
    click.echo(json.dumps({"provenance": f.provenance, "coefficients": coeffs}, indent=1))


@main.command()
@click.argument("report_json", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "both"]), default="csv", show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def report(report_json, fmt, out_dir, figures):
    """Re-render a saved JSON report as CSV/JSON and PNG figures."""
    from .verifier.report import emit_report, load_report

    try:
        rep = load_report(report_json)
        stem = Path(report_json).stem
        paths = emit_report(rep, out_dir, fmt, stem=stem)
        if figures:
            from .verifier.plotting import render_figures
            paths += render_figures(rep, out_dir, stem=stem)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"cannot render report: {exc}")
    for p in paths:
        click.echo(f"wrote {p}")
    sys.exit(rep.exit_code)


def _write_json(path, obj):
    if not path:
        return
    try:
        Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True, default=str) + "\n")
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}")


if __name__ == "__main__":  # pragma: no cover
    main()
