"""PNG figures for scan reports and Grunsky convergence tables."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_margins", "plot_grunsky_convergence", "render_figures"]


def _float(x):
    try:
        return float(x)
    except (TypeError, ValueError):
        return None


def plot_margins(report, path) -> Path:
    """Smallest margin per functional, split by family."""
    by = defaultdict(dict)
    for r in report.records:
        m = _float(r.get("margin_decimal"))
        if m is None:
            continue
        cur = by[r["family"]].get(r["functional_id"])
        by[r["family"]][r["functional_id"]] = m if cur is None else min(cur, m)
    fig, ax = plt.subplots(figsize=(8, 4))
    width = 0.8 / max(len(by), 1)
    ids = sorted({fid for d in by.values() for fid in d})
    for i, fam in enumerate(sorted(by)):
        xs = [ids.index(fid) + i * width for fid in sorted(by[fam])]
        ax.bar(xs, [by[fam][fid] for fid in sorted(by[fam])], width=width, label=fam)
    ax.set_xticks([k + 0.4 - width / 2 for k in range(len(ids))])
    ax.set_xticklabels(ids, rotation=45, ha="right", fontsize=8)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_ylabel("min margin (bound - |J|)")
    if by:
        ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_grunsky_convergence(rows, path) -> Path:
    """Truncated norm against N, one line per map, with its dilatation as a dashed level."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for row in rows:
        line, = ax.plot(row["N"], row["norms"], marker="o", markersize=3, label=row["label"])
        if row.get("k") is not None:
            ax.axhline(row["k"], color=line.get_color(), linestyle="--", linewidth=0.8)
    ax.set_xlabel("N")
    ax.set_ylabel("truncated Grunsky norm")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def render_figures(report, out_dir, stem: str = "report") -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [plot_margins(report, out / f"{stem}_margins.png")]
