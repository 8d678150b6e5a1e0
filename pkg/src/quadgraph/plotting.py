"""Figure rendering for census and dist tables.

All figures are greyscale and written with matplotlib's Agg backend, so
the format follows the output suffix (.svg, .png, .pdf).
"""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .reports import SchemaError  # noqa: E402

__all__ = ["GREYS", "KINDS", "KIND_SCHEMA", "render", "plot_minmax", "plot_lognum",
           "plot_stacked", "plot_hist"]

GREYS = ("0.15", "0.35", "0.55", "0.75", "0.9")

KIND_SCHEMA = {"minmax": "census", "lognum": "census", "stacked": "census", "hist": "dist"}
KINDS = tuple(KIND_SCHEMA)

_rc = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "svg.hashsalt": "quadgraph",
    "svg.fonttype": "none",
}


def _new(width=6.0, ratio=None):
    ratio = ratio or (math.sqrt(5) - 1) / 2
    return plt.subplots(figsize=(width, width * ratio))


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def _by_n(records):
    out = defaultdict(list)
    for r in records:
        out[r["n"]].append(r)
    return dict(sorted(out.items()))


def _numeric_k(r):
    k = r["k"]
    return int(k[2:]) if isinstance(k, str) else k


def plot_minmax(records, path):
    """Smallest and largest attained leaf count against p, one pair of lines per n."""
    with plt.rc_context(_rc):
        fig, ax = _new()
        styles = ("-", "--", ":", "-.")
        for i, (n, rows) in enumerate(_by_n(records).items()):
            per_p = defaultdict(list)
            for r in rows:
                if r["count"] > 0:
                    per_p[r["p"]].append(_numeric_k(r))
            ps = sorted(per_p)
            lo = [min(per_p[p]) for p in ps]
            hi = [max(per_p[p]) for p in ps]
            ls = styles[i % len(styles)]
            ax.plot(ps, lo, ls, color="0.1", marker=".", ms=3, label=f"n={n} lower")
            ax.plot(ps, hi, ls, color="0.55", marker=".", ms=3, label=f"n={n} upper")
        ax.set_xlabel("p")
        ax.set_ylabel("number of leaves")
        ax.legend(frameon=False)
        _save(fig, path)


def plot_lognum(records, path):
    """ln N_k against p, one broken line per k."""
    groups = _by_n(records)
    with plt.rc_context(_rc):
        fig, axes = plt.subplots(len(groups), 1, figsize=(6.0, 3.2 * len(groups)), squeeze=False)
        for ax, (n, rows) in zip(axes[:, 0], groups.items()):
            lines = defaultdict(dict)
            for r in rows:
                if isinstance(r["k"], int) and r["count"] > 0:
                    lines[r["k"]][r["p"]] = math.log(r["count"])
            for j, k in enumerate(sorted(lines)):
                pts = sorted(lines[k].items())
                ax.plot([x for x, _ in pts], [y for _, y in pts],
                        color=GREYS[j % len(GREYS)], lw=0.8, marker=".", ms=2)
            ax.set_title(f"n = {n}")
            ax.set_xlabel("p")
            ax.set_ylabel("log-number of graphs")
        _save(fig, path)


def plot_stacked(records, path):
    """Stacked percentage bars per p, k increasing upwards."""
    groups = _by_n(records)
    with plt.rc_context(_rc):
        fig, axes = plt.subplots(len(groups), 1, figsize=(7.0, 3.2 * len(groups)), squeeze=False)
        for ax, (n, rows) in zip(axes[:, 0], groups.items()):
            per_p = defaultdict(list)
            for r in rows:
                per_p[r["p"]].append(r)
            ps = sorted(per_p)
            xs = np.arange(len(ps))
            bottom = np.zeros(len(ps))
            for i, p in enumerate(ps):
                for r in sorted(per_p[p], key=_numeric_k):
                    h = 100.0 * r["count"] / r["total"]
                    ax.bar(xs[i], h, bottom=bottom[i], width=0.8,
                           color=GREYS[_numeric_k(r) % len(GREYS)], edgecolor="white", lw=0.2)
                    bottom[i] += h
            ax.set_xticks(xs)
            ax.set_xticklabels([str(p) for p in ps], rotation=90)
            ax.set_ylim(0, 100)
            ax.set_title(f"n = {n}")
            ax.set_xlabel("p")
            ax.set_ylabel("proportion (%)")
        _save(fig, path)


def plot_hist(records, path):
    """Binned Delta masses with the semicircle prediction on top."""
    by_p = defaultdict(list)
    for r in records:
        by_p[r["p"]].append(r)
    with plt.rc_context(_rc):
        fig, axes = plt.subplots(len(by_p), 1, figsize=(6.0, 3.2 * len(by_p)), squeeze=False)
        for ax, (p, rows) in zip(axes[:, 0], sorted(by_p.items())):
            lo = np.array([r["bin_lo"] for r in rows])
            hi = np.array([r["bin_hi"] for r in rows])
            width = hi - lo
            ax.bar(lo, np.array([r["empirical"] for r in rows]) / width, width=width, align="edge",
                   color="0.75", edgecolor="0.35", lw=0.3, label=f"empirical ({rows[0]['mode']})")
            z = np.linspace(-0.25, 0.25, 401)
            dens = 8.0 / math.pi * np.sqrt(np.clip(1 - (4 * z) ** 2, 0, None))
            label = "semicircle" + (" (conjectural)" if p <= 3 else "")
            ax.plot(z, dens, color="0.1", lw=1.0, label=label)
            ax.set_title(f"p = {p}")
            ax.set_xlabel(r"$\Delta$")
            ax.set_ylabel("density")
            ax.legend(frameon=False)
        _save(fig, path)


_PLOTTERS = {
    "minmax": plot_minmax,
    "lognum": plot_lognum,
    "stacked": plot_stacked,
    "hist": plot_hist,
}


def render(kind: str, schema: str, records, path) -> None:
    """Draw ``kind`` from parsed records, checking the table schema first."""
    if kind not in KIND_SCHEMA:
        raise SchemaError(f"unknown plot kind {kind!r}")
    if KIND_SCHEMA[kind] != schema:
        raise SchemaError(f"plot kind {kind!r} needs a {KIND_SCHEMA[kind]} table, got {schema}")
    if not records:
        raise SchemaError("no rows to plot")
    _PLOTTERS[kind](records, path)
