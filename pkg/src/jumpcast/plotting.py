"""Matplotlib styling and rendering of relative-performance curves to bytes."""
from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SERIES_STYLE = {
    "best_measurable": dict(color="black", linestyle="-", label="best measurable"),
    "best_linear": dict(color="tab:blue", linestyle="--", label="best linear"),
    "blue": dict(color="tab:red", linestyle="-.", label="best linear unbiased"),
    "trivial": dict(color="tab:green", linestyle=":", label="trivial"),
}

RC = {
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.color": "gainsboro",
    "lines.linewidth": 1.6,
    "legend.frameon": False,
    # glyphs as paths keep the SVG free of external font references
    "svg.fonttype": "path",
    "svg.hashsalt": "jumpcast",
}


def sweep_figure(table):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        gammas = [r.gamma for r in table.rows]
        for name, style in SERIES_STYLE.items():
            (line,) = ax.plot(gammas, [getattr(r, name) for r in table.rows], **style)
            line.set_gid(f"series-{name}")
        crit = math.sqrt(table.t_obs)
        if gammas[0] <= crit <= gammas[-1]:
            ax.axvline(crit, color="grey", linewidth=0.8, linestyle=(0, (2, 3)), gid="critical")
        ax.set_xlabel("Relative volatility")
        ax.set_ylabel("Relative performance")
        ax.set_ylim(0.0, 1.05)
        ax.set_title(f"T = {table.t_obs:g}, S = {table.s_target:g}")
        ax.legend(loc="lower right")
        fig.tight_layout()
    return fig


def path_figure(path):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        ax.plot(path.times, path.returns, color="tab:blue", linewidth=1.0, gid="series-return")
        ax.set_xlabel("Time")
        ax.set_ylabel("Return")
        fig.tight_layout()
    return fig


def figure_bytes(fig, fmt: str = "svg") -> bytes:
    buf = io.BytesIO()
    with plt.rc_context(RC):
        # no timestamp, so identical inputs give identical bytes
        fig.savefig(buf, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    plt.close(fig)
    return buf.getvalue()
