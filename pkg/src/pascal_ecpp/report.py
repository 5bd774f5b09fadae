"""Figures written next to the CLI's text output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 3.2),
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_divisibility(stats: dict, path, base: str = "112"):
    """Running fraction of centers divisible by each d, against max_row."""
    trace = stats["trace"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        rows = sorted(trace)
        for k, d in enumerate(stats["final"]):
            ax.plot(rows, [trace[r][d][0] / trace[r][d][1] for r in rows],
                    marker="os^v"[k % 4], ms=3, ls=("-", "--", ":", "-.")[k % 4],
                    label=f"d = {d}")
        ax.set_xscale("log")
        ax.set_ylim(-0.02, 1.02)
        ax.set_xlabel("rows examined")
        ax.set_ylabel("fraction of centers divisible by d")
        ax.set_title(f"{base}-based triangle, center elements")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_center_primes(hits, max_row: int, path, base: str = "112"):
    """Digit count of the center element per row, PRP rows marked."""
    from .triangle import TriangleBase, center

    tb = TriangleBase.parse(base)
    xs = list(range(2, max_row + 1))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(xs, [len(str(center(tb, n))) for n in xs], lw=0.8, color="0.5")
        ax.scatter([r for r, _, _ in hits], [d for _, d, _ in hits], color="C3",
                   zorder=3, s=14, label="probable prime")
        ax.set_xlabel("row n")
        ax.set_ylabel("digits of E(n, n)")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_downrun(cert, path):
    """Digits of s_i along the certificate, smallest first."""
    digits = [len(str(st.s)) for st in cert.steps] + [len(str(cert.n))]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.step(range(len(digits)), digits, where="post")
        ax.set_xlabel("certificate step")
        ax.set_ylabel("decimal digits")
        ax.set_title(f"downrun for a {len(str(cert.n))}-digit prime")
        return _save(fig, path)
