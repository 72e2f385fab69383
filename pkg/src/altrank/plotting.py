"""Figure output for scheme comparisons.

SVGs are written with a fixed hash salt, no date metadata and glyphs as
paths, so the same input always renders to the same bytes.
"""

from __future__ import annotations

import io
import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from scipy.cluster.hierarchy import dendrogram  # noqa: E402

from .comparison import Dendrogram, PcaResult  # noqa: E402

RC = {
    "svg.hashsalt": "altrank",
    "svg.fonttype": "path",
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "figure.dpi": 72,
}


def _svg_bytes(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def pca_scatter(result: PcaResult, title: str = "") -> bytes:
    """Schemes in the plane of the first two principal components."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.0, 5.0))
        coords = result.coordinates
        xs = coords[:, 0]
        ys = coords[:, 1] if coords.shape[1] > 1 else 0.0 * xs
        ax.scatter(xs, ys, s=18, color="tab:blue", zorder=2)
        for label, x, y in zip(result.labels, xs, ys):
            ax.annotate(label, (x, y), xytext=(3, 3), textcoords="offset points")
        ev = result.explained_variance
        ax.set_xlabel(f"PC1 ({100 * ev[0]:.1f}%)" if ev.size else "PC1")
        ax.set_ylabel(f"PC2 ({100 * ev[1]:.1f}%)" if ev.size > 1 else "PC2")
        ax.axhline(0.0, color="0.8", lw=0.6, zorder=1)
        ax.axvline(0.0, color="0.8", lw=0.6, zorder=1)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _svg_bytes(fig)


def dendrogram_plot(tree: Dendrogram, title: str = "") -> bytes:
    """Horizontal dendrogram; the x axis is the linkage distance."""
    with plt.rc_context(RC):
        height = max(2.5, 0.3 * len(tree.labels) + 1.0)
        fig, ax = plt.subplots(figsize=(6.0, height))
        if len(tree.labels) > 1:
            with warnings.catch_warnings():
                # All-zero heights (identical schemes) give an empty x range.
                warnings.filterwarnings("ignore", message="Attempting to set identical")
                dendrogram(tree.linkage_matrix(), labels=list(tree.labels), orientation="left",
                           ax=ax, color_threshold=0, above_threshold_color="tab:blue")
            if not tree.heights().any():
                ax.set_xlim(1.0, 0.0)
        ax.set_xlabel("1 - correlation")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _svg_bytes(fig)
