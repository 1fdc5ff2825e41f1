"""Static figures for selection reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# scatter matrices beyond this many columns stop being readable
MAX_SCATTER_COLUMNS = 8


def _colors(labels: np.ndarray):
    cmap = plt.get_cmap("tab10")
    return [cmap(int(lab) % 10) for lab in labels]


def scatter_matrix_figure(data: np.ndarray, labels: np.ndarray):
    """Pairwise scatter of the first columns, colored by cluster label."""
    data = np.asarray(data)
    p = min(data.shape[1], MAX_SCATTER_COLUMNS)
    colors = _colors(labels)
    fig, axes = plt.subplots(p, p, figsize=(2.2 * p, 2.2 * p), squeeze=False)
    for i in range(p):
        for j in range(p):
            ax = axes[i][j]
            if i == j:
                ax.hist(data[:, i], bins=20, color="grey")
            else:
                ax.scatter(data[:, j], data[:, i], c=colors, s=12)
            if i == p - 1:
                ax.set_xlabel(f"V{j + 1}")
            if j == 0:
                ax.set_ylabel(f"V{i + 1}")
            ax.tick_params(labelsize=7)
    if data.shape[1] > p:
        fig.suptitle(f"first {p} of {data.shape[1]} variables")
    fig.tight_layout()
    return fig


def solution_figure(data, labels, mismatched, indices, threshold_text,
                    efficiency):
    """Retained coordinates with rows that lost their allocation marked."""
    data = np.asarray(data)
    mismatched = np.asarray(mismatched, dtype=bool)
    cols = np.asarray(indices, dtype=int) - 1
    fig, ax = plt.subplots(figsize=(6, 5))
    if cols.size >= 2:
        x, y = data[:, cols[0]], data[:, cols[1]]
        ax.set_xlabel(f"V{cols[0] + 1}")
        ax.set_ylabel(f"V{cols[1] + 1}")
    else:
        x, y = np.arange(data.shape[0]), data[:, cols[0]]
        ax.set_xlabel("row")
        ax.set_ylabel(f"V{cols[0] + 1}")
    ax.scatter(x[~mismatched], y[~mismatched],
               c=[c for c, m in zip(_colors(labels), mismatched) if not m],
               s=18, label="kept")
    if mismatched.any():
        ax.scatter(x[mismatched], y[mismatched], marker="x", c="red", s=40,
                   label="reallocated")
    ax.legend(loc="best", fontsize=8)
    subset_text = "{" + ", ".join(str(i) for i in indices) + "}"
    ax.set_title(f"threshold {threshold_text}: subset {subset_text}, "
                 f"efficiency {efficiency:.4f}")
    fig.tight_layout()
    return fig


def unreachable_figure(threshold_text):
    fig, ax = plt.subplots(figsize=(6, 2))
    ax.axis("off")
    ax.text(0.5, 0.5, f"threshold {threshold_text}: no qualifying subset",
            ha="center", va="center")
    return fig


def save(fig, path) -> None:
    fig.savefig(path)
    plt.close(fig)
