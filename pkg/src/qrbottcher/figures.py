"""Matplotlib figure rendering for the CLI report paths.

Figures are rendered headlessly to files next to the delimited output.
Each helper takes already-computed data; nothing here recomputes math.
The savefig wrapper pins dpi and strips the software metadata tag so
repeated runs produce identical bytes.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dilatation import ray_angle_defect
from .field import BOUNDED_SENTINEL, EscapeField, GridSpec


def _save(fig, path):
    fig.savefig(path, dpi=130, metadata={"Software": ""})
    plt.close(fig)


def _extent(g: GridSpec):
    return (
        g.center.real - 0.5 * g.width,
        g.center.real + 0.5 * g.width,
        g.center.imag - 0.5 * g.height,
        g.center.imag + 0.5 * g.height,
    )


def escape_figure(field: EscapeField, path, title: str) -> None:
    """Escape-time field: log-scaled step counts, bounded set in black."""
    vals = field.values.astype(float)
    img = np.log1p(np.maximum(vals, 0.0))
    img[field.values == BOUNDED_SENTINEL] = np.nan
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    cmap = plt.get_cmap("inferno").copy()
    cmap.set_bad("black")
    im = ax.imshow(img, origin="upper", extent=_extent(field.grid), cmap=cmap)
    fig.colorbar(im, ax=ax, label="log(1 + escape step)")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title)
    _save(fig, path)


def dilatation_figure(matrix: np.ndarray, g: GridSpec, path, title: str) -> None:
    """|mu| of an iterate over the grid; branch-point pixels in black."""
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("black")
    im = ax.imshow(matrix, origin="upper", extent=_extent(g), cmap=cmap, vmin=0.0)
    fig.colorbar(im, ax=ax, label="|mu|")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title)
    _save(fig, path)


def decay_figure(diffs, tol: float, path, title: str) -> None:
    """Super-geometric decay of the approximant sup-differences."""
    ks = list(range(len(diffs)))
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    positive = [(k, d) for k, d in zip(ks, diffs) if d > 0]
    if positive:
        ax.semilogy([k for k, _ in positive], [d for _, d in positive], "o-")
    ax.axhline(tol, color="crimson", ls="--", lw=1, label=f"tol = {tol:g}")
    ax.set_xlabel("k")
    ax.set_ylabel("sup |F_{k+1} - F_k| on probe grid")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)


def ray_defect_figure(p, rays, path, title: str) -> None:
    """Rotation defect of H across the ray sector with the located roots."""
    lo = p.theta - 0.5 * math.pi
    hi = p.theta + 0.5 * math.pi
    xs = np.linspace(lo + 1e-9, hi - 1e-9, 2001)
    ys = [ray_angle_defect(p, float(x)) for x in xs]
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    ax.plot(xs, ys, lw=1.2)
    ax.axhline(0.0, color="k", lw=0.8)
    for r in rays:
        ax.axvline(r.phi, color="crimson", ls=":", lw=1)
        ax.plot([r.phi], [0.0], "o", color="crimson")
    ax.set_xlabel("ray angle")
    ax.set_ylabel("2 arg h(e^{i phi}) - phi")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    _save(fig, path)


def trace_sweep_figure(rows, path, title: str) -> None:
    """tr^2(A) and the cos-phi margin over the (K, theta) sweep."""
    K = np.array([r[0] for r in rows])
    tr2 = np.array([r[3] for r in rows])
    margin = np.array([r[4] for r in rows])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    ax1.scatter(K, tr2, s=3, alpha=0.35, linewidths=0)
    ax1.axhline(4.0, color="crimson", ls="--", lw=1, label="tr^2 = 4")
    ax1.set_xlabel("K")
    ax1.set_ylabel("tr^2(A)")
    ax1.set_yscale("log")
    ax1.legend()
    ax2.scatter(K, margin, s=3, alpha=0.35, linewidths=0)
    ax2.axhline(0.0, color="crimson", ls="--", lw=1)
    ax2.set_xlabel("K")
    ax2.set_ylabel("cos(phi) - lower bound")
    fig.suptitle(title)
    _save(fig, path)


def distortion_figure(ns, growth, path, title: str) -> None:
    """Distortion of H^n along the fixed ray versus n."""
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    finite = [(n, gv) for n, gv in zip(ns, growth) if math.isfinite(gv)]
    ax.semilogy([n for n, _ in finite], [gv for _, gv in finite], "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("(1 + |mu_n|) / (1 - |mu_n|)")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)
