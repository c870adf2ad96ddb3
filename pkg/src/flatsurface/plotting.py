"""Matplotlib figures for the CLI report path (PNG, PDF or anything savefig accepts)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

from .render import _face_points, color  # noqa: E402
from .unfolding import disk_boundary_segments  # noqa: E402


# keys that would otherwise stamp versions or dates into the file
_QUIET = {".png": {"Software": None}, ".svg": {"Date": None}, ".pdf": {"CreationDate": None}}


def _save(fig, path):
    meta = _QUIET.get(Path(path).suffix.lower())
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata=meta)
    plt.close(fig)
    return path


def plot_development(unfolding, path, title=None):
    pos = unfolding.development.positions
    fig, ax = plt.subplots(figsize=(6, 6))
    polys = [pos[t] for t in sorted(pos)]
    ax.add_collection(PolyCollection(polys, facecolors="#eef3fb", edgecolors="#a0aab4", linewidths=0.5))
    for tag, sides, _ in disk_boundary_segments(unfolding.disk):
        pts = [pos[sides[0][0]][sides[0][1]]] + [pos[t][(s + 1) % 3] for t, s in sides]
        xs, ys = zip(*pts)
        if isinstance(tag, int):
            ax.plot(xs, ys, color=color(tag), lw=2.5, label=f"seam {tag}")
        else:
            ax.plot(xs, ys, color="black", lw=1.5)
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.set_title(title or f"development of {unfolding.surface.name or 'surface'}")
    if unfolding.cut_arcs:
        handles, labels = ax.get_legend_handles_labels()
        uniq = dict(zip(labels, handles))
        ax.legend(uniq.values(), uniq.keys(), fontsize=7, loc="best")
    return _save(fig, path)


def plot_triangulation(tri, path, title=None):
    fig, ax = plt.subplots(figsize=(6, 6))
    cols = max(1, int(len(tri.faces) ** 0.5 + 0.999))
    cell = max((max(f.lengths) for f in tri.faces), default=1.0) * 1.25
    for i, f in enumerate(tri.faces):
        ox, oy = (i % cols) * cell, -(i // cols) * cell
        pts = [(x + ox, y + oy) for x, y in _face_points(f.lengths)]
        ax.fill(*zip(*pts), color="#f4f1e8")
        for k, eid in enumerate(f.edges):
            a, b = pts[k], pts[(k + 1) % 3]
            ax.plot([a[0], b[0]], [a[1], b[1]], color=color(eid), lw=2)
            ax.annotate(f"e{eid}", ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2), fontsize=7)
    ax.set_aspect("equal")
    ax.set_title(title or f"ideal triangulation of {tri.surface.name or 'surface'}")
    return _save(fig, path)


def plot_spectrum(result, path, title=None):
    fig, ax = plt.subplots(figsize=(6, 3))
    if result.lengths:
        xs, ms = zip(*result.lengths)
        ax.vlines(xs, 0, ms, color="#1f77b4")
        ax.plot(xs, ms, "o", color="#1f77b4", ms=3)
    ax.set_xlabel("arc length")
    ax.set_ylabel("multiplicity")
    ax.set_xlim(0, result.bound)
    ax.set_title(title or f"raw length spectrum up to {result.bound:g}")
    return _save(fig, path)
