"""Figures for population trajectories.

Two renderers: a dependency-free SVG writer producing a fixed 960x540 plot
with one ``<polyline>`` per curve (byte-stable output), and a matplotlib
figure for PNG/PDF reports.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .transfer import Trajectory

WIDTH, HEIGHT = 960, 540
MARGIN = dict(left=70, right=30, top=30, bottom=60)

# matches the paper's colour scheme: F blue, U2 yellow, U4 red, U6 green
CURVES = (
    ("F", "f_pop", "#1f77b4"),
    ("U2", "u2", "#e6b800"),
    ("U4", "u4", "#d62728"),
    ("U6", "u6", "#2ca02c"),
)


MAX_VERTICES = 4000


def _thin(n: int) -> np.ndarray:
    """Indices of at most ``MAX_VERTICES`` evenly strided samples, endpoints kept."""
    if n <= MAX_VERTICES:
        return np.arange(n)
    idx = np.arange(0, n, int(np.ceil(n / MAX_VERTICES)))
    return idx if idx[-1] == n - 1 else np.append(idx, n - 1)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def trajectory_svg(traj: Trajectory, title: str = "") -> str:
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    t_max = float(traj.times[-1]) or 1.0

    def sx(t):
        return x0 + (x1 - x0) * np.asarray(t) / t_max

    def sy(v):
        return y0 + (y1 - y0) * np.asarray(v)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>',
    ]
    for k in range(6):
        v = k / 5
        y = _fmt(sy(v))
        out.append(f'<line x1="{x0 - 5}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{y}" font-size="12" text-anchor="end" '
                   f'dominant-baseline="middle">{v:.1f}</text>')
        t = t_max * k / 5
        x = _fmt(sx(t))
        out.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{y0 + 20}" font-size="12" text-anchor="middle">{t:.4g}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 15}" font-size="14" '
               'text-anchor="middle">t</text>')
    if title:
        out.append(f'<text x="{(x0 + x1) / 2:.0f}" y="20" font-size="14" '
                   f'text-anchor="middle">{title}</text>')

    keep = _thin(traj.times.size)
    for name, attr, colour in CURVES:
        xs, ys = sx(traj.times[keep]), sy(getattr(traj, attr)[keep])
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
        out.append(f'<polyline id="{name}" fill="none" stroke="{colour}" '
                   f'stroke-width="1.5" points="{pts}"/>')

    lx, ly = x1 - 90, y1 + 15
    out.append(f'<rect x="{lx - 10}" y="{ly - 12}" width="90" height="{len(CURVES) * 20 + 6}" '
               'fill="white" stroke="#999"/>')
    for i, (name, _, colour) in enumerate(CURVES):
        y = ly + 20 * i
        out.append(f'<line x1="{lx}" y1="{y}" x2="{lx + 25}" y2="{y}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{y}" font-size="13" dominant-baseline="middle">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_figure(traj: Trajectory, path, title: str = "", t_star: float | None = None) -> Path:
    """Render the four population curves with matplotlib; format follows the suffix."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, attr, colour in CURVES:
        ax.plot(traj.times, getattr(traj, attr), color=colour, lw=1.2, label=name)
    if t_star is not None:
        ax.axvline(t_star, color="0.5", ls="--", lw=0.8)
    ax.set_xlim(traj.times[0], traj.times[-1])
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    if title:
        ax.set_title(title)
    ax.legend(loc="center right", frameon=True)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path
