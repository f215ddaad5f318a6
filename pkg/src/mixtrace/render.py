"""SVG output: density heatmap with data and mode overlays, and an energy trace."""
from __future__ import annotations

import numpy as np

from .density import DensityGrid

SVG_NS = "http://www.w3.org/2000/svg"


def _ramp(t: float) -> str:
    # white at 0 to pure blue at 1
    v = int(round(255 * (1.0 - t)))
    return f"rgb({v},{v},255)"


def density_svg(grid: DensityGrid, data=None, modes=None, width: int = 600,
                blur: int = 0) -> str:
    """Heatmap of ``grid`` with data as black dots and modes as crosses.

    ``blur`` applies a box blur of that radius (in cells) to the display only.
    """
    w = grid.window
    aspect = (w.y_max - w.y_min) / (w.x_max - w.x_min)
    height = max(1, int(round(width * aspect)))
    sx = width / (w.x_max - w.x_min)
    sy = height / (w.y_max - w.y_min)

    def px(x, y):
        return (x - w.x_min) * sx, (w.y_max - y) * sy

    values = grid.blurred(blur)
    vmax = values.max()
    cw, ch = grid.dx * sx, grid.dy * sy
    out = [
        f'<svg xmlns="{SVG_NS}" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        '<g class="heatmap">',
    ]
    if vmax > 0:
        for i, j in zip(*np.nonzero(values)):
            x0, y1 = px(grid.x_edge(i), grid.y_edge(j + 1))
            out.append(f'<rect class="cell" x="{x0:.3f}" y="{y1:.3f}" width="{cw:.3f}" '
                       f'height="{ch:.3f}" fill="{_ramp(values[i, j] / vmax)}"/>')
    out.append("</g>")
    if data is not None and len(data):
        out.append('<g class="data">')
        for x, y in np.asarray(data, dtype=float).reshape(-1, 2):
            cx, cy = px(x, y)
            out.append(f'<circle class="datum" cx="{cx:.3f}" cy="{cy:.3f}" r="2" fill="#000000"/>')
        out.append("</g>")
    if modes is not None and len(modes):
        out.append('<g class="modes">')
        s = 6
        for x, y in np.asarray(modes, dtype=float).reshape(-1, 2):
            cx, cy = px(x, y)
            out.append(f'<path class="mode" d="M{cx - s:.3f},{cy - s:.3f}L{cx + s:.3f},{cy + s:.3f}'
                       f'M{cx - s:.3f},{cy + s:.3f}L{cx + s:.3f},{cy - s:.3f}" '
                       f'stroke="#d00000" stroke-width="2" fill="none"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def trace_svg(k, u_total, width: int = 600, height: int = 300) -> str:
    """Energy against iteration as a single polyline."""
    k = np.asarray(k, dtype=float)
    u = np.asarray(u_total, dtype=float)
    kspan = max(k.max() - k.min(), 1.0)
    uspan = max(u.max() - u.min(), 1e-12)
    xs = (k - k.min()) / kspan * width
    ys = height - (u - u.min()) / uspan * height
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return (f'<svg xmlns="{SVG_NS}" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n'
            f'<polyline class="energy" points="{pts}" fill="none" stroke="#1f3a93"/>\n'
            f'</svg>\n')
