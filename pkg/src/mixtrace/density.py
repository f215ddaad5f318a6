"""2D histogram of visited source positions and greedy peak extraction."""
from __future__ import annotations

import csv
import logging
from typing import NamedTuple

import numpy as np

from . import geometry as geo
from .errors import IoError, OutOfWindow
from .sampler import Window

log = logging.getLogger(__name__)

GRID_HEADER = ["ix", "iy", "x_lo", "x_hi", "y_lo", "y_hi", "count"]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


class DensityGrid:
    """``nx`` by ``ny`` cell counts over a window.

    Cell ``(i, j)`` covers ``[x_min + i*dx, x_min + (i+1)*dx)`` by the
    analogous y interval; the last cell on each axis is closed on the right.
    """

    def __init__(self, window: Window, nx: int = 200, ny: int = 200, counts=None):
        if nx < 1 or ny < 1:
            raise ValueError("grid needs at least one cell per axis")
        self.window = window
        self.nx, self.ny = int(nx), int(ny)
        if counts is None:
            counts = np.zeros((self.nx, self.ny), dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (self.nx, self.ny):
            raise ValueError(f"counts shape {counts.shape} != {(self.nx, self.ny)}")
        self.counts = counts

    @property
    def dx(self) -> float:
        return (self.window.x_max - self.window.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.window.y_max - self.window.y_min) / self.ny

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def x_edge(self, i):
        return self.window.x_min + np.asarray(i) * self.dx

    def y_edge(self, j):
        return self.window.y_min + np.asarray(j) * self.dy

    def center(self, i: int, j: int) -> np.ndarray:
        return np.array([self.window.x_min + (i + 0.5) * self.dx,
                         self.window.y_min + (j + 0.5) * self.dy])

    def _index(self, v: np.ndarray, lo: float, step: float, n: int, edge) -> np.ndarray:
        idx = np.floor((v - lo) / step).astype(np.int64)
        idx = np.clip(idx, 0, n - 1)
        # correct for rounding so the edges computed by ``edge`` are authoritative
        idx = np.where((idx < n - 1) & (v >= edge(idx + 1)), idx + 1, idx)
        idx = np.where((idx > 0) & (v < edge(idx)), idx - 1, idx)
        return idx

    def cell_of(self, points) -> tuple[np.ndarray, np.ndarray]:
        p = geo.as_points(points)
        if not np.all(self.window.contains(p)):
            raise OutOfWindow("source outside the density window")
        w = self.window
        ix = self._index(p[:, 0], w.x_min, self.dx, self.nx, self.x_edge)
        iy = self._index(p[:, 1], w.y_min, self.dy, self.ny, self.y_edge)
        return ix, iy

    def accumulate(self, config) -> DensityGrid:
        pts = getattr(config, "points", config)
        ix, iy = self.cell_of(pts)
        np.add.at(self.counts, (ix, iy), 1)
        return self

    def merge(self, other: DensityGrid) -> DensityGrid:
        if (other.window != self.window or other.nx != self.nx or other.ny != self.ny):
            raise ValueError("cannot merge grids with different geometry")
        return DensityGrid(self.window, self.nx, self.ny, self.counts + other.counts)

    __add__ = merge

    def blurred(self, radius: int) -> np.ndarray:
        """Box-blurred float counts, for display only."""
        if radius <= 0:
            return self.counts.astype(float)
        k = 2 * radius + 1
        padded = np.pad(self.counts.astype(float), radius, mode="constant")
        c = padded.cumsum(0).cumsum(1)
        c = np.pad(c, ((1, 0), (1, 0)))
        s = c[k:, k:] - c[:-k, k:] - c[k:, :-k] + c[:-k, :-k]
        return s / (k * k)


class Modes(NamedTuple):
    centers: np.ndarray
    counts: np.ndarray
    complete: bool


def modes(grid: DensityGrid, k: int = 3, min_separation_cells: int = 10) -> Modes:
    """Greedy non-maximum suppression on the raw counts.

    Picks the highest cell (ties to lowest ``i``, then ``j``), records its
    centre, zeroes every cell within ``min_separation_cells`` in Chebyshev
    distance, and repeats ``k`` times. Only cells with positive counts
    qualify; ``complete`` is False when fewer than ``k`` were found.
    """
    if k < 1 or min_separation_cells < 1:
        raise ValueError("k and min_separation_cells must be >= 1")
    if grid.total <= 0:
        raise ValueError("cannot extract modes from an empty grid")
    work = grid.counts.copy()
    centers, counts = [], []
    s = min_separation_cells
    for _ in range(k):
        # argmax on the flattened (i, j) C-order array returns the lowest i, then j
        flat = int(np.argmax(work))
        i, j = divmod(flat, grid.ny)
        if work[i, j] <= 0:
            break
        centers.append(grid.center(i, j))
        counts.append(int(work[i, j]))
        work[max(0, i - s):i + s + 1, max(0, j - s):j + s + 1] = 0
    complete = len(centers) == k
    if not complete:
        log.warning("only %d of %d requested modes found", len(centers), k)
    return Modes(np.array(centers, dtype=float).reshape(-1, 2),
                 np.array(counts, dtype=np.int64), complete)


def write_grid(grid: DensityGrid, path) -> None:
    """One row per cell, ``ix``-major, with cell edges and count."""
    xe = grid.x_edge(np.arange(grid.nx + 1))
    ye = grid.y_edge(np.arange(grid.ny + 1))
    xe[-1], ye[-1] = grid.window.x_max, grid.window.y_max
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(GRID_HEADER)
            for i in range(grid.nx):
                for j in range(grid.ny):
                    w.writerow([i, j, _fmt(xe[i]), _fmt(xe[i + 1]), _fmt(ye[j]),
                                _fmt(ye[j + 1]), int(grid.counts[i, j])])
    except OSError as exc:
        raise IoError(f"cannot write grid to {path}: {exc}") from exc


def read_grid(path) -> DensityGrid:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read grid from {path}: {exc}") from exc
    if not rows or rows[0] != GRID_HEADER:
        raise ValueError(f"{path}: expected header {','.join(GRID_HEADER)}")
    body = rows[1:]
    if not body:
        raise ValueError(f"{path}: grid has no cells")
    try:
        ix = np.array([int(r[0]) for r in body])
        iy = np.array([int(r[1]) for r in body])
        edges = np.array([[float(v) for v in r[2:6]] for r in body])
        cnt = np.array([int(r[6]) for r in body], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed grid row ({exc})") from exc
    nx, ny = int(ix.max()) + 1, int(iy.max()) + 1
    if len(body) != nx * ny or len(set(zip(ix.tolist(), iy.tolist()))) != nx * ny:
        raise ValueError(f"{path}: expected {nx * ny} distinct cells, found {len(body)} rows")
    window = Window(float(edges[:, 0].min()), float(edges[:, 1].max()),
                    float(edges[:, 2].min()), float(edges[:, 3].max()))
    counts = np.zeros((nx, ny), dtype=np.int64)
    counts[ix, iy] = cnt
    return DensityGrid(window, nx, ny, counts)
