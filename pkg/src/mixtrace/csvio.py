"""CSV tables: comma separated, header first, LF endings, 17 significant digits."""
from __future__ import annotations

import csv

import numpy as np

from .errors import IoError, MixtraceError


class CsvFormatError(MixtraceError, ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_table(path, header, rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_points(path, points, extra: dict | None = None) -> None:
    """Write an ``x,y`` table, with optional extra per-row columns."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    extra = extra or {}
    header = ["x", "y", *extra]
    cols = [pts[:, 0], pts[:, 1], *extra.values()]
    write_table(path, header, zip(*cols) if len(pts) else [])


def read_points(path) -> np.ndarray:
    """Read the ``x`` and ``y`` columns of a headed CSV file.

    Column names are matched case-insensitively; a file with exactly two
    columns is accepted whatever its header says.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    header = [h.strip().lower() for h in rows[0]]
    if "x" in header and "y" in header:
        ix, iy = header.index("x"), header.index("y")
    elif len(header) == 2:
        ix, iy = 0, 1
    else:
        raise CsvFormatError(f"{path}: line 1: header needs x and y columns")
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            x, y = float(row[ix]), float(row[iy])
        except (ValueError, IndexError):
            raise CsvFormatError(f"{path}: line {lineno}: cannot parse x,y from {row!r}") from None
        if not (np.isfinite(x) and np.isfinite(y)):
            raise CsvFormatError(f"{path}: line {lineno}: non-finite coordinate")
        pts.append((x, y))
    if not pts:
        raise CsvFormatError(f"{path}: no data rows")
    return np.array(pts, dtype=float)
