"""CSV and 16-bit PGM writers for phase grids."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .grid import PhaseGrid

__all__ = ["format_float", "grid_to_csv", "write_csv", "pgm16_bytes", "write_pgm16", "read_pgm16"]


def format_float(v: float) -> str:
    # 17 significant digits round-trip every double; %g never uses a locale
    return "%.17g" % v


def grid_to_csv(grid: PhaseGrid, decompose: bool = False) -> str:
    a1, a2 = grid.axis1, grid.axis2
    fixed = ",".join(f"{k}={format_float(v)}" for k, v in grid.slice.fixed)
    header = [a1.label, a2.label, "W"]
    cols = [grid.values]
    if decompose:
        if grid.terms is None:
            raise ValueError("grid carries no term decomposition")
        header += ["W1", "W2", "W3"]
        cols += [grid.terms["W1"], grid.terms["W2"], grid.terms["W3"]]
    c1, c2 = np.meshgrid(a1.points, a2.points)
    table = np.column_stack([c1.ravel(), c2.ravel()] + [c.ravel() for c in cols])
    row_fmt = ",".join(["%.17g"] * table.shape[1])
    lines = [f"# fixed: {fixed}", ",".join(header)]
    lines.extend(row_fmt % tuple(row) for row in table.tolist())
    return "\n".join(lines) + "\n"


def write_csv(grid: PhaseGrid, path, decompose: bool = False) -> Path:
    path = Path(path)
    path.write_bytes(grid_to_csv(grid, decompose).encode("ascii"))
    return path


def pgm16_bytes(values: np.ndarray) -> tuple[bytes, float, float]:
    """Binary P5 image, linear map of ``[min, max]`` onto ``[0, 65535]``; row 0 is the first data row."""
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        scaled = np.rint((values - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(values)
    rows, cols = values.shape
    header = f"P5\n{cols} {rows}\n65535\n".encode("ascii")
    return header + scaled.astype(">u2").tobytes(), lo, hi


def write_pgm16(grid: PhaseGrid, path) -> tuple[Path, Path]:
    """Write the image and a sidecar ``<path>.txt`` holding the min/max of the mapping."""
    path = Path(path)
    data, lo, hi = pgm16_bytes(grid.values)
    path.write_bytes(data)
    sidecar = path.with_name(path.name + ".txt")
    a1, a2 = grid.axis1, grid.axis2
    sidecar.write_bytes(
        (
            f"min={format_float(lo)}\nmax={format_float(hi)}\n"
            f"columns={a1.label}:{format_float(a1.min)}:{format_float(a1.max)}:{a1.count}\n"
            f"rows={a2.label}:{format_float(a2.min)}:{format_float(a2.max)}:{a2.count}\n"
        ).encode("ascii")
    )
    return path, sidecar


def read_pgm16(path) -> np.ndarray:
    """Raw 16-bit samples of a P5 file written by :func:`write_pgm16`."""
    data = Path(path).read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"65535":
        raise ValueError(f"{path}: not a 16-bit P5 graymap")
    cols, rows = (int(t) for t in dims.split())
    return np.frombuffer(body, dtype=">u2").reshape(rows, cols)
