"""CSV and PGM serialization shared by the CLI.

All writers are atomic (temp file in the destination directory, then rename)
and byte-deterministic: floats are printed with 17 significant digits, which
round-trips IEEE doubles exactly, and lines always end with LF.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .analysis import BifurcationDiagram, CobwebTrace, DivergenceReport
from .compression import GrayImage
from .errors import PgmFormatError
from .fractals import BinaryImage, EscapeGrid
from .integrate import MapOrbit, Trajectory

Series = Union[Trajectory, MapOrbit, CobwebTrace, BifurcationDiagram]
Raster = Union[EscapeGrid, GrayImage, BinaryImage]


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_rows_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a generic CSV with 17-significant-digit numeric fields."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, int) else _fmt(v) for v in row))
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def write_trajectory_csv(series: Series, path) -> None:
    """Serialize a trajectory, orbit, trace, or diagram as CSV.

    Headers: ``t,x0,x1,...`` for trajectories, ``n,x0,...`` for map orbits
    (n is the absolute iterate index), ``x,y`` for traces and diagrams.
    """
    if isinstance(series, Trajectory):
        header = ["t"] + [f"x{i}" for i in range(series.dimension)]
        rows = (
            [t] + list(state) for t, state in zip(series.times, series.states)
        )
    elif isinstance(series, MapOrbit):
        header = ["n"] + [f"x{i}" for i in range(series.dimension)]
        rows = (
            [series.discarded + k] + list(p) for k, p in enumerate(series.points)
        )
    elif isinstance(series, CobwebTrace):
        header = ["x", "y"]
        rows = (list(v) for v in series.vertices)
    elif isinstance(series, BifurcationDiagram):
        header = ["x", "y"]
        rows = (list(p) for p in series.points)
    else:
        raise TypeError(f"cannot serialize {type(series).__name__} as series CSV")
    write_rows_csv(path, header, rows)


def write_divergence_csv(report: DivergenceReport, path) -> None:
    """Time / log-separation pairs with an x,y header."""
    write_rows_csv(
        path, ["x", "y"], ([t, s] for t, s in zip(report.times, report.log_separation))
    )


def _escape_to_bytes(grid: EscapeGrid) -> np.ndarray:
    counts = grid.counts.astype(np.float64)
    if grid.nmax == 1:
        scaled = np.full_like(counts, 255.0)
    else:
        scaled = np.rint(255.0 * (counts - 1.0) / (grid.nmax - 1.0))
    return scaled.astype(np.uint8)


def write_pgm(raster: Raster, path) -> None:
    """Write a binary PGM (P5, maxval 255); row 0 of the file is the top.

    Escape grids are scaled count -> round(255*(count-1)/(nmax-1)) and
    flipped so the largest imaginary part is on top; binary images are
    written as 0/255 with the same flip; gray images are already top-down.
    """
    if isinstance(raster, EscapeGrid):
        payload = _escape_to_bytes(raster)[::-1]
    elif isinstance(raster, GrayImage):
        payload = raster.pixels
    elif isinstance(raster, BinaryImage):
        payload = (raster.bits[::-1].astype(np.uint8)) * np.uint8(255)
    else:
        raise TypeError(f"cannot serialize {type(raster).__name__} as PGM")
    h, w = payload.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    _atomic_write(path, header + np.ascontiguousarray(payload).tobytes())


def read_pgm(path) -> GrayImage:
    """Read a binary PGM with maxval 255 into a GrayImage."""
    data = Path(path).read_bytes()
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PgmFormatError("unexpected end of PGM header")
        return data[start:pos]

    if token() != b"P5":
        raise PgmFormatError("only binary PGM (P5) is supported")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise PgmFormatError(f"malformed PGM header: {exc}") from None
    if maxval != 255:
        raise PgmFormatError(f"unsupported maxval {maxval} (need 255)")
    pos += 1  # exactly one whitespace byte separates header from payload
    payload = data[pos : pos + width * height]
    if len(payload) != width * height:
        raise PgmFormatError("PGM payload is shorter than width*height")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels=pixels.copy())
