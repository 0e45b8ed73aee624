"""Rectangular field rendering: escape times and dilatation magnitudes.

The pixel-to-plane mapping is fixed so emitted artifacts are portable:
column i (0-based, left to right) has real part

    re = center.re + ((i + 0.5)/nx - 0.5) * width,

and the row counted j = 0, 1, ... from the *bottom* of the plane has

    im = center.im + ((j + 0.5)/ny - 0.5) * height.

Storage is row-major with row 0 the *top* row (max imaginary part), i.e.
storage row r corresponds to j = ny - 1 - r.  Every pixel is evaluated at
its center; evaluation order and parallelism never change the result.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dilatation import mu_iterate_general
from .errors import BranchPointError
from .qamap import OrbitStatus, QAMap, orbit

BOUNDED_SENTINEL = -1


@dataclass(frozen=True)
class GridSpec:
    """A rectangle in the plane sampled at nx * ny pixel centers."""

    center: complex
    width: float
    height: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"grid must have nx, ny >= 1, got {self.nx}x{self.ny}")
        if not (self.width > 0.0 and self.height > 0.0):
            raise ValueError(
                f"grid extent must be positive, got width={self.width}, height={self.height}"
            )

    def pixel_center(self, col: int, row: int) -> complex:
        """Plane point of storage cell (row, col); row 0 is the top row."""
        re = self.center.real + ((col + 0.5) / self.nx - 0.5) * self.width
        j = self.ny - 1 - row
        im = self.center.imag + ((j + 0.5) / self.ny - 0.5) * self.height
        return complex(re, im)

    def row_points(self, row: int) -> np.ndarray:
        """All pixel centers of one storage row as a complex vector."""
        cols = np.arange(self.nx)
        re = self.center.real + ((cols + 0.5) / self.nx - 0.5) * self.width
        j = self.ny - 1 - row
        im = self.center.imag + ((j + 0.5) / self.ny - 0.5) * self.height
        return re + 1j * im


@dataclass(frozen=True)
class EscapeField:
    """Escape steps per pixel; BOUNDED_SENTINEL marks bounded/undetermined."""

    grid: GridSpec
    values: np.ndarray  # int32, shape (ny, nx)

    def __post_init__(self):
        if self.values.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"{(self.grid.ny, self.grid.nx)}"
            )

    @property
    def max_step(self) -> int:
        esc = self.values[self.values >= 0]
        return int(esc.max()) if esc.size else 0


def _map_rows(row_fn, ny: int, workers: int | None):
    if workers is None or workers <= 1:
        return [row_fn(r) for r in range(ny)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # pool.map preserves input order, so the merge is by row index
        return list(pool.map(row_fn, range(ny)))


def render_escape(m: QAMap, g: GridSpec, max_iter: int, workers: int | None = None) -> EscapeField:
    """Escape step of every pixel center (sentinel -1 if bounded/undetermined).

    Deterministic by construction: each pixel depends only on its own
    center, and rows are merged by index whatever the worker count.
    """

    def row_fn(r: int) -> np.ndarray:
        out = np.empty(g.nx, dtype=np.int32)
        for i, z in enumerate(g.row_points(r)):
            res = orbit(m, z, max_iter)
            out[i] = res.steps if res.status is OrbitStatus.ESCAPED else BOUNDED_SENTINEL
        return out

    rows = _map_rows(row_fn, g.ny, workers)
    return EscapeField(g, np.vstack(rows))


def render_dilatation(m: QAMap, g: GridSpec, n: int, workers: int | None = None) -> np.ndarray:
    """|mu| of the n-th iterate of H at every pixel center (NaN at branch hits)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")

    def row_fn(r: int) -> np.ndarray:
        out = np.empty(g.nx, dtype=np.float64)
        for i, z in enumerate(g.row_points(r)):
            try:
                out[i] = abs(mu_iterate_general(m, z, n))
            except BranchPointError:
                out[i] = math.nan
        return out

    rows = _map_rows(row_fn, g.ny, workers)
    return np.vstack(rows)
