"""Shared fixtures for the test modules: plateau windows and default grids."""

from __future__ import annotations

import numpy as np

from fracspace.grid import FULL_LINE, HALF_LINE, Grid, GridFunction


def plateau(x: np.ndarray, center: float, inner: float, outer: float) -> np.ndarray:
    """C-infinity window equal to 1 on |x-c| <= inner, 0 beyond outer."""
    z = (np.abs(x - center) - inner) / (outer - inner)
    out = np.ones_like(x, dtype=float)
    ramp = (z > 0.0) & (z < 1.0)
    out[ramp] = np.exp(1.0 - 1.0 / (1.0 - z[ramp] ** 2))
    out[z >= 1.0] = 0.0
    return out


def desk_grid(n: int = 4096, kind: str = FULL_LINE, half_width: float = 40.0) -> Grid:
    return Grid(half_width, n, kind)


def windowed(grid: Grid, func, center: float = 0.0, inner: float = 8.0,
             outer: float = 16.0) -> GridFunction:
    x = grid.points
    return GridFunction(grid, func(x) * plateau(x, center, inner, outer))
