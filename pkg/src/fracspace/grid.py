"""Uniform grids, power weights, weighted integration and norms.

The continuum objects are functions on the line or the half line with values
in C^n, measured in L^p against the weight |x|^gamma.  Everything here is the
discrete stand-in: a uniform grid, complex samples on it, and quadrature rules
whose weight factors are integrated in closed form over grid cells so that the
singularity of |x|^gamma at the origin never has to be sampled.

All values are immutable after construction and all operations are pure
functions, so concurrent use needs no coordination.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np


class AdmissibilityError(ValueError):
    """Raised when a (p, gamma) pair lies outside the admissible range."""


class GridMismatchError(ValueError):
    """Raised when two grid functions do not share grid and fiber dimension."""


class ResolutionError(ValueError):
    """Raised when an operation is asked to work below grid resolution."""


class DegenerateInputError(ValueError):
    """Raised when an input makes the requested quantity meaningless (e.g. 0/0)."""


FULL_LINE = "full-line"
HALF_LINE = "half-line"

#: Default desk-scale half width; Gaussian-type test functions decay below
#: 1e-300 at the boundary of [-40, 40).
DEFAULT_HALF_WIDTH = 40.0
DEFAULT_N = 4096


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of [-L, L) (full line) or [0, L) (half line).

    The point 0 is a node in both kinds, and h * N equals the extent exactly.
    """

    half_width: float
    n_points: int
    kind: str = FULL_LINE

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 16 or not _is_power_of_two(self.n_points):
            raise ValueError(
                f"n_points must be a power of two >= 16, got {self.n_points}"
            )
        if self.kind not in (FULL_LINE, HALF_LINE):
            raise ValueError(f"unknown grid kind {self.kind!r}")

    @property
    def extent(self) -> float:
        return 2.0 * self.half_width if self.kind == FULL_LINE else self.half_width

    @property
    def h(self) -> float:
        return self.extent / self.n_points

    @property
    def points(self) -> np.ndarray:
        if self.kind == FULL_LINE:
            return -self.half_width + self.h * np.arange(self.n_points)
        return self.h * np.arange(self.n_points)

    @property
    def zero_index(self) -> int:
        """Index of the node x = 0."""
        return self.n_points // 2 if self.kind == FULL_LINE else 0

    def frequencies(self) -> np.ndarray:
        """Angular frequencies xi_k = pi k / L of the discrete transform (full line)."""
        if self.kind != FULL_LINE:
            raise ValueError("frequencies are defined for full-line grids")
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.h)

    def cell_weights(self, gamma: float = 0.0) -> np.ndarray:
        """Closed-form integrals of |x|^gamma over the cells [x_i - h/2, x_i + h/2].

        Every node owns its full centered cell (also the x = 0 node of a
        half-line grid, whose cell is symmetric about the origin); this makes
        extension by zero an exact isometry between the two grid kinds.
        Requires gamma > -1 so the weight is locally integrable.
        """
        if gamma <= -1.0:
            raise AdmissibilityError(f"gamma must exceed -1, got {gamma}")
        x = self.points
        lo = x - 0.5 * self.h
        hi = x + 0.5 * self.h
        if gamma == 0.0:
            return np.full_like(x, self.h)
        g1 = gamma + 1.0
        anti = lambda t: np.sign(t) * np.abs(t) ** g1 / g1
        return anti(hi) - anti(lo)

    def companion(self, kind: str) -> "Grid":
        """Grid of the other kind with the same spacing and half width."""
        if kind == self.kind:
            return self
        if kind == FULL_LINE:
            return Grid(self.half_width, 2 * self.n_points, FULL_LINE)
        return Grid(self.half_width, self.n_points // 2, HALF_LINE)


@dataclass(frozen=True)
class PowerWeight:
    """The weight w_gamma(x) = |x|^gamma.

    Admissibility for the exponent p requires gamma in (-1, p-1); the dual
    weight has exponent gamma' = -gamma/(p-1) paired with p' = p/(p-1).
    """

    gamma: float = 0.0

    def check_integrable(self, p: float) -> None:
        """Weakest requirement for weighted norms: p > 1 and gamma > -1."""
        if not p > 1.0:
            raise AdmissibilityError(f"p must exceed 1, got {p}")
        if not self.gamma > -1.0:
            raise AdmissibilityError(
                f"gamma={self.gamma} makes |x|^gamma non-integrable at 0")

    def check_admissible(self, p: float) -> None:
        """Full Muckenhoupt window gamma in (-1, p-1), needed by duality and
        multiplier-based operations."""
        if not p > 1.0:
            raise AdmissibilityError(f"p must exceed 1, got {p}")
        if not (-1.0 < self.gamma < p - 1.0):
            raise AdmissibilityError(
                f"gamma={self.gamma} is not admissible for p={p}; "
                f"need gamma in (-1, {p - 1.0})"
            )

    def is_admissible(self, p: float) -> bool:
        return p > 1.0 and -1.0 < self.gamma < p - 1.0

    def dual(self, p: float) -> "PowerWeight":
        self.check_admissible(p)
        return PowerWeight(-self.gamma / (p - 1.0))


def dual_exponent(p: float) -> float:
    if not p > 1.0:
        raise AdmissibilityError(f"p must exceed 1, got {p}")
    return p / (p - 1.0)


@dataclass(frozen=True)
class GridFunction:
    """Complex C^n-valued samples on a grid.

    ``values`` always has shape (N, n); scalar data may be passed as a flat
    array and is reshaped.  All entries must be finite.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.grid.n_points:
            raise ValueError(
                f"values must have shape ({self.grid.n_points}, n), got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("values contain NaN or Inf")
        object.__setattr__(self, "values", v)

    @property
    def fiber_dim(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_callable(cls, grid: Grid, func: Callable) -> "GridFunction":
        return cls(grid, np.asarray(func(grid.points)))

    def fiber_norms(self) -> np.ndarray:
        """Pointwise C^n norms, shape (N,)."""
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=1))

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        check_compatible(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        check_compatible(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction":
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        """Write ``x,re_0,im_0[,re_1,im_1,...]`` rows at full precision."""
        x = self.grid.points
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["x"]
            for c in range(self.fiber_dim):
                header += [f"re_{c}", f"im_{c}"]
            writer.writerow(header)
            for i in range(self.grid.n_points):
                row = [f"{x[i]:.17g}"]
                for c in range(self.fiber_dim):
                    row += [f"{self.values[i, c].real:.17g}",
                            f"{self.values[i, c].imag:.17g}"]
                writer.writerow(row)

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(entry) for entry in row] for row in reader if row]
        if not header or header[0] != "x" or (len(header) - 1) % 2 != 0:
            raise ValueError(f"malformed grid-function CSV header: {header}")
        data = np.asarray(rows)
        x = data[:, 0]
        n_points = len(x)
        h = x[1] - x[0]
        if not np.allclose(np.diff(x), h, rtol=0, atol=1e-12 * (1 + abs(x[-1]))):
            raise ValueError("CSV nodes are not uniformly spaced")
        if x[0] < 0:
            grid = Grid(-x[0], n_points, FULL_LINE)
        else:
            grid = Grid(h * n_points, n_points, HALF_LINE)
        n = (len(header) - 1) // 2
        values = data[:, 1::2] + 1j * data[:, 2::2]
        if values.shape != (n_points, n):
            raise ValueError("CSV data block has inconsistent shape")
        return cls(grid, values)


def check_compatible(f: GridFunction, g: GridFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")
    if f.fiber_dim != g.fiber_dim:
        raise GridMismatchError(
            f"fiber dimensions differ: {f.fiber_dim} vs {g.fiber_dim}"
        )


def weighted_lp_norm(f: GridFunction, p: float, w: PowerWeight) -> float:
    """(integral of ||f(x)||^p |x|^gamma dx)^(1/p) by the cell-weight rule.

    The quadrature multiplies each sampled fiber norm by the exact integral of
    the weight over that node's cell, so it is exact for functions that are
    constant on cells and second-order accurate for smooth ones.
    """
    w.check_integrable(p)
    mags = f.fiber_norms()
    cw = f.grid.cell_weights(w.gamma)
    return float(np.sum(mags ** p * cw) ** (1.0 / p))


def dual_pairing(f: GridFunction, g: GridFunction) -> complex:
    """Trapezoid approximation of the unweighted pairing integral <f, conj g>."""
    check_compatible(f, g)
    prods = np.sum(f.values * np.conj(g.values), axis=1)
    h = f.grid.h
    if f.grid.kind == FULL_LINE:
        return complex(h * np.sum(prods))
    # half line: trapezoid gives the boundary node half weight
    return complex(h * (0.5 * prods[0] + np.sum(prods[1:])))


def _ap_interval_ratio(a: np.ndarray, b: np.ndarray, p: float, gamma: float) -> np.ndarray:
    """A_p ratio of |x|^gamma over intervals (a, b), via closed-form averages."""
    gamma_dual = -gamma / (p - 1.0)

    def avg(expo):
        g1 = expo + 1.0
        anti = lambda t: np.sign(t) * np.abs(t) ** g1 / g1
        return (anti(b) - anti(a)) / (b - a)

    return avg(gamma) * avg(gamma_dual) ** (p - 1.0)


def ap_constant(p: float, w: PowerWeight, search_depth: int = 10) -> float:
    """Lower-bound estimate of the Muckenhoupt constant of |x|^gamma.

    Maximizes the interval ratio over all pairs of endpoints taken from a
    geometric mesh covering scales 2^-search_depth .. 2^search_depth on both
    sides of the origin (plus 0 itself).  Returns inf when gamma lies outside
    (-1, p-1), where the supremum diverges.
    """
    if not p > 1.0:
        raise AdmissibilityError(f"p must exceed 1, got {p}")
    gamma = w.gamma
    if gamma <= -1.0 or gamma >= p - 1.0:
        return math.inf
    if gamma == 0.0:
        return 1.0
    per_octave = 4
    ks = np.arange(-per_octave * search_depth, per_octave * search_depth + 1)
    pos = 2.0 ** (ks / per_octave)
    mesh = np.concatenate([-pos[::-1], [0.0], pos])
    a, b = np.meshgrid(mesh, mesh, indexing="ij")
    mask = b > a
    ratios = _ap_interval_ratio(a[mask], b[mask], p, gamma)
    return float(np.max(ratios))


_PROFILE_SUPPORTS = {
    "bump": (-1.0, 1.0),
    "left": (-2.0, -1.0),
    "right": (1.0, 2.0),
}


def _bump_profile(u: np.ndarray) -> np.ndarray:
    """Unnormalized C^inf bump on (-1, 1)."""
    out = np.zeros_like(u, dtype=float)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def mollifier_kernel(grid: Grid, scale: int, profile: str = "bump"):
    """Samples of phi_n(x) = n phi(n x) at integer grid offsets, discretely normalized.

    Normalizing against the discrete mass h * sum makes convolution against a
    constant reproduce the constant to machine precision.
    """
    if scale < 1:
        raise ValueError(f"scale must be a positive integer, got {scale}")
    try:
        lo, hi = _PROFILE_SUPPORTS[profile]
    except KeyError:
        raise ValueError(f"unknown mollifier profile {profile!r}") from None
    h = grid.h
    if (hi - lo) / scale < 8 * h:
        raise ResolutionError(
            f"mollifier at scale {scale} is supported on fewer than 8 grid cells"
        )
    m_max = int(math.ceil(hi / (scale * h))) + 1
    m_min = int(math.floor(lo / (scale * h))) - 1
    offsets = np.arange(m_min, m_max + 1)
    us = offsets * h * scale  # argument of phi, i.e. n*x with x on the grid
    if profile == "bump":
        raw = _bump_profile(us)
    elif profile == "left":
        raw = _bump_profile(2.0 * us + 3.0)
    else:  # right
        raw = _bump_profile(2.0 * us - 3.0)
    # normalize the discrete mass h * sum(kernel) to one
    return offsets, raw / (h * np.sum(raw))


def mollify(f: GridFunction, scale: int, profile: str = "bump") -> GridFunction:
    """Discrete convolution with phi_n(x) = n phi(n x), zero padded outside."""
    grid = f.grid
    offsets, kernel = mollifier_kernel(grid, scale, profile)
    n = grid.n_points
    out = np.zeros_like(f.values)
    # (phi_n * f)(x_i) = h * sum_m kernel[m] f_{i-m}; np.convolve places that
    # sum at index i - offsets[0] of the full convolution.
    shift = int(offsets[0])
    for c in range(f.fiber_dim):
        full = np.convolve(f.values[:, c], kernel) * grid.h
        j = np.arange(n) - shift
        valid = (j >= 0) & (j < len(full))
        out[valid, c] = full[j[valid]]
    return GridFunction(grid, out)


def boundary_decay_ok(f: GridFunction, rel_tol: float = 1e-10, n_edge: int = 4) -> bool:
    """True when the outermost samples are below rel_tol of the peak."""
    mags = f.fiber_norms()
    peak = float(np.max(mags))
    if peak == 0.0:
        return True
    if f.grid.kind == FULL_LINE:
        edge = max(float(np.max(mags[:n_edge])), float(np.max(mags[-n_edge:])))
    else:
        edge = float(np.max(mags[-n_edge:]))
    return edge <= rel_tol * peak


def warn_if_boundary_heavy(f: GridFunction, what: str) -> None:
    if not boundary_decay_ok(f):
        warnings.warn(
            f"{what}: input does not decay below 1e-10 of its peak at the grid "
            "boundary; periodization error may contaminate the result",
            RuntimeWarning,
            stacklevel=3,
        )
