"""Uniform grids and composite Simpson quadrature.

Every inner product in the package is evaluated on the sampling grid itself;
nothing is resampled or interpolated.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DegenerateGridError, IncompatibleGridsError, NumericError

#: Rule used on the last interval when the point count is even.
EVEN_TAIL_RULE = "simpson+newton-cotes-3pt-tail"


@dataclass(frozen=True)
class UniformGrid:
    """Uniformly spaced points ``start, start + step, ..., stop``.

    Parameters
    ----------
    start, stop : float
        Interval end points, ``stop > start``.
    n_points : int
        Number of grid points, including both end points. Odd counts give
        full-order Simpson quadrature.
    """

    start: float
    stop: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ValueError("grid end points must be finite")
        if not self.stop > self.start:
            raise ValueError(f"stop ({self.stop}) must exceed start ({self.start})")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise DegenerateGridError(f"n_points must be an integer >= 2, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def from_step(cls, start, stop, step):
        """Grid on ``[start, stop]`` whose spacing is as close to `step` as possible."""
        n_intervals = int(round((stop - start) / step))
        return cls(start, stop, n_intervals + 1)

    @property
    def step(self):
        return (self.stop - self.start) / (self.n_points - 1)

    @property
    def length(self):
        return self.stop - self.start

    def point(self, i):
        if i == self.n_points - 1:
            return float(self.stop)
        return self.start + i * self.step

    @property
    def points(self):
        pts = self.start + np.arange(self.n_points) * self.step
        pts[-1] = self.stop
        return pts

    def __len__(self):
        return self.n_points

    def weights(self):
        """Quadrature weights such that ``weights() @ f`` integrates ``f``."""
        return simpson_weights(self.n_points, self.step)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a (possibly vector-valued) function on a :class:`UniformGrid`."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape[:1] != (self.grid.n_points,):
            raise ValueError(
                f"values have leading length {values.shape[:1]}, grid has {self.grid.n_points} points"
            )
        if not np.all(np.isfinite(values)):
            raise NumericError("sampled values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, grid):
        return cls(grid, func(grid.points))

    def __add__(self, other):
        _check_same_grid(self.grid, other.grid)
        return SampledFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self.grid, other.grid)
        return SampledFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return SampledFunction(self.grid, scalar * self.values)

    __rmul__ = __mul__


@lru_cache(maxsize=64)
def _scaled_simpson_weights(n_points):
    """Simpson weights times ``12 / step``; small integers, so exact in floating point."""
    if n_points < 3:
        raise DegenerateGridError(f"Simpson quadrature needs at least 3 points, got {n_points}")
    w = np.zeros(n_points)
    n_simpson = n_points if n_points % 2 == 1 else n_points - 1
    w[0:n_simpson - 1:2] += 4.0
    w[1:n_simpson:2] += 16.0
    w[2:n_simpson:2] += 4.0
    if n_simpson != n_points:
        # closed 3-point rule on the last interval, using the last three samples
        w[-3] += -1.0
        w[-2] += 8.0
        w[-1] += 5.0
    w.setflags(write=False)
    return w


def simpson_weights(n_points, step):
    """Composite Simpson weights for `n_points` samples spaced by `step`.

    For an even number of points, Simpson's rule covers the first
    ``n_points - 2`` intervals and the last interval uses the third-order
    closed rule ``h/12 * (-f[-3] + 8 f[-2] + 5 f[-1])``.
    """
    return (step / 12.0) * _scaled_simpson_weights(int(n_points))


def simpson_integrate(f):
    """Integrate a :class:`SampledFunction` over its grid.

    Vector-valued samples (shape ``(n_points, ...)``) are integrated
    componentwise.
    """
    g = f.grid
    if g.n_points < 3:
        raise DegenerateGridError(f"Simpson quadrature needs at least 3 points, got {g.n_points}")
    # length / (12 (n-1)) applied last keeps constants exact
    total = np.tensordot(_scaled_simpson_weights(g.n_points), f.values, axes=(0, 0))
    result = total * (g.length / (12.0 * (g.n_points - 1)))
    return float(result) if np.ndim(result) == 0 else result


def _check_same_grid(g1, g2):
    if g1 != g2:
        raise IncompatibleGridsError(f"grids differ: {g1} vs {g2}")


def inner_product(f, g):
    """L2 inner product of two sampled functions on a shared grid."""
    _check_same_grid(f.grid, g.grid)
    fv, gv = f.values, g.values
    # trailing axes broadcast, so a scalar function can be paired with a vector one
    ndim = max(fv.ndim, gv.ndim)
    fv = fv.reshape(fv.shape + (1,) * (ndim - fv.ndim))
    gv = gv.reshape(gv.shape + (1,) * (ndim - gv.ndim))
    return simpson_integrate(SampledFunction(f.grid, fv * gv))


def l2_norm(f):
    """L2 norm of a scalar sampled function."""
    return float(np.sqrt(max(inner_product(f, f), 0.0)))
