"""Fixed-step RK4 integration and the built-in test dynamics."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import BlowUpError
from .identification import SurrogateModel, Trajectory

LIPSCHITZ_INFLATION = 1.05
LIPSCHITZ_SAMPLES = 10_000


@dataclass(frozen=True, eq=False)
class DynamicsSpec:
    """Autonomous right-hand side ``x' = f(x)``.

    Use the constructors :meth:`smooth_exp`, :meth:`sobolev_alpha`,
    :meth:`polynomial_surrogate` and :meth:`linear_modal`. Calling the
    instance evaluates ``f`` at a single state (shape ``(N,)``) or a batch
    of states (shape ``(n, N)``).
    """

    kind: str
    params: dict = field(default_factory=dict)
    dimension: int = 1

    @classmethod
    def smooth_exp(cls):
        """``f(x) = exp(-2x)``; from ``x(0) = 0`` the solution is ``ln(2t+1)/2``."""
        return cls("smooth_exp")

    @classmethod
    def sobolev_alpha(cls, alpha):
        """``g(x) = 1[-pi/2, pi/2](x) cos(x)**alpha - 1/2``, in ``H^(alpha+1/2)``."""
        return cls("sobolev_alpha", {"alpha": float(alpha)})

    @classmethod
    def polynomial_surrogate(cls, model):
        return cls("polynomial_surrogate", {"model": model}, model.dimension)

    @classmethod
    def linear_modal(cls, A, c=None):
        """``s' = A s + c``."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        c = np.zeros(A.shape[0]) if c is None else np.asarray(c, dtype=float)
        return cls("linear_modal", {"A": A, "c": c}, A.shape[0])

    @classmethod
    def zero(cls, dimension=1):
        return cls.linear_modal(np.zeros((dimension, dimension)))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "smooth_exp":
            return np.exp(-2.0 * x)
        if self.kind == "sobolev_alpha":
            return sobolev_g(x, self.params["alpha"])
        if self.kind == "polynomial_surrogate":
            return self.params["model"](x)
        if self.kind == "linear_modal":
            return x @ self.params["A"].T + self.params["c"]
        raise ValueError(f"unknown dynamics kind {self.kind!r}")

    def describe(self):
        if self.kind == "sobolev_alpha":
            return f"sobolev_alpha(alpha={self.params['alpha']:g})"
        return self.kind


def sobolev_g(x, alpha):
    """Indicator-truncated cosine power; evaluated pointwise, no smoothing."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= np.pi / 2
    # cos is >= 0 on the support, so fractional powers are safe there
    return np.where(inside, np.abs(np.cos(x)) ** alpha, 0.0) - 0.5


def smooth_exp_solution(t):
    return 0.5 * np.log(2.0 * np.asarray(t, dtype=float) + 1.0)


def integrate(dyn, x0, grid, substeps=1):
    """Classical RK4 with ``substeps`` equal steps per grid interval.

    Parameters
    ----------
    dyn : callable
        Right-hand side ``f(x)`` acting on a state vector.
    x0 : array_like
        Initial state at ``grid.start``.
    grid : UniformGrid
        Output grid; states are returned at every grid point.

    Returns
    -------
    Trajectory
        States on `grid`, with ``derivatives = f(states)``.

    Raises
    ------
    BlowUpError
        If a non-finite state is produced.
    """
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    times = grid.points
    h = grid.step / substeps
    out = np.empty((grid.n_points, x.size))
    out[0] = x
    # overflow is detected below and reported as BlowUpError
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, grid.n_points):
            for _ in range(substeps):
                k1 = dyn(x)
                k2 = dyn(x + 0.5 * h * k1)
                k3 = dyn(x + 0.5 * h * k2)
                k4 = dyn(x + h * k3)
                x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise BlowUpError(times[n])
            out[n] = x
    return Trajectory(grid, out, np.asarray(dyn(out), dtype=float).reshape(out.shape))


def integrate_linear(A, x0, grid, c=None, substeps=1):
    """RK4 for ``x' = A x + c`` using one precomputed step matrix.

    Produces the same iterates as :func:`integrate` up to rounding, without
    per-step Python overhead.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
    h = grid.step / substeps
    hA = h * A
    eye = np.eye(n)
    # RK4 applied to an affine system: x+ = T x + h * Q c
    T = eye + hA + hA @ hA / 2 + hA @ hA @ hA / 6 + hA @ hA @ hA @ hA / 24
    Q = eye + hA / 2 + hA @ hA / 6 + hA @ hA @ hA / 24
    T_grid = np.linalg.matrix_power(T, substeps)
    Q_grid = sum(np.linalg.matrix_power(T, m) for m in range(substeps)) @ (h * Q) @ c
    out = np.empty((grid.n_points, n))
    out[0] = np.asarray(x0, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, grid.n_points):
            out[k] = T_grid @ out[k - 1] + Q_grid
    if not np.all(np.isfinite(out)):
        bad = int(np.argmax(~np.all(np.isfinite(out), axis=1)))
        raise BlowUpError(grid.point(bad))
    return Trajectory(grid, out, out @ A.T + c)


def _box_samples(box, n_samples):
    dim = len(box)
    per_axis = max(2, int(np.ceil(n_samples ** (1.0 / dim))))
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def lipschitz_estimate(model, state_range, n_samples=LIPSCHITZ_SAMPLES, inflation=LIPSCHITZ_INFLATION):
    """Sampled Lipschitz constant of a surrogate on a box.

    The maximum Jacobian 2-norm over roughly `n_samples` grid points of the
    box, multiplied by `inflation` (5% by default). This is an estimate, not
    a rigorous bound.

    Parameters
    ----------
    model : SurrogateModel
    state_range : sequence of (lo, hi)
        One pair per state component; a bare ``(lo, hi)`` is accepted for
        scalar models.
    """
    box = np.atleast_2d(np.asarray(state_range, dtype=float))
    if np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("state_range must be a non-degenerate box")
    pts = _box_samples(box, n_samples)
    jac = model.jacobian(pts)
    if jac.shape[1] == 1 and jac.shape[2] == 1:
        norms = np.abs(jac[:, 0, 0])
    else:
        norms = np.linalg.norm(jac, ord=2, axis=(1, 2))
    return float(inflation * norms.max())


__all__ = [
    "DynamicsSpec",
    "SurrogateModel",
    "integrate",
    "integrate_linear",
    "lipschitz_estimate",
    "smooth_exp_solution",
    "sobolev_g",
]
