"""POD reduction of the 1D diffusion equation ``u_t = beta(x) u_xx``.

Pipeline: an FTCS snapshot field, the quadrature-weighted POD of that
field, exact temporal modes ``s_i(t) = <u(., t), u_i>``, proxy temporal
modes from the Galerkin-reduced linear system, and weak-form polynomial
surrogates of either.
"""

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bases import ProjectionBasis
from .exceptions import NumericError, StabilityError
from .identification import DEFAULT_RCOND, SurrogateModel, Trajectory, encode_weak, solve
from .ode import DynamicsSpec, integrate, integrate_linear
from .quadrature import UniformGrid

#: log10 error fields are clipped below at this absolute error.
ERROR_FLOOR = 1e-16


def constant_beta(value=5e-3):
    """Spatially constant diffusivity."""
    def beta(x):
        return np.full_like(np.asarray(x, dtype=float), value)
    beta.description = f"constant({value:g})"
    return beta


def step_beta(value=5e-3, jump=0.5):
    """``value`` for ``x <= jump`` and 0 beyond; the jump point is diffusive."""
    def beta(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= jump, value, 0.0)
    beta.description = f"step({value:g}, x<={jump:g})"
    return beta


def benchmark_initial_condition(x):
    """``u(x, 0) = x + sin(2 pi x) + 1``, matching the Dirichlet values 1 and 2."""
    return x + np.sin(2 * np.pi * x) + 1.0


def _beta_values(beta, x):
    if callable(beta):
        return np.asarray(beta(x), dtype=float) * np.ones_like(x)
    return np.full_like(x, float(beta))


def _describe_beta(beta):
    if callable(beta):
        return getattr(beta, "description", getattr(beta, "__name__", "callable"))
    return f"constant({float(beta):g})"


@dataclass(frozen=True, eq=False)
class SnapshotField:
    """Field samples ``values[n, i] = u(x_i, t_n)``."""

    x_grid: UniformGrid
    t_grid: UniformGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.t_grid.n_points, self.x_grid.n_points):
            raise ValueError(f"values must have shape (n_t, n_x)=({self.t_grid.n_points}, "
                             f"{self.x_grid.n_points}), got {v.shape}")
        object.__setattr__(self, "values", v)


def ftcs_solve(beta, x_grid, t_grid, ic=benchmark_initial_condition, bc=(1.0, 2.0)):
    """Forward-time centred-space solution with Dirichlet end values.

    ``beta`` is a callable of ``x`` (or a constant), sampled pointwise at the
    grid nodes.

    Raises
    ------
    StabilityError
        If ``max beta * dt / dx**2 > 1/2``; the message and
        ``required_dt`` give the largest stable step.
    """
    x = x_grid.points
    dx, dt = x_grid.step, t_grid.step
    b = _beta_values(beta, x)
    bmax = float(b.max())
    if bmax * dt / dx ** 2 > 0.5 + 1e-12:
        need = 0.5 * dx ** 2 / bmax
        raise StabilityError(need, f"FTCS unstable: max beta*dt/dx^2 = {bmax * dt / dx ** 2:.4g} > 0.5; "
                                   f"need dt <= {need:.4g}")
    r = (b * dt / dx ** 2)[1:-1]
    u = np.empty((t_grid.n_points, x_grid.n_points))
    cur = np.asarray(ic(x) if callable(ic) else ic, dtype=float).copy()
    cur[0], cur[-1] = bc
    u[0] = cur
    for n in range(1, t_grid.n_points):
        nxt = cur.copy()
        nxt[1:-1] = cur[1:-1] + r * (cur[2:] - 2.0 * cur[1:-1] + cur[:-2])
        nxt[0], nxt[-1] = bc
        u[n] = cur = nxt
    if not np.all(np.isfinite(u)):
        raise NumericError("FTCS produced non-finite values")
    return SnapshotField(x_grid, t_grid, u, {"beta": _describe_beta(beta), "bc": list(bc),
                                             "cfl": bmax * dt / dx ** 2})


@dataclass(frozen=True, eq=False)
class PodDecomposition:
    """Leading POD modes of a snapshot field.

    Attributes
    ----------
    spatial_modes : ndarray, shape (N, n_x)
        Rows orthonormal in the Simpson-weighted L2(Omega) inner product.
    eigenvalues : ndarray, shape (N,)
        Non-increasing.
    exact_temporal : ndarray, shape (n_t, N)
        ``s_i(t_n) = <u(., t_n), u_i>``.
    total_energy : float
        Trace of the weighted correlation operator (sum of all eigenvalues).
    """

    x_grid: UniformGrid
    t_grid: UniformGrid
    spatial_modes: np.ndarray
    eigenvalues: np.ndarray
    exact_temporal: np.ndarray
    total_energy: float

    @property
    def n_modes(self):
        return self.spatial_modes.shape[0]

    def temporal_trajectory(self):
        return Trajectory(self.t_grid, self.exact_temporal)


def _weighted_pod(values, wx, wt, length_t, n_modes, sign):
    R = (values * wt[:, None]).T @ values / length_t
    sq = np.sqrt(wx)
    sym = sq[:, None] * R * sq[None, :]
    sym = 0.5 * (sym + sym.T)
    try:
        evals, evecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"POD eigen-solver failed: {exc}") from exc
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    modes = (evecs[:, :n_modes] / sq[:, None]).T
    # eigenvector signs are arbitrary; pin them by the first interior value
    for i in range(modes.shape[0]):
        ref = modes[i, 1] if modes.shape[1] > 2 else modes[i, 0]
        if ref * sign < 0:
            modes[i] = -modes[i]
    return modes, evals[:n_modes], float(np.trace(sym))


#: Sign of each spatial mode's value at the first interior node.
MODE_SIGN = -1


def pod_decompose(field, n_modes=2, sign=MODE_SIGN):
    """POD via the Simpson-weighted symmetric eigenproblem.

    The correlation ``R(x_i, y_j) = (1/T) int u(x_i, t) u(y_j, t) dt`` is
    assembled with Simpson weights in time, and ``W^(1/2) R W^(1/2) v = lam v``
    is solved with ``W`` the Simpson weights in space; ``u = W^(-1/2) v`` are
    then L2(Omega)-orthonormal modes.

    Mode signs are fixed so that ``sign * u_i(x_1) >= 0`` at the first
    interior node ``x_1``. With the default ``sign=-1`` a positive field
    gets a negative leading mode, and the benchmark's reduced-model
    coefficients come out with their conventional signs.
    """
    n_x = field.x_grid.n_points
    if not 0 <= n_modes <= n_x:
        raise ValueError(f"n_modes must be between 0 and {n_x}")
    wx = field.x_grid.weights()
    wt = field.t_grid.weights()
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    modes, evals, trace = _weighted_pod(field.values, wx, wt, field.t_grid.length, n_modes, sign)
    temporal = field.values @ (modes * wx).T
    return PodDecomposition(field.x_grid, field.t_grid, modes, evals, temporal, trace)


def fd_weights(offsets, derivative):
    """Finite-difference weights on unit spacing for the given stencil offsets."""
    offsets = np.asarray(offsets, dtype=float)
    n = offsets.size
    V = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[derivative] = factorial(derivative)
    return np.linalg.solve(V, rhs)


def second_derivative_fd4(values, step):
    """Fourth-order second derivative along the last axis.

    Central five-point stencil in the interior; six-point one-sided stencils
    on the two outermost nodes at each end.
    """
    f = np.asarray(values, dtype=float)
    n = f.shape[-1]
    if n < 6:
        raise ValueError("need at least 6 nodes for fourth-order second derivatives")
    out = np.empty_like(f)
    c = fd_weights([-2, -1, 0, 1, 2], 2)
    out[..., 2:-2] = (c[0] * f[..., :-4] + c[1] * f[..., 1:-3] + c[2] * f[..., 2:-2]
                      + c[3] * f[..., 3:-1] + c[4] * f[..., 4:])
    for i, offs in ((0, range(0, 6)), (1, range(-1, 5))):
        w = fd_weights(list(offs), 2)
        idx = [i + o for o in offs]
        out[..., i] = f[..., idx] @ w
        # mirror for the right end
        out[..., n - 1 - i] = f[..., [n - 1 - j for j in idx]] @ w
    return out / step ** 2


def galerkin_matrix(dec, beta):
    """``A[i, l] = <beta * d2/dx2 u_l, u_i>`` with fourth-order differences."""
    x = dec.x_grid.points
    wx = dec.x_grid.weights()
    d2 = second_derivative_fd4(dec.spatial_modes, dec.x_grid.step)
    b = _beta_values(beta, x)
    return (dec.spatial_modes * wx) @ (b * d2).T


def proxy_modes(dec, beta, x_grid=None, t_grid=None, ic_coeffs=None, substeps=1):
    """Proxy temporal modes from the Galerkin-reduced system ``s' = A s``.

    Returns
    -------
    s_star : ndarray, shape (n_t, N)
    A : ndarray, shape (N, N)
    """
    if x_grid is not None and x_grid != dec.x_grid:
        raise ValueError("x_grid differs from the decomposition's spatial grid")
    t_grid = dec.t_grid if t_grid is None else t_grid
    A = galerkin_matrix(dec, beta)
    s0 = dec.exact_temporal[0] if ic_coeffs is None else np.asarray(ic_coeffs, dtype=float)
    traj = integrate_linear(A, s0, t_grid, substeps=substeps)
    return traj.states, A


def mode_surrogate(temporal, t_grid, test, J, basis_kind="monomial", rcond=DEFAULT_RCOND):
    """Weak-form surrogate of a temporal-mode trajectory, max degree `J`."""
    traj = Trajectory(t_grid, temporal)
    box = None
    if basis_kind == "legendre":
        box = traj.state_range()
    proj = ProjectionBasis(J, traj.dimension, box, kind=basis_kind)
    sol = solve(encode_weak(traj, proj, test), rcond=rcond)
    return SurrogateModel(proj, sol.weights, "weak", test.degree, (t_grid.start, t_grid.stop))


def exact_mode_surrogate(dec, test, J, rcond=DEFAULT_RCOND):
    """Weak-form surrogate of the exact temporal modes."""
    return mode_surrogate(dec.exact_temporal, dec.t_grid, test, J, rcond=rcond)


def simulate_surrogate(model, s0, t_grid, substeps=10):
    """Surrogate temporal modes on `t_grid` by RK4 at ``t_grid.step / substeps``."""
    return integrate(DynamicsSpec.polynomial_surrogate(model), s0, t_grid, substeps=substeps).states


def reconstruct(modes, temporal, x_grid=None, t_grid=None):
    """Field ``sum_i s_i(t) u_i(x)``.

    `modes` is a :class:`PodDecomposition` (whose grids are reused) or an
    ``(N, n_x)`` array; grids default to the decomposition's, else to
    unit intervals with matching point counts.
    """
    if isinstance(modes, PodDecomposition):
        spatial = modes.spatial_modes
        x_grid = x_grid or modes.x_grid
        t_grid = t_grid or modes.t_grid
    else:
        spatial = np.asarray(modes, dtype=float).reshape(-1, np.shape(modes)[-1])
    temporal = np.asarray(temporal, dtype=float)
    if temporal.ndim != 2 or temporal.shape[1] != spatial.shape[0]:
        raise ValueError(f"temporal modes of shape {temporal.shape} do not match "
                         f"{spatial.shape[0]} spatial modes")
    x_grid = x_grid or UniformGrid(0.0, 1.0, spatial.shape[1])
    t_grid = t_grid or UniformGrid(0.0, 1.0, temporal.shape[0])
    return SnapshotField(x_grid, t_grid, temporal @ spatial, {"n_modes": spatial.shape[0]})


def log10_error(approx, reference, floor=ERROR_FLOOR):
    """Pointwise ``log10 |approx - reference|``, clipped below at ``log10(floor)``."""
    return np.log10(np.maximum(np.abs(np.asarray(approx) - np.asarray(reference)), floor))


def field_l2_error(approx, reference, x_grid, t_grid):
    """Space-time L2 norm of the difference of two fields by Simpson quadrature."""
    d2 = (np.asarray(approx) - np.asarray(reference)) ** 2
    return float(np.sqrt(t_grid.weights() @ d2 @ x_grid.weights()))


class POD(TransformerMixin, BaseEstimator):
    """Quadrature-weighted POD as a scikit-learn transformer.

    Rows of ``X`` are snapshots ``u(., t_n)`` on a uniform spatial grid
    spanning `x_interval`, taken at uniformly spaced times.

    Parameters
    ----------
    n_modes : int
        Number of spatial modes to keep.
    x_interval : tuple
        Spatial domain of the snapshot columns.
    """

    def __init__(self, n_modes=2, x_interval=(0.0, 1.0)):
        self.n_modes = n_modes
        self.x_interval = x_interval

    def fit(self, X, y=None, t_interval=(0.0, 1.0)):
        X = check_array(X, ensure_min_samples=3, ensure_min_features=3)
        x_grid = UniformGrid(self.x_interval[0], self.x_interval[1], X.shape[1])
        t_grid = UniformGrid(t_interval[0], t_interval[1], X.shape[0])
        dec = pod_decompose(SnapshotField(x_grid, t_grid, X), self.n_modes)
        self.components_ = dec.spatial_modes
        self.eigenvalues_ = dec.eigenvalues
        self.total_energy_ = dec.total_energy
        self.x_weights_ = x_grid.weights()
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return X @ (self.components_ * self.x_weights_).T

    def inverse_transform(self, S):
        check_is_fitted(self, "components_")
        S = check_array(S)
        return S @ self.components_
