"""Error decomposition, solution-error bound, and convergence-rate fits.

For a surrogate ``p`` of dynamics ``f`` along a trajectory ``x``, with
``P_K`` the L2 projection onto the test space, the total error satisfies::

    ||f(x) - p(x)||  <=  ||f(x) - P_K f(x)||          (R1)
                       + ||P_K (f(x) - p(x))||        (R2)
                       + ||p(x) - P_K p(x)||          (R3)

All norms are Simpson quadratures on the trajectory grid. Computing (L) and
(R1) needs the true ``f``, so this module is an analysis tool for known test
problems.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .exceptions import IncompatibleGridsError, InsufficientDataError
from .quadrature import SampledFunction, l2_norm


@dataclass(frozen=True)
class ErrorDecomposition:
    L: float
    R1: float
    R2: float
    R3: float
    J: int
    K: int
    method: str = "weak"
    test_kind: str = "legendre"

    @property
    def bound(self):
        return self.R1 + self.R2 + self.R3

    def triangle_holds(self, tol=1e-10):
        return self.L <= self.bound + tol

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    fit_window: tuple


def project_test_space(f, test):
    """``sum_k <f, psi_k> psi_k`` sampled on the grid of `f`.

    The coefficients are corrected by the inverse of the quadrature Gram
    matrix ``<psi_k, psi_l>``, which is the identity up to quadrature error.
    This makes the map an exact projector in the discrete inner product, so
    applying it twice changes nothing beyond rounding. Vector-valued `f` is
    projected componentwise.
    """
    grid = f.grid
    a, b = test.interval
    if not (np.isclose(a, grid.start) and np.isclose(b, grid.stop)):
        raise IncompatibleGridsError("test basis interval differs from the function's grid span")
    psi = test.evaluate(grid.points)
    wpsi = psi * grid.weights()[:, None]
    coeffs = np.linalg.solve(wpsi.T @ psi, wpsi.T @ f.values)
    return SampledFunction(grid, psi @ coeffs)


def _component_norms(values, grid):
    values = values[:, None] if values.ndim == 1 else values
    return np.array([l2_norm(SampledFunction(grid, values[:, i])) for i in range(values.shape[1])])


def decompose_error(f_comp, model, traj, test, component=0):
    """(L), (R1), (R2), (R3) for one component of a surrogate.

    Parameters
    ----------
    f_comp : SampledFunction or ndarray
        Samples of the true ``f_i(x(t))`` on the trajectory grid.
    model : SurrogateModel
    traj : Trajectory
    test : TestBasis
    component : int
        Which output of `model` to compare against.
    """
    grid = traj.grid
    fv = f_comp.values if isinstance(f_comp, SampledFunction) else np.asarray(f_comp, dtype=float)
    fv = fv[:, component] if fv.ndim == 2 else fv
    if fv.shape[0] != grid.n_points:
        raise IncompatibleGridsError("f samples do not match the trajectory grid")
    pv = model(traj.states)[:, component]
    f_s = SampledFunction(grid, fv)
    p_s = SampledFunction(grid, pv)
    diff = f_s - p_s
    L = l2_norm(diff)
    R1 = l2_norm(f_s - project_test_space(f_s, test))
    R2 = l2_norm(project_test_space(diff, test))
    R3 = l2_norm(p_s - project_test_space(p_s, test))
    return ErrorDecomposition(L, R1, R2, R3, model.basis.max_degree, test.degree,
                              model.method, test.kind)


def solution_error_bound(epsilon, L_const, interval):
    """Sup-norm bound ``tau**0.5 * eps / (1 - tau * L)`` with ``tau = beta - alpha``.

    Returns ``None`` when ``tau * L >= 1``, where the bound does not apply.
    """
    alpha, beta = interval
    tau = float(beta) - float(alpha)
    s = tau * float(L_const)
    if s >= 1.0:
        return None
    return float(np.sqrt(tau) * epsilon / (1.0 - s))


def fit_rate(xs, ys, window=None):
    """Least-squares line through ``(log x, log y)``.

    Parameters
    ----------
    xs, ys : sequence of float
        Degrees and (positive) errors.
    window : (lo, hi), optional
        Inclusive range of `xs` values to fit; chosen by the caller so that
        saturation plateaus are excluded.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have equal length")
    if window is not None:
        mask = (xs >= window[0]) & (xs <= window[1])
        xs, ys = xs[mask], ys[mask]
        fit_window = (float(window[0]), float(window[1]))
    else:
        fit_window = (float(xs.min()), float(xs.max())) if xs.size else (np.nan, np.nan)
    if xs.size < 4:
        raise InsufficientDataError(f"rate fit needs at least 4 points, got {xs.size}")
    if np.any(ys <= 0) or np.any(xs <= 0):
        raise ValueError("rate fit needs positive degrees and errors")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else float(np.clip(1.0 - np.sum(resid ** 2) / ss_tot, 0.0, 1.0))
    return RateFit(float(slope), float(intercept), r2, fit_window)


def sup_error_bound_holds(x_true, x_hat, f_true_on_x, p_on_xhat, grid) -> Optional[bool]:
    """Check ``||x - xhat||_inf <= (b-a)**0.5 ||f(x) - p(xhat)||_2`` on a grid."""
    lhs = float(np.max(np.abs(np.asarray(x_true) - np.asarray(x_hat))))
    rhs = np.sqrt(grid.length) * l2_norm(SampledFunction(grid, np.asarray(f_true_on_x) - np.asarray(p_on_xhat)))
    return lhs <= rhs
