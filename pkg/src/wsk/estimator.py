"""scikit-learn style front end for surrogate identification."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bases import ProjectionBasis, TestBasis
from .identification import (
    DEFAULT_RCOND,
    SurrogateModel,
    Trajectory,
    encode_occupation,
    encode_sindy,
    encode_weak,
    residual_norm,
    solve,
    state_domain_test_basis,
)
from .ode import DynamicsSpec, integrate, lipschitz_estimate
from .quadrature import UniformGrid

METHODS = ("weak", "sindy", "occupation")


def check_time_grid(t, n_samples):
    """Turn `t` into a :class:`UniformGrid` with `n_samples` points.

    `t` may be a grid, a ``(start, stop)`` pair, or the array of sample
    times (which must be uniformly spaced).
    """
    if isinstance(t, UniformGrid):
        if t.n_points != n_samples:
            raise ValueError(f"time grid has {t.n_points} points, data has {n_samples} samples")
        return t
    t = np.asarray(t, dtype=float)
    if t.shape == (2,) and n_samples != 2:
        return UniformGrid(float(t[0]), float(t[1]), n_samples)
    if t.ndim != 1 or t.size != n_samples:
        raise ValueError("t must be a UniformGrid, a (start, stop) pair, or one time per sample")
    dt = np.diff(t)
    if np.any(dt <= 0) or not np.allclose(dt, dt[0], rtol=1e-8, atol=0.0):
        raise ValueError("sample times must be strictly increasing and uniformly spaced")
    return UniformGrid(float(t[0]), float(t[-1]), n_samples)


class WeakSINDy(BaseEstimator):
    """Polynomial surrogate dynamics ``x' = p(x)`` identified from one trajectory.

    Parameters
    ----------
    max_degree : int
        Max-degree ``J`` of the polynomial projection space.
    test_basis : {"legendre", "fourier"}
        Test family on the time interval (used by ``method="weak"``).
    test_degree : int
        ``K``; Legendre gives ``K + 1`` functions, Fourier ``2K + 1``. For
        ``method="occupation"`` it is the Legendre degree on the state range.
    method : {"weak", "sindy", "occupation"}
    basis_kind : {"monomial", "legendre"}
        Legendre projection functions are built on the observed state box.
    ibp_boundary : bool
        Keep the integration-by-parts boundary terms in the weak right-hand
        side. Dropping them is only correct for test functions vanishing at
        the interval ends.
    rcond : float
        Relative singular-value cutoff of the least-squares solve.

    Attributes
    ----------
    coef_ : ndarray, shape (n_features, n_basis)
        Row ``i`` holds the weights of ``p_i``.
    model_ : SurrogateModel
    rank_ : int
    underdetermined_ : bool
    residual_ : ndarray, shape (n_features,)
    """

    def __init__(self, max_degree=2, test_basis="legendre", test_degree=20, method="weak",
                 basis_kind="monomial", ibp_boundary=True, rcond=DEFAULT_RCOND):
        self.max_degree = max_degree
        self.test_basis = test_basis
        self.test_degree = test_degree
        self.method = method
        self.basis_kind = basis_kind
        self.ibp_boundary = ibp_boundary
        self.rcond = rcond

    def fit(self, X, t, x_dot=None):
        """Identify the dynamics from states `X` sampled at times `t`.

        Parameters
        ----------
        X : array_like, shape (n_samples, n_features)
        t : UniformGrid, (start, stop) or array of times
        x_dot : array_like, optional
            Derivatives for ``method="sindy"``; estimated by finite
            differences when omitted.
        """
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        X = check_array(X, ensure_min_samples=3)
        grid = check_time_grid(t, X.shape[0])
        if x_dot is not None:
            x_dot = check_array(x_dot)
            if x_dot.shape != X.shape:
                raise ValueError("x_dot must have the same shape as X")
        traj = Trajectory(grid, X, x_dot)
        box = traj.state_range() if self.basis_kind == "legendre" else None
        proj = ProjectionBasis(self.max_degree, traj.dimension, box, kind=self.basis_kind)
        if self.method == "weak":
            test = TestBasis(self.test_basis, self.test_degree, (grid.start, grid.stop))
            system = encode_weak(traj, proj, test, ibp_boundary=self.ibp_boundary)
        elif self.method == "sindy":
            system = encode_sindy(traj, proj, estimate=x_dot is None)
        else:
            tests = [state_domain_test_basis(traj, self.test_degree, i) for i in range(traj.dimension)]
            system = encode_occupation(traj, proj, tests if len(tests) > 1 else tests[0])
        sol = solve(system, rcond=self.rcond)
        self.model_ = SurrogateModel(proj, sol.weights, self.method, self.test_degree,
                                     (grid.start, grid.stop))
        self.coef_ = sol.weights.T.copy()
        self.rank_ = sol.rank
        self.underdetermined_ = sol.underdetermined
        self.residual_ = residual_norm(system, sol.weights)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Surrogate right-hand side ``p(x)`` at each row of `X`."""
        check_is_fitted(self, "model_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return self.model_(X)

    def simulate(self, x0, t, substeps=1):
        """Integrate the surrogate from `x0` by RK4.

        `t` is a :class:`UniformGrid` or an array of uniform output times;
        returns states of shape ``(n_t, n_features)``.
        """
        check_is_fitted(self, "model_")
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        if x0.shape != (self.n_features_in_,):
            raise ValueError(f"x0 must have {self.n_features_in_} entries")
        grid = t if isinstance(t, UniformGrid) else check_time_grid(t, np.size(t))
        return integrate(DynamicsSpec.polynomial_surrogate(self.model_), x0, grid, substeps).states

    def lipschitz(self, state_range, **kwargs):
        """Sampled Lipschitz estimate of the fitted surrogate on a state box."""
        check_is_fitted(self, "model_")
        return lipschitz_estimate(self.model_, state_range, **kwargs)
