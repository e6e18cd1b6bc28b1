"""Linear-system assembly and solution for SINDy-type identification.

Three encoders build a system ``G w = b``:

* ``encode_sindy``: pointwise, ``G[k, j] = phi_j(x(t_k))``, ``b[k] = x'(t_k)``.
* ``encode_weak``: ``G[k, j] = <phi_j(x), psi_k>``, ``b[k] = <x', psi_k>``
  obtained by integration by parts, boundary terms included.
* ``encode_occupation``: test functions act on the state,
  ``G[k, j] = <phi_j(x), psi_k'(x)>``, ``b[k] = psi_k(x(b)) - psi_k(x(a))``.

``solve`` returns the minimum-norm least-squares weights, and
``project_dynamics`` chains encoder, solver and decoder into the projection
``f -> p``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bases import ProjectionBasis, TestBasis
from .exceptions import DomainError, IncompatibleGridsError, MissingDataError, NumericError
from .quadrature import UniformGrid

DEFAULT_RCOND = 1e-12


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A sampled state path on a uniform time grid.

    Parameters
    ----------
    grid : UniformGrid
        Time grid on ``[a, b]``.
    states : ndarray, shape (n_points, N)
        State samples; 1-D input is treated as a scalar state.
    derivatives : ndarray, optional
        Time derivatives with the same shape as `states`.
    """

    grid: UniformGrid
    states: np.ndarray
    derivatives: Optional[np.ndarray] = None

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if states.ndim != 2 or states.shape[0] != self.grid.n_points:
            raise ValueError(f"states must have shape ({self.grid.n_points}, N), got {states.shape}")
        if not np.all(np.isfinite(states)):
            raise NumericError("trajectory states must be finite")
        object.__setattr__(self, "states", states)
        if self.derivatives is not None:
            der = np.asarray(self.derivatives, dtype=float).reshape(states.shape)
            if not np.all(np.isfinite(der)):
                raise NumericError("trajectory derivatives must be finite")
            object.__setattr__(self, "derivatives", der)

    @property
    def dimension(self):
        return self.states.shape[1]

    @property
    def times(self):
        return self.grid.points

    def state_range(self):
        """Per-component ``(min, max)`` of the states."""
        return tuple(zip(self.states.min(axis=0), self.states.max(axis=0)))


@dataclass(frozen=True, eq=False)
class GramSystem:
    """The identification system ``G w = b``.

    ``G`` has shape ``(K_eff, M)`` and is shared by all components, except for
    the occupation-kernel encoder with ``N > 1`` where test functions act on
    each component separately and ``G`` has shape ``(N, K_eff, M)``.
    ``b`` always has shape ``(K_eff, N)``.
    """

    G: np.ndarray
    b: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.all(np.isfinite(self.G)) and np.all(np.isfinite(self.b))):
            raise NumericError(f"non-finite entries in {self.method} system")

    @property
    def per_component(self):
        return self.G.ndim == 3

    def matrix(self, i):
        """The matrix used for component `i`."""
        return self.G[i] if self.per_component else self.G


@dataclass(frozen=True, eq=False)
class SurrogateModel:
    """Polynomial dynamics ``p_i(x) = sum_j weights[j, i] phi_j(x)``."""

    basis: ProjectionBasis
    weights: np.ndarray
    method: str = "weak"
    test_degree: Optional[int] = None
    interval: Optional[tuple] = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim == 1:
            w = w[:, None]
        if w.shape[0] != self.basis.size:
            raise ValueError(f"weights have {w.shape[0]} rows, basis has {self.basis.size} functions")
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self):
        return self.weights.shape[1]

    def __call__(self, x):
        """Evaluate the dynamics.

        A 2-D `x` of shape ``(n, N)`` is a batch of states and gives an
        ``(n, N)`` result; anything else is a single state.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            return self.basis.evaluate(x) @ self.weights
        return (self.basis.evaluate(x.reshape(1, -1)) @ self.weights)[0]

    def jacobian(self, x):
        """Jacobian ``d p_i / d x_l``, shape ``(n, N_out, N_in)``."""
        grad = self.basis.gradient(x)
        return np.einsum("nmd,mi->nid", grad, self.weights)

    def coefficients(self):
        """Mapping ``multi-index -> weight row`` for inspection."""
        return {j: self.weights[m] for m, j in enumerate(self.basis.multi_indices)}


class LstsqSolution(NamedTuple):
    weights: np.ndarray
    rank: int
    underdetermined: bool
    singular_values: np.ndarray


def _check_test_interval(traj, test):
    a, b = test.interval
    if not (np.isclose(a, traj.grid.start) and np.isclose(b, traj.grid.stop)):
        raise IncompatibleGridsError(
            f"test interval {test.interval} does not match trajectory span "
            f"({traj.grid.start}, {traj.grid.stop})"
        )


def _check_states_in_box(traj, proj):
    if proj.domain_box is None:
        return
    lo = np.array([b[0] for b in proj.domain_box])
    hi = np.array([b[1] for b in proj.domain_box])
    tol = 1e-9 * np.maximum(1.0, hi - lo)
    if np.any(traj.states < lo - tol) or np.any(traj.states > hi + tol):
        raise DomainError("trajectory leaves the projection basis domain box")


def encode_weak(traj, proj, test, ibp_boundary=True):
    """Weak-form system with ``G[k, j] = <phi_j(x), psi_k>``.

    The right-hand side avoids ``x'`` through integration by parts,
    ``<x', psi_k> = [x psi_k]_a^b - <x, psi_k'>``. Test functions are not
    assumed to vanish at the end points, so the boundary term is kept unless
    ``ibp_boundary=False``.
    """
    _check_test_interval(traj, test)
    _check_states_in_box(traj, proj)
    t = traj.times
    w = traj.grid.weights()
    psi = test.evaluate(t)
    dpsi = test.derivative(t)
    phi = proj.evaluate(traj.states)
    G = (psi * w[:, None]).T @ phi
    b = -(dpsi * w[:, None]).T @ traj.states
    if ibp_boundary:
        b += np.outer(psi[-1], traj.states[-1]) - np.outer(psi[0], traj.states[0])
    return GramSystem(G, b, "weak", {"ibp_boundary": bool(ibp_boundary), "test_kind": test.kind,
                                      "test_degree": test.degree})


def estimate_derivatives(states, step):
    """Fourth-order finite differences along axis 0.

    Central five-point stencil in the interior and one-sided five-point
    stencils on the first and last two samples.
    """
    x = np.asarray(states, dtype=float)
    n = x.shape[0]
    if n < 5:
        raise MissingDataError("derivative estimation needs at least 5 samples")
    d = np.empty_like(x)
    d[2:-2] = (x[:-4] - 8 * x[1:-3] + 8 * x[3:-1] - x[4:]) / (12 * step)
    fwd0 = np.array([-25, 48, -36, 16, -3]) / 12
    fwd1 = np.array([-3, -10, 18, -6, 1]) / 12
    d[0] = np.tensordot(fwd0, x[:5], axes=1) / step
    d[1] = np.tensordot(fwd1, x[:5], axes=1) / step
    d[-1] = -np.tensordot(fwd0, x[-1:-6:-1], axes=1) / step
    d[-2] = -np.tensordot(fwd1, x[-1:-6:-1], axes=1) / step
    return d


def encode_sindy(traj, proj, estimate=False):
    """Pointwise system with one row per sample time.

    Derivatives come from ``traj.derivatives``. Without them, pass
    ``estimate=True`` to use fourth-order finite differences instead; this
    never happens implicitly.
    """
    _check_states_in_box(traj, proj)
    if traj.derivatives is not None:
        xdot = traj.derivatives
        source = "supplied"
    elif estimate:
        xdot = estimate_derivatives(traj.states, traj.grid.step)
        source = "fd4"
    else:
        raise MissingDataError("trajectory has no derivatives; pass estimate=True to use finite differences")
    G = proj.evaluate(traj.states)
    return GramSystem(G, np.array(xdot, dtype=float), "sindy", {"derivatives": source})


def state_domain_test_basis(traj, degree, component=0, pad=0.01):
    """Legendre test basis on the padded state range of one component."""
    lo = float(traj.states[:, component].min())
    hi = float(traj.states[:, component].max())
    width = hi - lo
    margin = pad * width if width > 0 else pad * max(1.0, abs(lo))
    return TestBasis("legendre", degree, (lo - margin, hi + margin))


def encode_occupation(traj, proj, test):
    """Occupation-kernel system; test functions compose with the state.

    `test` is either a single :class:`TestBasis` on a state interval (used for
    every component) or a sequence with one basis per component. Component
    ``i`` uses ``psi_k(x_i)``, so ``<psi_k'(x_i), x_i'> = psi_k(x_i(b)) -
    psi_k(x_i(a))``.
    """
    _check_states_in_box(traj, proj)
    n_comp = traj.dimension
    tests = list(test) if isinstance(test, (list, tuple)) else [test] * n_comp
    if len(tests) != n_comp:
        raise ValueError("need one test basis per state component")
    w = traj.grid.weights()
    phi = proj.evaluate(traj.states)
    Gs, bs = [], []
    for i, tb in enumerate(tests):
        xi = traj.states[:, i]
        lo, hi = tb.interval
        if xi.min() < lo or xi.max() > hi:
            raise DomainError(
                f"component {i} range [{xi.min():g}, {xi.max():g}] escapes test domain [{lo:g}, {hi:g}]"
            )
        dpsi = tb.derivative(xi)
        Gs.append((dpsi * w[:, None]).T @ phi)
        bs.append(tb.evaluate(np.asarray(xi[-1])) - tb.evaluate(np.asarray(xi[0])))
    b = np.stack(bs, axis=1)
    # even with one shared test family, G differs per component because psi acts on x_i
    G = Gs[0] if n_comp == 1 else np.stack(Gs)
    return GramSystem(G, b, "occupation", {"test_kind": tests[0].kind, "test_degree": tests[0].degree})


def _lstsq(G, b, rcond):
    U, s, Vt = np.linalg.svd(G, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((G.shape[1],) + b.shape[1:]), 0, s
    keep = s > rcond * s[0]
    rank = int(keep.sum())
    coef = (U[:, keep].T @ b) / s[keep].reshape((-1,) + (1,) * (b.ndim - 1))
    return Vt[keep].T @ coef, rank, s


def solve(system, rcond=DEFAULT_RCOND):
    """Minimum-norm least-squares weights for ``G w = b``.

    Singular values below ``rcond * s_max`` are discarded. The returned
    ``underdetermined`` flag is set when the effective rank is smaller than
    the number of unknowns (e.g. more projection functions than test
    functions), in which case the minimum-norm solution is returned.
    """
    G = np.asarray(system.G, dtype=float)
    b = np.asarray(system.b, dtype=float)
    if not (np.all(np.isfinite(G)) and np.all(np.isfinite(b))):
        raise NumericError("non-finite entries in identification system")
    squeeze = b.ndim == 1
    b2 = b[:, None] if squeeze else b
    if G.ndim == 2:
        weights, rank, s = _lstsq(G, b2, rcond)
    else:
        cols, ranks, svals = [], [], []
        for i in range(b2.shape[1]):
            wi, ri, si = _lstsq(G[i], b2[:, i], rcond)
            cols.append(wi)
            ranks.append(ri)
            svals.append(si)
        weights, rank, s = np.stack(cols, axis=1), min(ranks), np.stack(svals)
    if squeeze:
        weights = weights[:, 0]
    n_unknowns = G.shape[-1]
    return LstsqSolution(weights, rank, rank < n_unknowns, s)


def residual_norm(system, weights):
    """Per-component Euclidean residual ``||G w - b||``."""
    w = np.asarray(weights, dtype=float)
    w = w[:, None] if w.ndim == 1 else w
    if system.per_component:
        r = np.stack([system.G[i] @ w[:, i] - system.b[:, i] for i in range(w.shape[1])], axis=1)
    else:
        r = system.G @ w - system.b
    return np.linalg.norm(r, axis=0)


def decode(proj, weights, **provenance):
    """Decoder map: weights to a :class:`SurrogateModel`."""
    return SurrogateModel(proj, weights, **provenance)


def encode_function(f_samples, traj, test):
    """Encoder map applied to samples of ``f(x(t))``: ``<f(x), psi_k>``."""
    _check_test_interval(traj, test)
    fv = np.asarray(f_samples, dtype=float)
    fv = fv[:, None] if fv.ndim == 1 else fv
    if fv.shape[0] != traj.grid.n_points:
        raise IncompatibleGridsError("dynamics samples do not match the trajectory grid")
    psi = test.evaluate(traj.times)
    return (psi * traj.grid.weights()[:, None]).T @ fv


def project_dynamics(f_samples, traj, proj, test, rcond=DEFAULT_RCOND):
    """Weak-form projection ``P = D o S o E`` of sampled dynamics.

    Parameters
    ----------
    f_samples : ndarray, shape (n_points,) or (n_points, N), or None
        Samples of ``f(x(t))`` on the trajectory grid. With ``None`` the
        right-hand side comes from the trajectory data through
        integration by parts (the usual data path).
    """
    system = encode_weak(traj, proj, test)
    if f_samples is not None:
        system = GramSystem(system.G, encode_function(f_samples, traj, test), "weak", system.meta)
    sol = solve(system, rcond=rcond)
    return decode(proj, sol.weights, method="weak", test_degree=test.degree,
                  interval=(traj.grid.start, traj.grid.stop))
