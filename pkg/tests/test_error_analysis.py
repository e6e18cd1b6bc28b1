import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wsk.bases import ProjectionBasis, TestBasis
from wsk.error_analysis import (
    decompose_error,
    fit_rate,
    project_test_space,
    solution_error_bound,
    sup_error_bound_holds,
)
from wsk.exceptions import IncompatibleGridsError, InsufficientDataError
from wsk.identification import SurrogateModel, Trajectory, encode_weak, project_dynamics, solve
from wsk.ode import DynamicsSpec, integrate
from wsk.quadrature import SampledFunction, UniformGrid, l2_norm


@pytest.fixture(scope="module")
def smooth_traj():
    return integrate(DynamicsSpec.smooth_exp(), [0.0], UniformGrid.from_step(0, 1, 1e-4))


def test_projection_of_test_function_is_itself():
    g = UniformGrid(0, 1, 2001)
    test = TestBasis("legendre", 6)
    psi3 = SampledFunction(g, test.evaluate(g.points)[:, 3])
    assert np.allclose(project_test_space(psi3, test).values, psi3.values, atol=1e-10)


def test_projection_removes_orthogonal_part():
    g = UniformGrid(0, 1, 2001)
    test = TestBasis("legendre", 2)
    psi = TestBasis("legendre", 5).evaluate(g.points)
    f = SampledFunction(g, psi[:, 1] + psi[:, 4])
    assert np.allclose(project_test_space(f, test).values, psi[:, 1], atol=1e-9)


def test_projection_interval_mismatch():
    f = SampledFunction(UniformGrid(0, 2, 11), np.ones(11))
    with pytest.raises(IncompatibleGridsError):
        project_test_space(f, TestBasis("legendre", 3))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), K=st.integers(0, 20), kind=st.sampled_from(["legendre", "fourier"]))
def test_projection_is_idempotent(seed, K, kind):
    rng = np.random.default_rng(seed)
    g = UniformGrid(0, 1, 2001)
    f = SampledFunction(g, np.sin(rng.uniform(0, 10) * g.points) + rng.uniform(-1, 1) * g.points ** 3)
    test = TestBasis(kind, K)
    once = project_test_space(f, test)
    twice = project_test_space(once, test)
    assert np.abs(twice.values - once.values).max() < 1e-10


def test_exact_recovery_decomposition():
    g = UniformGrid.from_step(0, 1, 1e-3)
    true = SurrogateModel(ProjectionBasis(2), np.array([1.0, 1.0, -0.25]))
    tr = integrate(DynamicsSpec.polynomial_surrogate(true), [0.0], g)
    test = TestBasis("legendre", 10)
    model = SurrogateModel(ProjectionBasis(2), solve(encode_weak(tr, ProjectionBasis(2), test)).weights)
    dec = decompose_error(tr.derivatives, model, tr, test)
    assert dec.L < 1e-8 and dec.R2 < 1e-8
    assert dec.R1 == pytest.approx(dec.R3, rel=1e-6, abs=1e-12)
    assert dec.triangle_holds()


def test_large_K_reaches_quadrature_floor(smooth_traj):
    f = np.exp(-2 * smooth_traj.states[:, 0])
    model = project_dynamics(f, smooth_traj, ProjectionBasis(10), TestBasis("legendre", 20))
    dec = decompose_error(f, model, smooth_traj, TestBasis("legendre", 20))
    assert dec.R1 <= 1e-9 and dec.R3 <= 1e-9


def test_L_tracks_R2_for_smooth_problem(smooth_traj):
    f = np.exp(-2 * smooth_traj.states[:, 0])
    test = TestBasis("legendre", 20)
    model = project_dynamics(f, smooth_traj, ProjectionBasis(5), test)
    dec = decompose_error(f, model, smooth_traj, test)
    assert 0.5 <= dec.L / dec.R2 <= 2.0
    assert dec.bound == dec.R1 + dec.R2 + dec.R3
    assert dec.as_dict()["J"] == 5


def test_decompose_grid_mismatch(smooth_traj):
    model = SurrogateModel(ProjectionBasis(1), np.zeros(2))
    with pytest.raises(IncompatibleGridsError):
        decompose_error(np.zeros(5), model, smooth_traj, TestBasis("legendre", 2))


def test_R2_non_increasing_in_J(smooth_traj):
    f = np.exp(-2 * smooth_traj.states[:, 0])
    test = TestBasis("legendre", 10)
    r2 = []
    for J in range(1, 15):
        model = project_dynamics(f, smooth_traj, ProjectionBasis(J), test)
        r2.append(decompose_error(f, model, smooth_traj, test).R2)
    assert all(b <= a * (1 + 1e-6) + 1e-12 for a, b in zip(r2, r2[1:]))


def test_solution_bound_examples():
    assert solution_error_bound(0.0, 2.0, (0.0, 0.4)) == 0.0
    assert solution_error_bound(0.002, 2.0, (0.0, 0.4)) == pytest.approx(0.002 * np.sqrt(0.4) / 0.2)
    assert solution_error_bound(0.002, 2.0, (0.0, 0.4)) == pytest.approx(6.3e-3, rel=0.01)
    assert solution_error_bound(0.1, 1.5, (2.0, 3.0)) is None


def test_fit_rate_exact_power_law():
    xs = np.arange(2, 12)
    fit = fit_rate(xs, 7.0 * xs ** -3.0)
    assert fit.slope == pytest.approx(-3.0, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit_rate(xs, np.full(xs.shape, 0.3)).slope == pytest.approx(0.0, abs=1e-12)


def test_fit_rate_window_and_errors():
    xs = np.arange(1, 21)
    ys = np.where(xs <= 10, xs ** -2.0, 1e-2)
    fit = fit_rate(xs, ys, window=(2, 10))
    assert fit.slope == pytest.approx(-2.0) and fit.fit_window == (2.0, 10.0)
    with pytest.raises(InsufficientDataError):
        fit_rate(xs, ys, window=(1, 3))
    with pytest.raises(ValueError):
        fit_rate([1, 2, 3, 4], [1, 0, 1, 1])


def test_sup_bound_holds_for_surrogate_solves(smooth_traj):
    g = smooth_traj.grid
    x = smooth_traj.states
    f_on_x = np.exp(-2 * x[:, 0])
    for J in (1, 2, 4):
        model = project_dynamics(f_on_x, smooth_traj, ProjectionBasis(J), TestBasis("legendre", 10))
        xhat = integrate(DynamicsSpec.polynomial_surrogate(model), [0.0], g).states
        assert sup_error_bound_holds(x[:, 0], xhat[:, 0], f_on_x, model(xhat)[:, 0], g)


def test_sup_bound_identity_case():
    g = UniformGrid(0, 1, 11)
    assert sup_error_bound_holds(np.zeros(11), np.zeros(11), np.ones(11), np.ones(11), g)
    assert l2_norm(SampledFunction(g, np.ones(11))) == pytest.approx(1.0)
    assert Trajectory(g, np.zeros(11)).dimension == 1
