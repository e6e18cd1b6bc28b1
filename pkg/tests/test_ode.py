import numpy as np
import pytest

from wsk.bases import ProjectionBasis, TestBasis
from wsk.exceptions import BlowUpError
from wsk.identification import SurrogateModel, encode_weak, solve
from wsk.ode import (
    LIPSCHITZ_INFLATION,
    DynamicsSpec,
    integrate,
    integrate_linear,
    lipschitz_estimate,
    smooth_exp_solution,
    sobolev_g,
)
from wsk.quadrature import UniformGrid


def poly_model(coef, J=None):
    coef = np.asarray(coef, dtype=float)
    return SurrogateModel(ProjectionBasis(J if J is not None else coef.size - 1), coef)


def test_zero_dynamics_is_constant():
    tr = integrate(DynamicsSpec.zero(), [1.7], UniformGrid(0, 1, 11))
    assert np.all(tr.states == 1.7)


def test_smooth_exp_matches_analytic_solution():
    g = UniformGrid.from_step(0, 1, 1e-4)
    tr = integrate(DynamicsSpec.smooth_exp(), [0.0], g)
    assert tr.states[-1, 0] == pytest.approx(0.5 * np.log(3), abs=1e-8)
    assert np.abs(tr.states[:, 0] - smooth_exp_solution(g.points)).max() <= 1e-8
    assert np.allclose(tr.derivatives[:, 0], np.exp(-2 * tr.states[:, 0]))


def test_rk4_fourth_order():
    errs = []
    for n in (11, 21, 41):
        g = UniformGrid(0, 1, n)
        errs.append(abs(integrate(DynamicsSpec.smooth_exp(), [0.0], g).states[-1, 0] - 0.5 * np.log(3)))
    for a, b in zip(errs, errs[1:]):
        assert 13 < a / b < 19


def test_substeps_agree_with_finer_grid():
    coarse = integrate(DynamicsSpec.smooth_exp(), [0.0], UniformGrid(0, 1, 11), substeps=4)
    fine = integrate(DynamicsSpec.smooth_exp(), [0.0], UniformGrid(0, 1, 41))
    assert np.allclose(coarse.states[:, 0], fine.states[::4, 0], atol=1e-14)


def test_sobolev_trajectory_step_halving():
    dyn = DynamicsSpec.sobolev_alpha(1)
    a = integrate(dyn, [2.0], UniformGrid.from_step(0, 2, 1e-3)).states[:, 0]
    b = integrate(dyn, [2.0], UniformGrid.from_step(0, 2, 5e-4)).states[::2, 0]
    assert a[-1] < np.pi / 2  # crosses into the cosine support
    assert abs(a[-1] - b[-1]) < 1e-6


def test_sobolev_g_values():
    x = np.array([-3.0, -np.pi / 2, 0.0, 1.0, 2.0])
    want = np.array([-0.5, np.cos(np.pi / 2) ** 2 - 0.5, 0.5, np.cos(1.0) ** 2 - 0.5, -0.5])
    assert np.allclose(sobolev_g(x, 2), want)
    assert DynamicsSpec.sobolev_alpha(3).describe() == "sobolev_alpha(alpha=3)"


def test_blow_up_reports_time():
    dyn = DynamicsSpec.polynomial_surrogate(poly_model([0.0, 0.0, 1.0]))
    with pytest.raises(BlowUpError) as info:
        integrate(dyn, [1.0], UniformGrid.from_step(0, 2, 1e-3))
    # x' = x^2 from x(0) = 1 blows up at t = 1
    assert 1.0 <= info.value.time <= 1.2


def test_linear_integrator_matches_generic():
    A = np.array([[-0.3, 1.0], [-1.0, -0.2]])
    c = np.array([0.1, -0.4])
    g = UniformGrid(0, 5, 501)
    fast = integrate_linear(A, [1.0, 0.5], g, c=c, substeps=3)
    slow = integrate(DynamicsSpec.linear_modal(A, c), [1.0, 0.5], g, substeps=3)
    assert np.allclose(fast.states, slow.states, atol=1e-12)
    assert np.allclose(fast.derivatives, slow.derivatives, atol=1e-12)


def test_linear_integrator_blow_up():
    with pytest.raises(BlowUpError):
        integrate_linear(np.array([[1e3]]), [1.0], UniformGrid(0, 10, 101))


def test_lipschitz_linear_and_quadratic():
    assert lipschitz_estimate(poly_model([0.0, 2.0]), (-5, 5)) == pytest.approx(2.1)
    assert lipschitz_estimate(poly_model([0.0, 0.0, 1.0]), (0, 1)) == pytest.approx(2.0 * LIPSCHITZ_INFLATION)


def test_lipschitz_rejects_degenerate_box():
    with pytest.raises(ValueError):
        lipschitz_estimate(poly_model([0.0, 1.0]), (1, 1))


def test_lipschitz_vector_model_uses_spectral_norm():
    m = SurrogateModel(ProjectionBasis(1, 2), np.array([[0, 0], [3.0, 0], [0, 4.0], [0, 0]]))
    assert lipschitz_estimate(m, ((0, 1), (0, 1))) == pytest.approx(4.0 * 1.05)


def test_lipschitz_degree5_surrogate_against_dense_sampling():
    g = UniformGrid.from_step(0, 1, 1e-4)
    tr = integrate(DynamicsSpec.smooth_exp(), [0.0], g)
    sol = solve(encode_weak(tr, ProjectionBasis(5), TestBasis("legendre", 20)))
    model = SurrogateModel(ProjectionBasis(5), sol.weights)
    lo, hi = 0.0, float(smooth_exp_solution(3.0))
    est = lipschitz_estimate(model, (lo, hi))
    dense = np.linspace(lo, hi, 1_000_000)
    oracle = np.abs(model.jacobian(dense[:, None])[:, 0, 0]).max()
    assert est / LIPSCHITZ_INFLATION == pytest.approx(oracle, rel=1e-2)


def test_exact_surrogate_reproduces_training_trajectory():
    # f(x) = 1 + x - x^2 / 4 lies in P_2
    true = poly_model([1.0, 1.0, -0.25])
    g = UniformGrid.from_step(0, 1, 1e-3)
    tr = integrate(DynamicsSpec.polynomial_surrogate(true), [0.0], g)
    sol = solve(encode_weak(tr, ProjectionBasis(2), TestBasis("legendre", 10)))
    fitted = SurrogateModel(ProjectionBasis(2), sol.weights)
    replay = integrate(DynamicsSpec.polynomial_surrogate(fitted), [0.0], g)
    assert np.abs(replay.states - tr.states).max() < 1e-6
