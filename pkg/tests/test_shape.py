import numpy as np
import pytest

from helpers import random_boundary

from captension.diskfield import (BoundaryFunction, DiskMap, ScalarField,
                                  gradient, identity_map, jacobian_det,
                                  l2_norm_disk, restrict_boundary, rotation_map,
                                  sobolev_norm_disk)
from captension.errors import DegenerateTangentError
from captension.shape import (boundary_length, boundary_normal, compose_Phi,
                              curvature_exact, curvature_expansion,
                              decompose_embedding, harmonic_curvature_gradient,
                              solve_volume_constraint)


def graph_map(pot):
    return DiskMap(gradient(pot.f), kind="embedding")


def test_zero_boundary_data_gives_zero_potential(grid):
    pot = solve_volume_constraint(BoundaryFunction.zeros(grid))
    assert l2_norm_disk(pot.f) == 0.0
    assert pot.residual == 0.0


def test_linear_boundary_data_gives_translation(grid):
    # h = a cos + b sin extends to f = ax + by: det D^2 f = 0 exactly
    coeffs = np.zeros(grid.n_theta // 2 + 1, dtype=complex)
    coeffs[1] = 0.05 - 0.015j
    h = BoundaryFunction(grid, coeffs)
    pot = solve_volume_constraint(h)
    exact = 0.1 * grid.xx + 0.03 * grid.yy
    assert np.allclose(pot.f.values, exact, atol=1e-12)
    det = jacobian_det(graph_map(pot)).values
    assert np.abs(det - 1.0).max() < 1e-11


def test_mode_two_constraint(grid):
    h = BoundaryFunction.single_mode(grid, 2, 0.05)
    pot = solve_volume_constraint(h)
    det = jacobian_det(graph_map(pot)).values
    assert np.abs(det[:-1, :] - 1.0).max() < 1e-7
    trace_gap = np.abs(restrict_boundary(pot.f).samples() - h.samples()).max()
    assert trace_gap < 1e-10
    assert pot.elliptic_ratio > 0.0


def test_constraint_residual_reported(grid, rng):
    h = random_boundary(grid, rng, 0.05)
    pot = solve_volume_constraint(h)
    assert pot.residual < 1e-9


def test_unit_circle_curvature(grid):
    pot = solve_volume_constraint(BoundaryFunction.zeros(grid))
    kappa = curvature_exact(pot).samples()
    assert np.abs(kappa - 1.0).max() < 1e-10
    exp = curvature_expansion(pot)
    assert np.abs(exp.M5.samples()).max() < 1e-10


def test_translated_circle_curvature(grid):
    coeffs = np.zeros(grid.n_theta // 2 + 1, dtype=complex)
    coeffs[1] = 0.15 - 0.05j
    pot = solve_volume_constraint(BoundaryFunction(grid, coeffs))
    assert np.abs(curvature_exact(pot).samples() - 1.0).max() < 1e-10
    exp = curvature_expansion(pot)
    for b in (exp.M0, exp.M1, exp.M2, exp.M4, exp.M5):
        assert np.abs(b.samples()).max() < 1e-10


def test_expansion_matches_exact_curvature(grid, rng):
    for _ in range(5):
        pot = solve_volume_constraint(random_boundary(grid, rng, 0.05))
        kappa = curvature_exact(pot).samples()
        m5 = curvature_expansion(pot).M5.samples()
        assert np.abs(m5 + 1.0 - kappa).max() < 1e-9


def test_curvature_against_finite_differences(grid):
    # independent oracle: dense central differences on the boundary curve
    h = BoundaryFunction.single_mode(grid, 3, 0.02)
    pot = solve_volume_constraint(h)
    g = gradient(pot.f)
    bx = BoundaryFunction.from_samples(grid, g.x.values[-1, :])
    by = BoundaryFunction.from_samples(grid, g.y.values[-1, :])
    dt = 1e-4

    def curve(t):
        return np.cos(t) + bx.evaluate(t), np.sin(t) + by.evaluate(t)

    t = grid.theta
    xp = (np.array(curve(t + dt)) - np.array(curve(t - dt))) / (2.0 * dt)
    xpp = ((np.array(curve(t + dt)) - 2.0 * np.array(curve(t))
            + np.array(curve(t - dt))) / dt ** 2)
    fd = (xp[0] * xpp[1] - xp[1] * xpp[0]) / np.hypot(xp[0], xp[1]) ** 3
    assert np.abs(curvature_exact(pot).samples() - fd).max() < 1e-5


def test_degenerate_tangent_raises(grid):
    shrink = ScalarField.from_function(grid, lambda x, y: -0.4 * (x * x + y * y))
    with pytest.raises(DegenerateTangentError):
        curvature_exact(shrink)


def test_boundary_length_and_normal(grid):
    pot = solve_volume_constraint(BoundaryFunction.zeros(grid))
    assert boundary_length(pot) == pytest.approx(2.0 * np.pi, abs=1e-12)
    n = boundary_normal(pot)
    assert np.allclose(n[:, 0], np.cos(grid.theta), atol=1e-12)
    assert np.allclose(n[:, 1], np.sin(grid.theta), atol=1e-12)


def test_boundary_length_against_dense_quadrature(grid):
    h = BoundaryFunction.single_mode(grid, 2, 0.04)
    pot = solve_volume_constraint(h)
    g = gradient(pot.f)
    bx = BoundaryFunction.from_samples(grid, g.x.values[-1, :])
    by = BoundaryFunction.from_samples(grid, g.y.values[-1, :])
    t = np.linspace(0.0, 2.0 * np.pi, 20001)
    cx = np.cos(t) + bx.evaluate(t)
    cy = np.sin(t) + by.evaluate(t)
    dense = np.trapezoid(np.hypot(np.gradient(cx, t), np.gradient(cy, t)), t)
    assert boundary_length(pot) == pytest.approx(dense, abs=1e-6)


def test_harmonic_curvature_gradient_vanishes_on_disk(grid):
    pot = solve_volume_constraint(BoundaryFunction.zeros(grid))
    w = harmonic_curvature_gradient(pot)
    assert l2_norm_disk(w) < 1e-10


def test_factorization_round_trip(grid, rng):
    h = random_boundary(grid, rng, 0.03)
    pot = solve_volume_constraint(h)
    beta = rotation_map(grid, 0.5)
    eta = compose_Phi(beta, pot)
    fact = decompose_embedding(eta)
    grad_gap = sobolev_norm_disk(gradient(fact.potential.f) - gradient(pot.f), 0)
    beta_gap = sobolev_norm_disk(fact.beta.displacement - beta.displacement, 0)
    assert grad_gap < 1e-7
    assert beta_gap < 1e-7


def test_factorization_of_identity(grid):
    fact = decompose_embedding(DiskMap(
        gradient(ScalarField.zeros(grid)), kind="embedding"))
    assert l2_norm_disk(fact.potential.f) < 1e-12
    assert l2_norm_disk(fact.beta.displacement) < 1e-12


def test_compose_Phi_identity_is_graph_map(grid, rng):
    h = random_boundary(grid, rng, 0.03)
    pot = solve_volume_constraint(h)
    eta = compose_Phi(identity_map(grid), pot)
    g = gradient(pot.f)
    assert np.allclose(eta.displacement.x.values, g.x.values, atol=1e-12)
    assert np.allclose(eta.displacement.y.values, g.y.values, atol=1e-12)
