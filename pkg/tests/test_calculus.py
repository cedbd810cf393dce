import numpy as np
import pytest

from captension.diskfield import (DiskMap, ScalarField, VectorField, compose,
                                  divergence, evaluate_at, evaluate_vector_at,
                                  gradient, hessian, identity_map,
                                  jacobian_det, laplacian, normal_derivative_boundary,
                                  restrict_boundary, rotation_map)
from captension.errors import PointOutsideDomainError


def poly(grid):
    return ScalarField.from_function(
        grid, lambda x, y: x ** 3 - 2.0 * x * y ** 2 + 0.5 * y + 1.0)


def test_gradient_of_polynomial(grid):
    g = gradient(poly(grid))
    gx = 3.0 * grid.xx ** 2 - 2.0 * grid.yy ** 2
    gy = -4.0 * grid.xx * grid.yy + 0.5
    assert np.allclose(g.x.values, gx, atol=1e-12)
    assert np.allclose(g.y.values, gy, atol=1e-12)


def test_divergence_and_laplacian_agree(grid):
    f = poly(grid)
    lap = laplacian(f)
    div_grad = divergence(gradient(f))
    assert np.allclose(lap.values, div_grad.values, atol=1e-10)
    assert np.allclose(lap.values, 2.0 * grid.xx, atol=1e-10)


def test_hessian_entries(grid):
    fxx, fxy, fyx, fyy = hessian(poly(grid))
    assert np.allclose(fxx, 6.0 * grid.xx, atol=1e-10)
    assert np.allclose(fxy, -4.0 * grid.yy, atol=1e-10)
    assert np.allclose(fyx, fxy, atol=1e-10)
    assert np.allclose(fyy, -4.0 * grid.xx, atol=1e-10)


def test_evaluate_at_interior_points(grid, rng):
    f = poly(grid)
    pts = rng.uniform(-0.6, 0.6, size=(40, 2))
    vals = evaluate_at(f, pts)
    exact = pts[:, 0] ** 3 - 2.0 * pts[:, 0] * pts[:, 1] ** 2 + 0.5 * pts[:, 1] + 1.0
    assert np.allclose(vals, exact, atol=1e-12)


def test_evaluate_at_nodes_is_bit_exact(grid):
    f = poly(grid)
    pts = np.column_stack([grid.xx.ravel(), grid.yy.ravel()])
    vals = evaluate_at(f, pts)
    assert np.array_equal(vals, f.values.ravel())


def test_evaluate_outside_raises(grid):
    f = poly(grid)
    with pytest.raises(PointOutsideDomainError):
        evaluate_at(f, np.array([[1.2, 0.0]]))
    # tiny overshoot is tolerated through the polynomial extension
    val = evaluate_at(f, np.array([[1.0 + 5e-13, 0.0]]), clamp_tol=1e-12)
    assert val[0] == pytest.approx(2.0, abs=1e-9)


def test_evaluate_vector_matches_componentwise(grid, rng):
    w = VectorField(poly(grid), gradient(poly(grid)).x)
    pts = rng.uniform(-0.5, 0.5, size=(15, 2))
    vals = evaluate_vector_at(w, pts)
    assert np.allclose(vals[:, 0], evaluate_at(w.x, pts), atol=1e-13)
    assert np.allclose(vals[:, 1], evaluate_at(w.y, pts), atol=1e-13)


def test_compose_with_rotation(grid):
    f = poly(grid)
    rot = rotation_map(grid, 0.3)
    composed = compose(f, rot)
    xr = grid.xx * np.cos(0.3) - grid.yy * np.sin(0.3)
    yr = grid.xx * np.sin(0.3) + grid.yy * np.cos(0.3)
    exact = xr ** 3 - 2.0 * xr * yr ** 2 + 0.5 * yr + 1.0
    assert np.allclose(composed.values, exact, atol=1e-11)


def test_compose_with_identity_is_identity(grid):
    f = poly(grid)
    assert np.allclose(compose(f, identity_map(grid)).values, f.values, atol=0.0)


def test_jacobian_det_of_rotation(grid):
    det = jacobian_det(rotation_map(grid, 0.7))
    assert np.allclose(det.values, 1.0, atol=1e-12)


def test_restrict_boundary_matches_ring(grid):
    f = poly(grid)
    b = restrict_boundary(f)
    assert np.allclose(b.samples(), f.values[-1, :], atol=1e-12)


def test_normal_derivative_boundary(grid):
    # d/dr of r^2 cos(2 theta) at r = 1 is 2 cos(2 theta)
    f = ScalarField.from_function(grid, lambda x, y: x ** 2 - y ** 2)
    nd = normal_derivative_boundary(f)
    assert np.allclose(nd.samples(), 2.0 * np.cos(2.0 * grid.theta), atol=1e-11)
