import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from captension.diskfield import (BoundaryFunction, ScalarField, VectorField,
                                  l2_norm_disk, make_grid, sobolev_norm_boundary,
                                  sobolev_norm_disk)


def test_l2_norm_of_coordinate(grid):
    f = ScalarField.from_function(grid, lambda x, y: x)
    assert l2_norm_disk(f) == pytest.approx(np.sqrt(np.pi / 4.0), abs=1e-13)


def test_l2_norm_of_vector_field(grid):
    w = VectorField(ScalarField.from_function(grid, lambda x, y: x),
                    ScalarField.from_function(grid, lambda x, y: y))
    assert l2_norm_disk(w) == pytest.approx(np.sqrt(np.pi / 2.0), abs=1e-13)


def test_h1_norm_of_coordinate(grid):
    f = ScalarField.from_function(grid, lambda x, y: x)
    expected = np.sqrt(np.pi / 4.0 + np.pi)
    assert sobolev_norm_disk(f, 1) == pytest.approx(expected, abs=1e-12)
    # all higher derivatives vanish, so H2 equals H1 here
    assert sobolev_norm_disk(f, 2) == pytest.approx(expected, abs=1e-11)


def test_sobolev_orders_nest(grid):
    f = ScalarField.from_function(grid, lambda x, y: x ** 2 * y - 0.3 * y ** 3)
    norms = [sobolev_norm_disk(f, s) for s in range(4)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))
    assert norms[0] == pytest.approx(l2_norm_disk(f), abs=1e-13)


def test_boundary_norm_single_mode(grid):
    b = BoundaryFunction.single_mode(grid, 3, 1.0)
    expected = np.sqrt(np.pi * np.sqrt(10.0))
    assert sobolev_norm_boundary(b, 0.5) == pytest.approx(expected, abs=1e-12)


def test_boundary_norm_s0_is_l2(grid):
    b = BoundaryFunction.single_mode(grid, 4, 2.0)
    # ||2 cos(4 theta)||_L2 over the circle = 2 sqrt(pi)
    assert sobolev_norm_boundary(b, 0.0) == pytest.approx(2.0 * np.sqrt(np.pi),
                                                          abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(c=st.floats(min_value=-100.0, max_value=100.0, allow_nan=False),
       s=st.sampled_from([0, 1, 2]))
def test_disk_norm_homogeneity(c, s):
    grid = make_grid(16, 8)
    f = ScalarField.from_function(grid, lambda x, y: x * y + 0.2 * x)
    assert sobolev_norm_disk(ScalarField(grid, c * f.values), s) == pytest.approx(
        abs(c) * sobolev_norm_disk(f, s), rel=1e-11, abs=1e-11)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(min_value=0, max_value=7),
       s=st.sampled_from([0.0, 0.5, 1.0, 2.5]))
def test_boundary_norm_matches_formula(m, s):
    grid = make_grid(16, 8)
    b = BoundaryFunction.single_mode(grid, m, 1.3)
    weight = 1.0 if m == 0 else 2.0
    expected = np.sqrt(2.0 * np.pi * weight * (1.0 + m * m) ** s * (1.3 / 2.0) ** 2
                       * (4.0 if m == 0 else 1.0))
    assert sobolev_norm_boundary(b, s) == pytest.approx(expected, rel=1e-12)
