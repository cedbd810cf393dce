"""Shared generators for the test suite."""

import numpy as np

from captension.diskfield import (BoundaryFunction, ScalarField, VectorField,
                                  sobolev_norm_boundary)


def random_boundary(grid, rng, norm_bound, s=2.5, max_mode=8):
    """Mean-zero random boundary data with Sobolev norm <= norm_bound.

    Coefficients decay like 2^-m so every draw is comfortably smooth;
    the draw is rescaled to a uniformly random fraction of the bound.
    """
    coeffs = np.zeros(grid.n_theta // 2 + 1, dtype=complex)
    top = min(max_mode, grid.n_theta // 2 - 1)
    for m in range(1, top + 1):
        coeffs[m] = (rng.standard_normal() + 1j * rng.standard_normal()) * 2.0 ** -m
    b = BoundaryFunction(grid, coeffs)
    norm = sobolev_norm_boundary(b, s)
    scale = norm_bound * rng.uniform(0.2, 1.0) / norm
    return BoundaryFunction(grid, coeffs * scale)


def random_poly_field(grid, rng, degree=5, scale=1.0):
    """Vector field whose components are random polynomials in (x, y).

    Low-degree polynomials are exactly representable on the grid, so
    identities checked on them are clean of truncation error.
    """
    def component():
        vals = np.zeros_like(grid.xx)
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                vals += rng.standard_normal() * grid.xx ** i * grid.yy ** j
        return ScalarField(grid, scale * vals)

    return VectorField(component(), component())
