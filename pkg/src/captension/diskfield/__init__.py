"""Spectral fields on the unit disk: grid, calculus, elliptic solves, norms."""

from .grid import DiskGrid, make_grid
from .fields import (ScalarField, VectorField, BoundaryFunction, DiskMap,
                     identity_map, rotation_map)
from .calculus import (dx_values, dy_values, gradient, divergence, laplacian,
                       hessian, evaluate_at, evaluate_vector_at, compose,
                       jacobian_det, map_jacobian, restrict_boundary,
                       normal_derivative_boundary)
from .elliptic import solve_dirichlet, solve_neumann, harmonic_extension
from .norms import sobolev_norm_disk, sobolev_norm_boundary, l2_norm_disk

__all__ = [
    "DiskGrid", "make_grid",
    "ScalarField", "VectorField", "BoundaryFunction", "DiskMap",
    "identity_map", "rotation_map",
    "dx_values", "dy_values",
    "gradient", "divergence", "laplacian", "hessian", "evaluate_at",
    "evaluate_vector_at", "compose", "jacobian_det", "map_jacobian",
    "restrict_boundary", "normal_derivative_boundary",
    "solve_dirichlet", "solve_neumann", "harmonic_extension",
    "sobolev_norm_disk", "sobolev_norm_boundary", "l2_norm_disk",
]
