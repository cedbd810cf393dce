"""Sobolev norms: integer orders on the disk, real orders on the circle."""

import numbers

import numpy as np

from ..errors import UnsupportedOrderError
from .calculus import dx_values, dy_values
from .fields import ScalarField, VectorField

__all__ = ["sobolev_norm_disk", "sobolev_norm_boundary", "l2_norm_disk"]

MAX_DISK_ORDER = 4


def _norm_sq_scalar(grid, values, s):
    # derivative table D^(a,b) built column by column: b angular-y layers
    # first, then repeated d_x
    total = 0.0
    layer = values
    for b in range(s + 1):
        g = layer
        for a in range(s + 1 - b):
            total += grid.integrate(g * g)
            if a < s - b:
                g = dx_values(grid, g)
        if b < s:
            layer = dy_values(grid, layer)
    return total


def sobolev_norm_disk(f, s):
    """H^s(disk) norm, (sum_{|alpha| <= s} ||D^alpha f||_L2^2)^(1/2), s = 0..4."""
    if isinstance(s, bool) or not isinstance(s, numbers.Integral):
        raise UnsupportedOrderError(f"disk Sobolev order must be an integer, got {s!r}")
    s = int(s)
    if s < 0 or s > MAX_DISK_ORDER:
        raise UnsupportedOrderError(f"disk Sobolev order {s} outside 0..{MAX_DISK_ORDER}")
    if isinstance(f, ScalarField):
        return float(np.sqrt(_norm_sq_scalar(f.grid, f.values, s)))
    if isinstance(f, VectorField):
        return float(np.sqrt(_norm_sq_scalar(f.grid, f.x.values, s)
                             + _norm_sq_scalar(f.grid, f.y.values, s)))
    raise UnsupportedOrderError("sobolev_norm_disk expects a ScalarField or VectorField")


def l2_norm_disk(f):
    return sobolev_norm_disk(f, 0)


def sobolev_norm_boundary(b, s):
    """H^s(circle) norm from the Fourier multiplier (1 + m^2)^s; any real s >= 0."""
    if s < 0:
        raise UnsupportedOrderError("boundary Sobolev order must be >= 0")
    grid = b.grid
    weights = np.full(grid.n_modes, 2.0)
    weights[0] = 1.0
    mult = (1.0 + grid.modes.astype(float) ** 2) ** s
    total = 2.0 * np.pi * np.sum(weights * mult * np.abs(b.coeffs) ** 2)
    return float(np.sqrt(total))
