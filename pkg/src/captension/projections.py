"""Leray-Hodge projections and the operators built on top of them.

The L2 decomposition w = Qw + Pw splits a vector field on the disk into
a full gradient and a divergence-free part tangent to the boundary:
Qw = grad g where g solves the Neumann problem

    lap g = div w,   d_r g = <w, nu>  on the unit circle,

and P = I - Q.  On the split sit the operators L = id + D^2 f and the
perturbative inverse of L1 = P L on the image of P, plus the pulled-back
Laplacian lap_xi used by the pressure solves on a deformed domain.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NoConvergenceError
from .diskfield import (
    BoundaryFunction,
    ScalarField,
    VectorField,
    divergence,
    dx_values,
    dy_values,
    gradient,
    hessian,
    l2_norm_disk,
    map_jacobian,
    solve_dirichlet,
    solve_neumann,
)

__all__ = [
    "HodgeSplit",
    "hodge_Q",
    "hodge_P",
    "hodge_split",
    "apply_L",
    "solve_L1_inverse",
    "solve_pulled_back_laplacian",
    "TOL_L1",
    "TOL_ELL",
]

TOL_L1 = 1e-9
TOL_ELL = 1e-9


@dataclass(frozen=True)
class HodgeSplit:
    """w = gradient_part + solenoidal_part, orthogonal in L2."""

    gradient_part: VectorField
    solenoidal_part: VectorField


def _normal_trace(w):
    """<w, nu> on the r = 1 ring as a BoundaryFunction."""
    g = w.grid
    ring = (w.x.values[-1, :] * np.cos(g.theta)
            + w.y.values[-1, :] * np.sin(g.theta))
    return BoundaryFunction.from_samples(g, ring)


def hodge_Q(w):
    """Gradient part of w: grad g with lap g = div w, d_r g = <w, nu>."""
    g = solve_neumann(divergence(w), _normal_trace(w))
    return gradient(g)


def hodge_P(w):
    """Divergence-free tangent part of w (complement of hodge_Q)."""
    return w - hodge_Q(w)


def hodge_split(w):
    q = hodge_Q(w)
    return HodgeSplit(gradient_part=q, solenoidal_part=w - q)


def _hessian_apply(grid, hess, w):
    """Pointwise matrix action (D^2 f) w from precomputed Hessian arrays."""
    fxx, fxy, fyx, fyy = hess
    return VectorField.from_arrays(
        grid,
        fxx * w.x.values + fxy * w.y.values,
        fyx * w.x.values + fyy * w.y.values,
    )


def apply_L(f, w):
    """L w = w + (D^2 f) w."""
    return w + _hessian_apply(f.grid, hessian(f), w)


def solve_L1_inverse(f, target, tol=TOL_L1, max_iter=5000):
    """Invert L1 = P L on the image of P by fixed-point iteration.

    Iterates w <- P(target - (D^2 f) w); the map contracts when the
    Hessian of f is small, which is the only regime in which L1 is known
    to be invertible.  The target is pre-projected because time stepping
    feeds in fields with harmless ~1e-12 gradient components.

    Raises NoConvergenceError when the residual fails to halve over a
    50-iteration window, the practical signal that f is too large.
    """
    grid = target.grid
    hess = hessian(f)
    tgt = hodge_P(target)
    w = tgt
    history = []
    for _ in range(max_iter):
        phw = hodge_P(_hessian_apply(grid, hess, w))
        res = l2_norm_disk(w + phw - tgt)
        if res < tol:
            return w
        history.append(res)
        if len(history) > 50 and not res < 0.5 * history[-51]:
            raise NoConvergenceError(
                f"L1 inverse stalled at residual {res:.3e} (Hessian too large)")
        w = tgt - phw
    raise NoConvergenceError(
        f"L1 inverse: no convergence in {max_iter} iterations")


def solve_pulled_back_laplacian(xi, rhs, bdata=None, tol=TOL_ELL, max_iter=400,
                                det_tol=1e-6):
    """Solve lap_xi g = rhs, g = bdata on the boundary circle.

    lap_xi g = (lap(g o xi^-1)) o xi for a volume-preserving map xi.  In
    divergence form this is d_i(a_ij d_j g) with a = (Dxi)^-1 (Dxi)^-T,
    discretised directly on the reference disk and inverted by the
    preconditioned iteration g <- g + lap0^-1 (rhs - lap_xi g).

    The residual is measured in L2 over the interior rings only; on the
    r = 1 ring the Dirichlet condition, not the PDE, is enforced.  The
    tolerance is relative to the data scale, so large sources or large
    boundary values do not demand residuals below the roundoff floor.
    """
    grid = rhs.grid
    if xi.grid is not grid:
        raise ConfigError("map and source live on different grids")
    j11, j12, j21, j22 = map_jacobian(xi)
    det = j11 * j22 - j12 * j21
    if np.abs(det - 1.0).max() > det_tol:
        raise ConfigError(
            "pulled-back Laplacian needs a volume-preserving map "
            f"(max |det - 1| = {np.abs(det - 1.0).max():.3e})")
    b11 = j22 / det
    b12 = -j12 / det
    b21 = -j21 / det
    b22 = j11 / det
    a11 = b11 * b11 + b12 * b12
    a12 = b11 * b21 + b12 * b22
    a22 = b21 * b21 + b22 * b22

    def op(vals):
        gx = dx_values(grid, vals)
        gy = dy_values(grid, vals)
        return (dx_values(grid, a11 * gx + a12 * gy)
                + dy_values(grid, a12 * gx + a22 * gy))

    def drop_nyquist(vals):
        # the top angular mode on an even grid has no sine partner, so
        # the composed-derivative operator and the assembled
        # preconditioner disagree on it; the iteration corrects the
        # resolved modes and leaves that aliasing slack alone
        C = np.fft.rfft(vals, axis=1)
        C[:, -1] = 0.0
        return np.fft.irfft(C, n=grid.n_theta, axis=1)

    scale = max(1.0, l2_norm_disk(rhs))
    if bdata is not None:
        scale = max(scale, bdata.max_abs())
    g = solve_dirichlet(rhs, bdata)
    history = []
    for _ in range(max_iter):
        resid = rhs.values - op(g.values)
        resid[-1, :] = 0.0
        if grid.n_theta % 2 == 0:
            resid = drop_nyquist(resid)
        res = float(np.sqrt(max(grid.l2_inner(resid, resid), 0.0))) / scale
        if res < tol:
            return g
        history.append(res)
        if len(history) > 20 and not res < 0.9 * history[-21]:
            raise NoConvergenceError(
                f"pulled-back Laplacian stalled at residual {res:.3e}")
        g = g + solve_dirichlet(ScalarField(grid, resid))
    raise NoConvergenceError(
        f"pulled-back Laplacian: no convergence in {max_iter} iterations")
