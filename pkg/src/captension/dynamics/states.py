"""State containers for the two flows and their shared initial data."""

from dataclasses import dataclass

import numpy as np

from ..diskfield import (
    DiskMap,
    ScalarField,
    VectorField,
    divergence,
    gradient,
    identity_map,
    jacobian_det,
    laplacian,
)
from ..projections import hodge_P


@dataclass(frozen=True)
class FreeBoundaryState:
    """Decomposed free-surface flow: eta = (id + grad f) o beta.

    f and fdot are the boundary-oscillation potential and its rate, v is
    the interior velocity (divergence free, boundary tangent) driving
    beta, and k the surface tension coefficient.
    """

    f: ScalarField
    fdot: ScalarField
    v: VectorField
    beta: DiskMap
    time: float
    k: float

    @classmethod
    def from_velocity(cls, grid, u0, k, time=0.0):
        """Undeformed start: f = fdot = 0, beta = id, v = P u0."""
        return cls(
            f=ScalarField.zeros(grid),
            fdot=ScalarField.zeros(grid),
            v=hodge_P(u0),
            beta=identity_map(grid),
            time=float(time),
            k=float(k),
        )

    def constraint_defects(self):
        """Measured invariant violations: div v, v tangency, volume residual,
        beta Jacobian."""
        grid = self.f.grid
        div_v = float(np.abs(divergence(self.v).values).max())
        ring = (self.v.x.values[-1, :] * np.cos(grid.theta)
                + self.v.y.values[-1, :] * np.sin(grid.theta))
        from ..shape import _hessian_det  # local import, avoids a module cycle

        vol = float(np.abs((laplacian(self.f).values
                            + _hessian_det(self.f))[:-1, :]).max())
        return {
            "div_v": div_v,
            "v_normal": float(np.abs(ring).max()),
            "volume_residual": vol,
            "beta_jacobian": float(np.abs(jacobian_det(self.beta).values - 1.0).max()),
        }


@dataclass(frozen=True)
class PressureSolution:
    """Split pressure pulled back to the reference disk.

    q0 is the velocity part (zero boundary trace), AH_hat the harmonic
    curvature part minus its circle value, and grad_p_pullback the full
    pressure gradient transported to reference coordinates.
    """

    q0: ScalarField
    AH_hat: ScalarField
    grad_p_pullback: VectorField


@dataclass(frozen=True)
class FixedEulerState:
    """Fixed-disk incompressible flow by its Lagrangian map zeta."""

    zeta: DiskMap
    zetadot: VectorField
    time: float

    @classmethod
    def from_velocity(cls, grid, u0, time=0.0):
        return cls(zeta=identity_map(grid), zetadot=hodge_P(u0), time=float(time))


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    potential: float
    E: float
    E_tilde: float


def stream_function_field(grid, m, amplitude):
    """psi = amplitude (1 - r^2)^2 r^m cos(m theta); vanishes on the circle."""
    def psi(r, t):
        return amplitude * (1.0 - r ** 2) ** 2 * r ** m * np.cos(m * t)

    return ScalarField.from_polar(grid, psi)


def stream_initial_velocity(grid, m, amplitude):
    """Divergence-free, boundary-tangent velocity from the stream function."""
    psi = stream_function_field(grid, m, amplitude)
    g = gradient(psi)
    return VectorField(-g.y, g.x)


def stream_initial_vorticity(grid, m, amplitude):
    """Vorticity of the same initial velocity (for the transport oracle)."""
    return laplacian(stream_function_field(grid, m, amplitude))


def solid_rotation_velocity(grid, rate=1.0):
    return VectorField.from_arrays(grid, -rate * grid.yy, rate * grid.xx)
