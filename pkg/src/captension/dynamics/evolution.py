"""Time evolution of the decomposed free-surface flow.

The second-order system for (f, v) is advanced as a first-order system
in (f, fdot, v, beta) by explicit RK4 under the capillary CFL bound,
with per-step re-projection onto the constraint set: f back onto the
volume constraint, v back onto divergence-free tangent fields, and the
boundary ring of beta back onto the circle.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..diskfield import (
    DiskMap,
    ScalarField,
    VectorField,
    compose,
    divergence,
    dx_values,
    dy_values,
    gradient,
    hessian,
    l2_norm_disk,
    restrict_boundary,
    solve_neumann,
)
from ..projections import (
    _hessian_apply,
    _normal_trace,
    apply_L,
    hodge_P,
    hodge_Q,
    solve_L1_inverse,
)
from ..shape import boundary_length, compose_Phi, solve_volume_constraint
from .pressure import pressure_solve, pullback_velocity
from .states import EnergyReport, FreeBoundaryState

__all__ = [
    "FreeBoundaryRhs",
    "rhs_free_boundary",
    "step_free_boundary",
    "dt_max",
    "energy_report",
    "reconstruct_eta",
    "STAGE_CLAMP",
]

# stage maps of an explicit step overshoot the circle by O(dt^2)
STAGE_CLAMP = 1e-5


@dataclass(frozen=True)
class FreeBoundaryRhs:
    """Time derivatives of (f, fdot, v, beta) plus the measured defect of
    the gradient structure of the fddot equation."""

    fdot: ScalarField
    fddot: ScalarField
    vdot: VectorField
    beta_velocity: VectorField
    gradient_defect: float


def _advect(grid, w):
    """(w . grad) w for a vector field, spectrally."""
    wx, wy = w.x.values, w.y.values
    return VectorField.from_arrays(
        grid,
        wx * dx_values(grid, wx) + wy * dy_values(grid, wx),
        wx * dx_values(grid, wy) + wy * dy_values(grid, wy),
    )


def _second_directional(grid, field, v):
    """v^j v^l d_jl of each component of a vector field (third derivatives
    of the underlying potential when field is a gradient)."""
    vx, vy = v.x.values, v.y.values
    out = []
    for comp in (field.x, field.y):
        cxx, cxy, cyx, cyy = hessian(comp)
        out.append(vx * vx * cxx + vx * vy * (cxy + cyx) + vy * vy * cyy)
    return VectorField.from_arrays(grid, out[0], out[1])


def rhs_free_boundary(state):
    """Evaluate the decomposed evolution equations at one state.

    The fddot equation transports the Lagrangian acceleration balance
    into reference coordinates and extracts its gradient part with
    A* = Q - L2 L1^-1 P applied to the source bracket

        2 D_v grad fdot + D^2_vv grad f + L Q(v . grad v) + grad p pulled back.

    The L Q(v.grad v) term is the gradient part of the transported
    convection; dropping it would push rigid rotation off its steady
    state, which the tests pin down.  The scalar fddot is recovered from
    its gradient by a mean-zero Neumann solve, and the projection
    residual of the bracket is reported as gradient_defect rather than
    assumed zero.  The v equation keeps only the P-visible terms; the
    unsplit integrator serves as the arbitration oracle for that choice.
    """
    grid = state.f.grid
    pres = pressure_solve(state)

    hess_fdot = hessian(state.fdot)
    dv_grad_fdot = _hessian_apply(grid, hess_fdot, state.v)
    grad_f = gradient(state.f)
    dvv_grad_f = _second_directional(grid, grad_f, state.v)
    conv = _advect(grid, state.v)
    q_conv = hodge_Q(conv)

    bracket = (2.0 * dv_grad_fdot + dvv_grad_f
               + apply_L(state.f, q_conv) + pres.grad_p_pullback)
    p_bracket = hodge_P(bracket)
    q_bracket = bracket - p_bracket
    m = solve_L1_inverse(state.f, p_bracket)
    l2m = hodge_Q(apply_L(state.f, m))
    a_field = q_bracket - l2m

    neg_a = -a_field
    fddot = solve_neumann(divergence(neg_a), _normal_trace(neg_a))
    defect = l2_norm_disk(hodge_P(neg_a))

    vdot = -hodge_P(conv) - solve_L1_inverse(
        state.f, 2.0 * dv_grad_fdot + dvv_grad_f)

    beta_velocity = compose(state.v, state.beta, clamp_tol=STAGE_CLAMP)
    return FreeBoundaryRhs(fdot=state.fdot, fddot=fddot, vdot=vdot,
                           beta_velocity=beta_velocity,
                           gradient_defect=defect)


def dt_max(k, n_theta, c_cfl=0.5):
    """Capillary stability bound: the fastest resolvable surface wave has
    frequency ~ sqrt(k (n_theta/2)^3)."""
    return c_cfl / np.sqrt(k * (n_theta / 2.0) ** 3)


def _nudge(state, rhs, h):
    """Euler displacement used to build the RK stage states."""
    return FreeBoundaryState(
        f=state.f + h * rhs.fdot,
        fdot=state.fdot + h * rhs.fddot,
        v=state.v + h * rhs.vdot,
        beta=DiskMap(state.beta.displacement + h * rhs.beta_velocity,
                     kind="diffeo"),
        time=state.time + h,
        k=state.k,
    )


def step_free_boundary(state, dt, c_cfl=0.5):
    """One RK4 step followed by constraint re-projection."""
    bound = dt_max(state.k, state.f.grid.n_theta, c_cfl)
    if dt > bound * (1.0 + 1e-12):
        raise ConfigError(
            f"dt = {dt:.3e} exceeds the capillary stability bound {bound:.3e}")

    k1 = rhs_free_boundary(state)
    k2 = rhs_free_boundary(_nudge(state, k1, 0.5 * dt))
    k3 = rhs_free_boundary(_nudge(state, k2, 0.5 * dt))
    k4 = rhs_free_boundary(_nudge(state, k3, dt))

    s = dt / 6.0
    f_new = state.f + s * (k1.fdot + 2.0 * k2.fdot + 2.0 * k3.fdot + k4.fdot)
    fdot_new = state.fdot + s * (k1.fddot + 2.0 * k2.fddot
                                 + 2.0 * k3.fddot + k4.fddot)
    v_new = state.v + s * (k1.vdot + 2.0 * k2.vdot + 2.0 * k3.vdot + k4.vdot)
    disp_new = state.beta.displacement + s * (
        k1.beta_velocity + 2.0 * k2.beta_velocity
        + 2.0 * k3.beta_velocity + k4.beta_velocity)

    pot = solve_volume_constraint(restrict_boundary(f_new))
    return FreeBoundaryState(
        f=pot.f,
        fdot=fdot_new,
        v=hodge_P(v_new),
        beta=DiskMap(disp_new, kind="diffeo").renormalize_boundary(),
        time=state.time + dt,
        k=state.k,
    )


def energy_report(state):
    """Kinetic plus surface energy; E is the conserved total.

    The kinetic term integrates |eta_dot|^2 = |w o beta|^2 with
    w = grad fdot + L v; beta preserves the measure, so the composition
    drops out of the integral and w is integrated directly.
    """
    w = pullback_velocity(state)
    kinetic = 0.5 * l2_norm_disk(w) ** 2
    length = boundary_length(state.f)
    potential = state.k * (length - 2.0 * np.pi)
    e_tilde = (0.5 * l2_norm_disk(gradient(state.fdot)) ** 2
               + state.k * length)
    return EnergyReport(kinetic=kinetic, potential=potential,
                        E=kinetic + potential, E_tilde=e_tilde)


def reconstruct_eta(state):
    """(eta, eta_dot) at reference labels, for norm comparisons."""
    eta = compose_Phi(state.beta, state.f)
    etadot = compose(pullback_velocity(state), state.beta)
    return eta, etadot
