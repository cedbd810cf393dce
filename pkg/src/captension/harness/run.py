"""Single runs, k-sweeps, and the split-vs-unsplit arbitration record."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import NonpositiveValueError, SolverError
from ..diskfield import DiskMap, VectorField, gradient, make_grid, sobolev_norm_disk
from ..dynamics import (
    FixedEulerState,
    FreeBoundaryState,
    dt_max,
    energy_report,
    reconstruct_eta,
    step_fixed_euler,
    step_free_boundary,
    step_unsplit,
    stream_initial_velocity,
)
from .rates import fit_rate

__all__ = ["RunRecord", "SweepResult", "run_single", "run_sweep",
           "oracle_compare", "SWEEP_QUANTITIES"]

SWEEP_QUANTITIES = ("sup_nabla_f_L2", "sup_nabla_f_H1",
                    "sup_eta_gap_H1", "sup_etadot_gap_H1")


@dataclass(frozen=True)
class RunRecord:
    """Norms and energy of one k along the shared output time grid."""

    k: float
    times: tuple
    sup_nabla_f_L2: float
    sup_nabla_f_H1: float
    sup_eta_gap_H1: float
    sup_etadot_gap_H1: float
    energy_drift: float
    converged: bool
    fail_time: float = None
    series: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    fitted_exponents: dict


def _substeps(segment, bound):
    n = max(1, math.ceil(segment / bound))
    return n, segment / n


def run_single(config, k):
    """Integrate the free-surface and fixed-disk flows from one u0.

    Both trajectories share the output time grid; the free solver
    substeps each segment under its capillary bound, the fixed solver
    under the configured advective step.  A solver failure closes the
    record early with converged = False and the failing time kept.
    """
    grid = make_grid(config.n_theta, config.n_r)
    u0 = stream_initial_velocity(grid, config.stream_mode, config.amplitude)
    free = FreeBoundaryState.from_velocity(grid, u0, k)
    fixed = FixedEulerState.from_velocity(grid, u0)

    segment = config.T / (config.n_outputs - 1)
    n_free, dt_free = _substeps(segment, dt_max(k, config.n_theta, config.c_cfl))
    n_fix, dt_fix = _substeps(segment, config.dt_fixed)

    e0 = energy_report(free).E
    e_ref = max(abs(e0), 1e-30)

    times = [0.0]
    series = {q: [] for q in ("nabla_f_L2", "nabla_f_H1", "eta_gap_H1",
                              "etadot_gap_H1", "energy_drift")}

    def record(f_state, z_state):
        gf = gradient(f_state.f)
        eta, etadot = reconstruct_eta(f_state)
        series["nabla_f_L2"].append(sobolev_norm_disk(gf, 0))
        series["nabla_f_H1"].append(sobolev_norm_disk(gf, 1))
        series["eta_gap_H1"].append(sobolev_norm_disk(
            eta.displacement - z_state.zeta.displacement, 1))
        series["etadot_gap_H1"].append(sobolev_norm_disk(
            etadot - z_state.zetadot, 1))
        series["energy_drift"].append(
            abs(energy_report(f_state).E - e0) / e_ref)

    record(free, fixed)
    converged = True
    fail_time = None
    for _ in range(config.n_outputs - 1):
        try:
            for _ in range(n_free):
                free = step_free_boundary(free, dt_free, config.c_cfl)
            for _ in range(n_fix):
                fixed = step_fixed_euler(fixed, dt_fix)
        except SolverError:
            converged = False
            fail_time = free.time
            break
        times.append(free.time)
        record(free, fixed)

    return RunRecord(
        k=float(k),
        times=tuple(times),
        sup_nabla_f_L2=max(series["nabla_f_L2"]),
        sup_nabla_f_H1=max(series["nabla_f_H1"]),
        sup_eta_gap_H1=max(series["eta_gap_H1"]),
        sup_etadot_gap_H1=max(series["etadot_gap_H1"]),
        energy_drift=max(series["energy_drift"]),
        converged=converged,
        fail_time=fail_time,
        series={q: tuple(v) for q, v in series.items()},
    )


def _worker_count(n_tasks):
    env = os.environ.get("CAPTENSION_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


def run_sweep(config):
    """run_single per k, concurrently when allowed; fit decay exponents
    over the converged rows (three or more needed for a fit)."""
    ks = list(config.k_list)
    workers = _worker_count(len(ks))
    if workers == 1:
        rows = [run_single(config, k) for k in ks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda k: run_single(config, k), ks))
    rows.sort(key=lambda r: r.k)

    fitted = {}
    good = [r for r in rows if r.converged]
    if len(good) >= 3:
        for name in SWEEP_QUANTITIES:
            try:
                fitted[name] = fit_rate([(r.k, getattr(r, name)) for r in good])
            except NonpositiveValueError:
                pass  # identically-zero series (e.g. rigid rotation) has no rate
    return SweepResult(rows=tuple(rows), fitted_exponents=fitted)


def oracle_compare(config, k=None, t_final=0.05, n_outputs=6):
    """Integrate the split system against the unsplit Lagrangian law.

    Runs both from the same initial velocity at half the configured
    resolution and returns (time, eta gap H1, etadot gap H1) rows; the
    unsplit route uses no decomposition and no projection, so agreement
    arbitrates the term choices inside the split right-hand side.
    """
    if k is None:
        k = config.k_list[0]
    n_theta = max(8, (config.n_theta // 2) & ~1)
    n_r = max(8, config.n_r // 2)
    grid = make_grid(n_theta, n_r)
    u0 = stream_initial_velocity(grid, config.stream_mode, config.amplitude)
    free = FreeBoundaryState.from_velocity(grid, u0, k)
    eta_u = DiskMap(VectorField.zeros(grid), kind="embedding")
    etadot_u = free.v

    t_end = min(config.T, t_final)
    segment = t_end / (n_outputs - 1)
    n_sub, dt = _substeps(segment, dt_max(k, n_theta, config.c_cfl))

    rows = [(0.0, 0.0, 0.0)]
    for _ in range(n_outputs - 1):
        for _ in range(n_sub):
            free = step_free_boundary(free, dt, config.c_cfl)
            eta_u, etadot_u = step_unsplit(eta_u, etadot_u, dt, k)
        eta_s, etadot_s = reconstruct_eta(free)
        rows.append((
            free.time,
            sobolev_norm_disk(eta_s.displacement - eta_u.displacement, 1),
            sobolev_norm_disk(etadot_s - etadot_u, 1),
        ))
    return tuple(rows)
