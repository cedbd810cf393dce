"""Pseudospectral grid on the closed unit disk.

Fourier collocation in the angle theta crossed with Chebyshev-Lobatto
collocation in radius.  The radial nodes are the positive half of a
symmetric Lobatto grid of odd polynomial order on [-1, 1], so there is no
node at r = 0 and no coordinate-singularity special case.  A smooth
function F on the disk satisfies the reflection rule

    F(-r, theta) = F(r, theta + pi),

equivalently its Fourier mode m in theta has radial parity (-1)^m.  That
rule folds the full-interval differentiation matrices onto the positive
nodes with one sign per mode parity, which is all the machinery the polar
Laplacian

    Delta = d_rr + (1/r) d_r + (1/r^2) d_thth      (per mode m: d_thth -> -m^2)

needs.  All per-mode solve operators are built eagerly here and cached, so
a constructed grid is immutable and safe to share between threads.
"""

import threading

import numpy as np

from ..errors import ConfigError

_GRID_CACHE = {}
_GRID_LOCK = threading.Lock()


def _cheb_lobatto_diff(x):
    """Collocation differentiation matrix on arbitrary distinct nodes x.

    Barycentric form with the negative-sum trick for the diagonal; for
    Chebyshev-Lobatto nodes this is the classical spectral matrix.
    """
    n = x.size
    # barycentric weights for Lobatto nodes: alternating signs, halved ends
    w = np.ones(n)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def _lagrange_weighted_integrals(x, w_bary):
    """integral_0^1 l_k(r) r dr for every cardinal polynomial l_k on nodes x.

    Computed by Gauss-Legendre quadrature of high enough order to be exact
    for the cardinals (degree len(x)-1 times the weight r).
    """
    n = x.size
    ng = n + 4
    gx, gw = np.polynomial.legendre.leggauss(ng)
    # map [-1,1] -> [0,1]
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    # cardinal values at the Gauss nodes, stable barycentric form
    diff = gx[:, None] - x[None, :]
    # Gauss nodes are interior irrationals; exact hits cannot occur on a
    # Lobatto grid, but guard the division anyway
    tiny = np.abs(diff) < 1e-300
    diff[tiny] = 1e-300
    c = w_bary[None, :] / diff
    L = c / c.sum(axis=1, keepdims=True)
    return L.T @ (gw * gx)


class DiskGrid:
    """Immutability-by-convention container of nodes and cached operators.

    Do not mutate attributes after construction; use make_grid() to get a
    shared cached instance.
    """

    def __init__(self, n_theta, n_r):
        if n_theta % 2 != 0 or n_theta < 8:
            raise ConfigError(f"n_theta must be even and >= 8, got {n_theta}")
        if n_r < 8:
            raise ConfigError(f"n_r must be >= 8, got {n_r}")
        self.n_theta = int(n_theta)
        self.n_r = int(n_r)
        self.n_modes = n_theta // 2 + 1

        # full doubled radial grid, odd order N so no node sits at r = 0
        N = 2 * n_r - 1
        j = np.arange(N + 1)
        x_full = np.cos(j * np.pi / N)  # decreasing, 1 ... -1
        x_full[0] = 1.0
        x_full[-1] = -1.0
        self.x_full = x_full
        wb = np.ones(N + 1)
        wb[1::2] = -1.0
        wb[0] *= 0.5
        wb[-1] *= 0.5
        self.bary_weights = wb

        # positive nodes in increasing order; pos_full[i] indexes x_full
        self.pos_full = np.arange(n_r - 1, -1, -1)
        self.neg_full = N - self.pos_full
        self.r = x_full[self.pos_full].copy()
        self.r[-1] = 1.0
        self.theta = 2.0 * np.pi * np.arange(n_theta) / n_theta

        # meshes (radius-major layout: values[i_r, j_theta])
        self.rr = self.r[:, None] * np.ones((1, n_theta))
        self.tt = np.ones((n_r, 1)) * self.theta[None, :]
        self.xx = self.rr * np.cos(self.tt)
        self.yy = self.rr * np.sin(self.tt)
        self.cos_t = np.cos(self.theta)[None, :]
        self.sin_t = np.sin(self.theta)[None, :]
        self.inv_r = (1.0 / self.r)[:, None]

        D_full = _cheb_lobatto_diff(x_full)
        D2_full = D_full @ D_full
        pp = np.ix_(self.pos_full, self.pos_full)
        pn = np.ix_(self.pos_full, self.neg_full)
        self.Dr = {+1: D_full[pp] + D_full[pn], -1: D_full[pp] - D_full[pn]}
        self.Drr = {+1: D2_full[pp] + D2_full[pn], -1: D2_full[pp] - D2_full[pn]}

        # radial quadrature weights for integral_0^1 g(r) r dr, g given on
        # the positive nodes with the doubled-grid reflection implied
        q = _lagrange_weighted_integrals(x_full, wb)
        self.weights_r = q[self.pos_full] + q[self.neg_full]
        if not np.all(self.weights_r > 0):
            raise ConfigError("nonpositive radial quadrature weight; grid too coarse")
        total = self.weights_r.sum()
        if abs(total - 0.5) > 1e-12:
            raise ConfigError(f"radial quadrature inconsistent: sum {total!r}")

        # angular wavenumbers for the real FFT layout
        self.modes = np.arange(self.n_modes)
        ik = 1j * self.modes.astype(float)
        ik[-1] = 0.0  # Nyquist derivative vanishes at the sample points
        self.ik = ik

        # per-mode polar Laplacian and cached solve operators
        r = self.r
        inv_r = 1.0 / r
        lap = np.empty((self.n_modes, n_r, n_r))
        dir_inv = np.empty_like(lap)
        neu_inv = np.empty_like(lap)
        dr_bdry = np.empty((self.n_modes, n_r))
        for m in range(self.n_modes):
            p = +1 if m % 2 == 0 else -1
            Lm = self.Drr[p] + inv_r[:, None] * self.Dr[p] - (m * m) * np.diag(inv_r ** 2)
            lap[m] = Lm
            A = Lm.copy()
            A[-1, :] = 0.0
            A[-1, -1] = 1.0
            dir_inv[m] = np.linalg.inv(A)
            dr_row = self.Dr[p][-1, :]
            dr_bdry[m] = dr_row
            if m == 0:
                continue
            B = Lm.copy()
            B[-1, :] = dr_row
            neu_inv[m] = np.linalg.inv(B)
        self.lap_stack = lap
        self.dirichlet_inv = dir_inv
        self.neumann_inv = neu_inv  # row m=0 is unused
        self.dr_boundary_rows = dr_bdry

        # mode zero Neumann: bordered system with a zero-mean constraint and
        # a Lagrange multiplier spreading the (already projected) residual
        B0 = np.zeros((n_r + 1, n_r + 1))
        B0[:n_r, :n_r] = lap[0]
        B0[n_r - 1, :n_r] = self.Dr[+1][-1, :]
        B0[n_r - 1, n_r] = 0.0
        B0[: n_r - 1, n_r] = 1.0
        B0[n_r, :n_r] = self.weights_r
        self.neumann0_inv = np.linalg.inv(B0)

        # harmonic radial profiles r^m per mode
        self.harmonic_profiles = r[None, :] ** self.modes[:, None]

        for name in ("x_full", "bary_weights", "pos_full", "neg_full", "r", "theta",
                     "rr", "tt", "xx", "yy", "weights_r", "modes", "ik",
                     "lap_stack", "dirichlet_inv", "neumann_inv",
                     "dr_boundary_rows", "neumann0_inv", "harmonic_profiles"):
            getattr(self, name).setflags(write=False)

    # ---- transforms -------------------------------------------------

    def to_modes(self, values):
        """Real samples (n_r, n_theta) -> complex rfft coefficients (n_r, n_modes)."""
        return np.fft.rfft(values, axis=1)

    def from_modes(self, coeffs):
        return np.fft.irfft(coeffs, n=self.n_theta, axis=1)

    def dtheta(self, values):
        """Angular derivative of a sample array."""
        return self.from_modes(self.to_modes(values) * self.ik[None, :])

    def dr(self, values):
        """Radial derivative with per-mode parity folding."""
        C = self.to_modes(values)
        out = np.empty_like(C)
        ev = slice(0, self.n_modes, 2)
        od = slice(1, self.n_modes, 2)
        out[:, ev] = self.Dr[+1] @ C[:, ev]
        out[:, od] = self.Dr[-1] @ C[:, od]
        return self.from_modes(out)

    def apply_modal(self, stack, values):
        """Apply a per-mode matrix stack (n_modes, n_r, n_r) to samples."""
        C = self.to_modes(values).T  # (n_modes, n_r)
        out = np.einsum("mij,mj->mi", stack, C)
        return self.from_modes(out.T)

    # ---- quadrature -------------------------------------------------

    def integrate(self, values):
        """integral over the disk of a sample array (area element r dr dtheta)."""
        return (2.0 * np.pi / self.n_theta) * float(self.weights_r @ values.sum(axis=1))

    def l2_inner(self, a, b):
        return self.integrate(a * b)

    def boundary_integrate(self, ring):
        """integral over the unit circle of samples on the r = 1 ring."""
        return (2.0 * np.pi / self.n_theta) * float(np.sum(ring))


def make_grid(n_theta=32, n_r=16):
    """Shared cached grid; construction happens at most once per shape."""
    key = (int(n_theta), int(n_r))
    with _GRID_LOCK:
        grid = _GRID_CACHE.get(key)
        if grid is None:
            grid = DiskGrid(*key)
            _GRID_CACHE[key] = grid
    return grid
