"""Field containers: scalar and vector samples, boundary Fourier series, maps.

Values are stored as read-only numpy arrays in radius-major layout
values[i_r, j_theta].  Instances are immutable; every operation returns a
new object, which keeps everything safe under the harness's concurrent
sweeps.
"""

import numpy as np

from ..errors import ConfigError
from .grid import DiskGrid, make_grid

__all__ = ["ScalarField", "VectorField", "BoundaryFunction", "DiskMap",
           "identity_map", "rotation_map"]


def _freeze(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


class ScalarField:
    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_r, grid.n_theta):
            raise ConfigError(
                f"scalar sample shape {values.shape} does not match grid "
                f"({grid.n_r}, {grid.n_theta})")
        if not np.all(np.isfinite(values)):
            raise ConfigError("non-finite scalar samples")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", _freeze(values))

    def __setattr__(self, name, value):
        raise AttributeError("ScalarField is immutable")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((grid.n_r, grid.n_theta)))

    @classmethod
    def from_function(cls, grid, fn):
        """Sample fn(x, y) at the nodes."""
        vals = np.asarray(fn(grid.xx, grid.yy), dtype=float)
        return cls(grid, np.broadcast_to(vals, grid.xx.shape))

    @classmethod
    def from_polar(cls, grid, fn):
        """Sample fn(r, theta) at the nodes."""
        vals = np.asarray(fn(grid.rr, grid.tt), dtype=float)
        return cls(grid, np.broadcast_to(vals, grid.rr.shape))

    def smoothness_defect(self):
        """Heuristic parity/smoothness indicator.

        Mode m of a function smooth on the disk decays like r^min(m,2)
        toward the center; the returned number is the worst ratio of the
        innermost-node mode amplitude against that rate.  Order one for
        smooth fields, large (roughly 1/r_min^2) when the reflection rule
        (r,theta) -> (-r,theta+pi) is violated.
        """
        g = self.grid
        C = np.abs(g.to_modes(self.values))
        peak = C.max(axis=0)
        scale = peak + 1e-30 + 1e-13 * np.abs(self.values).max()
        rmin = g.r[0]
        rates = rmin ** np.minimum(g.modes, 2)
        return float(np.max(C[0, :] / (scale * rates)))

    def __add__(self, other):
        if isinstance(other, ScalarField):
            return ScalarField(self.grid, self.values + other.values)
        return ScalarField(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            return ScalarField(self.grid, self.values - other.values)
        return ScalarField(self.grid, self.values - other)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            return ScalarField(self.grid, self.values * other.values)
        return ScalarField(self.grid, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values)


class VectorField:
    """Cartesian components on a shared grid."""

    __slots__ = ("grid", "x", "y")

    def __init__(self, x, y):
        if not isinstance(x, ScalarField) or not isinstance(y, ScalarField):
            raise ConfigError("VectorField components must be ScalarFields")
        if x.grid is not y.grid:
            raise ConfigError("VectorField components must share one grid")
        object.__setattr__(self, "grid", x.grid)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @classmethod
    def zeros(cls, grid):
        return cls(ScalarField.zeros(grid), ScalarField.zeros(grid))

    @classmethod
    def from_arrays(cls, grid, vx, vy):
        return cls(ScalarField(grid, vx), ScalarField(grid, vy))

    @classmethod
    def from_function(cls, grid, fn):
        """Sample fn(x, y) -> (vx, vy) at the nodes."""
        vx, vy = fn(grid.xx, grid.yy)
        return cls.from_arrays(grid, np.broadcast_to(vx, grid.xx.shape),
                               np.broadcast_to(vy, grid.xx.shape))

    def __add__(self, other):
        return VectorField(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return VectorField(self.x - other.x, self.y - other.y)

    def __mul__(self, scalar):
        return VectorField(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return VectorField(-self.x, -self.y)


class BoundaryFunction:
    """Real function on the unit circle as a truncated Fourier series.

    coeffs[m] for m = 0 .. n_theta/2 are the two-sided series coefficients
    (c_{-m} = conj(c_m) implied): f(theta) = sum_{|m|<=n/2} c_m e^{i m theta}.
    The Nyquist entry stores the already-halved two-sided value, so the
    reconstruction rule has no special case.
    """

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (grid.n_modes,):
            raise ConfigError(f"expected {grid.n_modes} boundary coefficients")
        if abs(coeffs[0].imag) > 1e-12 * (1 + abs(coeffs[0])) or \
           abs(coeffs[-1].imag) > 1e-12 * (1 + abs(coeffs[-1])):
            raise ConfigError("m=0 and Nyquist coefficients of a real series must be real")
        coeffs = coeffs.copy()
        coeffs[0] = coeffs[0].real
        coeffs[-1] = coeffs[-1].real
        coeffs.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("BoundaryFunction is immutable")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.n_modes, dtype=complex))

    @classmethod
    def from_samples(cls, grid, ring):
        ring = np.asarray(ring, dtype=float)
        if ring.shape != (grid.n_theta,):
            raise ConfigError("boundary sample count must equal n_theta")
        C = np.fft.rfft(ring) / grid.n_theta
        C[-1] *= 0.5
        return cls(grid, C)

    @classmethod
    def from_function(cls, grid, fn):
        return cls.from_samples(grid, fn(grid.theta))

    @classmethod
    def single_mode(cls, grid, m, amplitude=1.0, phase="cos"):
        """amplitude*cos(m theta) or amplitude*sin(m theta)."""
        c = np.zeros(grid.n_modes, dtype=complex)
        if m == 0:
            c[0] = amplitude
        elif phase == "cos":
            c[m] = 0.5 * amplitude
        else:
            c[m] = -0.5j * amplitude
        return cls(grid, c)

    def samples(self):
        C = self.coeffs.copy()
        C[-1] *= 2.0
        return np.fft.irfft(C * self.grid.n_theta, n=self.grid.n_theta)

    def rfft_coeffs(self):
        """Coefficients in numpy rfft convention (for the modal solvers)."""
        C = self.coeffs * self.grid.n_theta
        C = C.copy()
        C[-1] *= 2.0
        return C

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        phases = np.exp(1j * np.outer(theta, self.grid.modes))
        two_sided = np.full(self.grid.n_modes, 2.0)
        two_sided[0] = 1.0
        return (phases @ (two_sided * self.coeffs)).real

    def derivative(self):
        """d/dtheta; the Nyquist mode's derivative vanishes at the samples."""
        C = self.coeffs * (1j * self.grid.modes)
        C[-1] = 0.0
        return BoundaryFunction(self.grid, C)

    def mean(self):
        return float(self.coeffs[0].real)

    def max_abs(self):
        return float(np.abs(self.samples()).max())

    def __add__(self, other):
        return BoundaryFunction(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return BoundaryFunction(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return BoundaryFunction(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__


class DiskMap:
    """Map of the disk written as identity plus a displacement field.

    kind is "diffeo" for volume-preserving maps of the disk to itself
    (beta, zeta) and "embedding" for maps whose image may leave the disk
    (eta, id + grad f).  The _cache slot memoizes expensive derived data
    (pointwise inverse values) on the immutable instance.
    """

    __slots__ = ("grid", "displacement", "kind", "_cache")

    def __init__(self, displacement, kind="diffeo"):
        if kind not in ("diffeo", "embedding"):
            raise ConfigError(f"unknown DiskMap kind {kind!r}")
        object.__setattr__(self, "grid", displacement.grid)
        object.__setattr__(self, "displacement", displacement)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("DiskMap is immutable")

    @classmethod
    def from_arrays(cls, grid, dx, dy, kind="diffeo"):
        return cls(VectorField.from_arrays(grid, dx, dy), kind=kind)

    def map_x(self):
        return self.grid.xx + self.displacement.x.values

    def map_y(self):
        return self.grid.yy + self.displacement.y.values

    def image_points(self):
        """(n_r*n_theta, 2) array of node images."""
        return np.column_stack([self.map_x().ravel(), self.map_y().ravel()])

    def boundary_defect(self):
        """max | |map(1,theta)| - 1 | over the boundary ring."""
        bx = self.map_x()[-1, :]
        by = self.map_y()[-1, :]
        return float(np.abs(np.hypot(bx, by) - 1.0).max())

    def renormalize_boundary(self):
        """Project the boundary ring radially back onto the unit circle."""
        mx, my = self.map_x(), self.map_y()
        scale = 1.0 / np.hypot(mx[-1, :], my[-1, :])
        mx = mx.copy()
        my = my.copy()
        mx[-1, :] *= scale
        my[-1, :] *= scale
        return DiskMap.from_arrays(self.grid, mx - self.grid.xx, my - self.grid.yy,
                                   kind=self.kind)


def identity_map(grid, kind="diffeo"):
    return DiskMap(VectorField.zeros(grid), kind=kind)


def rotation_map(grid, alpha, kind="diffeo"):
    ca, sa = np.cos(alpha), np.sin(alpha)
    dx = ca * grid.xx - sa * grid.yy - grid.xx
    dy = sa * grid.xx + ca * grid.yy - grid.yy
    return DiskMap.from_arrays(grid, dx, dy, kind=kind)
