"""Rate fitting and frequency measurement on trajectory data."""

import numpy as np

from ..errors import InsufficientPointsError, NonpositiveValueError

__all__ = ["fit_rate", "measure_frequency"]


def fit_rate(points):
    """Least-squares decay exponent of value ~ k^(-slope).

    Returns (slope, quality): slope positive for decaying data, quality
    the coefficient of determination of the log-log fit.
    """
    pts = list(points)
    if len(pts) < 3:
        raise InsufficientPointsError(
            f"rate fit needs at least 3 points, got {len(pts)}")
    ks = np.array([p[0] for p in pts], dtype=float)
    vals = np.array([p[1] for p in pts], dtype=float)
    if np.any(ks <= 0) or np.any(vals <= 0):
        raise NonpositiveValueError("rate fit needs positive k and values")
    x = np.log(ks)
    y = np.log(vals)
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    ss_res = float(resid @ resid)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    if ss_tot > 0.0:
        quality = 1.0 - ss_res / ss_tot
    else:
        quality = 1.0 if ss_res < 1e-24 else 0.0
    return -float(coef[0]), quality


def measure_frequency(times, values):
    """Angular frequency of an oscillating signal from its zero crossings.

    Linear interpolation locates each crossing; the mean half-period
    gives omega = pi / mean spacing.  Needs at least three crossings.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise InsufficientPointsError("times and values must be equal 1-D arrays")
    crossings = []
    for i in range(len(v) - 1):
        a, b = v[i], v[i + 1]
        if a == 0.0:
            crossings.append(t[i])
        elif a * b < 0.0:
            crossings.append(t[i] - a * (t[i + 1] - t[i]) / (b - a))
    if v[-1] == 0.0:
        crossings.append(t[-1])
    if len(crossings) < 3:
        raise InsufficientPointsError(
            f"only {len(crossings)} zero crossings; signal too short")
    spacing = np.diff(np.array(crossings))
    return float(np.pi / spacing.mean())
