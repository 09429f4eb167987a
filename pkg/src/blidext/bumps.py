"""C-infinity scalar transition and bump kernels.

The transition is the classical non-analytic step built from
``g(s) = exp(-1/s)``.  It is exactly 0 for s <= 0 and exactly 1 for
s >= 1 in floating point (``exp(-1/s)`` underflows to literal 0.0 near
the edges), which makes the bump plateau and support exact rather than
merely within tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["BumpProfile", "transition", "transition_d1", "bump_eval", "bump_d1"]

_INF = math.inf


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _transition_core(s):
    """Branchless transition on an array.

    Clipping the exponent argument to a subnormal makes exp(-1/s)
    underflow to literal 0.0 on both saturated ends, so T is exactly 0
    for s <= 0 and exactly 1 for s >= 1 without any masking.
    """
    with np.errstate(divide="ignore", over="ignore"):
        g1 = np.exp(-1.0 / np.maximum(s, 1e-320))
        g2 = np.exp(-1.0 / np.maximum(1.0 - s, 1e-320))
    return g1 / (g1 + g2)


def transition(s):
    """Smooth step T(s) = g(s) / (g(s) + g(1-s)) with g(s) = exp(-1/s).

    T is identically 0 for s <= 0, identically 1 for s >= 1, strictly
    increasing on (0,1), and satisfies T(s) + T(1-s) = 1.  Accepts
    scalars or arrays.
    """
    arr, scalar = _as_array(s)
    out = _transition_core(np.atleast_1d(arr))
    return float(out[0]) if scalar else out


def transition_d1(s):
    """Analytic derivative of :func:`transition`.

    Uses T'(s) = T(s) (1-T(s)) (1/s^2 + 1/(1-s)^2); zero outside (0,1).
    """
    arr, scalar = _as_array(s)
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    mid = (arr > 0.0) & (arr < 1.0)
    if mid.any():
        sm = arr[mid]
        g1 = np.exp(-1.0 / sm)
        g2 = np.exp(-1.0 / (1.0 - sm))
        t = g1 / (g1 + g2)
        # clip the reciprocals where t underflowed to 0/1 anyway, so the
        # product cannot produce 0*inf
        a = np.maximum(sm, 1e-150)
        b = np.maximum(1.0 - sm, 1e-150)
        out[mid] = t * (1.0 - t) * (1.0 / (a * a) + 1.0 / (b * b))
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class BumpProfile:
    """Plateau [lower, upper] with transition width delta on each finite side.

    ``lower = -inf`` / ``upper = +inf`` drop the transition on that side.
    Both infinite gives the constant-1 profile.
    """

    lower: float
    upper: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if math.isfinite(self.lower) and math.isfinite(self.upper):
            if not self.lower < self.upper:
                raise ValueError("lower must be < upper")
        if self.lower == _INF or self.upper == -_INF:
            raise ValueError("lower may only be -inf, upper only +inf")


def _bump_values(a, lower, upper, delta):
    """Vectorized bump kernel; lower/upper are None (infinite) or arrays.

    Exact: returns literal 1.0 on [lower, upper] and literal 0.0 outside
    [lower - delta, upper + delta].  The one-sided factors saturate
    exactly, and the transition ramps are disjoint, so at every point at
    most one factor differs from 1.0 and the product stays exact.
    """
    out = None
    if upper is not None:
        out = _transition_core((upper + delta - a) / delta)
    if lower is not None:
        t = _transition_core((a - lower + delta) / delta)
        out = t if out is None else out * t
    return np.ones_like(a) if out is None else out


def _bump_d1_values(a, lower, upper, delta):
    """Vectorized derivative of the bump kernel (chain rule on the ramps)."""
    out = np.zeros_like(a)
    if upper is not None:
        up = np.broadcast_to(np.asarray(upper, dtype=float), a.shape)
        ramp = (a > up) & (a < up + delta)
        if ramp.any():
            out[ramp] = -transition_d1((up[ramp] + delta - a[ramp]) / delta) / delta
    if lower is not None:
        lo = np.broadcast_to(np.asarray(lower, dtype=float), a.shape)
        ramp = (a < lo) & (a > lo - delta)
        if ramp.any():
            out[ramp] = transition_d1((a[ramp] - lo[ramp] + delta) / delta) / delta
    return out


def _side(v):
    return None if math.isinf(v) else v


def bump_eval(p: BumpProfile, a):
    """Evaluate the bump: 1 on the plateau, 0 off the delta-enlargement,
    transition values in between.  Accepts scalars or arrays."""
    arr, scalar = _as_array(a)
    arr = np.atleast_1d(arr).astype(float)
    out = _bump_values(arr, _side(p.lower), _side(p.upper), p.delta)
    return float(out[0]) if scalar else out


def bump_d1(p: BumpProfile, a):
    """Analytic first derivative of :func:`bump_eval` in the argument."""
    arr, scalar = _as_array(a)
    arr = np.atleast_1d(arr).astype(float)
    out = _bump_d1_values(arr, _side(p.lower), _side(p.upper), p.delta)
    return float(out[0]) if scalar else out
