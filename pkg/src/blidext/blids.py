"""Bounded locally-identical maps on the space models.

A blid map is the identity on a declared region and globally bounded;
it is the substitute for a smooth bump function on spaces that have
none.  Four kinds are provided:

* ``band``  - pointwise bump times the argument, thresholds per grid point
* ``ball``  - scalar bump of the squared Euclidean norm times the argument
* ``sup``   - scalar bump of the sup norm times the argument (C(M) model)
* ``half``  - semi-infinite band on the masked coordinates of a half-space

Each map carries one of two modes.  ``Literal`` is the eps-scaling
H^eps(r) = eps H(r/eps), which shrinks the image into the segment at
the cost of shrinking the identity region to the eps-scaled plateau.
``Clamp`` instead saturates smoothly: identity on the segment shrunk by
theta, image inside the segment's closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bumps import _bump_values, transition
from .geometry import Ball, Band, HalfSpaceSplit, band_margin
from .spaces import GridFunction, HVector, ShapeError, data, like

__all__ = [
    "Literal",
    "Clamp",
    "BlidBound",
    "BlidMap",
    "band_blid",
    "ball_blid",
    "sup_blid",
    "half_blid",
    "band_blid_apply",
    "ball_blid_apply",
    "sup_blid_apply",
    "blid_bound",
    "epsilon_for",
    "scaled_apply",
    "clamp_apply",
]

# fraction of the radial saturation level kept in reserve so that the
# recomputed norm of a clamped point stays below the radius despite
# rounding
_RADIAL_HEADROOM = 1e-9


@dataclass(frozen=True)
class Literal:
    """Eps-scaling mode: apply r -> eps * H(r / eps)."""

    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class Clamp:
    """Smooth-saturation mode with identity on a theta-shrunk segment."""

    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("theta must be positive")


@dataclass(frozen=True)
class BlidBound:
    """Supremum of ||H(r)|| over the model space.

    ``value`` is +inf when an identity side is unbounded (semi-infinite
    bands keep the identity on an unbounded set); ``finite_side`` then
    records the bound contributed by the finite sides alone, which is
    what constrains containment.
    """

    value: float
    finite_side: float
    unbounded_side: str | None = None


class BlidMap:
    """A configured bounded locally-identical map.

    Instances are immutable; build them with :func:`band_blid`,
    :func:`ball_blid`, :func:`sup_blid`, or :func:`half_blid` and attach
    a mode with :meth:`literal` or :meth:`clamped`.
    """

    def __init__(self, kind, segment, mode=None, *, _lower=None, _upper=None,
                 _delta=None, _radius=None, _radial_sq=False):
        self.kind = kind
        self.segment = segment
        self.mode = mode
        self._lower = _lower      # band/half: per-point array or None
        self._upper = _upper
        self._delta = _delta      # band/half transition width
        self._radius = _radius    # ball/sup: plateau radius in the norm
        self._radial_sq = _radial_sq  # ball: bump argument is the squared norm
        if isinstance(mode, Clamp) and not mode.theta < self.margin:
            raise ValueError(
                f"clamp theta {mode.theta} must be < segment margin {self.margin}"
            )

    # --- configuration -------------------------------------------------------

    def _with_mode(self, mode):
        return BlidMap(self.kind, self.segment, mode, _lower=self._lower,
                       _upper=self._upper, _delta=self._delta,
                       _radius=self._radius, _radial_sq=self._radial_sq)

    def literal(self, safety: float = 0.5, epsilon: float | None = None) -> "BlidMap":
        """Attach eps-scaling; eps defaults to :func:`epsilon_for`."""
        eps = float(epsilon) if epsilon is not None else epsilon_for(self, safety)
        return self._with_mode(Literal(eps))

    def clamped(self, theta: float) -> "BlidMap":
        return self._with_mode(Clamp(float(theta)))

    @property
    def margin(self) -> float:
        """Distance budget from the anchor to the segment boundary."""
        if self.kind in ("ball", "sup"):
            return self.segment.radius
        m = math.inf
        if self._lower is not None:
            m = min(m, float(np.min(-self._lower)))
        if self._upper is not None:
            m = min(m, float(np.min(self._upper)))
        return m

    @property
    def delta(self) -> float:
        if self.kind in ("ball", "sup"):
            return self.segment.delta
        return self._delta

    # --- evaluation ----------------------------------------------------------

    def _check_input(self, r):
        if self.kind in ("band",) and not isinstance(r, GridFunction):
            raise ShapeError("band blid expects a GridFunction")
        if self.kind == "half" and not isinstance(r, GridFunction):
            raise ShapeError("half-space blid expects a GridFunction on the sub-grid")
        if self.kind == "ball" and not isinstance(r, HVector):
            raise ShapeError("ball blid expects an HVector")
        if self.kind == "sup" and not isinstance(r, GridFunction):
            raise ShapeError("sup blid expects a GridFunction")
        n = data(r).size
        if self.kind in ("band", "half"):
            ref = self._upper if self._upper is not None else self._lower
            if ref is not None and ref.size != n:
                raise ShapeError("argument length does not match the segment grid")

    def _factor_values(self, values):
        """Pointwise bump factors for band/half kinds."""
        return _bump_values(values, self._lower, self._upper, self._delta)

    def _radial_argument(self, arr):
        if self.kind == "ball":
            n2 = float(np.dot(arr, arr))
            return n2 if self._radial_sq else math.sqrt(n2)
        return float(np.max(np.abs(arr)))

    def _radial_plateau(self):
        a = self._radius
        if self._radial_sq:
            return a * a, (a + self.segment.delta) ** 2 - a * a
        return a, self.segment.delta

    def _radial_factor(self, t):
        up, d = self._radial_plateau()
        return float(_bump_values(np.array([t]), None, np.array([up]), d)[0])

    def raw_apply(self, r):
        """Unscaled H: bump factor times the argument."""
        self._check_input(r)
        arr = data(r)
        if self.kind in ("band", "half"):
            return like(r, arr * self._factor_values(arr))
        return like(r, self._radial_factor(self._radial_argument(arr)) * arr)

    def scaled_apply(self, r):
        """Literal mode: eps H(r/eps), computed as h(r/eps) * r so the
        identity on the scaled plateau is exact."""
        if not isinstance(self.mode, Literal):
            raise ValueError("scaled_apply requires Literal mode")
        self._check_input(r)
        eps = self.mode.epsilon
        arr = data(r)
        if self.kind in ("band", "half"):
            return like(r, arr * self._factor_values(arr / eps))
        return like(r, self._radial_factor(self._radial_argument(arr / eps)) * arr)

    def clamp_apply(self, r):
        """Clamp mode: smooth saturation into the segment's closure."""
        if not isinstance(self.mode, Clamp):
            raise ValueError("clamp_apply requires Clamp mode")
        self._check_input(r)
        theta = self.mode.theta
        arr = data(r)
        if self.kind in ("band", "half"):
            return like(r, _clamp_values(arr, self._lower, self._upper, theta))
        n = self._radial_argument(arr) if self.kind == "sup" else math.sqrt(
            float(np.dot(arr, arr)))
        a = self._radius
        if n <= a - theta:
            return like(r, arr * 1.0)
        return like(r, (_radial_clamp(n, a, theta) / n) * arr)

    def apply(self, r):
        """Mode dispatch: raw H, eps-scaled H, or clamp."""
        if isinstance(self.mode, Literal):
            return self.scaled_apply(r)
        if isinstance(self.mode, Clamp):
            return self.clamp_apply(r)
        return self.raw_apply(r)

    # --- bounds and identity region -----------------------------------------

    def bound(self) -> BlidBound:
        return blid_bound(self)

    def _identity_box(self):
        """Per-point closed interval [lo, hi] of the mode's identity region
        (band/half kinds); None marks an unbounded side."""
        lo, hi = self._lower, self._upper
        if isinstance(self.mode, Literal):
            e = self.mode.epsilon
            return (None if lo is None else e * lo, None if hi is None else e * hi)
        if isinstance(self.mode, Clamp):
            th = self.mode.theta
            return (None if lo is None else lo + th, None if hi is None else hi - th)
        return lo, hi

    def _identity_radius(self) -> float:
        a = self._radius
        if isinstance(self.mode, Literal):
            return self.mode.epsilon * a
        if isinstance(self.mode, Clamp):
            return a - self.mode.theta
        return a

    def in_identity_region(self, r) -> bool:
        """Membership in the region where the configured map is the identity."""
        self._check_input(r)
        arr = data(r)
        if self.kind in ("band", "half"):
            lo, hi = self._identity_box()
            ok = True
            if lo is not None:
                ok = ok and bool(np.all(arr >= lo))
            if hi is not None:
                ok = ok and bool(np.all(arr <= hi))
            return ok
        if self.kind == "ball":
            return math.sqrt(float(np.dot(arr, arr))) <= self._identity_radius()
        return float(np.max(np.abs(arr))) <= self._identity_radius()

    def identity_samples(self, rng, n: int):
        """n random elements of the identity region (unbounded sides are
        sampled down to a finite cap)."""
        out = []
        if self.kind in ("band", "half"):
            lo, hi = self._identity_box()
            size = (self._upper if self._upper is not None else self._lower).size
            cap = 4.0 * (1.0 + self.delta + _finite_edge_scale(self._lower, self._upper))
            lo_eff = lo if lo is not None else (hi if hi is not None else 0.0) - cap
            hi_eff = hi if hi is not None else (lo if lo is not None else 0.0) + cap
            for _ in range(n):
                vals = rng.uniform(np.broadcast_to(lo_eff, (size,)),
                                   np.broadcast_to(hi_eff, (size,)))
                out.append(self._wrap(vals))
            return out
        rad = self._identity_radius()
        dim = self._sample_dim()
        for _ in range(n):
            v = rng.uniform(-1.0, 1.0, dim)
            scale = rng.uniform(0.0, 1.0) * rad
            norm = (math.sqrt(float(np.dot(v, v))) if self.kind == "ball"
                    else float(np.max(np.abs(v))))
            vals = v * (scale / norm) if norm > 0 else v * 0.0
            out.append(self._wrap(vals))
        return out

    def far_field_sample(self, lift: float = 10.0):
        """An input r with H(r) identically zero (every point beyond the
        scaled support).  Unavailable for maps that are nowhere zero."""
        if self.kind in ("band", "half"):
            if self._upper is not None:
                edge = float(np.max(self._upper)) + self.delta
                sign = 1.0
            elif self._lower is not None:
                edge = -(float(np.min(self._lower)) - self.delta)
                sign = -1.0
            else:
                raise ValueError("constant-identity blid has no far field")
            scale = self.mode.epsilon if isinstance(self.mode, Literal) else 1.0
            if isinstance(self.mode, Clamp):
                raise ValueError("clamp mode saturates instead of vanishing")
            size = (self._upper if self._upper is not None else self._lower).size
            return self._wrap(np.full(size, sign * (scale * edge + lift)))
        if isinstance(self.mode, Clamp):
            raise ValueError("clamp mode saturates instead of vanishing")
        scale = self.mode.epsilon if isinstance(self.mode, Literal) else 1.0
        edge = scale * (self._radius + self.segment.delta) + lift
        vals = np.zeros(self._sample_dim())
        vals[0] = edge
        return self._wrap(vals)

    def _sample_dim(self) -> int:
        if self.kind == "ball":
            return self.segment.center.dim
        if self.kind == "sup":
            return self.segment.center.grid.size
        return (self._upper if self._upper is not None else self._lower).size

    def _wrap(self, values):
        if self.kind == "ball":
            return HVector(values)
        if self.kind == "sup":
            return GridFunction(self.segment.center.grid, values)
        if self.kind == "half":
            return GridFunction(self.segment.subgrid, values)
        return GridFunction(self.segment.grid, values)


def _finite_edge_scale(lower, upper) -> float:
    s = 0.0
    if lower is not None:
        s = max(s, float(np.max(np.abs(lower))))
    if upper is not None:
        s = max(s, float(np.max(np.abs(upper))))
    return s


def _clamp_values(s, lower, upper, theta):
    """Pointwise C-infinity clamp: identity on [lo+theta, hi-theta],
    saturation at the exact edge values beyond them."""
    out = s.copy()
    if upper is not None:
        hi = np.broadcast_to(np.asarray(upper, dtype=float), s.shape)
        sat = s >= hi
        start = hi - theta
        ramp = (s > start) & ~sat
        out[sat] = hi[sat]
        if ramp.any():
            u = (s[ramp] - start[ramp]) / theta
            out[ramp] = s[ramp] + transition(u) * (hi[ramp] - s[ramp])
    if lower is not None:
        lo = np.broadcast_to(np.asarray(lower, dtype=float), s.shape)
        sat = s <= lo
        start = lo + theta
        ramp = (s < start) & ~sat
        out[sat] = lo[sat]
        if ramp.any():
            u = (start[ramp] - s[ramp]) / theta
            out[ramp] = s[ramp] + transition(u) * (lo[ramp] - s[ramp])
    return out


def _radial_clamp(n: float, a: float, theta: float) -> float:
    """Smooth saturation of a norm: identity below a-theta, limit value
    a*(1-headroom) so the recomputed norm stays inside the closed ball."""
    target = a * (1.0 - _RADIAL_HEADROOM)
    start = a - theta
    if n <= start:
        return n
    if n >= target:
        return target
    u = (n - start) / (target - start)
    return n + transition(u) * (target - n)


# --- constructors ------------------------------------------------------------

def band_blid(band: Band, mode=None) -> BlidMap:
    """Blid for a band: per-point thresholds phi - z and psi - z."""
    lo = None if band.phi is None else band.phi.values - band.z.values
    hi = None if band.psi is None else band.psi.values - band.z.values
    return BlidMap("band", band, mode, _lower=lo, _upper=hi, _delta=band.delta)


def ball_blid(ball: Ball, mode=None) -> BlidMap:
    """Blid for a Hilbert ball: scalar bump of the squared norm with
    plateau [0, a^2] and support [0, (a+delta)^2] in the squared variable,
    so that the identity region is exactly the closed ball of radius a."""
    if not isinstance(ball.center, HVector):
        raise ShapeError("ball_blid requires an HVector center (Hilbert model)")
    return BlidMap("ball", ball, mode, _radius=ball.radius, _radial_sq=True)


def sup_blid(ball: Ball, mode=None) -> BlidMap:
    """Blid for a C(M) ball: scalar bump of sup|r| with plateau [0, a]."""
    if not isinstance(ball.center, GridFunction):
        raise ShapeError("sup_blid requires a GridFunction center (C(M) model)")
    return BlidMap("sup", ball, mode, _radius=ball.radius, _radial_sq=False)


def half_blid(split: HalfSpaceSplit, mode=None) -> BlidMap:
    """Semi-infinite band blid on the masked coordinates: identity region
    unbounded below, upper threshold 0 - z = -anchor."""
    hi = -split.anchor.values
    return BlidMap("half", split, mode, _lower=None, _upper=hi, _delta=split.delta)


# --- operations --------------------------------------------------------------

def band_blid_apply(H: BlidMap, r: GridFunction) -> GridFunction:
    """Unscaled band blid: output(t_k) = bump(r(t_k)) * r(t_k)."""
    if H.kind not in ("band", "half"):
        raise ValueError("band_blid_apply requires a band or half kind")
    return H.raw_apply(r)


def ball_blid_apply(H: BlidMap, r: HVector) -> HVector:
    """Unscaled ball blid: h(||r||^2) * r."""
    if H.kind != "ball":
        raise ValueError("ball_blid_apply requires a ball kind")
    return H.raw_apply(r)


def sup_blid_apply(H: BlidMap, r: GridFunction) -> GridFunction:
    """Unscaled sup blid: h(sup|r|) * r."""
    if H.kind != "sup":
        raise ValueError("sup_blid_apply requires a sup kind")
    return H.raw_apply(r)


def blid_bound(H: BlidMap) -> BlidBound:
    """Supremum of the configured map's output norm.

    Band kinds: pointwise products are bounded by the support edge, so
    the raw bound is sup_k max(delta - lo_k, hi_k + delta) over finite
    sides.  Ball/sup kinds: a + delta.  Literal mode scales the bound by
    eps; Clamp mode is bounded by the segment edges themselves.  An
    unbounded identity side makes the total bound +inf in every mode.
    """
    if H.kind in ("ball", "sup"):
        a, d = H._radius, H.segment.delta
        if isinstance(H.mode, Literal):
            v = H.mode.epsilon * (a + d)
        elif isinstance(H.mode, Clamp):
            v = a
        else:
            v = a + d
        return BlidBound(v, v, None)

    lo, hi = H._lower, H._upper
    sides = []
    if isinstance(H.mode, Clamp):
        if lo is not None:
            sides.append(float(np.max(np.abs(lo))))
        if hi is not None:
            sides.append(float(np.max(np.abs(hi))))
    else:
        scale = H.mode.epsilon if isinstance(H.mode, Literal) else 1.0
        if lo is not None:
            sides.append(scale * float(np.max(H.delta - lo)))
        if hi is not None:
            sides.append(scale * float(np.max(hi + H.delta)))
    finite = max(sides) if sides else 0.0
    if lo is None and hi is None:
        return BlidBound(math.inf, 0.0, "both")
    if lo is None:
        return BlidBound(math.inf, finite, "lower")
    if hi is None:
        return BlidBound(math.inf, finite, "upper")
    return BlidBound(finite, finite, None)


def epsilon_for(H: BlidMap, safety: float = 0.5) -> float:
    """Largest shipped eps-scaling: safety * margin / bound.

    Guarantees z + eps H(r/eps) strictly inside the segment's finite
    sides for every input.  Semi-infinite sides constrain containment
    only through the finite side.  The constant-identity blid (no finite
    side) is unconstrained; eps = 1 by convention.
    """
    if not 0 < safety < 1:
        raise ValueError("safety must be in (0, 1)")
    raw = H._with_mode(None)
    b = blid_bound(raw)
    if b.unbounded_side == "both":
        return 1.0
    margin = H.margin
    if not margin > 0:
        raise ValueError("segment margin must be positive")
    return safety * margin / b.finite_side


def scaled_apply(H: BlidMap, r):
    return H.scaled_apply(r)


def clamp_apply(H: BlidMap, r):
    return H.clamp_apply(r)
