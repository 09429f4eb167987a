"""Segment families and their non-intercept validation.

Segments are the open sets on which the extended map is originally
given: bands between two grid functions (either side may be unbounded),
norm balls in the Hilbert or C(M) model, and the half-space used by the
boundary-extension construction.

Validation enforces a total pointwise ordering of bands together with
pairwise disjointness of the delta-enlarged segments; violations are
data (reports), not exceptions.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .spaces import Grid, GridFunction, HVector, ShapeError, h_norm, sup_norm

__all__ = [
    "Band",
    "Ball",
    "HalfSpaceSplit",
    "SegmentFamily",
    "Violation",
    "ValidationReport",
    "validate_band_family",
    "validate_ball_family",
    "validate_family",
    "band_margin",
    "contains",
]


@dataclass(frozen=True, eq=False)
class Band:
    """Open band (phi, psi) around an anchor z in the C[0,1]/C(M) model.

    ``phi=None`` / ``psi=None`` mark a side as unbounded.  The anchor
    must lie strictly inside at every grid point.
    """

    phi: GridFunction | None
    psi: GridFunction | None
    z: GridFunction
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        for side in (self.phi, self.psi):
            if side is not None and not side.grid.matches(self.z.grid):
                raise ShapeError("band sides must share the anchor's grid")
        if self.phi is not None and not np.all(self.phi.values < self.z.values):
            raise ValueError("anchor must satisfy phi < z at every grid point")
        if self.psi is not None and not np.all(self.z.values < self.psi.values):
            raise ValueError("anchor must satisfy z < psi at every grid point")

    @property
    def grid(self) -> Grid:
        return self.z.grid


@dataclass(frozen=True, eq=False)
class Ball:
    """Open norm ball around a center: Euclidean for HVector centers,
    sup-norm for GridFunction centers (the C(M) model)."""

    center: HVector | GridFunction
    radius: float
    delta: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True, eq=False)
class HalfSpaceSplit:
    """Coordinate split X = U + W with the half-space {w(t) < 0} on W.

    The mask selects the W grid points; the anchor lives on the masked
    sub-grid and must be strictly negative.
    """

    grid: Grid
    mask: np.ndarray
    anchor: GridFunction
    delta: float

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool).copy()
        mask.flags.writeable = False
        object.__setattr__(self, "mask", mask)
        if mask.shape != self.grid.points.shape:
            raise ShapeError("mask length must equal grid size")
        if not mask.any():
            raise ValueError("mask must select at least one point")
        if not self.anchor.grid.matches(self.grid.subgrid(mask)):
            raise ShapeError("anchor must live on the masked sub-grid")
        if not np.all(self.anchor.values < 0):
            raise ValueError("anchor must be negative on all masked points")
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @classmethod
    def with_default_anchor(cls, grid: Grid, mask, delta: float = 0.5) -> "HalfSpaceSplit":
        """Anchor z = -1 on the W coordinates (unit margin to the boundary)."""
        sub = grid.subgrid(mask)
        return cls(grid, mask, GridFunction.constant(sub, -1.0), delta)

    @property
    def subgrid(self) -> Grid:
        return self.grid.subgrid(self.mask)

    def is_whole_space(self) -> bool:
        return bool(self.mask.all())


BAND = "band"
BALL = "ball"


@dataclass(frozen=True, eq=False)
class SegmentFamily:
    """Homogeneous collection of segments forming the domain of the map."""

    kind: str
    members: tuple

    def __post_init__(self):
        if self.kind not in (BAND, BALL):
            raise ValueError(f"unknown family kind {self.kind!r}")
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) == 0:
            raise ValueError("family must have at least one member")
        want = Band if self.kind == BAND else Ball
        for m in self.members:
            if not isinstance(m, want):
                raise TypeError(f"{self.kind} family member of type {type(m).__name__}")
        if self.kind == BAND:
            g = self.members[0].grid
            for m in self.members[1:]:
                if not m.grid.matches(g):
                    raise ShapeError("band family members must share a grid")
            if len(self.members) > 1:
                for m in self.members:
                    if m.phi is None and m.psi is None:
                        raise ValueError(
                            "a both-sides-unbounded band is only allowed alone"
                        )

    @classmethod
    def of_bands(cls, *bands: Band) -> "SegmentFamily":
        return cls(BAND, bands)

    @classmethod
    def of_balls(cls, *balls: Ball) -> "SegmentFamily":
        return cls(BALL, balls)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Violation:
    """One failed pair condition.

    For bands, ``witness_t`` is the grid point where the comparison
    fails and ``psi_i``/``phi_j`` carry the compared values there (the
    delta-enlarged edges for enlargement violations).  For balls,
    ``witness_t`` is NaN and the two value columns carry the center
    distance and the required separation.
    """

    pair_i: int
    pair_j: int
    witness_t: float
    psi_i: float
    phi_j: float
    reason: str = "ordering"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("pair_i,pair_j,witness_t,psi_i,phi_j\n")
        for v in self.violations:
            buf.write(
                f"{v.pair_i},{v.pair_j},{v.witness_t:.17g},{v.psi_i:.17g},{v.phi_j:.17g}\n"
            )
        return buf.getvalue()


def _side_values(side: GridFunction | None, n: int, sign: float) -> np.ndarray:
    if side is None:
        return np.full(n, sign * math.inf)
    return side.values


def _band_pair_violation(i, j, bi: Band, bj: Band) -> Violation | None:
    """Check one ordered pair for the non-intercept and enlargement rules."""
    t = bi.grid.points
    n = t.size
    psi_i = _side_values(bi.psi, n, +1)
    phi_i = _side_values(bi.phi, n, -1)
    psi_j = _side_values(bj.psi, n, +1)
    phi_j = _side_values(bj.phi, n, -1)

    below_ij = psi_i < phi_j  # i strictly under j, pointwise
    below_ji = psi_j < phi_i
    if below_ij.all():
        gap = (phi_j - bj.delta) - (psi_i + bi.delta)
        if np.all(gap > 0):
            return None
        k = int(np.argmin(gap))
        return Violation(i, j, float(t[k]), float(psi_i[k] + bi.delta),
                         float(phi_j[k] - bj.delta), reason="enlargement")
    if below_ji.all():
        gap = (phi_i - bi.delta) - (psi_j + bj.delta)
        if np.all(gap > 0):
            return None
        k = int(np.argmin(gap))
        return Violation(j, i, float(t[k]), float(psi_j[k] + bj.delta),
                         float(phi_i[k] - bi.delta), reason="enlargement")

    # neither ordering holds everywhere: report the most overlapping point
    both_fail = ~below_ij & ~below_ji
    if both_fail.any():
        overlap = np.minimum(psi_i - phi_j, psi_j - phi_i)
        overlap[~both_fail] = -math.inf
        k = int(np.argmax(overlap))
    else:
        # pure crossing on the grid: first point where the initial order flips
        first = below_ij if below_ij[0] else below_ji
        k = int(np.argmin(first))
    return Violation(i, j, float(t[k]), float(psi_i[k]), float(phi_j[k]))


def validate_band_family(fam: SegmentFamily) -> ValidationReport:
    """Check every pair for a total pointwise ordering and for pairwise
    disjointness of the delta-enlarged bands."""
    if fam.kind != BAND:
        raise ValueError("validate_band_family requires a band family")
    violations = []
    members = fam.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            v = _band_pair_violation(i, j, members[i], members[j])
            if v is not None:
                violations.append(v)
    return ValidationReport(not violations, tuple(violations))


def _center_distance(a: Ball, b: Ball) -> float:
    if isinstance(a.center, HVector) and isinstance(b.center, HVector):
        return h_norm(a.center - b.center)
    if isinstance(a.center, GridFunction) and isinstance(b.center, GridFunction):
        return sup_norm(a.center - b.center)
    raise ShapeError("ball centers must be of the same kind")


def validate_ball_family(fam: SegmentFamily) -> ValidationReport:
    """Sufficient separation test: ||z_i - z_j|| > a_i + a_j + max(d_i, d_j)."""
    if fam.kind != BALL:
        raise ValueError("validate_ball_family requires a ball family")
    violations = []
    members = fam.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            bi, bj = members[i], members[j]
            dist = _center_distance(bi, bj)
            need = bi.radius + bj.radius + max(bi.delta, bj.delta)
            if not dist > need:
                violations.append(
                    Violation(i, j, math.nan, dist, need, reason="separation")
                )
    return ValidationReport(not violations, tuple(violations))


def validate_family(fam: SegmentFamily) -> ValidationReport:
    return validate_band_family(fam) if fam.kind == BAND else validate_ball_family(fam)


def band_margin(b: Band) -> float:
    """Smallest distance from the anchor to a finite side over the grid;
    +inf when both sides are unbounded."""
    m = math.inf
    if b.phi is not None:
        m = min(m, float(np.min(b.z.values - b.phi.values)))
    if b.psi is not None:
        m = min(m, float(np.min(b.psi.values - b.z.values)))
    return m


def contains(segment, x) -> bool:
    """Strict membership: open band / open ball / open half-space."""
    if isinstance(segment, Band):
        if not isinstance(x, GridFunction) or not x.grid.matches(segment.grid):
            raise ShapeError("band membership needs a grid function on the same grid")
        ok = True
        if segment.phi is not None:
            ok = ok and bool(np.all(segment.phi.values < x.values))
        if segment.psi is not None:
            ok = ok and bool(np.all(x.values < segment.psi.values))
        return ok
    if isinstance(segment, Ball):
        if isinstance(segment.center, HVector):
            if not isinstance(x, HVector):
                raise ShapeError("Hilbert ball membership needs an HVector")
            return h_norm(x - segment.center) < segment.radius
        if not isinstance(x, GridFunction):
            raise ShapeError("C(M) ball membership needs a grid function")
        return sup_norm(x - segment.center) < segment.radius
    if isinstance(segment, HalfSpaceSplit):
        if not isinstance(x, GridFunction) or not x.grid.matches(segment.grid):
            raise ShapeError("half-space membership needs a grid function on the grid")
        return bool(np.all(x.values[segment.mask] < 0))
    raise TypeError(f"unknown segment type {type(segment).__name__}")
