"""Assembly of the extension operators.

``extend`` realizes the weighted sum F(x) = sum_i w_i(x) F_i(x) with
F_i(x) = f(z_i + H_i(x - z_i)); ``extend_single`` is the bare
composition for a single segment, and ``extend_seeley`` extends a map
given on the half-space {w(t) < 0} across the boundary by passing only
the W-coordinates through a semi-infinite blid.

Weights are scalars: the minimum over grid points of the pointwise bump
values for bands (exactly 1 on the segment, exactly 0 once any grid
point leaves the delta-enlargement), and the scalar radial bump for
balls.  The target map is never evaluated outside the closed segment; a
violation of that guard signals a blid bug and raises
:class:`ContainmentError`.
"""

from __future__ import annotations

import io

import numpy as np

from .blids import (
    Clamp,
    Literal,
    ball_blid,
    band_blid,
    half_blid,
    sup_blid,
)
from .geometry import (
    Ball,
    Band,
    HalfSpaceSplit,
    SegmentFamily,
    ValidationReport,
    contains,
    validate_family,
)
from .spaces import GridFunction, HVector, ShapeError, TargetValue, data, norm_of
from .targets import TargetMap

__all__ = [
    "ExtensionOperator",
    "FamilyValidationError",
    "ContainmentError",
    "MIN_POINTWISE",
    "SCALAR_BUMP",
    "evaluate_batch",
    "batch_to_csv",
]

MIN_POINTWISE = "min_pointwise"
SCALAR_BUMP = "scalar_bump"


class FamilyValidationError(ValueError):
    """The segment family fails the non-intercept validation."""

    def __init__(self, report: ValidationReport):
        self.report = report
        v = report.violations[0]
        super().__init__(
            f"segment family fails validation: pair ({v.pair_i}, {v.pair_j}), "
            f"reason {v.reason}"
        )


class ContainmentError(RuntimeError):
    """A blid image left the closed segment (internal invariant breach)."""


def _make_blid(segment, mode: str, safety: float, theta, epsilon):
    if isinstance(segment, Band):
        raw = band_blid(segment)
    elif isinstance(segment, Ball):
        raw = ball_blid(segment) if isinstance(segment.center, HVector) else sup_blid(segment)
    elif isinstance(segment, HalfSpaceSplit):
        raw = half_blid(segment)
    else:
        raise TypeError(f"unknown segment type {type(segment).__name__}")
    if mode == "literal":
        return raw.literal(safety=safety, epsilon=epsilon)
    if mode == "clamp":
        if theta is None:
            raise ValueError("clamp mode requires theta")
        return raw.clamped(theta)
    raise ValueError(f"unknown mode {mode!r}")


class ExtensionOperator:
    """Segments + anchors + blids + weights + target, evaluating F.

    ``family`` is a validated :class:`SegmentFamily` or a
    :class:`HalfSpaceSplit`; ``mode`` selects the blid mode for every
    segment (``"literal"`` with a safety factor or a manual epsilon,
    ``"clamp"`` with a theta collar).
    """

    def __init__(self, family, target: TargetMap, mode: str = "literal", *,
                 safety: float = 0.5, theta: float | None = None,
                 epsilon: float | None = None):
        self.family = family
        self.target = target
        self.mode = mode
        if isinstance(family, HalfSpaceSplit):
            self.segments = (family,)
        elif isinstance(family, SegmentFamily):
            report = validate_family(family)
            if not report.ok:
                raise FamilyValidationError(report)
            self.segments = family.members
        else:
            raise TypeError("family must be a SegmentFamily or HalfSpaceSplit")
        self.blids = tuple(
            _make_blid(seg, mode, safety, theta, epsilon) for seg in self.segments
        )

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def is_halfspace(self) -> bool:
        return isinstance(self.family, HalfSpaceSplit)

    @property
    def weight_rule(self) -> str:
        if self.segments and isinstance(self.segments[0], Band):
            return MIN_POINTWISE
        return SCALAR_BUMP

    # -- weights ---------------------------------------------------------

    def _anchor(self, i: int):
        seg = self.segments[i]
        return seg.z if isinstance(seg, Band) else seg.center

    def weight(self, i: int, x) -> float:
        """Scalar weight of segment i at x, in [0, 1]."""
        if not 0 <= i < self.n_segments:
            raise IndexError(f"segment index {i} out of range")
        if self.is_halfspace:
            raise ValueError("half-space extension has no weights")
        H = self.blids[i]
        r = data(x) - data(self._anchor(i))
        if isinstance(self.segments[i], Band):
            return float(np.min(H._factor_values(r)))
        return H._radial_factor(H._radial_argument(r))

    def weights(self, x) -> np.ndarray:
        return np.array([self.weight(i, x) for i in range(self.n_segments)])

    # -- compositions ------------------------------------------------------

    def _guarded_argument(self, i: int, x):
        """z_i + H_i(r); raises ContainmentError if it leaves the segment."""
        seg = self.segments[i]
        H = self.blids[i]
        anchor = self._anchor(i)
        r = x - anchor
        arg = anchor + H.apply(r)
        if isinstance(H.mode, Literal):
            ok = contains(seg, arg)
        else:
            ok = self._in_closure(seg, arg)
        if not ok:
            raise ContainmentError(
                f"blid image left segment {i} (mode {self.mode}); "
                "check epsilon against epsilon_for"
            )
        return arg

    @staticmethod
    def _in_closure(seg, arg) -> bool:
        if isinstance(seg, Band):
            ok = True
            if seg.phi is not None:
                ok = ok and bool(np.all(seg.phi.values <= arg.values))
            if seg.psi is not None:
                ok = ok and bool(np.all(arg.values <= seg.psi.values))
            return ok
        if isinstance(seg, Ball):
            return norm_of(arg - seg.center) <= seg.radius
        return True

    def build_Fi(self, i: int, x) -> TargetValue:
        """F_i(x) = f(z_i + H_i(x - z_i)), guaranteed evaluated inside the
        closed segment."""
        return self.target.eval(self._guarded_argument(i, x))

    # -- extension operators -----------------------------------------------

    def extend(self, x) -> TargetValue:
        """Weighted assembly; the zero element of Y where every weight
        vanishes."""
        if self.is_halfspace:
            return self.extend_seeley(x)
        out = self.target.zero(x)
        for i in range(self.n_segments):
            w = self.weight(i, x)
            if w != 0.0:
                out = out + w * self.build_Fi(i, x)
        return out

    def extend_single(self, x) -> TargetValue:
        """Bare composition F(x) = f(z + H(r)) for a single segment."""
        if self.is_halfspace:
            return self.extend_seeley(x)
        if self.n_segments != 1:
            raise ValueError("extend_single requires a single-segment operator")
        return self.build_Fi(0, x)

    def extend_seeley(self, x) -> TargetValue:
        """F(u, w) = f(u, z + H(w - z)): W-coordinates pass through the
        semi-infinite blid, U-coordinates pass through unchanged."""
        split = self.family
        if not isinstance(split, HalfSpaceSplit):
            raise ValueError("extend_seeley requires a HalfSpaceSplit operator")
        if not isinstance(x, GridFunction) or not x.grid.matches(split.grid):
            raise ShapeError("argument must live on the split's grid")
        H = self.blids[0]
        w_part = GridFunction(split.subgrid, x.values[split.mask])
        r = w_part - split.anchor
        mapped = split.anchor + H.apply(r)
        strict = isinstance(H.mode, Literal)
        inside = np.all(mapped.values < 0) if strict else np.all(mapped.values <= 0)
        if not inside:
            raise ContainmentError(
                "half-space blid image crossed the boundary w = 0"
            )
        values = x.values.copy()
        values[split.mask] = mapped.values
        return self.target.eval(GridFunction(split.grid, values))

    def evaluate(self, x) -> TargetValue:
        """The operator's natural action: Seeley for half-space operators,
        the weighted assembly otherwise."""
        return self.extend_seeley(x) if self.is_halfspace else self.extend(x)


def evaluate_batch(op: ExtensionOperator, xs):
    """Evaluate F (and weights, where defined) on a sample list."""
    rows = []
    for x in xs:
        w = np.array([]) if op.is_halfspace else op.weights(x)
        rows.append((w, op.evaluate(x)))
    return rows


def batch_to_csv(op: ExtensionOperator, rows) -> str:
    """CSV: sample_id, weight_1..weight_n, output components."""
    buf = io.StringIO()
    nw = 0 if op.is_halfspace else op.n_segments
    ncomp = rows[0][1].components().size if rows else 1
    header = ["sample_id"]
    header += [f"weight_{i + 1}" for i in range(nw)]
    header += [f"out_{j + 1}" for j in range(ncomp)]
    buf.write(",".join(header) + "\n")
    for k, (w, val) in enumerate(rows):
        cells = [str(k)]
        cells += [f"{wi:.17g}" for wi in w]
        cells += [f"{c:.17g}" for c in val.components()]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
