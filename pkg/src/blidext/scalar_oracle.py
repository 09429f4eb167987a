"""Straight-line scalar re-implementation of the pipeline on the N = 1 model.

On a single-point grid the C[0,1] model degenerates to the real line,
so every construction (bumps, blids, eps-scaling, clamps, weights,
assembly, half-space extension) can be written out in a few lines of
plain-float arithmetic.  This module shares no numerical helpers with
the main pipeline; it exists to cross-check it end to end.
"""

from __future__ import annotations

import math

__all__ = ["run_scenario"]

_RADIAL_HEADROOM = 1e-9  # matches the pipeline's clamp saturation reserve


def _transition(s: float) -> float:
    if s <= 0.0:
        return 0.0
    if s >= 1.0:
        return 1.0
    g1 = math.exp(-1.0 / s)
    g2 = math.exp(-1.0 / (1.0 - s))
    return g1 / (g1 + g2)


def _bump(a: float, lo, hi, delta: float) -> float:
    if hi is not None:
        if a >= hi + delta:
            return 0.0
        if a > hi:
            return _transition((hi + delta - a) / delta)
    if lo is not None:
        if a <= lo - delta:
            return 0.0
        if a < lo:
            return _transition((a - lo + delta) / delta)
    return 1.0


def _clamp_band(s: float, lo, hi, theta: float) -> float:
    if hi is not None:
        if s >= hi:
            return hi
        start = hi - theta
        if s > start:
            return s + _transition((s - start) / theta) * (hi - s)
    if lo is not None:
        if s <= lo:
            return lo
        start = lo + theta
        if s < start:
            return s + _transition((start - s) / theta) * (lo - s)
    return s


def _radial_clamp(n: float, a: float, theta: float) -> float:
    target = a * (1.0 - _RADIAL_HEADROOM)
    start = a - theta
    if n <= start:
        return n
    if n >= target:
        return target
    u = (n - start) / (target - start)
    return n + _transition(u) * (target - n)


def _const_of(spec):
    """Constant value of a ValueSpec, or None for an infinite side."""
    if spec is None or spec.form in ("inf", "ninf"):
        return None
    return spec.params[0]


class _Segment:
    """Scalar segment data with its own epsilon/clamp bookkeeping."""

    def __init__(self, spec, mode):
        self.kind = spec.kind
        self.delta = spec.delta
        if spec.kind == "band":
            phi = _const_of(spec.phi)
            psi = _const_of(spec.psi)
            z = _const_of(spec.z)
            if z is None:
                if phi is not None and psi is not None:
                    z = 0.5 * (phi + psi)
                elif psi is not None:
                    z = psi - 1.0
                else:
                    z = phi + 1.0
            self.z = z
            self.lo = None if phi is None else phi - z
            self.hi = None if psi is None else psi - z
        elif spec.kind == "ball":
            self.z = spec.center.params[0]
            self.radius = spec.radius
        else:  # half: semi-infinite band around the anchor, psi = 0
            z = _const_of(spec.anchor)
            self.z = -1.0 if z is None else z
            self.lo = None
            self.hi = -self.z

        self.mode = mode[0]
        if self.mode == "literal":
            self.epsilon = mode[2] if mode[2] is not None else (
                mode[1] * self._margin() / self._bound())
        else:
            self.theta = mode[1]

    def _margin(self) -> float:
        if self.kind == "ball":
            return self.radius
        m = math.inf
        if self.lo is not None:
            m = min(m, -self.lo)
        if self.hi is not None:
            m = min(m, self.hi)
        return m

    def _bound(self) -> float:
        if self.kind == "ball":
            return self.radius + self.delta
        b = 0.0
        if self.lo is not None:
            b = max(b, self.delta - self.lo)
        if self.hi is not None:
            b = max(b, self.hi + self.delta)
        return b

    # -- the blid and the weight, scalar versions ------------------------

    def blid(self, r: float, sup_ball: bool) -> float:
        if self.mode == "literal":
            s = r / self.epsilon
            if self.kind == "ball":
                if sup_ball:
                    factor = _bump(abs(s), None, self.radius, self.delta)
                else:
                    a = self.radius
                    factor = _bump(s * s, None, a * a,
                                   (a + self.delta) ** 2 - a * a)
            else:
                factor = _bump(s, self.lo, self.hi, self.delta)
            return factor * r
        if self.kind == "ball":
            n = abs(r)
            if n <= self.radius - self.theta:
                return r
            return (_radial_clamp(n, self.radius, self.theta) / n) * r
        return _clamp_band(r, self.lo, self.hi, self.theta)

    def weight(self, r: float, sup_ball: bool) -> float:
        if self.kind == "ball":
            if sup_ball:
                return _bump(abs(r), None, self.radius, self.delta)
            a = self.radius
            return _bump(r * r, None, a * a, (a + self.delta) ** 2 - a * a)
        return _bump(r, self.lo, self.hi, self.delta)


def _target_eval(kind, t0, v):
    if kind == "point_eval":
        return [v]
    if kind == "pointwise_sin":
        return [math.sin(v)]
    if kind == "quad_norm":
        return [v * v]
    raise ValueError(f"target {kind!r} is not 1-D expressible")


def run_scenario(sc, xs):
    """Evaluate the scenario's weights and extension on scalar samples.

    Returns one ``(weights, output_components)`` pair per sample, in
    the same layout the pipeline produces on the N = 1 model.
    """
    sup_ball = sc.space[0] == "cm"
    segs = [_Segment(spec, sc.mode) for spec in sc.segments]
    kind, t0, _ = sc.target
    out = []
    for x in xs:
        if segs[0].kind == "half":
            seg = segs[0]
            mapped = seg.z + seg.blid(x - seg.z, sup_ball)
            out.append(((), tuple(_target_eval(kind, t0, mapped))))
            continue
        weights = tuple(seg.weight(x - seg.z, sup_ball) for seg in segs)
        ncomp = len(_target_eval(kind, t0, 0.0))
        acc = [0.0] * ncomp
        for w, seg in zip(weights, segs):
            if w != 0.0:
                arg = seg.z + seg.blid(x - seg.z, sup_ball)
                fi = _target_eval(kind, t0, arg)
                for c in range(ncomp):
                    acc[c] = acc[c] + w * fi[c]
        out.append((weights, tuple(acc)))
    return out
