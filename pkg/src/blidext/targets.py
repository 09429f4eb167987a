"""Catalog of test maps f with closed-form first derivatives.

These serve two roles: concrete inputs for the extension operators and
independent oracles for the finite-difference derivative checks.  Every
map is globally smooth and bounded on bounded sets, so the extension
pipeline's guarantee that f is only ever evaluated inside the closed
segments can be asserted without special-casing the targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import (
    C01,
    GridFunction,
    HVector,
    ShapeError,
    TargetValue,
    integrate,
    sup_norm,
)

__all__ = [
    "TargetMap",
    "quad_integral",
    "point_eval",
    "pointwise_sin",
    "linear_functional",
    "quad_norm",
    "target_from_key",
]

QUAD_INTEGRAL = "quad_integral"
POINT_EVAL = "point_eval"
POINTWISE_SIN = "pointwise_sin"
LINEAR_FUNCTIONAL = "linear_functional"
QUAD_NORM = "quad_norm"

_KINDS = (QUAD_INTEGRAL, POINT_EVAL, POINTWISE_SIN, LINEAR_FUNCTIONAL, QUAD_NORM)


@dataclass(frozen=True, eq=False)
class TargetMap:
    """One catalog entry; ``t0`` is only used by point_eval and
    ``weight`` only by linear_functional."""

    kind: str
    t0: float = 0.5
    weight: GridFunction | HVector | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.kind == LINEAR_FUNCTIONAL and self.weight is None:
            raise ValueError("linear_functional requires a weight")

    # -- evaluation ------------------------------------------------------

    def eval(self, x) -> TargetValue:
        if self.kind == QUAD_INTEGRAL:
            xf = self._as_c01(x)
            return TargetValue.scalar(integrate(xf.with_values(xf.values**2)))
        if self.kind == POINT_EVAL:
            xf = self._as_gridfunction(x)
            return TargetValue.scalar(float(xf.values[self._nearest_index(xf)]))
        if self.kind == POINTWISE_SIN:
            xf = self._as_gridfunction(x)
            return TargetValue.func(xf.with_values(np.sin(xf.values)))
        if self.kind == LINEAR_FUNCTIONAL:
            return TargetValue.scalar(self._pair(x))
        xv = self._as_hvector(x)
        return TargetValue.scalar(float(np.dot(xv.coords, xv.coords)))

    def deriv1(self, x, d) -> TargetValue:
        """Closed-form directional derivative Df(x)[d]."""
        if self.kind == QUAD_INTEGRAL:
            xf, df = self._as_c01(x), self._as_c01(d)
            return TargetValue.scalar(
                2.0 * integrate(xf.with_values(xf.values * df.values))
            )
        if self.kind == POINT_EVAL:
            df = self._as_gridfunction(d)
            return TargetValue.scalar(float(df.values[self._nearest_index(df)]))
        if self.kind == POINTWISE_SIN:
            xf, df = self._as_gridfunction(x), self._as_gridfunction(d)
            return TargetValue.func(xf.with_values(np.cos(xf.values) * df.values))
        if self.kind == LINEAR_FUNCTIONAL:
            return TargetValue.scalar(self._pair(d))
        xv, dv = self._as_hvector(x), self._as_hvector(d)
        return TargetValue.scalar(2.0 * float(np.dot(xv.coords, dv.coords)))

    def zero(self, x) -> TargetValue:
        """The zero element of Y for the output variant this map produces."""
        if self.kind == POINTWISE_SIN:
            xf = self._as_gridfunction(x)
            return TargetValue.func(xf.with_values(np.zeros(xf.grid.size)))
        return TargetValue.scalar(0.0)

    def bound_on_sup_ball(self, x_example, radius: float) -> float:
        """Analytic bound of ||f|| over {sup_norm <= radius} (coordinate
        max-norm ball for the Hilbert model)."""
        r = float(radius)
        if self.kind == QUAD_INTEGRAL:
            return r * r
        if self.kind == POINT_EVAL:
            return r
        if self.kind == POINTWISE_SIN:
            return 1.0
        if self.kind == LINEAR_FUNCTIONAL:
            w = self.weight
            if isinstance(w, GridFunction):
                return r * integrate(w.with_values(np.abs(w.values)))
            return r * float(np.sum(np.abs(w.coords)))
        n = self._as_hvector(x_example).dim
        return n * r * r

    # -- helpers ----------------------------------------------------------

    def _pair(self, x) -> float:
        w = self.weight
        if isinstance(w, GridFunction):
            xf = self._as_c01(x)
            if not xf.grid.matches(w.grid):
                raise ShapeError("weight and argument grids differ")
            return integrate(xf.with_values(w.values * xf.values))
        xv = self._as_hvector(x)
        if xv.dim != w.dim:
            raise ShapeError("weight and argument dimensions differ")
        return float(np.dot(w.coords, xv.coords))

    def _nearest_index(self, xf: GridFunction) -> int:
        return int(np.argmin(np.abs(xf.grid.points - self.t0)))

    @staticmethod
    def _as_gridfunction(x) -> GridFunction:
        if not isinstance(x, GridFunction):
            raise ShapeError("this target expects a GridFunction")
        return x

    @staticmethod
    def _as_c01(x) -> GridFunction:
        if not isinstance(x, GridFunction) or x.grid.kind != C01:
            raise ShapeError("this target expects a C[0,1] grid function")
        return x

    @staticmethod
    def _as_hvector(x) -> HVector:
        if not isinstance(x, HVector):
            raise ShapeError("this target expects an HVector")
        return x


def quad_integral() -> TargetMap:
    """f(x) = integral of x(t)^2 over [0,1] (trapezoid)."""
    return TargetMap(QUAD_INTEGRAL)


def point_eval(t0: float = 0.5) -> TargetMap:
    """f(x) = x(t0), t0 snapped to the nearest grid point."""
    return TargetMap(POINT_EVAL, t0=float(t0))


def pointwise_sin() -> TargetMap:
    """f(x)(t) = sin(x(t)), a Func-valued target."""
    return TargetMap(POINTWISE_SIN)


def linear_functional(weight) -> TargetMap:
    """f(x) = integral of w*x (grid) or <w, x> (Hilbert)."""
    return TargetMap(LINEAR_FUNCTIONAL, weight=weight)


def quad_norm() -> TargetMap:
    """f(x) = ||x||^2 on the Hilbert model."""
    return TargetMap(QUAD_NORM)


def target_from_key(key: str, *, t0: float = 0.5, weight=None) -> TargetMap:
    """Config-key constructor used by the scenario front end."""
    if key == LINEAR_FUNCTIONAL:
        return linear_functional(weight)
    if key == POINT_EVAL:
        return point_eval(t0)
    if key in (QUAD_INTEGRAL, POINTWISE_SIN, QUAD_NORM):
        return TargetMap(key)
    raise ValueError(f"unknown target key {key!r}")
