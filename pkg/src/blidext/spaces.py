"""Discrete models of the function spaces.

C[0,1] is modeled by values on a uniform grid, C(M) by values on an
arbitrary finite point set, and Hilbert space by finite-dimensional
vectors with the Euclidean inner product.  Pointwise conditions are
checked at grid points only; there is no interpolation between points.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "C01",
    "CM",
    "Grid",
    "GridFunction",
    "HVector",
    "TargetValue",
    "ShapeError",
    "sup_norm",
    "h_norm",
    "integrate",
    "axpy",
    "gridfunction_to_csv",
    "gridfunction_from_csv",
]

C01 = "c01"
CM = "cm"


class ShapeError(ValueError):
    """Operands live on different grids or have mismatched dimensions."""


def _frozen_array(a, name):
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a nonempty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite (no NaN/Inf)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Finite sampling of the parameter domain.

    ``kind=C01`` grids sample [0,1] and must be strictly increasing;
    N = 1 is permitted (the scalar model).  ``kind=CM`` grids are an
    arbitrary finite label set.
    """

    points: np.ndarray
    kind: str = C01

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen_array(self.points, "grid points"))
        if self.kind not in (C01, CM):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.kind == C01 and self.size > 1 and not np.all(np.diff(self.points) > 0):
            raise ValueError("C[0,1] grid points must be strictly increasing")

    @classmethod
    def uniform(cls, n: int) -> "Grid":
        """Uniform grid t_k = k/(n-1) on [0,1]; n = 1 gives the single point 0."""
        if n < 1:
            raise ValueError("grid size must be >= 1")
        pts = np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)
        return cls(pts, C01)

    @classmethod
    def labels(cls, points) -> "Grid":
        """Finite point set modeling a compact space M."""
        return cls(np.asarray(points, dtype=float), CM)

    @property
    def size(self) -> int:
        return self.points.size

    def matches(self, other: "Grid") -> bool:
        if self is other:
            return True
        return self.kind == other.kind and np.array_equal(self.points, other.points)

    def subgrid(self, mask) -> "Grid":
        """Grid restricted to the masked points (used by half-space splits)."""
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != self.points.shape:
            raise ShapeError("mask length must equal grid size")
        if not mask.any():
            raise ValueError("mask selects no points")
        return Grid(self.points[mask], self.kind)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Sampled element of C[0,1] or C(M): one real value per grid point."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, "values"))
        if self.values.size != self.grid.size:
            raise ShapeError("values length must equal grid size")

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "GridFunction":
        return cls(grid, np.full(grid.size, float(c)))

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, np.array([fn(t) for t in grid.points], dtype=float))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __add__(self, other):
        _check_same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, alpha):
        return GridFunction(self.grid, self.values * float(alpha))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class HVector:
    """Element of the finite-dimensional Hilbert space model."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords, "coords"))

    @property
    def dim(self) -> int:
        return self.coords.size

    def __add__(self, other):
        _check_same_dim(self, other)
        return HVector(self.coords + other.coords)

    def __sub__(self, other):
        _check_same_dim(self, other)
        return HVector(self.coords - other.coords)

    def __mul__(self, alpha):
        return HVector(self.coords * float(alpha))

    __rmul__ = __mul__

    def __neg__(self):
        return HVector(-self.coords)


def _check_same_grid(x: GridFunction, y: GridFunction):
    if not x.grid.matches(y.grid):
        raise ShapeError("grid functions live on different grids")


def _check_same_dim(x: HVector, y: HVector):
    if x.dim != y.dim:
        raise ShapeError(f"dimension mismatch: {x.dim} vs {y.dim}")


def data(x) -> np.ndarray:
    """Raw value array of a GridFunction or HVector."""
    if isinstance(x, GridFunction):
        return x.values
    if isinstance(x, HVector):
        return x.coords
    raise TypeError(f"expected GridFunction or HVector, got {type(x).__name__}")


def like(x, values) -> "GridFunction | HVector":
    """New element of the same space as ``x`` with the given values."""
    if isinstance(x, GridFunction):
        return GridFunction(x.grid, values)
    if isinstance(x, HVector):
        return HVector(values)
    raise TypeError(f"expected GridFunction or HVector, got {type(x).__name__}")


def sup_norm(x: GridFunction) -> float:
    """max_k |x(t_k)|, the C[0,1]/C(M) norm on the grid model."""
    return float(np.max(np.abs(x.values)))


def h_norm(x: HVector) -> float:
    """Euclidean norm on the Hilbert model."""
    return float(np.sqrt(np.dot(x.coords, x.coords)))


def norm_of(x) -> float:
    """The model norm: sup norm for grid functions, Euclidean for vectors."""
    if isinstance(x, GridFunction):
        return sup_norm(x)
    return h_norm(x)


def integrate(x: GridFunction) -> float:
    """Trapezoid-rule integral over [0,1].

    Exact for linear functions.  Requires a C[0,1] grid with N >= 2.
    """
    if x.grid.kind != C01:
        raise ShapeError("integrate requires a C[0,1] grid")
    if x.grid.size < 2:
        raise ValueError("integrate requires N >= 2 grid points")
    return float(np.trapezoid(x.values, x.grid.points))


def axpy(alpha: float, x, y):
    """alpha*x + y for two grid functions or two vectors."""
    if isinstance(x, GridFunction) and isinstance(y, GridFunction):
        _check_same_grid(x, y)
        return GridFunction(x.grid, float(alpha) * x.values + y.values)
    if isinstance(x, HVector) and isinstance(y, HVector):
        _check_same_dim(x, y)
        return HVector(float(alpha) * x.coords + y.coords)
    raise ShapeError("axpy operands must be of the same kind")


# --- target values -----------------------------------------------------------

SCALAR = "scalar"
VECTOR = "vector"
FUNC = "func"


@dataclass(frozen=True, eq=False)
class TargetValue:
    """Tagged element of the target space Y: Scalar, Vector, or Func."""

    kind: str
    payload: object

    def __post_init__(self):
        if self.kind == SCALAR:
            v = float(self.payload)
            if not np.isfinite(v):
                raise ValueError("scalar target value must be finite")
            object.__setattr__(self, "payload", v)
        elif self.kind == VECTOR:
            object.__setattr__(self, "payload", _frozen_array(self.payload, "vector"))
        elif self.kind == FUNC:
            if not isinstance(self.payload, GridFunction):
                raise TypeError("func target value must wrap a GridFunction")
        else:
            raise ValueError(f"unknown target value kind {self.kind!r}")

    @classmethod
    def scalar(cls, v: float) -> "TargetValue":
        return cls(SCALAR, v)

    @classmethod
    def vector(cls, v) -> "TargetValue":
        return cls(VECTOR, v)

    @classmethod
    def func(cls, f: GridFunction) -> "TargetValue":
        return cls(FUNC, f)

    def _binop(self, other, op):
        if self.kind != other.kind:
            raise ShapeError("target value kinds differ")
        if self.kind == SCALAR:
            return TargetValue(SCALAR, op(self.payload, other.payload))
        if self.kind == VECTOR:
            return TargetValue(VECTOR, op(self.payload, other.payload))
        _check_same_grid(self.payload, other.payload)
        return TargetValue(
            FUNC, self.payload.with_values(op(self.payload.values, other.payload.values))
        )

    def __add__(self, other):
        return self._binop(other, np.add)

    def __sub__(self, other):
        return self._binop(other, np.subtract)

    def __mul__(self, alpha):
        a = float(alpha)
        if self.kind == SCALAR:
            return TargetValue(SCALAR, a * self.payload)
        if self.kind == VECTOR:
            return TargetValue(VECTOR, a * self.payload)
        return TargetValue(FUNC, self.payload * a)

    __rmul__ = __mul__

    def norm(self) -> float:
        """|.| for scalars, Euclidean norm for vectors, sup norm for functions."""
        if self.kind == SCALAR:
            return abs(self.payload)
        if self.kind == VECTOR:
            return float(np.sqrt(np.dot(self.payload, self.payload)))
        return sup_norm(self.payload)

    def components(self) -> np.ndarray:
        """Flat component array (for CSV emission and comparisons)."""
        if self.kind == SCALAR:
            return np.array([self.payload])
        if self.kind == VECTOR:
            return np.asarray(self.payload)
        return self.payload.values


# --- serialization -----------------------------------------------------------

def gridfunction_to_csv(x: GridFunction) -> str:
    """CSV rows ``t,value`` with 17 significant digits."""
    buf = io.StringIO()
    buf.write("t,value\n")
    for t, v in zip(x.grid.points, x.values):
        buf.write(f"{t:.17g},{v:.17g}\n")
    return buf.getvalue()


def gridfunction_from_csv(text: str, kind: str = C01) -> GridFunction:
    """Inverse of :func:`gridfunction_to_csv`."""
    ts, vs = [], []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line.startswith("t,"):
            continue
        t, v = line.split(",")
        ts.append(float(t))
        vs.append(float(v))
    return GridFunction(Grid(np.array(ts), kind), np.array(vs))
