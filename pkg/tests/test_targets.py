import numpy as np
import pytest

from blidext.spaces import Grid, GridFunction, HVector, ShapeError
from blidext.targets import (
    linear_functional,
    point_eval,
    pointwise_sin,
    quad_integral,
    quad_norm,
    target_from_key,
)


@pytest.fixture
def grid():
    return Grid.uniform(11)


def test_quad_integral(grid):
    f = quad_integral()
    x = GridFunction.constant(grid, 0.5)
    assert f.eval(x).payload == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(ValueError):
        f.eval(GridFunction.constant(Grid.uniform(1), 0.5))


def test_point_eval(grid):
    f = point_eval(0.5)
    x = GridFunction.from_callable(grid, lambda t: t)
    assert f.eval(x).payload == 0.5
    # t0 snaps to the nearest grid point
    g = point_eval(0.52)
    assert g.eval(x).payload == 0.5


def test_pointwise_sin(grid):
    f = pointwise_sin()
    out = f.eval(GridFunction.constant(grid, 0.0))
    assert np.all(out.payload.values == 0.0)


def test_linear_functional(grid):
    w = GridFunction.constant(grid, 1.0)
    f = linear_functional(w)
    x = GridFunction.from_callable(grid, lambda t: t)
    assert f.eval(x).payload == pytest.approx(0.5, abs=1e-15)
    # derivative of a linear map does not depend on x
    d = GridFunction.constant(grid, 2.0)
    assert f.deriv1(x, d).payload == pytest.approx(2.0, abs=1e-14)


def test_quad_norm():
    f = quad_norm()
    assert f.eval(HVector([3.0, 4.0])).payload == 25.0
    assert f.deriv1(HVector([1.0, 0.0]), HVector([0.0, 1.0])).payload == 0.0


def test_quad_integral_deriv(grid):
    f = quad_integral()
    x = GridFunction.constant(grid, 0.5)
    d = GridFunction.constant(grid, 1.0)
    assert f.deriv1(x, d).payload == pytest.approx(1.0, abs=1e-14)


def _random_pair(rng, kind, grid):
    if kind == "hvector":
        return HVector(rng.uniform(-2, 2, 6)), HVector(rng.uniform(-1, 1, 6))
    x = GridFunction(grid, rng.uniform(-2, 2, grid.size))
    d = GridFunction(grid, rng.uniform(-1, 1, grid.size))
    return x, d


@pytest.mark.parametrize(
    "make,kind",
    [
        (quad_integral, "grid"),
        (lambda: point_eval(0.3), "grid"),
        (pointwise_sin, "grid"),
        (quad_norm, "hvector"),
    ],
)
def test_deriv1_matches_central_difference(make, kind, grid):
    f = make()
    rng = np.random.default_rng(202)
    for _ in range(100):
        x, d = _random_pair(rng, kind, grid)
        exact = f.deriv1(x, d)
        h = 1e-4
        fd = (f.eval(x + h * d) - f.eval(x + (-h) * d)) * (1.0 / (2 * h))
        err = (fd - exact).norm()
        assert err <= 1e-6 * (1.0 + exact.norm())


def test_richardson_slope_on_sin(grid):
    # the only catalog target with a nonzero third-derivative term
    f = pointwise_sin()
    rng = np.random.default_rng(7)
    x = GridFunction(grid, rng.uniform(-1, 1, grid.size))
    d = GridFunction(grid, rng.uniform(-1, 1, grid.size))
    errs = []
    for h in (1e-2, 1e-3, 1e-4):
        fd = (f.eval(x + h * d) - f.eval(x + (-h) * d)) * (1.0 / (2 * h))
        errs.append((fd - f.deriv1(x, d)).norm())
    slope = np.log(errs[0] / errs[1]) / np.log(10.0)
    assert slope == pytest.approx(2.0, abs=0.2)


def test_boundedness_on_bounded_sets(grid):
    rng = np.random.default_rng(11)
    R = 3.0
    targets = [
        (quad_integral(), "grid"),
        (point_eval(0.25), "grid"),
        (pointwise_sin(), "grid"),
        (linear_functional(GridFunction.constant(grid, 1.0)), "grid"),
        (quad_norm(), "hvector"),
    ]
    for f, kind in targets:
        example = (
            HVector(np.zeros(6)) if kind == "hvector" else GridFunction.constant(grid, 0.0)
        )
        bound = f.bound_on_sup_ball(example, R)
        for _ in range(1000):
            x, _ = _random_pair(rng, kind, grid)
            x = (R / 2.0) * x  # sup norm <= R
            assert f.eval(x).norm() <= bound + 1e-12


def test_shape_errors(grid):
    with pytest.raises(ShapeError):
        quad_norm().eval(GridFunction.constant(grid, 1.0))
    with pytest.raises(ShapeError):
        quad_integral().eval(HVector([1.0]))


def test_target_from_key(grid):
    assert target_from_key("quad_integral").kind == "quad_integral"
    assert target_from_key("point_eval", t0=0.25).t0 == 0.25
    with pytest.raises(ValueError):
        target_from_key("nope")
