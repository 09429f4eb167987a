import math

import numpy as np
import pytest

from blidext.blids import band_blid
from blidext.config import parse_config
from blidext.extension import ExtensionOperator
from blidext.geometry import Band, HalfSpaceSplit, SegmentFamily
from blidext.spaces import Grid, GridFunction
from blidext.targets import linear_functional, point_eval, pointwise_sin, quad_integral
from blidext.verify import (
    ProbeConfig,
    blid_law_check,
    bounded_scan,
    containment_check,
    dir_deriv,
    dir_deriv_ladder,
    oracle_1d,
    reports_to_csv,
    restriction_check,
    seam_probe,
    weight_partition_check,
)

N = 31


@pytest.fixture
def grid():
    return Grid.uniform(N)


def const(grid, v):
    return GridFunction.constant(grid, v)


def band_op(grid, target, **kw):
    fam = SegmentFamily.of_bands(
        Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.5)
    )
    return ExtensionOperator(fam, target, **kw)


class TestDirDeriv:
    def test_linear_target_exact(self, grid):
        f = linear_functional(const(grid, 1.0))
        x = const(grid, 0.3)
        d = const(grid, 1.0)
        est = dir_deriv(f.eval, x, d, order=1, h=1e-4)
        assert abs(est.value.payload - 1.0) <= 1e-10

    def test_quad_integral_first_order(self, grid):
        f = quad_integral()
        x, d = const(grid, 0.5), const(grid, 1.0)
        est = dir_deriv(f.eval, x, d, order=1, h=1e-4)
        assert abs(est.value.payload - 1.0) <= 1e-8

    def test_quad_integral_second_order(self, grid):
        # second directional difference of a quadratic is exact: 2*integral(d^2)
        f = quad_integral()
        rng = np.random.default_rng(3)
        x = GridFunction(grid, rng.uniform(-1, 1, N))
        d = const(grid, 1.0)
        est = dir_deriv(f.eval, x, d, order=2, h=1e-4)
        assert abs(est.value.payload - 2.0) <= 1e-6

    def test_ladder_slope_on_sin(self, grid):
        f = pointwise_sin()
        rng = np.random.default_rng(4)
        x = GridFunction(grid, rng.uniform(-1, 1, N))
        d = GridFunction(grid, rng.uniform(-1, 1, N))
        est = dir_deriv_ladder(f.eval, x, d, order=1, steps=(1e-2, 1e-3, 1e-4))
        assert est.richardson_slope == pytest.approx(2.0, abs=0.2)

    def test_ladder_flags_exactness(self, grid):
        f = linear_functional(const(grid, 1.0))
        x, d = const(grid, 0.1), const(grid, 0.7)
        est = dir_deriv_ladder(f.eval, x, d, order=1)
        assert math.isnan(est.richardson_slope)

    def test_rejects_bad_order(self, grid):
        with pytest.raises(ValueError):
            dir_deriv(quad_integral().eval, const(grid, 0), const(grid, 1), order=3)


class TestRestriction:
    def test_clamp_core(self, grid):
        op = band_op(grid, quad_integral(), mode="clamp", theta=0.1)
        rep = restriction_check(op, ProbeConfig(samples=500))
        assert rep.passed and rep.worst_error <= 1e-12

    def test_literal_core(self, grid):
        op = band_op(grid, quad_integral())
        rep = restriction_check(op, ProbeConfig(samples=500))
        assert rep.passed

    def test_literal_gap_outside_core_is_real(self, grid):
        # inside V but outside the eps-scaled plateau, F generally differs
        # from f: the documented core-vs-segment gap of the eps-scaling
        op = band_op(grid, quad_integral())
        eps = op.blids[0].mode.epsilon
        x = const(grid, 0.9)  # far beyond eps*1 = 1/3
        gap = abs(op.extend(x).payload - quad_integral().eval(x).payload)
        assert gap > 1e-3


class TestContainment:
    def test_default_epsilon_passes(self, grid):
        op = band_op(grid, quad_integral())
        rep = containment_check(op, ProbeConfig(), samples=2000)
        assert rep.passed

    def test_oversized_epsilon_fails_as_report(self, grid):
        op = band_op(grid, quad_integral(), epsilon=2.0)
        rep = containment_check(op, ProbeConfig(), samples=2000)
        assert not rep.passed
        assert rep.worst_error > 0


class TestWeightPartition:
    def test_two_bands(self, grid):
        fam = SegmentFamily.of_bands(
            Band(const(grid, -3), const(grid, -2), const(grid, -2.5), 0.2),
            Band(const(grid, 2), const(grid, 3), const(grid, 2.5), 0.2),
        )
        op = ExtensionOperator(fam, point_eval(0.5))
        rep = weight_partition_check(op, ProbeConfig(), samples=2000)
        assert rep.passed


class TestBoundedScan:
    def test_band_quad(self, grid):
        op = band_op(grid, quad_integral())
        rep = bounded_scan(op, ProbeConfig(), samples_per_radius=200)
        assert rep.passed
        # f = integral of x^2 over the closed band [-1,1] is at most 1
        assert rep.worst_error <= 1.0 + 1e-9

    def test_seeley_far_field_w_only(self, grid):
        split = HalfSpaceSplit.with_default_anchor(grid, grid.points >= 0.5, 0.5)
        op = ExtensionOperator(split, pointwise_sin())
        rep = bounded_scan(op, ProbeConfig(), samples_per_radius=150)
        assert rep.passed


class TestSeamProbe:
    def test_literal_band(self, grid):
        op = band_op(grid, quad_integral())
        reports = seam_probe(op, ProbeConfig(), n_paths=6)
        by_name = {r.check: r for r in reports}
        assert by_name["seam_no_jump"].passed
        assert by_name["seam_second_difference"].severity == "informational"

    def test_clamp_band_has_continuity_check(self, grid):
        op = band_op(grid, quad_integral(), mode="clamp", theta=0.1)
        reports = seam_probe(op, ProbeConfig(), n_paths=6)
        by_name = {r.check: r for r in reports}
        assert by_name["clamp_seam_derivative_continuity"].passed
        assert by_name["clamp_seam_derivative_continuity"].worst_error <= 1e-4


SCENARIO_1D = """
space = c01
n = 1
mode = literal
safety = 0.5
target = point_eval
seed = 42

[segment]
kind = band
phi = const:-1
psi = const:1
z = const:0
delta = 0.5
"""


class TestOracle1D:
    def test_single_band(self):
        rep = oracle_1d(parse_config(SCENARIO_1D), ProbeConfig(samples=500))
        assert rep.passed and rep.worst_error <= 1e-12

    def test_rejects_non_expressible(self):
        sc = parse_config(SCENARIO_1D.replace("point_eval", "quad_integral"))
        with pytest.raises(ValueError):
            oracle_1d(sc)


class TestReports:
    def test_csv_and_determinism(self, grid):
        op = band_op(grid, quad_integral())
        probe = ProbeConfig(samples=200)
        a = reports_to_csv([restriction_check(op, probe), containment_check(op, probe, 500)])
        b = reports_to_csv([restriction_check(op, probe), containment_check(op, probe, 500)])
        assert a == b
        assert a.splitlines()[0] == "check,pass,worst_error,seed,witness"

    def test_blid_law_reports(self, grid):
        H = band_blid(Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.5))
        rep = blid_law_check(H.literal(0.5), ProbeConfig(), 300, 2000)
        assert rep.passed
        rep2 = blid_law_check(H.clamped(0.2), ProbeConfig(), 300, 2000)
        assert rep2.passed
