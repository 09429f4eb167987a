import itertools
import math

import numpy as np
import pytest

from blidext.geometry import (
    Ball,
    Band,
    HalfSpaceSplit,
    SegmentFamily,
    band_margin,
    contains,
    validate_ball_family,
    validate_band_family,
)
from blidext.spaces import Grid, GridFunction, HVector


@pytest.fixture
def grid():
    return Grid.uniform(11)


def const(grid, v):
    return GridFunction.constant(grid, v)


def test_ordered_separated_bands_ok(grid):
    fam = SegmentFamily.of_bands(
        Band(const(grid, -2), const(grid, -1), const(grid, -1.5), 0.25),
        Band(const(grid, 1), const(grid, 2), const(grid, 1.5), 0.25),
    )
    assert validate_band_family(fam).ok


def test_overlapping_bands_violate(grid):
    fam = SegmentFamily.of_bands(
        Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.25),
        Band(const(grid, 0), const(grid, 2), const(grid, 1), 0.25),
    )
    rep = validate_band_family(fam)
    assert not rep.ok
    assert rep.violations[0].pair_i == 0 and rep.violations[0].pair_j == 1


def test_crossing_bands_witness_at_one(grid):
    f = lambda fn: GridFunction.from_callable(grid, fn)
    fam = SegmentFamily.of_bands(
        Band(f(lambda t: t - 1.5), f(lambda t: t - 0.5), f(lambda t: t - 1.0), 0.1),
        Band(f(lambda t: 0.5 - t), f(lambda t: 1.5 - t), f(lambda t: 1.0 - t), 0.1),
    )
    rep = validate_band_family(fam)
    assert not rep.ok
    v = rep.violations[0]
    assert v.witness_t == 1.0
    assert v.psi_i == 0.5 and v.phi_j == -0.5


def test_delta_enlargement_overlap_detected(grid):
    # bands ordered but enlargements touch: gap 0.5 with deltas 0.3 each
    fam = SegmentFamily.of_bands(
        Band(const(grid, -1.5), const(grid, -0.25), const(grid, -1.0), 0.3),
        Band(const(grid, 0.25), const(grid, 1.5), const(grid, 1.0), 0.3),
    )
    rep = validate_band_family(fam)
    assert not rep.ok
    assert rep.violations[0].reason == "enlargement"


def test_validator_permutation_invariant(grid):
    bands = [
        Band(const(grid, -3), const(grid, -2), const(grid, -2.5), 0.2),
        Band(const(grid, -1), const(grid, 0), const(grid, -0.5), 0.2),
        Band(const(grid, 1), const(grid, 2), const(grid, 1.5), 0.2),
    ]
    for perm in itertools.permutations(bands):
        assert validate_band_family(SegmentFamily.of_bands(*perm)).ok


def test_validated_family_excludes_double_membership(grid):
    rng = np.random.default_rng(3)
    d = 0.2
    b1 = Band(const(grid, -2), const(grid, -1), const(grid, -1.5), d)
    b2 = Band(const(grid, 1), const(grid, 2), const(grid, 1.5), d)
    assert validate_band_family(SegmentFamily.of_bands(b1, b2)).ok
    for _ in range(1000):
        x = rng.uniform(-4, 4, grid.size)
        in1 = (b1.phi.values - d < x) & (x < b1.psi.values + d)
        in2 = (b2.phi.values - d < x) & (x < b2.psi.values + d)
        assert not np.any(in1 & in2)


def test_semi_infinite_band_ordering(grid):
    fam = SegmentFamily.of_bands(
        Band(None, const(grid, -1), const(grid, -2), 0.2),
        Band(const(grid, 1), None, const(grid, 2), 0.2),
    )
    assert validate_band_family(fam).ok
    # two lower-unbounded bands can never be ordered
    fam_bad = SegmentFamily.of_bands(
        Band(None, const(grid, -1), const(grid, -2), 0.2),
        Band(None, const(grid, 1), const(grid, 0), 0.2),
    )
    assert not validate_band_family(fam_bad).ok


def test_ball_family_validation():
    ok = SegmentFamily.of_balls(
        Ball(HVector([0.0, 0.0]), 1.0, 0.5), Ball(HVector([5.0, 0.0]), 1.0, 0.5)
    )
    assert validate_ball_family(ok).ok
    overlap = SegmentFamily.of_balls(
        Ball(HVector([0.0, 0.0]), 1.0, 0.5), Ball(HVector([1.5, 0.0]), 1.0, 0.5)
    )
    assert not validate_ball_family(overlap).ok
    tangent = SegmentFamily.of_balls(
        Ball(HVector([0.0, 0.0]), 1.0, 0.1), Ball(HVector([2.0, 0.0]), 1.0, 0.1)
    )
    rep = validate_ball_family(tangent)
    assert not rep.ok  # separation must be strict
    assert math.isnan(rep.violations[0].witness_t)


def test_band_margin(grid):
    assert band_margin(Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.5)) == 1.0
    assert band_margin(Band(const(grid, -1), const(grid, 1), const(grid, 0.5), 0.5)) == 0.5
    assert band_margin(Band(None, const(grid, 0), const(grid, -1), 0.5)) == 1.0
    assert band_margin(Band(None, None, const(grid, 0), 0.5)) == math.inf


def test_band_anchor_invariant(grid):
    with pytest.raises(ValueError):
        Band(const(grid, -1), const(grid, 1), const(grid, 1.5), 0.5)
    with pytest.raises(ValueError):
        Band(const(grid, -1), const(grid, 1), const(grid, -1.0), 0.5)


def test_contains(grid):
    band = Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.5)
    assert contains(band, const(grid, 0.0))
    boundary = GridFunction(grid, np.where(grid.points == 0.0, 1.0, 0.0))
    assert not contains(band, boundary)
    ball = Ball(HVector([0.0, 0.0]), 1.0, 0.5)
    assert contains(ball, HVector([0.5, 0.0]))
    assert not contains(ball, HVector([1.0, 0.0]))


def test_half_space_split(grid):
    mask = grid.points >= 0.5
    split = HalfSpaceSplit.with_default_anchor(grid, mask, 0.5)
    assert np.all(split.anchor.values == -1.0)
    x = GridFunction(grid, np.where(mask, -0.5, 7.0))
    assert contains(split, x)
    assert not contains(split, const(grid, 0.0))
    with pytest.raises(ValueError):
        HalfSpaceSplit(grid, np.zeros(grid.size, bool),
                       GridFunction.constant(grid, -1.0), 0.5)


def test_violation_csv(grid):
    fam = SegmentFamily.of_bands(
        Band(const(grid, -1), const(grid, 1), const(grid, 0), 0.25),
        Band(const(grid, 0), const(grid, 2), const(grid, 1), 0.25),
    )
    text = validate_band_family(fam).to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "pair_i,pair_j,witness_t,psi_i,phi_j"
    assert len(lines) == 2
