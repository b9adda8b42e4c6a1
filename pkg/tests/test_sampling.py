import numpy as np
import pytest

from herzmorrey.sampling import (
    Grid,
    SampledFunction,
    annulus_indicator,
    annulus_restrict,
    ball_indicator,
    indicator_interval,
    integrate,
    radial_bump,
)


def test_grid_basics(grid1k):
    assert grid1k.spacing == pytest.approx(16.0 / 1024)
    assert grid1k.k_max == 3
    assert grid1k.axis[0] == pytest.approx(-8.0 + grid1k.spacing / 2)


def test_grid_rejects_bad_radius():
    with pytest.raises(ValueError, match="power of two"):
        Grid(1, 10.0, 256)


def test_resolution_guard():
    g = Grid(1, 8.0, 4096)
    assert g.k_min == -5  # A_-5 holds exactly 8 midpoints at h = 1/256
    assert np.count_nonzero(g.annulus_mask(g.k_min)) >= 8
    with pytest.raises(ValueError, match="unresolved"):
        Grid(1, 8.0, 4096, k_min=-6)
    assert Grid(1, 8.0, 8192).k_min == -6


def test_integrate_interval_exact(grid1k):
    chi = indicator_interval(grid1k, -1.0, 1.0)
    assert integrate(chi) == pytest.approx(2.0, abs=1e-14)


def test_integrate_zero(grid1k):
    zero = SampledFunction(grid1k, np.zeros(grid1k.shape))
    assert integrate(zero) == 0.0


def test_disk_area_richardson():
    # oracle: first-order Richardson extrapolation over m for the unit disk
    areas = {}
    for m in (128, 256, 512):
        g = Grid(2, 8.0, m)
        areas[m] = integrate(ball_indicator(g, 0))
    rich = 2.0 * areas[512] - areas[256]
    assert areas[512] == pytest.approx(rich, rel=0.02)
    assert areas[512] == pytest.approx(np.pi, rel=0.02)


def test_ball_indicator_values(grid1k):
    assert integrate(ball_indicator(grid1k, 0)) == pytest.approx(2.0, abs=1e-14)
    assert integrate(ball_indicator(grid1k, 2)) == pytest.approx(8.0, abs=1e-14)
    with pytest.raises(ValueError, match="exceeds"):
        ball_indicator(grid1k, 4)


def test_annulus_restrict_ball(grid1k):
    ball = ball_indicator(grid1k, 1)
    ann = annulus_restrict(ball, 1)
    assert np.array_equal(ann.values, annulus_indicator(grid1k, 1).values)


def test_annulus_restrict_disjoint(grid1k):
    a0 = annulus_indicator(grid1k, 0)
    assert annulus_restrict(a0, 2).is_zero()


def test_restriction_partition(grid1k, rng):
    f = SampledFunction(grid1k, rng.uniform(-1, 1, grid1k.shape))
    total = np.zeros(grid1k.shape)
    for k in grid1k.k_range:
        total += annulus_restrict(f, k).values
    covered = (grid1k.radii > 2.0 ** (grid1k.k_min - 1)) & (
        grid1k.radii <= 2.0**grid1k.k_max
    )
    assert np.array_equal(total.reshape(-1)[covered], f.flat[covered])
    assert np.all(total.reshape(-1)[~covered] == 0.0)


def test_annulus_partition_of_unity(grid1k):
    total = np.zeros(grid1k.size)
    for k in grid1k.k_range:
        total += grid1k.annulus_mask(k)
    covered = (grid1k.radii > 2.0 ** (grid1k.k_min - 1)) & (
        grid1k.radii <= 2.0**grid1k.k_max
    )
    assert np.all(total[covered] == 1.0)
    assert np.all(total[~covered] == 0.0)


def test_ball_nesting(grid1k):
    for k in range(grid1k.k_min, grid1k.k_max):
        inner = ball_indicator(grid1k, k).values
        outer = ball_indicator(grid1k, k + 1).values
        assert np.all(inner <= outer)


def test_quadrature_linearity(grid1k, rng):
    f = SampledFunction(grid1k, rng.uniform(-1, 1, grid1k.shape))
    g = SampledFunction(grid1k, rng.uniform(-1, 1, grid1k.shape))
    lhs = integrate(2.5 * f + (-1.25) * g)
    rhs = 2.5 * integrate(f) - 1.25 * integrate(g)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-13)


def test_values_must_be_finite(grid1k):
    bad = np.zeros(grid1k.shape)
    bad[0] = np.inf
    with pytest.raises(ValueError, match="finite"):
        SampledFunction(grid1k, bad)


def test_bump_supported_in_annulus(grid1k):
    b = radial_bump(grid1k, 1)
    outside = ~grid1k.annulus_mask(1)
    assert np.all(b.flat[outside] == 0.0)
    assert b.flat.max() > 0.9
