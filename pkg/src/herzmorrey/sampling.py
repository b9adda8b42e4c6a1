"""Midpoint grids on truncated boxes [-R, R]^n with dyadic balls and annuli.

Cells are classified by their midpoints, so indicator functions are crisp and
the annuli partition the grid exactly.  The dyadic range [k_min, k_max] is
guarded: every annulus in range must contain at least 8 grid points.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Grid",
    "SampledFunction",
    "integrate",
    "l1_norm",
    "ball_indicator",
    "annulus_indicator",
    "annulus_restrict",
    "indicator_interval",
    "indicator_box",
    "radial_bump",
]

ANNULUS_MIN_POINTS = 8


class Grid:
    """Uniform midpoint grid covering [-R, R]^n for n in {1, 2}.

    R must be a power of two (R = 2^k_max anchors the dyadic ladder).  If
    ``k_min`` is omitted the smallest value passing the resolution guard is
    used; an explicit infeasible request raises.
    """

    def __init__(self, dimension=1, radius=8.0, points_per_axis=4096, k_min=None):
        if dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        k_max = np.log2(radius)
        if abs(k_max - round(k_max)) > 1e-12:
            raise ValueError("radius must be a power of two (R = 2^k_max)")
        if points_per_axis < 2 or points_per_axis % 2:
            raise ValueError("points_per_axis must be even and >= 2")
        self.dimension = int(dimension)
        self.radius = float(radius)
        self.points_per_axis = int(points_per_axis)
        self.k_max = int(round(k_max))
        self.spacing = 2.0 * self.radius / self.points_per_axis
        self.cell_volume = self.spacing**self.dimension

        axis = -self.radius + (np.arange(self.points_per_axis) + 0.5) * self.spacing
        axis.flags.writeable = False
        self.axis = axis
        if self.dimension == 1:
            self.shape = (self.points_per_axis,)
            coords = axis[:, None]
            radii = np.abs(axis)
        else:
            self.shape = (self.points_per_axis, self.points_per_axis)
            xx, yy = np.meshgrid(axis, axis, indexing="ij")
            coords = np.stack([xx.ravel(), yy.ravel()], axis=1)
            radii = np.sqrt(xx**2 + yy**2).ravel()
        coords.flags.writeable = False
        radii.flags.writeable = False
        self.coords = coords
        self.radii = radii
        self.size = radii.size

        feasible = self._feasible_k_min()
        if k_min is None:
            self.k_min = feasible
        else:
            if k_min < feasible:
                raise ValueError(
                    f"annulus 2^{k_min} unresolved: needs >= {ANNULUS_MIN_POINTS} grid "
                    f"points, smallest feasible k_min is {feasible}"
                )
            if k_min > self.k_max:
                raise ValueError("k_min exceeds k_max")
            self.k_min = int(k_min)

        self._annulus_masks: dict[int, np.ndarray] = {}
        self._ball_masks: dict[int, np.ndarray] = {}

    def _feasible_k_min(self):
        k = self.k_max
        while k - 1 >= self.k_max - 60:
            if np.count_nonzero(self._annulus_mask_raw(k - 1)) < ANNULUS_MIN_POINTS:
                break
            k -= 1
        return k

    def _annulus_mask_raw(self, k):
        return (self.radii > 2.0 ** (k - 1)) & (self.radii <= 2.0**k)

    def __repr__(self):
        return (
            f"Grid(n={self.dimension}, R={self.radius:g}, m={self.points_per_axis}, "
            f"k=[{self.k_min},{self.k_max}])"
        )

    @property
    def k_range(self):
        return range(self.k_min, self.k_max + 1)

    def annulus_mask(self, k):
        """Boolean mask of the dyadic shell 2^(k-1) < |x| <= 2^k (flat layout)."""
        if not (self.k_min <= k <= self.k_max):
            raise ValueError(f"annulus index {k} outside range [{self.k_min}, {self.k_max}]")
        mask = self._annulus_masks.get(k)
        if mask is None:
            mask = self._annulus_mask_raw(k)
            mask.flags.writeable = False
            self._annulus_masks[k] = mask
        return mask

    def ball_mask(self, k):
        """Boolean mask of the closed ball |x| <= 2^k (flat layout)."""
        if 2.0**k > self.radius:
            raise ValueError(f"ball of radius 2^{k} exceeds the grid half-width {self.radius:g}")
        mask = self._ball_masks.get(k)
        if mask is None:
            mask = self.radii <= 2.0**k
            mask.flags.writeable = False
            self._ball_masks[k] = mask
        return mask

    def ball_points(self, k):
        return int(np.count_nonzero(self.ball_mask(k)))


class SampledFunction:
    """Function sampled at grid midpoints; values are finite and immutable."""

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            values = values.reshape(grid.shape)
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        values = values.copy()
        values.flags.writeable = False
        self.grid = grid
        self.values = values

    @property
    def flat(self):
        return self.values.reshape(-1)

    def __abs__(self):
        return SampledFunction(self.grid, np.abs(self.values))

    def __add__(self, other):
        self._check(other)
        return SampledFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return SampledFunction(self.grid, self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, SampledFunction):
            self._check(c)
            return SampledFunction(self.grid, self.values * c.values)
        return SampledFunction(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def _check(self, other):
        if other.grid is not self.grid:
            raise ValueError("operands live on different grids")

    def is_zero(self):
        return not np.any(self.values)


def integrate(f: SampledFunction) -> float:
    """Midpoint quadrature: exact for functions constant on cells."""
    return float(np.sum(f.values) * f.grid.cell_volume)


def l1_norm(f: SampledFunction) -> float:
    return float(np.sum(np.abs(f.values)) * f.grid.cell_volume)


def ball_indicator(grid: Grid, k: int) -> SampledFunction:
    return SampledFunction(grid, grid.ball_mask(k).astype(float).reshape(grid.shape))


def annulus_indicator(grid: Grid, k: int) -> SampledFunction:
    return SampledFunction(grid, grid.annulus_mask(k).astype(float).reshape(grid.shape))


def annulus_restrict(f: SampledFunction, k: int) -> SampledFunction:
    """Restriction f * chi_{A_k}; summing over k in range reproduces f away
    from the central hole |x| <= 2^(k_min - 1)."""
    mask = f.grid.annulus_mask(k).reshape(f.grid.shape)
    return SampledFunction(f.grid, np.where(mask, f.values, 0.0))


def indicator_interval(grid: Grid, a: float, b: float) -> SampledFunction:
    """Indicator of [a, b] (n=1 only), classified by cell midpoints."""
    if grid.dimension != 1:
        raise ValueError("indicator_interval requires a 1-d grid")
    vals = ((grid.axis >= a) & (grid.axis <= b)).astype(float)
    return SampledFunction(grid, vals)


def indicator_box(grid: Grid, a: float, b: float) -> SampledFunction:
    """Indicator of the box [a, b]^n, classified by cell midpoints."""
    if grid.dimension == 1:
        return indicator_interval(grid, a, b)
    within = np.all((grid.coords >= a) & (grid.coords <= b), axis=1)
    return SampledFunction(grid, within.astype(float).reshape(grid.shape))


def radial_bump(grid: Grid, k: int) -> SampledFunction:
    """Smooth radial bump supported inside the annulus A_k (cosine-squared)."""
    lo, hi = 2.0 ** (k - 1), 2.0**k
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    u = (grid.radii - mid) / half
    vals = np.where(np.abs(u) < 1.0, np.cos(0.5 * np.pi * u) ** 2, 0.0)
    return SampledFunction(grid, vals.reshape(grid.shape))
