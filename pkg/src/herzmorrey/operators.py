"""Sublinear operators: maximal, fractional maximal, fractional integral.

Normalizations follow the two conventions used for ball averages: the
radius power r^-(n-beta) and the volume fraction |B|^(beta/n - 1); they differ
by the constant v_n^(beta/n - 1) (v_n the unit-ball volume), which cancels in
every boundedness ratio.

On 1-d grids the centered operators evaluate the discrete supremum over all
radii exactly (see _kernels); on 2-d grids the supremum runs over a
logarithmic radius ladder with 64 rungs per decade, with ball sums taken by
FFT convolution against midpoint-classified disk masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy import ndimage, signal
from scipy.integrate import quad

from . import _kernels
from .exponent import ExponentFunction, constant_exponent, piecewise_exponent
from .sampling import Grid, SampledFunction, l1_norm

__all__ = [
    "OperatorHandle",
    "SizeConditionReport",
    "maximal",
    "fractional_maximal",
    "fractional_integral",
    "sobolev_exponent",
    "estimate_size_constant",
    "radius_ladder",
    "get_operator",
    "register_operator",
    "registered_operators",
    "support_annulus",
]

LADDER_PER_DECADE = 64

_UNIT_BALL_VOLUME = {1: 2.0, 2: np.pi}


def radius_ladder(h, r_max, per_decade=LADDER_PER_DECADE):
    """Geometric radii from h up to (just past) r_max."""
    count = int(np.ceil(per_decade * np.log10(r_max / h))) + 1
    return h * 10.0 ** (np.arange(count) / per_decade)


def _norm_scale(dimension, beta, normalization):
    """Constant c with normalization factor c * r^-(n - beta)."""
    if normalization == "radius-power":
        return 1.0
    if normalization == "volume-fraction":
        return _UNIT_BALL_VOLUME[dimension] ** (beta / dimension - 1.0)
    raise ValueError(f"unknown normalization {normalization!r}")


@dataclass(frozen=True)
class OperatorHandle:
    """A named sublinear operator with its normalization and order beta."""

    name: str
    beta: float = 0.0
    normalization: str = "radius-power"
    centering: str = "centered"
    apply_fn: Callable[[SampledFunction, "OperatorHandle"], SampledFunction] | None = None
    claimed_conditions: tuple = ("outer", "inner")

    def __call__(self, f: SampledFunction) -> SampledFunction:
        if self.apply_fn is None:
            raise ValueError(f"operator {self.name!r} has no implementation attached")
        return self.apply_fn(f, self)

    def check_pairing(self, q1: ExponentFunction, dimension: int):
        """Order constraint beta < n / q1_plus required for a source exponent."""
        if self.beta >= dimension / q1.q_plus:
            raise ValueError(
                f"operator order beta={self.beta:g} violates beta < n/q+ "
                f"(= {dimension / q1.q_plus:g}) for the source exponent"
            )


def _ball_average_sup(f: SampledFunction, beta, normalization, centering):
    grid = f.grid
    n = grid.dimension
    sigma = n - beta
    scale = _norm_scale(n, beta, normalization)
    absvals = np.abs(f.values)

    if n == 1:
        edge_cum = np.concatenate([[0.0], np.cumsum(absvals) * grid.spacing])
        if centering == "centered":
            out = _kernels.maximal_scan_1d(edge_cum, absvals, grid.spacing, sigma, scale)
            return SampledFunction(grid, out)
        if centering == "uncentered-sampled":
            return SampledFunction(
                grid, _uncentered_1d(edge_cum, grid, sigma, scale)
            )
        raise ValueError(f"unknown centering {centering!r}")

    if centering == "centered":
        return SampledFunction(grid, _centered_2d(absvals, grid, beta, normalization))
    if centering == "uncentered-sampled":
        return SampledFunction(grid, _uncentered_2d(absvals, grid, beta, normalization))
    raise ValueError(f"unknown centering {centering!r}")


def _interp_cum(edge_cum, grid, t):
    """Piecewise-linear cumulative integral at arbitrary abscissae."""
    edges = -grid.radius + np.arange(grid.points_per_axis + 1) * grid.spacing
    return np.interp(t, edges, edge_cum)


def _uncentered_1d(edge_cum, grid, sigma, scale):
    """Ladder radii, grid centers c with |c - x| < r (sampled sup over balls)."""
    m = grid.points_per_axis
    h = grid.spacing
    out = np.zeros(m)
    for r in radius_ladder(h, 2.0 * grid.radius):
        w_sum = _interp_cum(edge_cum, grid, grid.axis + r) - _interp_cum(
            edge_cum, grid, grid.axis - r
        )
        avg = scale * w_sum * r**-sigma
        halfwidth = int(np.ceil(r / h)) - 1
        if halfwidth > 0:
            avg = ndimage.maximum_filter1d(avg, size=2 * halfwidth + 1, mode="nearest")
        np.maximum(out, avg, out=out)
    return out


def _disk_mask(radius_cells):
    k = int(np.floor(radius_cells))
    if k < 1:
        return None
    dd = np.arange(-k, k + 1)
    return (dd[:, None] ** 2 + dd[None, :] ** 2 < radius_cells**2).astype(float)


def _ball_normalizer_2d(grid, beta, normalization, ball_measure):
    """Weight per unit ball integral, from the counted-cell ball measure.

    On 2-d grids both conventions normalize by the grid measure of the
    midpoint-classified ball (a plain r^-2 would overshoot whenever the
    counted area jumps ahead of pi r^2 at lattice-scale radii); radius-power
    is then the volume-fraction value times the exact constant v_n^(1-beta/n).
    """
    factor = ball_measure ** (beta / 2.0 - 1.0)
    if normalization == "radius-power":
        factor *= _UNIT_BALL_VOLUME[grid.dimension] ** (1.0 - beta / 2.0)
    return factor


def _ball_sums_2d(absvals, grid, beta, normalization):
    h = grid.spacing
    for r in radius_ladder(h, 2.0 * grid.radius * np.sqrt(2.0)):
        mask = _disk_mask(r / h)
        if mask is None:
            sums = absvals * h**2
            measure = h**2
        else:
            sums = signal.fftconvolve(absvals, mask, mode="same") * h**2
            np.maximum(sums, 0.0, out=sums)
            measure = float(mask.sum()) * h**2
        yield mask, sums * _ball_normalizer_2d(grid, beta, normalization, measure)


def _centered_2d(absvals, grid, beta, normalization):
    out = np.zeros(grid.shape)
    for _, avg in _ball_sums_2d(absvals, grid, beta, normalization):
        np.maximum(out, avg, out=out)
    return out


def _uncentered_2d(absvals, grid, beta, normalization):
    out = np.zeros(grid.shape)
    for mask, avg in _ball_sums_2d(absvals, grid, beta, normalization):
        if mask is not None:
            avg = ndimage.maximum_filter(avg, footprint=mask.astype(bool), mode="nearest")
        np.maximum(out, avg, out=out)
    return out


def maximal(f: SampledFunction, handle: "OperatorHandle | None" = None) -> SampledFunction:
    """Hardy-Littlewood maximal function sup_r r^-n int_{B(x,r)} |f|."""
    if handle is None:
        handle = get_operator("maximal")
    if handle.beta != 0.0:
        raise ValueError("maximal requires beta = 0; use fractional_maximal")
    return _ball_average_sup(f, 0.0, handle.normalization, handle.centering)


def fractional_maximal(f: SampledFunction, handle_or_beta) -> SampledFunction:
    """Fractional maximal function with |B|^(beta/n - 1) ball averages."""
    if isinstance(handle_or_beta, OperatorHandle):
        handle = handle_or_beta
    else:
        handle = get_operator("fractional-maximal", beta=float(handle_or_beta))
    if not 0.0 < handle.beta < f.grid.dimension:
        raise ValueError(f"beta must lie in (0, n), got {handle.beta:g}")
    return _ball_average_sup(f, handle.beta, handle.normalization, handle.centering)


def _secant_moment(beta):
    val, _ = quad(lambda t: np.cos(t) ** -beta, 0.0, np.pi / 4.0)
    return val


def _singular_cell_weight(grid: Grid, beta):
    """Analytic integral of |y|^(beta - n) over one grid cell centered at 0."""
    a = grid.spacing / 2.0
    if grid.dimension == 1:
        return 2.0 * a**beta / beta
    return 8.0 * a**beta / beta * _secant_moment(beta)


_NEAR_FIELD_CELLS = 8
_NEAR_FIELD_REFINE = 16
_kernel_cache: dict[tuple, np.ndarray] = {}


def _offset_kernel(grid: Grid, beta, center_weight):
    """Per-cell quadrature weights of the kernel |x - y|^(beta - n).

    In 1-d each off-center weight is the exact cell integral, so convolution
    is exact product integration for piecewise-constant inputs.  In 2-d the
    near-field cells are refined by subcell midpoint quadrature and the rest
    use plain midpoint values.
    """
    key = (grid.dimension, grid.points_per_axis, grid.spacing, beta, center_weight)
    cached = _kernel_cache.get(key)
    if cached is not None:
        return cached
    m = grid.points_per_axis
    h = grid.spacing
    if grid.dimension == 1:
        j = np.arange(1, m)
        if beta == 0.0:
            w = np.log((j + 0.5) / (j - 0.5))
        else:
            w = (((j + 0.5) * h) ** beta - ((j - 0.5) * h) ** beta) / beta
        kern = np.concatenate([w[::-1], [center_weight], w])
    else:
        d = np.arange(-(m - 1), m) * h
        rr = np.sqrt(d[:, None] ** 2 + d[None, :] ** 2)
        with np.errstate(divide="ignore"):
            kern = h**2 * rr ** (beta - 2.0)
        sub = ((np.arange(_NEAR_FIELD_REFINE) + 0.5) / _NEAR_FIELD_REFINE - 0.5) * h
        for a in range(-_NEAR_FIELD_CELLS, _NEAR_FIELD_CELLS + 1):
            for b in range(-_NEAR_FIELD_CELLS, _NEAR_FIELD_CELLS + 1):
                if a == 0 and b == 0:
                    continue
                y1 = a * h + sub[:, None]
                y2 = b * h + sub[None, :]
                r_sub = np.sqrt(y1**2 + y2**2)
                kern[m - 1 + a, m - 1 + b] = np.mean(r_sub ** (beta - 2.0)) * h**2
        kern[(m - 1,) * 2] = center_weight
    if len(_kernel_cache) > 8:
        _kernel_cache.clear()
    _kernel_cache[key] = kern
    return kern


def fractional_integral(f: SampledFunction, beta: float) -> SampledFunction:
    """Riesz-type potential int f(y) |x - y|^(beta - n) dy by midpoint quadrature.

    The cell containing the singularity contributes its analytic kernel
    integral times the local value (local-constancy correction).
    """
    grid = f.grid
    if not 0.0 < beta < grid.dimension:
        raise ValueError(f"beta must lie in (0, n), got {beta:g}")
    kern = _offset_kernel(grid, beta, _singular_cell_weight(grid, beta))
    out = signal.fftconvolve(f.values, kern, mode="same")
    return SampledFunction(grid, out)


def kernel_envelope(f: SampledFunction, beta: float) -> np.ndarray:
    """Pointwise bound int |f(y)| |x - y|^(beta - n) dy with the singular cell
    dropped; valid off the support of f, where that cell contributes nothing."""
    grid = f.grid
    kern = _offset_kernel(grid, beta, 0.0)
    out = signal.fftconvolve(np.abs(f.values), kern, mode="same")
    return np.maximum(out, 0.0)


def sobolev_exponent(q1: ExponentFunction, beta: float, dimension: int) -> ExponentFunction:
    """Target exponent q2 with 1/q1(x) - 1/q2(x) = beta/n."""
    if beta == 0.0:
        return q1
    if not 0.0 < beta < dimension / q1.q_plus:
        raise ValueError(
            f"beta must lie in (0, n/q+) = (0, {dimension / q1.q_plus:g}) to keep the "
            f"target exponent admissible, got {beta:g}"
        )
    lift = lambda v: 1.0 / (1.0 / v - beta / dimension)  # noqa: E731
    if q1.kind == "constant":
        return constant_exponent(lift(q1.params["value"]), q1.domain_radius)
    if q1.kind == "piecewise-constant":
        return piecewise_exponent(
            lift(q1.params["left"]), lift(q1.params["right"]), q1.domain_radius
        )

    def ev(coords, radii):
        vals = q1.evaluate(coords, radii)
        return 1.0 / (1.0 / vals - beta / dimension)

    q_minus = lift(q1.q_minus)
    q_plus = lift(q1.q_plus)
    return ExponentFunction(
        q1.kind,
        ev,
        q_minus,
        q_plus,
        q1.domain_radius,
        f"sobolev({q1.label},beta={beta:g})",
    )


def support_annulus(f: SampledFunction) -> int:
    """Index k with supp f inside A_k; raises when the support spans annuli."""
    rho = f.grid.radii[f.flat != 0.0]
    if rho.size == 0:
        raise ValueError("zero function has no support annulus")
    ks = np.unique(np.ceil(np.log2(rho) - 1e-12).astype(int))
    if ks.size > 1:
        raise ValueError(f"support spans multiple annuli: {ks.tolist()}")
    return int(ks[0])


@dataclass(frozen=True)
class SizeConditionReport:
    """Smallest constant fitting a pointwise size bound over a zone of points."""

    condition: str
    beta: float
    k: int
    c_estimate: float
    worst_point: tuple
    zone_points: int


def estimate_size_constant(
    handle: OperatorHandle,
    f: SampledFunction,
    condition: str,
    k: int | None = None,
    image: SampledFunction | None = None,
) -> SizeConditionReport:
    """Fit |Tf(x)| <= C * envelope(x) over the zone the condition names.

    Conditions for f supported in the annulus A_k:
      outer  - envelope |x|^(beta-n) ||f||_1 on |x| >= 2^(k+1)
      inner  - envelope 2^(k(beta-n)) ||f||_1 on |x| <= 2^(k-2)
      kernel - envelope int |f(y)| |x-y|^(beta-n) dy at x off the support
    """
    grid = f.grid
    n = grid.dimension
    beta = handle.beta
    if k is None:
        k = support_annulus(f)
    else:
        rho = grid.radii[f.flat != 0.0]
        if rho.size and (np.any(rho <= 2.0 ** (k - 1)) or np.any(rho > 2.0**k)):
            raise ValueError(f"support not inside the annulus 2^{k - 1} < |x| <= 2^{k}")

    tf = image if image is not None else handle(f)
    tvals = np.abs(tf.flat)
    mass = l1_norm(f)

    if condition == "outer":
        zone = grid.radii >= 2.0 ** (k + 1)
        envelope = grid.radii ** (beta - n) * mass
    elif condition == "inner":
        zone = grid.radii <= 2.0 ** (k - 2)
        envelope = np.full(grid.size, 2.0 ** (k * (beta - n)) * mass)
    elif condition == "kernel":
        zone = f.flat == 0.0
        envelope = kernel_envelope(f, beta).reshape(-1)
    else:
        raise ValueError(f"unknown size condition {condition!r}")

    if mass == 0.0:
        return SizeConditionReport(condition, beta, k, 0.0, (), int(np.count_nonzero(zone)))
    zone &= envelope > 0.0
    if not np.any(zone):
        raise ValueError(f"zone for condition {condition!r} is empty on this grid")

    ratios = np.where(zone, tvals / np.where(zone, envelope, 1.0), 0.0)
    arg = int(np.argmax(ratios))
    worst = tuple(np.round(grid.coords[arg], 12).tolist())
    return SizeConditionReport(
        condition=condition,
        beta=beta,
        k=int(k),
        c_estimate=float(ratios[arg]),
        worst_point=worst,
        zone_points=int(np.count_nonzero(zone)),
    )


# --- named operator registry -------------------------------------------------

_REGISTRY: dict[str, Callable[..., OperatorHandle]] = {}


def register_operator(name, factory):
    """Register a handle factory; user operators verify like built-ins."""
    _REGISTRY[name] = factory


def registered_operators():
    return sorted(_REGISTRY)


def get_operator(name, **kwargs) -> OperatorHandle:
    if name not in _REGISTRY:
        raise ValueError(f"unknown operator {name!r}; known: {registered_operators()}")
    return _REGISTRY[name](**kwargs)


def _apply_maximal(f, handle):
    return _ball_average_sup(f, 0.0, handle.normalization, handle.centering)


def _apply_fractional_maximal(f, handle):
    if not 0.0 < handle.beta < f.grid.dimension:
        raise ValueError(f"beta must lie in (0, n), got {handle.beta:g}")
    return _ball_average_sup(f, handle.beta, handle.normalization, handle.centering)


def _apply_fractional_integral(f, handle):
    return fractional_integral(f, handle.beta)


register_operator(
    "maximal",
    lambda normalization="radius-power", centering="centered", **_: OperatorHandle(
        "maximal", 0.0, normalization, centering, _apply_maximal
    ),
)
register_operator(
    "fractional-maximal",
    lambda beta=0.5, normalization="volume-fraction", centering="centered", **_: OperatorHandle(
        "fractional-maximal", float(beta), normalization, centering, _apply_fractional_maximal
    ),
)
register_operator(
    "ibeta",
    lambda beta=0.5, **_: OperatorHandle(
        "ibeta", float(beta), "volume-fraction", "centered", _apply_fractional_integral,
        claimed_conditions=("outer", "inner", "kernel"),
    ),
)
register_operator(
    "identity",
    lambda **_: OperatorHandle("identity", 0.0, "radius-power", "centered", lambda f, h: f),
)
register_operator(
    "zero",
    lambda **_: OperatorHandle(
        "zero", 0.0, "radius-power", "centered", lambda f, h: 0.0 * f
    ),
)
