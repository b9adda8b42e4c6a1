"""Modular, Luxemburg, and Herz / Herz-Morrey norms on sampled functions.

The Luxemburg norm inf{eta > 0 : modular(f/eta) <= 1} is computed by bracket
doubling plus bisection; the modular is strictly decreasing in eta wherever f
is nonzero, so the root is simple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponent import ExponentFunction
from .sampling import Grid, SampledFunction, annulus_restrict, integrate, l1_norm

__all__ = [
    "HerzMorreyParams",
    "ModularCurve",
    "HerzMorreyDetail",
    "modular",
    "luxemburg_norm",
    "luxemburg_norm_with_curve",
    "l1_norm",
    "herz_morrey_norm",
    "herz_morrey_detail",
    "herz_norm",
    "annulus_norms",
]

BISECT_REL_TOL = 1e-10
BISECT_MAX_ITER = 200
TAIL_WARN_FRACTION = 1e-6


@dataclass(frozen=True)
class HerzMorreyParams:
    """Parameters (alpha, lambda, p, q) of a Herz-Morrey space on a dyadic range."""

    alpha: float
    lam: float
    p: float
    q: ExponentFunction
    k_range: tuple[int, int] | None = None

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError("p must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")

    def resolve_range(self, grid: Grid):
        if self.k_range is None:
            return grid.k_min, grid.k_max
        k_lo, k_hi = self.k_range
        if k_lo < grid.k_min or k_hi > grid.k_max or k_lo > k_hi:
            raise ValueError(
                f"k_range [{k_lo},{k_hi}] outside the grid's dyadic range "
                f"[{grid.k_min},{grid.k_max}]"
            )
        return int(k_lo), int(k_hi)


@dataclass
class ModularCurve:
    """(eta, modular) pairs recorded while solving for the Luxemburg norm."""

    evaluations: list = field(default_factory=list)
    bracket: tuple[float, float] | None = None

    def record(self, eta, value):
        self.evaluations.append((float(eta), float(value)))

    def sorted_curve(self):
        return sorted(self.evaluations)


def _modular_arrays(values, qvals, eta, cell_volume):
    if eta <= 0:
        raise ValueError("eta must be positive")
    with np.errstate(over="ignore"):
        total = np.sum((values / eta) ** qvals)
    return float(total * cell_volume)


def modular(f: SampledFunction, q: ExponentFunction, eta: float) -> float:
    """Quadrature of (|f(x)|/eta)^q(x) over the grid; nonincreasing in eta."""
    qvals = q.params["value"] if q.is_constant else q.on_grid(f.grid).reshape(-1)
    return _modular_arrays(np.abs(f.flat), qvals, eta, f.grid.cell_volume)


def _luxemburg_compact(values, qvals, cell_volume, box_volume, curve=None):
    """Luxemburg norm from the nonzero sample values and their exponents."""
    sup = float(np.max(values, initial=0.0))
    if sup == 0.0:
        return 0.0

    def rho(eta):
        val = _modular_arrays(values, qvals, eta, cell_volume)
        if curve is not None:
            curve.record(eta, val)
        return val

    hi = max(1.0, sup * box_volume)
    for _ in range(BISECT_MAX_ITER):
        if rho(hi) <= 1.0:
            break
        hi *= 2.0
    lo = hi / 2.0
    for _ in range(BISECT_MAX_ITER):
        if rho(lo) >= 1.0:
            break
        hi = lo
        lo /= 2.0
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if rho(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    if curve is not None:
        curve.bracket = (lo, hi)
    return hi


def luxemburg_norm(f: SampledFunction, q: ExponentFunction) -> float:
    """Luxemburg norm of f in the variable-exponent Lebesgue space of q."""
    nz = f.flat != 0.0
    if not np.any(nz):
        return 0.0
    values = np.abs(f.flat[nz])
    if q.is_constant:
        qvals = q.params["value"]
    else:
        qvals = q.on_grid(f.grid).reshape(-1)[nz]
    box_volume = (2.0 * f.grid.radius) ** f.grid.dimension
    return _luxemburg_compact(values, qvals, f.grid.cell_volume, box_volume)


def luxemburg_norm_with_curve(f: SampledFunction, q: ExponentFunction):
    """Luxemburg norm plus the recorded modular curve (for diagnostics)."""
    curve = ModularCurve()
    nz = f.flat != 0.0
    if not np.any(nz):
        return 0.0, curve
    values = np.abs(f.flat[nz])
    if q.is_constant:
        qvals = q.params["value"]
    else:
        qvals = q.on_grid(f.grid).reshape(-1)[nz]
    box_volume = (2.0 * f.grid.radius) ** f.grid.dimension
    norm = _luxemburg_compact(values, qvals, f.grid.cell_volume, box_volume, curve)
    return norm, curve


def annulus_norms(f: SampledFunction, q: ExponentFunction, k_lo: int, k_hi: int):
    """Luxemburg norms of the annulus restrictions f * chi_k, k in [k_lo, k_hi]."""
    grid = f.grid
    flat = np.abs(f.flat)
    qflat = None if q.is_constant else q.on_grid(grid).reshape(-1)
    box_volume = (2.0 * grid.radius) ** grid.dimension
    norms = []
    for k in range(k_lo, k_hi + 1):
        mask = grid.annulus_mask(k)
        vals = flat[mask]
        nz = vals != 0.0
        if not np.any(nz):
            norms.append(0.0)
            continue
        vals = vals[nz]
        qvals = q.params["value"] if qflat is None else qflat[mask][nz]
        norms.append(_luxemburg_compact(vals, qvals, grid.cell_volume, box_volume))
    return np.array(norms)


@dataclass(frozen=True)
class HerzMorreyDetail:
    """Per-annulus and per-cutoff breakdown of a Herz-Morrey norm."""

    value: float
    k_lo: int
    k_hi: int
    annulus_norms: tuple
    cutoff_values: tuple
    argmax_k0: int
    tail_estimate: float
    tail_warning: bool
    central_mass_ignored: bool


def _cutoff_values(terms, k_lo, k_hi, lam, p, k0_lo=None, k0_hi=None):
    """Values 2^(-k0 lam) * (sum_{k<=k0} 2^(k alpha p) u_k^p)^(1/p) over cutoffs.

    Terms entering from outside [k_lo, k_hi] are zero by construction, so
    widening the cutoff window beyond the support never changes the supremum
    when lam > 0 and raises it to the full sum when lam = 0; both closures are
    realized inside [k_lo, k_hi].
    """
    if k0_lo is None:
        k0_lo = k_lo
    if k0_hi is None:
        k0_hi = k_hi
    partial = np.cumsum(terms)
    out = []
    for k0 in range(k0_lo, k0_hi + 1):
        idx = min(k0, k_hi) - k_lo
        s = partial[idx] if idx >= 0 else 0.0
        out.append(2.0 ** (-k0 * lam) * s ** (1.0 / p))
    return np.array(out)


def herz_morrey_detail(f: SampledFunction, params: HerzMorreyParams, k0_window=None):
    """Herz-Morrey norm with its full breakdown.

    ``k0_window`` optionally widens the cutoff sweep beyond the dyadic range
    (used by stability checks); the annulus sums themselves stay truncated at
    [k_lo, k_hi].
    """
    grid = f.grid
    k_lo, k_hi = params.resolve_range(grid)
    hole = grid.radii <= 2.0 ** (k_lo - 1)
    central_mass = bool(np.any(f.flat[hole] != 0.0))
    outside = grid.radii > 2.0**k_hi
    if np.any(f.flat[outside] != 0.0):
        raise ValueError(f"support leaks outside the ball of radius 2^{k_hi}")

    u = annulus_norms(f, params.q, k_lo, k_hi)
    ks = np.arange(k_lo, k_hi + 1)
    terms = 2.0 ** (ks * params.alpha * params.p) * u**params.p

    k0_lo, k0_hi = (k0_window if k0_window is not None else (k_lo, k_hi))
    values = _cutoff_values(terms, k_lo, k_hi, params.lam, params.p, k0_lo, k0_hi)
    arg = int(np.argmax(values))
    norm = float(values[arg])

    # tail below k_lo: exactly zero unless mass sits in the central hole, in
    # which case the geometric trend of the two lowest terms bounds it
    total = float(np.sum(terms))
    tail = 0.0
    if central_mass:
        if terms.size >= 2 and terms[0] > 0.0 and terms[1] > 0.0 and terms[0] < terms[1]:
            ratio = terms[0] / terms[1]
            tail = float(terms[0] * ratio / (1.0 - ratio))
        else:
            tail = float("inf")
    warn = bool(tail > TAIL_WARN_FRACTION * total)

    return HerzMorreyDetail(
        value=norm,
        k_lo=k_lo,
        k_hi=k_hi,
        annulus_norms=tuple(float(x) for x in u),
        cutoff_values=tuple(float(x) for x in values),
        argmax_k0=int(k0_lo + arg),
        tail_estimate=tail,
        tail_warning=warn,
        central_mass_ignored=central_mass,
    )


def herz_morrey_norm(f: SampledFunction, params: HerzMorreyParams) -> float:
    """Norm sup_{k0} 2^(-k0 lam) (sum_{k<=k0} 2^(k alpha p) ||f chi_k||^p)^(1/p)."""
    return herz_morrey_detail(f, params).value


def herz_norm(f: SampledFunction, alpha: float, p: float, q: ExponentFunction) -> float:
    """Herz norm: the lambda = 0 case of the Herz-Morrey norm, bit-identical."""
    return herz_morrey_norm(f, HerzMorreyParams(alpha=alpha, lam=0.0, p=p, q=q))
