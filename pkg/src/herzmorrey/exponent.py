"""Variable exponent functions q(.) on a centered box, with certified bounds.

An exponent is admissible when 1 < q_minus <= q_plus < infinity on the working
box [-R, R]^n.  All built-in families are closed-form radial (or half-space
piecewise) profiles, so q_minus / q_plus are exact rather than sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "ExponentFunction",
    "LogHolderReport",
    "make_exponent",
    "constant_exponent",
    "decay_exponent",
    "piecewise_exponent",
    "bump_exponent",
    "linear_exponent",
    "conjugate_exponent",
    "check_log_holder",
]

KINDS = ("constant", "piecewise-constant", "smooth-profile", "decay-profile")


class ExponentFunction:
    """A variable exponent q(.) with exact q_minus/q_plus over the working box.

    ``evaluate`` maps an array of points (shape (N, n) or radii for radial
    kinds) to exponent values.  Instances are immutable and safe to share.
    """

    def __init__(self, kind, evaluator, q_minus, q_plus, domain_radius, label, params=None):
        if kind not in KINDS:
            raise ValueError(f"unknown exponent kind {kind!r}")
        if not (1.0 < q_minus <= q_plus < np.inf):
            raise ValueError(
                f"exponent out of admissible class: needs 1 < essinf q <= esssup q < inf, "
                f"got q_minus={q_minus}, q_plus={q_plus}"
            )
        if domain_radius <= 0:
            raise ValueError("domain_radius must be positive")
        self.kind = kind
        self._evaluator = evaluator
        self.q_minus = float(q_minus)
        self.q_plus = float(q_plus)
        self.domain_radius = float(domain_radius)
        self.label = label
        self.params = dict(params or {})
        self._grid_cache: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"ExponentFunction({self.label}, q-={self.q_minus:g}, q+={self.q_plus:g})"

    @property
    def is_constant(self):
        return self.kind == "constant"

    def evaluate(self, coords, radii=None):
        """Exponent values at points given as coords (N, n) plus their radii."""
        if radii is None:
            coords = np.asarray(coords, dtype=float)
            radii = np.sqrt(np.sum(coords**2, axis=-1)) if coords.ndim > 1 else np.abs(coords)
        vals = self._evaluator(np.asarray(coords, dtype=float), np.asarray(radii, dtype=float))
        return np.asarray(vals, dtype=float)

    def on_grid(self, grid):
        """Exponent values at the grid midpoints (cached per grid)."""
        key = id(grid)
        vals = self._grid_cache.get(key)
        if vals is None:
            vals = self.evaluate(grid.coords, grid.radii).reshape(grid.shape)
            vals.flags.writeable = False
            self._grid_cache[key] = vals
        return vals

    def conjugate(self):
        return conjugate_exponent(self)


@dataclass(frozen=True)
class LogHolderReport:
    """Smallest constants fitting the local and decay log-Holder conditions."""

    c_local: float
    c_decay: float
    c_max: float
    local_satisfied: bool
    decay_satisfied: bool
    pairs_local: int
    pairs_decay: int


def constant_exponent(value, domain_radius=8.0):
    value = float(value)

    def ev(coords, radii):
        return np.full_like(radii, value)

    return ExponentFunction(
        "constant", ev, value, value, domain_radius, f"const:{value:g}", {"value": value}
    )


def decay_exponent(base=2.0, amplitude=1.0, domain_radius=8.0, dimension=1):
    """q(x) = base + amplitude / ln(e + |x|): radially decreasing from base+amplitude."""
    base, amplitude = float(base), float(amplitude)
    if amplitude <= 0:
        raise ValueError("amplitude must be positive; use constant_exponent otherwise")

    def ev(coords, radii):
        return base + amplitude / np.log(np.e + radii)

    # infimum sits at the box corner |x| = R*sqrt(n)
    r_far = domain_radius * np.sqrt(dimension)
    q_minus = base + amplitude / np.log(np.e + r_far)
    q_plus = base + amplitude
    return ExponentFunction(
        "decay-profile",
        ev,
        q_minus,
        q_plus,
        domain_radius,
        f"decay:{base:g}:{amplitude:g}",
        {"base": base, "amplitude": amplitude, "dimension": dimension},
    )


def piecewise_exponent(left=2.0, right=3.0, domain_radius=8.0):
    """Half-space piecewise constant: left for x1 < 0, right for x1 >= 0."""
    left, right = float(left), float(right)

    def ev(coords, radii):
        x1 = coords[..., 0] if coords.ndim > 1 else coords
        return np.where(x1 < 0, left, right)

    return ExponentFunction(
        "piecewise-constant",
        ev,
        min(left, right),
        max(left, right),
        domain_radius,
        f"piecewise:{left:g}:{right:g}",
        {"left": left, "right": right},
    )


def bump_exponent(base=2.0, amplitude=1.0, width=2.0, domain_radius=8.0, dimension=1):
    """Smooth radial bump: q(x) = base + amplitude * exp(-|x|^2 / (2 width^2))."""
    base, amplitude, width = float(base), float(amplitude), float(width)

    def ev(coords, radii):
        return base + amplitude * np.exp(-(radii**2) / (2.0 * width**2))

    r_far = domain_radius * np.sqrt(dimension)
    q_minus = base + amplitude * np.exp(-(r_far**2) / (2.0 * width**2))
    q_plus = base + amplitude
    return ExponentFunction(
        "smooth-profile",
        ev,
        q_minus,
        q_plus,
        domain_radius,
        f"bump:{base:g}:{amplitude:g}:{width:g}",
        {"base": base, "amplitude": amplitude, "width": width, "dimension": dimension},
    )


def linear_exponent(base=2.0, slope=0.25, domain_radius=8.0, dimension=1):
    """Radially growing profile q(x) = base + slope * |x| (violates decay control)."""
    base, slope = float(base), float(slope)

    def ev(coords, radii):
        return base + slope * radii

    r_far = domain_radius * np.sqrt(dimension)
    return ExponentFunction(
        "smooth-profile",
        ev,
        base,
        base + slope * r_far,
        domain_radius,
        f"linear:{base:g}:{slope:g}",
        {"base": base, "slope": slope, "dimension": dimension},
    )


_FAMILIES: dict[str, Callable] = {
    "const": constant_exponent,
    "constant": constant_exponent,
    "decay": decay_exponent,
    "piecewise": piecewise_exponent,
    "bump": bump_exponent,
    "linear": linear_exponent,
}


def make_exponent(spec, domain_radius=8.0, dimension=1):
    """Build an exponent from a descriptor.

    Accepts either a mapping {kind, parameters, domain_radius} or a compact
    string like ``const:2``, ``decay``, ``decay:2:0.5``, ``piecewise:2:3``,
    ``bump:2:1:2``, ``linear:2:0.25``.
    """
    if isinstance(spec, ExponentFunction):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        params = dict(spec.get("parameters", {}))
        radius = float(spec.get("domain_radius", domain_radius))
        if kind not in _FAMILIES:
            raise ValueError(f"unknown exponent family {kind!r}")
        fn = _FAMILIES[kind]
        if fn in (constant_exponent, piecewise_exponent):
            params.pop("dimension", None)
            return fn(domain_radius=radius, **params)
        return fn(domain_radius=radius, dimension=dimension, **params)
    if isinstance(spec, str):
        head, _, rest = spec.partition(":")
        if head not in _FAMILIES:
            raise ValueError(f"unknown exponent family {head!r}")
        args = [float(tok) for tok in rest.split(":") if tok != ""]
        fn = _FAMILIES[head]
        if fn in (constant_exponent, piecewise_exponent):
            return fn(*args, domain_radius=domain_radius)
        return fn(*args, domain_radius=domain_radius, dimension=dimension)
    if isinstance(spec, (int, float)):
        return constant_exponent(spec, domain_radius=domain_radius)
    raise TypeError(f"cannot build exponent from {type(spec).__name__}")


def conjugate_exponent(q: ExponentFunction) -> ExponentFunction:
    """Pointwise dual exponent q'(x) = q(x) / (q(x) - 1)."""
    dual = lambda v: v / (v - 1.0)  # noqa: E731
    if q.kind == "constant":
        return constant_exponent(dual(q.params["value"]), q.domain_radius)
    if q.kind == "piecewise-constant":
        return piecewise_exponent(
            dual(q.params["left"]), dual(q.params["right"]), q.domain_radius
        )

    def ev(coords, radii):
        vals = q.evaluate(coords, radii)
        return vals / (vals - 1.0)

    # sup/inf swap under the decreasing map t -> t/(t-1)
    q_minus = q.q_plus / (q.q_plus - 1.0)
    q_plus = q.q_minus / (q.q_minus - 1.0)
    return ExponentFunction(
        q.kind, ev, q_minus, q_plus, q.domain_radius, f"conjugate({q.label})"
    )


def _sample_in_box(rng, n_points, radius, dimension):
    return rng.uniform(-radius, radius, size=(n_points, dimension))


def check_log_holder(q: ExponentFunction, pair_budget=2000, seed=0, dimension=1):
    """Estimate the smallest constants in the two log-Holder conditions.

    Local condition: |q(x)-q(y)| <= C / (-ln|x-y|) for |x-y| <= 1/2.
    Decay condition: |q(x)-q(y)| <= C / ln(e+|x|) for |y| >= |x|.

    Pairs for the local condition are stratified by distance decade so the
    near-diagonal regime, where the bound is binding, is well represented.
    Zero-distance pairs are vacuous and skipped.
    """
    if pair_budget < 2:
        raise ValueError("degenerate pair set: pair_budget must be at least 2")
    rng = np.random.default_rng(seed)
    R = q.domain_radius
    n_local = pair_budget // 2
    n_decay = pair_budget - n_local

    # local pairs: log-uniform distances over [1e-5, 1/2], random directions
    decades = max(4, int(np.ceil(np.log10(0.5 / 1e-5))))
    per_decade = max(1, n_local // decades)
    c_local = 0.0
    pairs_local = 0
    for d in range(decades):
        lo = 0.5 * 10.0 ** (-(d + 1))
        hi = 0.5 * 10.0 ** (-d)
        dist = np.exp(rng.uniform(np.log(lo), np.log(hi), size=per_decade))
        x = _sample_in_box(rng, per_decade, R, dimension)
        direction = rng.normal(size=(per_decade, dimension))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        y = x + dist[:, None] * direction
        inside = np.all(np.abs(y) <= R, axis=1)
        x, y, dist = x[inside], y[inside], dist[inside]
        if x.size == 0:
            continue
        dq = np.abs(q.evaluate(x) - q.evaluate(y))
        c_local = max(c_local, float(np.max(dq * (-np.log(dist)), initial=0.0)))
        pairs_local += x.shape[0]

    # decay pairs: arbitrary box pairs ordered so |y| >= |x|
    x = _sample_in_box(rng, n_decay, R, dimension)
    y = _sample_in_box(rng, n_decay, R, dimension)
    rx = np.sqrt(np.sum(x**2, axis=1))
    ry = np.sqrt(np.sum(y**2, axis=1))
    swap = rx > ry
    rx_inner = np.where(swap, ry, rx)
    dq = np.abs(q.evaluate(x) - q.evaluate(y))
    c_decay = float(np.max(dq * np.log(np.e + rx_inner), initial=0.0))

    if pairs_local < 2 or n_decay < 2:
        raise ValueError("degenerate pair set after box rejection")
    if q.is_constant:
        c_local = 0.0
        c_decay = 0.0

    c_max = 50.0
    return LogHolderReport(
        c_local=c_local,
        c_decay=c_decay,
        c_max=c_max,
        local_satisfied=c_local <= c_max,
        decay_satisfied=c_decay <= c_max,
        pairs_local=pairs_local,
        pairs_decay=n_decay,
    )
