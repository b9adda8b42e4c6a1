"""Numerical verification harness for the norm and operator inequalities.

Each statement becomes a parameterized sweep producing an InequalityReport:
per-case (lhs, rhs, ratio) rows, the largest fitted constant, a stability flag
(the constant moves < 25% when the sweep widens), and, where a parameter
window applies, an admissibility flag.  Constants in the inequalities are
existential, so divergence under widening - not magnitude - is the
falsifiable content at desk scale.

All sweeps are seeded and sequential: identical inputs give identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponent import ExponentFunction, check_log_holder, conjugate_exponent
from .norms import (
    HerzMorreyParams,
    annulus_norms,
    herz_morrey_detail,
    luxemburg_norm,
    modular,
)
from .operators import (
    OperatorHandle,
    estimate_size_constant,
    sobolev_exponent,
)
from .sampling import (
    Grid,
    SampledFunction,
    annulus_indicator,
    ball_indicator,
    integrate,
    radial_bump,
)

__all__ = [
    "InequalityReport",
    "DeltaEstimate",
    "AnnulusDecomposition",
    "random_test_function",
    "generalized_holder_constant",
    "verify_holder",
    "verify_duality",
    "estimate_delta",
    "verify_ball_norm_product",
    "verify_ball_sobolev_scaling",
    "verify_fractional_lebesgue",
    "verify_maximal_lebesgue",
    "verify_herz_morrey_sublinear",
    "verify_herz_morrey_fractional",
    "decompose_annulus_terms",
]

STABILITY_TOLERANCE = 0.25


@dataclass
class InequalityReport:
    """Outcome of one verification sweep."""

    statement_id: str
    params: dict
    cases: list = field(default_factory=list)
    c_estimate: float = 0.0
    stable: bool | None = None
    admissible: bool | None = None
    passed: bool = True
    notes: dict = field(default_factory=dict)

    def add_case(self, descriptor, lhs, rhs):
        lhs, rhs = float(lhs), float(rhs)
        ratio = lhs / rhs if rhs != 0.0 else (0.0 if lhs == 0.0 else float("inf"))
        self.cases.append(
            {
                "case": len(self.cases),
                "descriptor": descriptor,
                "lhs": lhs,
                "rhs": rhs,
                "ratio": ratio,
            }
        )
        return ratio

    def finalize_c(self):
        self.c_estimate = max((c["ratio"] for c in self.cases), default=0.0)
        return self.c_estimate

    def to_dict(self):
        return {
            "statement_id": self.statement_id,
            "params": self.params,
            "cases": self.cases,
            "c_estimate": self.c_estimate,
            "stable": self.stable,
            "admissible": self.admissible,
            "passed": self.passed,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class DeltaEstimate:
    """Fitted decay exponent of indicator-norm ratios over nested dyadic balls."""

    delta: float
    fit_residual: float
    window: str
    window_sup: float
    in_window: bool
    n_pairs: int
    beta: float


@dataclass(frozen=True)
class AnnulusDecomposition:
    """The three-group splitting of an operator image's Herz-Morrey norm."""

    inner_sources: float
    near_diagonal: float
    outer_sources: float
    image_norm_p: float
    c_ratio: float
    inner_empty: bool
    outer_empty: bool


def _is_stable(base, extended):
    scale = max(abs(base), 1e-300)
    return bool(abs(extended - base) <= STABILITY_TOLERANCE * scale)


def random_test_function(grid: Grid, rng, k_lo=None, k_hi=None) -> SampledFunction:
    """Nonnegative mix of annulus indicators and radial bumps.

    Supports stay inside [2^(k_min+1), 2^(k_max-1)] so dyadic truncation is
    exact for every draw.
    """
    if k_lo is None:
        k_lo = grid.k_min + 2
    if k_hi is None:
        k_hi = grid.k_max - 1
    if k_lo > k_hi:
        raise ValueError("grid too narrow for the randomized family")
    vals = np.zeros(grid.size)
    for k in range(k_lo, k_hi + 1):
        if rng.random() < 0.5:
            vals += rng.uniform(0.2, 2.0) * grid.annulus_mask(k)
        if rng.random() < 0.35:
            vals += rng.uniform(0.2, 2.0) * radial_bump(grid, k).flat
    if not vals.any():
        k = int(rng.integers(k_lo, k_hi + 1))
        vals += grid.annulus_mask(k).astype(float)
    return SampledFunction(grid, vals.reshape(grid.shape))


def generalized_holder_constant(q: ExponentFunction) -> float:
    """r_q = 1 + 1/q_minus - 1/q_plus."""
    return 1.0 + 1.0 / q.q_minus - 1.0 / q.q_plus


def verify_holder(q: ExponentFunction, grid: Grid, trials=40, seed=0) -> InequalityReport:
    """Check int |fg| <= r_q ||f||_q ||g||_q' on randomized pairs."""
    rng = np.random.default_rng(seed)
    qc = conjugate_exponent(q)
    r_q = generalized_holder_constant(q)
    report = InequalityReport(
        "holder", {"q": q.label, "r_q": r_q, "trials": trials, "seed": seed}
    )
    ratios = []
    for i in range(2 * trials):
        f = random_test_function(grid, rng)
        g = random_test_function(grid, rng)
        lhs = integrate(abs(f * g))
        rhs = r_q * luxemburg_norm(f, q) * luxemburg_norm(g, qc)
        ratios.append(report.add_case({"trial": i}, lhs, rhs))
    report.finalize_c()
    base = max(ratios[:trials])
    report.stable = _is_stable(base, report.c_estimate)
    report.notes["c_at_half"] = base
    report.passed = report.c_estimate <= 1.0 + 1e-9
    return report


def verify_duality(q: ExponentFunction, grid: Grid, trials=30, seed=0) -> InequalityReport:
    """Witness check of ||f||_q <= sup{ int |fg| : ||g||_q' <= 1 }.

    The supremum is approached from below by a witness family (the pointwise
    power |f|^(q-1) and annulus indicators, normalized in the dual norm), so
    the check is a 5% lower-bound test, not an exact supremum.
    """
    rng = np.random.default_rng(seed)
    qc = conjugate_exponent(q)
    report = InequalityReport(
        "duality", {"q": q.label, "trials": trials, "seed": seed, "tolerance": 0.05}
    )
    qvals = None if q.is_constant else q.on_grid(grid).reshape(-1)
    for i in range(trials):
        f = random_test_function(grid, rng)
        norm_f = luxemburg_norm(f, q)
        fv = f.flat / norm_f
        exps = (q.params["value"] if q.is_constant else qvals) - 1.0
        candidates = [np.where(fv > 0.0, fv**exps, 0.0)]
        for k in range(grid.k_min + 2, grid.k_max):
            if np.any(f.flat[grid.annulus_mask(k)] != 0.0):
                candidates.append(grid.annulus_mask(k).astype(float))
        best = 0.0
        for cand in candidates:
            g = SampledFunction(grid, cand.reshape(grid.shape))
            gn = luxemburg_norm(g, qc)
            if gn == 0.0:
                continue
            pairing = integrate(abs(f * g)) / gn
            best = max(best, pairing)
        report.add_case({"trial": i}, norm_f, best)
    report.finalize_c()
    report.passed = report.c_estimate <= 1.0 / 0.95 + 1e-9
    report.stable = True
    return report


def _resolvable_ball_range(grid: Grid, min_points=8):
    ks = [k for k in range(grid.k_min - 4, grid.k_max + 1) if 2.0**k <= grid.radius]
    return [k for k in ks if grid.ball_points(k) >= min_points]


def estimate_delta(
    q: ExponentFunction, grid: Grid, role="primal", beta=0.0, k_list=None
) -> DeltaEstimate:
    """Least-squares decay exponent delta of ||chi_S|| / ||chi_B|| ratios.

    Sweeps nested dyadic balls S = B_j inside B = B_k and fits
    log(norm ratio) against log(measure ratio).  Roles:

      primal    - ratios in the exponent mapped by the order beta
                  (beta = 0: q itself); window top 1/q_plus
      conjugate - ratios in the conjugate source exponent q';
                  window top 1 - 1/(target q)_minus

    With beta = 0 the two roles are the subset-ratio constants of the plain
    sublinear theorem; with beta > 0 they are the fractional ones.
    """
    n = grid.dimension
    q_target = sobolev_exponent(q, beta, n)
    if role == "primal":
        w = q_target
        window_sup = 1.0 / q.q_plus
    elif role == "conjugate":
        w = conjugate_exponent(q)
        window_sup = 1.0 - 1.0 / q_target.q_minus
    else:
        raise ValueError(f"unknown delta role {role!r}")

    if k_list is None:
        k_list = _resolvable_ball_range(grid)
    if len(k_list) < 3:
        raise ValueError("need at least 3 resolvable balls to fit delta")

    log_norm = {}
    log_measure = {}
    for k in k_list:
        ball = ball_indicator(grid, k)
        log_norm[k] = np.log(luxemburg_norm(ball, w))
        log_measure[k] = np.log(integrate(ball))

    xs, ys = [], []
    for i, j_small in enumerate(k_list):
        for k_big in k_list[i + 1 :]:
            xs.append(log_measure[j_small] - log_measure[k_big])
            ys.append(log_norm[j_small] - log_norm[k_big])
    xs = np.array(xs)
    ys = np.array(ys)
    design = np.stack([xs, np.ones_like(xs)], axis=1)
    (delta, intercept), *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = float(np.sqrt(np.mean((ys - delta * xs - intercept) ** 2)))
    delta = float(delta)
    return DeltaEstimate(
        delta=delta,
        fit_residual=resid,
        window=f"{role}@beta={beta:g}",
        window_sup=float(window_sup),
        in_window=bool(0.0 < delta < window_sup),
        n_pairs=xs.size,
        beta=float(beta),
    )


def verify_ball_norm_product(
    q: ExponentFunction, grid: Grid, k_list=None, spread_limit=10.0
) -> InequalityReport:
    """Two-sided check of |B|^-1 ||chi_B||_q ||chi_B||_q' across dyadic balls."""
    qc = conjugate_exponent(q)
    if k_list is None:
        k_list = _resolvable_ball_range(grid)
    report = InequalityReport(
        "ball-product", {"q": q.label, "k_list": list(k_list), "spread_limit": spread_limit}
    )
    products = []
    for k in k_list:
        ball = ball_indicator(grid, k)
        product = luxemburg_norm(ball, q) * luxemburg_norm(ball, qc)
        measure = integrate(ball)
        products.append(report.add_case({"k": k}, product, measure))
    report.finalize_c()
    spread = max(products) / min(products)
    report.notes["spread"] = spread
    report.passed = spread <= spread_limit
    report.stable = True
    return report


def verify_ball_sobolev_scaling(
    q1: ExponentFunction, beta: float, grid: Grid, k_list=None, spread_limit=10.0
) -> InequalityReport:
    """Check ||chi_Bk||_q2 <= C 2^(-k beta) ||chi_Bk||_q1 with C stable in k."""
    n = grid.dimension
    q2 = sobolev_exponent(q1, beta, n)
    if k_list is None:
        k_list = _resolvable_ball_range(grid)
    report = InequalityReport(
        "ball-sobolev-scaling",
        {"q1": q1.label, "q2": q2.label, "beta": beta, "k_list": list(k_list)},
    )
    ratios = []
    for k in k_list:
        ball = ball_indicator(grid, k)
        lhs = luxemburg_norm(ball, q2)
        rhs = 2.0 ** (-k * beta) * luxemburg_norm(ball, q1)
        ratios.append(report.add_case({"k": k}, lhs, rhs))
    report.finalize_c()
    spread = max(ratios) / min(ratios)
    report.notes["spread"] = spread
    report.passed = spread <= spread_limit
    report.stable = True
    return report


def verify_fractional_lebesgue(
    q1: ExponentFunction, beta: float, operator: OperatorHandle, grid: Grid, trials=20, seed=0
) -> InequalityReport:
    """Ratio sweep for ||T_beta f||_q2 <= C ||f||_q1 on randomized inputs."""
    n = grid.dimension
    q2 = sobolev_exponent(q1, beta, n)
    rng = np.random.default_rng(seed)
    report = InequalityReport(
        "lebesgue-fractional",
        {"q1": q1.label, "q2": q2.label, "beta": beta, "operator": operator.name,
         "trials": trials, "seed": seed},
    )
    lh = check_log_holder(q1, dimension=n)
    report.notes["log_holder"] = {"c_local": lh.c_local, "c_decay": lh.c_decay}
    ratios = []
    for i in range(2 * trials):
        f = random_test_function(grid, rng)
        lhs = luxemburg_norm(_clip_to_ball(operator(f)), q2)
        rhs = luxemburg_norm(f, q1)
        ratios.append(report.add_case({"trial": i}, lhs, rhs))
    report.finalize_c()
    base = max(ratios[:trials])
    report.stable = _is_stable(base, report.c_estimate)
    report.notes["c_at_half"] = base
    report.admissible = bool(lh.local_satisfied and lh.decay_satisfied)
    report.passed = bool(np.isfinite(report.c_estimate) and report.stable)
    return report


def verify_maximal_lebesgue(
    q: ExponentFunction, operator: OperatorHandle, grid: Grid, trials=20, seed=0
) -> InequalityReport:
    """Boundedness ratios of the maximal operator for both q and its conjugate.

    Finite stable ratios for the pair are the empirical witness that the
    boundedness class is closed under conjugation.
    """
    rng = np.random.default_rng(seed)
    qc = conjugate_exponent(q)
    report = InequalityReport(
        "lebesgue-maximal",
        {"q": q.label, "operator": operator.name, "trials": trials, "seed": seed},
    )
    per_exponent = {}
    for tag, w in (("primal", q), ("conjugate", qc)):
        ratios = []
        for i in range(2 * trials):
            f = random_test_function(grid, rng)
            lhs = luxemburg_norm(_clip_to_ball(operator(f)), w)
            rhs = luxemburg_norm(f, w)
            ratios.append(report.add_case({"trial": i, "exponent": tag}, lhs, rhs))
        per_exponent[tag] = {"c": max(ratios), "c_at_half": max(ratios[:trials])}
    report.finalize_c()
    report.stable = all(
        _is_stable(v["c_at_half"], v["c"]) for v in per_exponent.values()
    )
    report.notes["per_exponent"] = per_exponent
    report.passed = bool(np.isfinite(report.c_estimate) and report.stable)
    return report


def _clip_to_ball(f: SampledFunction) -> SampledFunction:
    """Zero out mass beyond the largest dyadic ball (box corners at n = 2)."""
    outside = f.grid.radii > 2.0**f.grid.k_max
    if not np.any(outside & (f.flat != 0.0)):
        return f
    vals = np.where(outside, 0.0, f.flat)
    return SampledFunction(f.grid, vals.reshape(f.grid.shape))


def admissible_alpha_window(q1, beta, lam, grid):
    """Window (lam - n*delta_primal, lam + n*delta_conjugate) from fitted deltas."""
    n = grid.dimension
    d_primal = estimate_delta(q1, grid, role="primal", beta=beta)
    d_conj = estimate_delta(q1, grid, role="conjugate", beta=beta)
    lo = lam - n * d_primal.delta
    hi = lam + n * d_conj.delta
    return (lo, hi), d_primal, d_conj


def _herz_sweep(
    operator: OperatorHandle,
    q1: ExponentFunction,
    beta: float,
    alpha: float,
    lam: float,
    p1: float,
    p2: float,
    grid: Grid,
    trials: int,
    seed: int,
    statement_id: str,
) -> InequalityReport:
    n = grid.dimension
    q2 = sobolev_exponent(q1, beta, n)
    if p1 > p2:
        raise ValueError("needs p1 <= p2")
    if lam <= 0:
        raise ValueError("needs lambda > 0; use the Herz norm for lambda = 0")
    src = HerzMorreyParams(alpha=alpha, lam=lam, p=p1, q=q1)
    dst = HerzMorreyParams(alpha=alpha, lam=lam, p=p2, q=q2)
    report = InequalityReport(
        statement_id,
        {
            "operator": operator.name, "q1": q1.label, "q2": q2.label, "beta": beta,
            "alpha": alpha, "lambda": lam, "p1": p1, "p2": p2,
            "trials": trials, "seed": seed,
        },
    )

    (lo, hi), d_primal, d_conj = admissible_alpha_window(q1, beta, lam, grid)
    report.admissible = bool(lo < alpha < hi)
    report.notes["alpha_window"] = [lo, hi]
    report.notes["delta_primal"] = d_primal.delta
    report.notes["delta_conjugate"] = d_conj.delta

    # size-condition precheck on a mid-range annulus indicator
    k_mid = (grid.k_min + grid.k_max) // 2
    probe = annulus_indicator(grid, k_mid)
    probe_image = _clip_to_ball(operator(probe))
    for condition in ("outer", "inner"):
        sc = estimate_size_constant(operator, probe, condition, k=k_mid, image=probe_image)
        report.notes[f"size_{condition}"] = sc.c_estimate
        if not np.isfinite(sc.c_estimate):
            report.passed = False

    # cutoff sweep doubled in width; the base norm reads the middle slice
    k_lo, k_hi = grid.k_min, grid.k_max
    width = k_hi - k_lo + 1
    window = (k_lo - (width + 1) // 2, k_hi + width // 2)

    rng = np.random.default_rng(seed)
    base_ratios = []
    wide_ratios = []
    for i in range(trials):
        f = random_test_function(grid, rng)
        image = _clip_to_ball(operator(f))
        num = herz_morrey_detail(image, dst, k0_window=window)
        den = herz_morrey_detail(f, src, k0_window=window)
        mid = slice(k_lo - window[0], k_lo - window[0] + width)
        num_base = max(num.cutoff_values[mid])
        den_base = max(den.cutoff_values[mid])
        num_wide = max(num.cutoff_values)
        den_wide = max(den.cutoff_values)
        base_ratios.append(report.add_case({"trial": i}, num_base, den_base))
        wide_ratios.append(num_wide / den_wide if den_wide else 0.0)
    report.finalize_c()
    c_wide = max(wide_ratios)
    report.stable = _is_stable(report.c_estimate, c_wide)
    report.notes["c_wide_cutoff"] = c_wide
    report.passed = bool(
        report.passed and np.isfinite(report.c_estimate) and report.stable
    )
    return report


def verify_herz_morrey_sublinear(
    operator: OperatorHandle,
    params: HerzMorreyParams,
    grid: Grid,
    trials=50,
    seed=0,
) -> InequalityReport:
    """Boundedness sweep of a sublinear operator on one Herz-Morrey space."""
    return _herz_sweep(
        operator, params.q, 0.0, params.alpha, params.lam, params.p, params.p,
        grid, trials, seed, "herz-morrey-sublinear",
    )


def verify_herz_morrey_fractional(
    operator: OperatorHandle,
    q1: ExponentFunction,
    beta: float,
    alpha: float,
    lam: float,
    p1: float,
    p2: float,
    grid: Grid,
    trials=50,
    seed=0,
) -> InequalityReport:
    """Boundedness sweep from the source to the order-beta target space.

    With beta = 0 this runs the plain sublinear sweep case for case.
    """
    if beta > 0.0:
        operator.check_pairing(q1, grid.dimension)
    return _herz_sweep(
        operator, q1, beta, alpha, lam, p1, p2, grid, trials, seed,
        "herz-morrey-fractional",
    )


def decompose_annulus_terms(
    operator: OperatorHandle,
    f: SampledFunction,
    params: HerzMorreyParams,
    target_q: ExponentFunction | None = None,
) -> AnnulusDecomposition:
    """Split the image norm into near-diagonal and far-field source groups.

    For each image annulus k the sources j <= k-2 (inner), j in {k-1,k,k+1}
    (near), and j >= k+2 (outer) are re-summed with the full cutoff weights;
    sublinearity plus the three-way split bound the p-th power of the image
    norm by 3^max(p-1,0) times the group total.
    """
    grid = f.grid
    q_img = target_q if target_q is not None else params.q
    k_lo, k_hi = params.resolve_range(grid)
    ks = list(range(k_lo, k_hi + 1))
    restrictions = {}
    for j in ks:
        mask = grid.annulus_mask(j).reshape(grid.shape)
        restrictions[j] = SampledFunction(grid, np.where(mask, f.values, 0.0))

    images = {j: _clip_to_ball(operator(restrictions[j])) for j in ks}
    image_norms = {j: annulus_norms(images[j], q_img, k_lo, k_hi) for j in ks}

    inner = np.zeros(len(ks))
    near = np.zeros(len(ks))
    outer = np.zeros(len(ks))
    inner_any = False
    outer_any = False
    for idx, k in enumerate(ks):
        for j in ks:
            norm_jk = image_norms[j][idx]
            if j <= k - 2:
                inner[idx] += norm_jk
                inner_any = True
            elif j >= k + 2:
                outer[idx] += norm_jk
                outer_any = True
        near_src = sum(
            (restrictions[j] for j in ks if k - 1 <= j <= k + 1),
            start=SampledFunction(grid, np.zeros(grid.shape)),
        )
        if not near_src.is_zero():
            near_image = _clip_to_ball(operator(near_src))
            near[idx] = annulus_norms(near_image, q_img, k, k)[0]

    def group_value(sums):
        terms = 2.0 ** (np.array(ks) * params.alpha * params.p) * sums**params.p
        partial = np.cumsum(terms)
        k0s = np.array(ks, dtype=float)
        return float(np.max(2.0 ** (-k0s * params.lam * params.p) * partial))

    e_inner = group_value(inner)
    e_near = group_value(near)
    e_outer = group_value(outer)

    image_full = _clip_to_ball(operator(f))
    image_norm_p = herz_morrey_detail(image_full, HerzMorreyParams(
        alpha=params.alpha, lam=params.lam, p=params.p, q=q_img
    )).value ** params.p
    total = e_inner + e_near + e_outer
    c_ratio = image_norm_p / total if total > 0.0 else 0.0
    return AnnulusDecomposition(
        inner_sources=e_inner,
        near_diagonal=e_near,
        outer_sources=e_outer,
        image_norm_p=image_norm_p,
        c_ratio=c_ratio,
        inner_empty=not inner_any,
        outer_empty=not outer_any,
    )
