"""Minimize the transformed distance over shift, scale, or both.

The objective D(sigma, h) = d(sigma*F + h, G) is jointly convex in
(sigma, h) for the Mallows family, so each case has a reliable solver:

* Mallows r=1, shift: the minimizers over h form the median interval of
  the law of G^{-1}(U) - F^{-1}(U); for two samples this is a weighted
  median computed in exact integer arithmetic.
* Mallows r=2: weighted-least-squares closed forms.
* Other Mallows orders: golden-section search (convexity guarantees a
  valid bracket), or alternating coordinate descent for the joint case.
* K-S shift: the objective is piecewise constant with breakpoints among
  the pairwise differences y_j - x_i; all candidate plateaus are
  enumerated exactly.  The decrease-then-increase shape of the shift
  objective is checked as a diagnostic.  K-S scale is enumerated over
  candidate ratios; joint K-S minimization has no structure theorem and
  is solved best-effort by a refined grid scan, flagged as such.

Non-unique minimizers are reported as closed intervals and resolved by
the canonical selection rule: sigma0 = 1 when 1 is among the minimizing
scales (else the smallest one), then the shift of minimal absolute value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distance import (
    Metric,
    NonPositiveScale,
    _abs_affine_integrals,
    ks_objective_shift,
)
from .empirical import (
    Dist,
    EmpiricalDist,
    QuantileSegments,
    _spread,
    merged_grid,
    quantile_segments,
)

__all__ = [
    "DegenerateScale",
    "Transform",
    "SearchBounds",
    "AlignmentResult",
    "default_bounds",
    "canonical_select",
    "optimal_shift",
    "optimal_scale",
    "optimal_shift_scale",
    "profile_shift_curve",
    "profile_surface",
]

_GOLDEN_TOL = 1e-9
_ALTERNATE_TOL = 1e-10
_KS_JOINT_STEPS = 201
_KS_REFINE_ROUNDS = 6


class DegenerateScale(ValueError):
    """The scale parameter cannot be identified from the first distribution."""


@dataclass(frozen=True)
class Transform:
    """Location-scale map x -> sigma*x + h with sigma > 0."""

    sigma: float = 1.0
    h: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise NonPositiveScale(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class SearchBounds:
    """Finite search brackets: sigma_range = (sigma_min > 0, sigma_max), h_range."""

    sigma_range: tuple[float, float]
    h_range: tuple[float, float]

    def __post_init__(self):
        s_lo, s_hi = self.sigma_range
        h_lo, h_hi = self.h_range
        if not (0 < s_lo <= s_hi):
            raise ValueError("sigma_range must satisfy 0 < sigma_min <= sigma_max")
        if not h_lo <= h_hi:
            raise ValueError("h_range must be nonempty")


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    """Outcome of a one- or two-parameter alignment.

    ``optimal`` is the canonical transform; ``distance`` the objective
    there.  When the argmin set is an interval it is reported closed;
    the objective is constant on it (exactly so for K-S plateaus).
    """

    optimal: Transform
    distance: float
    metric: Metric
    argmin_h_interval: tuple[float, float] | None = None
    argmin_sigma_interval: tuple[float, float] | None = None
    evaluations: int = 0
    solver: str = ""
    notes: tuple[str, ...] = ()


def default_bounds(f: Dist, g: Dist) -> SearchBounds:
    """Data-driven brackets that provably contain the Mallows optima.

    The optimal shift is a generalized quantile of G^{-1}(U) - F^{-1}(U),
    hence inside [min(G)-max(F), max(G)-min(F)]; a full combined-range
    margin is added on both sides.  The scale bracket spans (1e-6,
    10 * max(1, spread(G)/spread(F))) with spread = IQR falling back to
    the full range.
    """
    span = max(f.support_max, g.support_max) - min(f.support_min, g.support_min)
    h_lo = g.support_min - f.support_max - span
    h_hi = g.support_max - f.support_min + span
    sigma_hi = 10.0 * max(1.0, _spread(g) / _spread(f))
    return SearchBounds((1e-6, sigma_hi), (h_lo, h_hi))


def _min_abs_in_interval(lo: float, hi: float) -> float:
    if lo <= 0.0 <= hi:
        return 0.0
    return lo if lo > 0.0 else hi


def canonical_select(sigma_interval, h_interval_for, sigma_floor: float = 0.0) -> Transform:
    """Canonical representative of an argmin set.

    Picks sigma0 = 1 when the sigma interval contains 1, otherwise its
    lower endpoint (raised to ``sigma_floor`` if needed); then the shift
    of minimal absolute value in the h-interval at sigma0.  Between two
    shifts of equal magnitude the positive one wins.

    Parameters
    ----------
    sigma_interval : (float, float)
        Closed interval of minimizing scales (equal endpoints for a point).
    h_interval_for : (float, float) or callable
        The h-interval, or a function mapping sigma to the h-interval of
        minimizers at that scale.
    """
    s_lo, s_hi = sigma_interval
    sigma0 = 1.0 if s_lo <= 1.0 <= s_hi else max(s_lo, sigma_floor)
    h_int = h_interval_for(sigma0) if callable(h_interval_for) else h_interval_for
    return Transform(sigma0, _min_abs_in_interval(*h_int))


def _golden_section(fn, lo: float, hi: float):
    """Golden-section minimum of a unimodal fn on [lo, hi].

    Terminates when the bracket is narrower than 1e-9 * (1 + initial
    width); returns (x, fn(x), evaluations).
    """
    if hi <= lo:
        return lo, fn(lo), 1
    tol = _GOLDEN_TOL * (1.0 + (hi - lo))
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    a, b = lo, hi
    c = a + invphi2 * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    evals = 2
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + invphi2 * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        evals += 1
    x = 0.5 * (a + b)
    return x, fn(x), evals + 1


# ---------------------------------------------------------------------------
# Mallows machinery on merged quantile segments


def _objective_on_segments(segs: QuantileSegments, sigma: float, h: float, r: float) -> float:
    c0 = sigma * segs.a0 + h - segs.b0
    c1 = sigma * segs.a1 - segs.b1
    return float(np.sum(_abs_affine_integrals(c0, c1, segs.u0, segs.u1, r))) ** (1.0 / r)


def _segment_moments(segs: QuantileSegments):
    """Exact first and second moments of the paired quantile functions."""
    u0, u1 = segs.u0, segs.u1
    w = u1 - u0
    mid = 0.5 * (u0 + u1)
    sq = (u0 * u0 + u0 * u1 + u1 * u1) / 3.0
    a0, a1, b0, b1 = segs.a0, segs.a1, segs.b0, segs.b1
    s1a = float(np.sum(w * (a0 + a1 * mid)))
    s1b = float(np.sum(w * (b0 + b1 * mid)))
    s2a = float(np.sum(w * (a0 * a0 + 2.0 * a0 * a1 * mid + a1 * a1 * sq)))
    sab = float(np.sum(w * (a0 * b0 + (a0 * b1 + a1 * b0) * mid + a1 * b1 * sq)))
    total = float(np.sum(w))
    return s1a, s1b, s2a, sab, total


def _grid_tick_sums(f: EmpiricalDist, g: EmpiricalDist):
    """Integer-weighted sums over the merged grid (single final division)."""
    grid = merged_grid(f, g)
    t = grid.tick_weights.astype(np.float64)
    a, b = grid.f_quantiles, grid.g_quantiles
    return (
        float(np.sum(t * a)),
        float(np.sum(t * b)),
        float(np.sum(t * a * a)),
        float(np.sum(t * a * b)),
        float(grid.ticks_total),
    )


def _median_interval_atoms(values: np.ndarray, tick_weights: np.ndarray, total: int):
    """Weighted-median interval of atoms, exact via integer cumulative weights."""
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = tick_weights[order]
    uniq, inverse = np.unique(v, return_inverse=True)
    agg = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(agg, inverse, w)
    cum = np.cumsum(agg)
    i = int(np.searchsorted(2 * cum, total, side="left"))
    lo = float(uniq[i])
    hi = float(uniq[i + 1]) if 2 * int(cum[i]) == total else lo
    return lo, hi


def _median_interval_mixture(u0, u1, c0, c1):
    """Median interval of the law of c(U) with c affine per segment.

    Zero-slope segments contribute atoms, sloped segments uniform pieces;
    the argmin set of h -> E|h - c(U)| is [lower median, upper median].
    """
    w = u1 - u0
    l0 = c0 + c1 * u0
    l1 = c0 + c1 * u1
    atom = c1 == 0.0
    av, aw = c0[atom], w[atom]
    plo = np.minimum(l0[~atom], l1[~atom])
    phi = np.maximum(l0[~atom], l1[~atom])
    pw = w[~atom]
    half = 0.5 * float(np.sum(w))

    def mass_leq(t: float) -> float:
        out = float(np.sum(aw[av <= t]))
        if pw.size:
            out += float(np.sum(pw * np.clip((t - plo) / (phi - plo), 0.0, 1.0)))
        return out

    def mass_lt(t: float) -> float:
        out = float(np.sum(aw[av < t]))
        if pw.size:
            out += float(np.sum(pw * np.clip((t - plo) / (phi - plo), 0.0, 1.0)))
        return out

    criticals = np.unique(np.concatenate([av, plo, phi]))

    # lower median: inf{t : P(c <= t) >= 1/2}
    lo = float(criticals[-1])
    prev, m_prev = None, 0.0
    for p in criticals.tolist():
        mlt = mass_lt(p)
        if prev is not None and m_prev < half <= mlt:
            lo = prev + (half - m_prev) * (p - prev) / (mlt - m_prev)
            break
        mle = mass_leq(p)
        if mle >= half:
            lo = p
            break
        prev, m_prev = p, mle

    # upper median: inf{t : P(c < t) > 1/2}
    hi = float(criticals[-1])
    prev, m_right = None, 0.0
    for p in criticals.tolist():
        if prev is not None and m_right > half:
            hi = prev
            break
        mlt = mass_lt(p)
        if prev is not None and mlt > half:
            hi = prev + (half - m_right) * (p - prev) / (mlt - m_right)
            break
        prev, m_right = p, mass_leq(p)
    else:
        hi = prev
    return lo, hi


def _shift_median_interval(f: Dist, g: Dist, segs: QuantileSegments, sigma: float = 1.0):
    """Argmin interval of h for the Mallows r=1 shift objective at fixed sigma."""
    if sigma == 1.0 and isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
        grid = merged_grid(f, g)
        return _median_interval_atoms(
            grid.g_quantiles - grid.f_quantiles, grid.tick_weights, grid.ticks_total
        )
    return _median_interval_mixture(
        segs.u0, segs.u1, segs.b0 - sigma * segs.a0, segs.b1 - sigma * segs.a1
    )


def _shift_bracket(segs: QuantileSegments, sigma: float):
    """Range of (G^{-1} - sigma F^{-1})(u); the optimal shift lies inside."""
    c0 = segs.b0 - sigma * segs.a0
    c1 = segs.b1 - sigma * segs.a1
    l0 = c0 + c1 * segs.u0
    l1 = c0 + c1 * segs.u1
    return float(min(l0.min(), l1.min())), float(max(l0.max(), l1.max()))


def _is_point_mass(dist: Dist) -> bool:
    return isinstance(dist, EmpiricalDist) and dist.values[0] == dist.values[-1]


# ---------------------------------------------------------------------------
# K-S enumeration


def _ks_shift_values(x: np.ndarray, y: np.ndarray, hs: np.ndarray) -> np.ndarray:
    """K-S distance between {x_i + h} and {y_j} for each h, exactly.

    Ranks of the shifted sample at its own points do not depend on h, so
    only cross-evaluations need searching.  Comparisons are done as
    x + h vs y and y - h vs x, which agree with real arithmetic whenever
    the additions are exact.
    """
    n, m = x.size, y.size
    hs = np.asarray(hs, dtype=np.float64)
    rx = np.searchsorted(x, x, side="right") / n
    gy = np.searchsorted(y, y, side="right") / m
    g_at_x = np.searchsorted(y, x[None, :] + hs[:, None], side="right") / m
    f_at_y = np.searchsorted(x, y[None, :] - hs[:, None], side="right") / n
    d1 = np.abs(rx[None, :] - g_at_x).max(axis=1)
    d2 = np.abs(f_at_y - gy[None, :]).max(axis=1)
    return np.maximum(d1, d2)


def _ks_shift_curve(f: Dist, g: Dist, hs: np.ndarray) -> np.ndarray:
    if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
        return _ks_shift_values(f.values, g.values, hs)
    return np.array([ks_objective_shift(f, g, float(h)) for h in hs])


def _plateau_runs(points: np.ndarray, values: np.ndarray):
    """Maximal runs of evaluation points attaining the global minimum."""
    vmin = values.min()
    idx = np.flatnonzero(values == vmin)
    runs = []
    start = idx[0]
    prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            runs.append((float(points[start]), float(points[prev])))
            start = i
        prev = i
    runs.append((float(points[start]), float(points[prev])))
    return float(vmin), runs


def _canonical_from_runs(runs):
    """Minimal-|h| representative across plateau runs; positive wins ties."""
    best_h, best_run = None, None
    for run in runs:
        cand = _min_abs_in_interval(*run)
        if (
            best_h is None
            or abs(cand) < abs(best_h)
            or (abs(cand) == abs(best_h) and cand > best_h)
        ):
            best_h, best_run = cand, run
    return best_h, best_run


def _structure_ok(values: np.ndarray) -> bool:
    """Never strictly increases before the global minimum plateau, never
    strictly decreases after it."""
    vmin = values.min()
    at_min = np.flatnonzero(values == vmin)
    first, last = at_min[0], at_min[-1]
    d = np.diff(values)
    return bool(np.all(d[:first] <= 0)) and bool(np.all(d[last:] >= 0))


def _ks_shift_enumerate(f: EmpiricalDist, g: EmpiricalDist, metric: Metric) -> AlignmentResult:
    x, y = f.values, g.values
    cands = np.unique((y[None, :] - x[:, None]).ravel())
    k = cands.size
    points = np.empty(2 * k + 1)
    points[0] = cands[0] - 1.0
    points[1::2] = cands
    points[2::2] = np.append(0.5 * (cands[:-1] + cands[1:]), cands[-1] + 1.0)
    values = _ks_shift_values(x, y, points)
    vmin, runs = _plateau_runs(points, values)
    h0, run = _canonical_from_runs(runs)
    notes = []
    if run[1] > run[0]:
        notes.append("canonical shift selected from a non-unique argmin plateau")
    if len(runs) > 1:
        notes.append(f"argmin set has {len(runs)} plateaus; reporting the canonical one")
    if not _structure_ok(values[1::2]):
        notes.append("diagnostic: shift objective violated decrease-then-increase shape")
    return AlignmentResult(
        optimal=Transform(1.0, h0),
        distance=vmin,
        metric=metric,
        argmin_h_interval=run,
        evaluations=points.size,
        solver="breakpoint-enumeration",
        notes=tuple(notes),
    )


def _ks_scale_values(x: np.ndarray, y: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    n, m = x.size, y.size
    rx = np.searchsorted(x, x, side="right") / n
    gy = np.searchsorted(y, y, side="right") / m
    out = np.empty(sigmas.size)
    for i, s in enumerate(sigmas.tolist()):
        sx = s * x
        d1 = np.abs(rx - np.searchsorted(y, sx, side="right") / m).max()
        d2 = np.abs(np.searchsorted(sx, y, side="right") / n - gy).max()
        out[i] = max(d1, d2)
    return out


def _ks_scale_enumerate(f: EmpiricalDist, g: EmpiricalDist, metric: Metric, bounds) -> AlignmentResult:
    s_lo, s_hi = bounds.sigma_range
    x, y = f.values, g.values
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = (y[None, :] / x[:, None]).ravel()
    ratios = ratios[np.isfinite(ratios) & (ratios > 0)]
    cands = np.unique(np.concatenate([ratios[(ratios >= s_lo) & (ratios <= s_hi)], [s_lo, s_hi]]))
    points = np.sort(np.concatenate([cands, 0.5 * (cands[:-1] + cands[1:])]))
    values = _ks_scale_values(x, y, points)
    vmin, runs = _plateau_runs(points, values)
    # canonical scale: 1 when some plateau contains it, else the smallest scale
    sigma0 = None
    for run in runs:
        if run[0] <= 1.0 <= run[1]:
            sigma0, chosen = 1.0, run
            break
    if sigma0 is None:
        chosen = min(runs, key=lambda r: r[0])
        sigma0 = chosen[0]
    notes = []
    if chosen[1] > chosen[0]:
        notes.append("canonical scale selected from a non-unique argmin plateau")
    if len(runs) > 1:
        notes.append(f"argmin set has {len(runs)} plateaus; reporting the canonical one")
    return AlignmentResult(
        optimal=Transform(sigma0, 0.0),
        distance=vmin,
        metric=metric,
        argmin_sigma_interval=chosen,
        evaluations=points.size,
        solver="breakpoint-enumeration",
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Public solvers


def optimal_shift(f: Dist, g: Dist, metric: Metric, bounds: SearchBounds | None = None) -> AlignmentResult:
    """Minimize d(F + h, G) over the shift h.

    Mallows r=1 returns the exact weighted-median interval, r=2 the exact
    mean difference, other orders a golden-section search; K-S enumerates
    the piecewise-constant plateaus of the objective.
    """
    bounds = bounds if bounds is not None else default_bounds(f, g)
    if metric.kind == "ks":
        if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
            return _ks_shift_enumerate(f, g, metric)
        h_lo, h_hi = bounds.h_range
        h0, dist, evals = _golden_section(lambda h: ks_objective_shift(f, g, h), h_lo, h_hi)
        return AlignmentResult(
            optimal=Transform(1.0, h0),
            distance=dist,
            metric=metric,
            evaluations=evals,
            solver="golden-section",
            notes=("plateau endpoints not resolved for continuous K-S inputs",),
        )
    r = metric.r
    segs = quantile_segments(f, g)
    if r == 1.0:
        lo, hi = _shift_median_interval(f, g, segs)
        h0 = _min_abs_in_interval(lo, hi)
        dist = _objective_on_segments(segs, 1.0, h0, 1.0)
        notes = ("canonical shift selected from argmin interval",) if hi > lo else ()
        return AlignmentResult(
            optimal=Transform(1.0, h0),
            distance=dist,
            metric=metric,
            argmin_h_interval=(lo, hi),
            evaluations=1,
            solver="weighted-median",
            notes=notes,
        )
    if r == 2.0:
        if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
            ta, tb, _, _, total = _grid_tick_sums(f, g)
            h0 = (tb - ta) / total
        else:
            s1a, s1b, _, _, total = _segment_moments(segs)
            h0 = (s1b - s1a) / total
        dist = _objective_on_segments(segs, 1.0, h0, 2.0)
        return AlignmentResult(
            optimal=Transform(1.0, h0),
            distance=dist,
            metric=metric,
            argmin_h_interval=(h0, h0),
            evaluations=1,
            solver="closed-form",
        )
    h_lo, h_hi = bounds.h_range
    h0, dist, evals = _golden_section(lambda h: _objective_on_segments(segs, 1.0, h, r), h_lo, h_hi)
    return AlignmentResult(
        optimal=Transform(1.0, h0),
        distance=dist,
        metric=metric,
        evaluations=evals,
        solver="golden-section",
    )


def optimal_scale(f: Dist, g: Dist, metric: Metric, bounds: SearchBounds | None = None) -> AlignmentResult:
    """Minimize d(sigma*F, G) over the scale sigma within the bounds.

    Raises
    ------
    DegenerateScale
        if every quantile of F is zero, making the objective constant.
    """
    bounds = bounds if bounds is not None else default_bounds(f, g)
    s_lo, s_hi = bounds.sigma_range
    if isinstance(f, EmpiricalDist) and f.values[0] == 0.0 and f.values[-1] == 0.0:
        raise DegenerateScale("all quantiles of F are zero; scale has no effect")
    if metric.kind == "ks":
        if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
            return _ks_scale_enumerate(f, g, metric, bounds)
        return _scan_refine_scale(f, g, metric, bounds)
    r = metric.r
    segs = quantile_segments(f, g)
    notes = []
    if r == 2.0:
        if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
            ta, tb, ta2, tab, total = _grid_tick_sums(f, g)
            raw = tab / ta2
        else:
            _, _, s2a, sab, _ = _segment_moments(segs)
            raw = sab / s2a
        sigma0 = min(max(raw, s_lo), s_hi)
        if raw <= 0.0:
            notes.append("closed-form scale was non-positive; clamped to sigma_min")
        elif sigma0 != raw:
            notes.append("closed-form scale clamped to the search bounds")
        dist = _objective_on_segments(segs, sigma0, 0.0, 2.0)
        return AlignmentResult(
            optimal=Transform(sigma0, 0.0),
            distance=dist,
            metric=metric,
            argmin_sigma_interval=(sigma0, sigma0),
            evaluations=1,
            solver="closed-form",
            notes=tuple(notes),
        )
    sigma0, dist, evals = _golden_section(
        lambda s: _objective_on_segments(segs, s, 0.0, r), s_lo, s_hi
    )
    return AlignmentResult(
        optimal=Transform(sigma0, 0.0),
        distance=dist,
        metric=metric,
        evaluations=evals,
        solver="golden-section",
    )


def _scan_refine_scale(f: Dist, g: Dist, metric: Metric, bounds) -> AlignmentResult:
    """Best-effort 1-D scan for K-S scale with non-sample inputs."""
    lo, hi = bounds.sigma_range
    evals = 0

    def ks_at(s):
        return ks_objective_shift(f.transformed(s, 0.0), g, 0.0)

    best_s, best_v = lo, math.inf
    for _ in range(5):
        sigmas = np.linspace(lo, hi, 101)
        vals = np.array([ks_at(float(s)) for s in sigmas])
        evals += sigmas.size
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_v, best_s = float(vals[i]), float(sigmas[i])
        lo, hi = float(sigmas[max(i - 1, 0)]), float(sigmas[min(i + 1, sigmas.size - 1)])
    return AlignmentResult(
        optimal=Transform(best_s, 0.0),
        distance=best_v,
        metric=metric,
        evaluations=evals,
        solver="grid+refine",
        notes=("non-certified: no structure theorem for K-S scale minimization",),
    )


def _unidentifiable_scale_result(f: Dist, g: Dist, metric: Metric, bounds) -> AlignmentResult:
    """F is a point mass: every scale is optimal with a matching shift."""
    s_lo, s_hi = bounds.sigma_range
    sigma0 = 1.0 if s_lo <= 1.0 <= s_hi else s_lo
    sub = optimal_shift(f.transformed(sigma0, 0.0), g, metric)
    return AlignmentResult(
        optimal=Transform(sigma0, sub.optimal.h),
        distance=sub.distance,
        metric=metric,
        argmin_h_interval=sub.argmin_h_interval,
        argmin_sigma_interval=(s_lo, s_hi),
        evaluations=sub.evaluations,
        solver=sub.solver,
        notes=("scale unidentifiable: F is a point mass; canonical sigma selected",)
        + sub.notes,
    )


def optimal_shift_scale(
    f: Dist, g: Dist, metric: Metric, bounds: SearchBounds | None = None
) -> AlignmentResult:
    """Minimize d(sigma*F + h, G) jointly over (sigma, h) within bounds."""
    bounds = bounds if bounds is not None else default_bounds(f, g)
    s_lo, s_hi = bounds.sigma_range
    if _is_point_mass(f):
        return _unidentifiable_scale_result(f, g, metric, bounds)
    if metric.kind == "ks":
        return _ks_joint_grid(f, g, metric, bounds)
    r = metric.r
    segs = quantile_segments(f, g)
    if r == 2.0:
        if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
            ta, tb, ta2, tab, total = _grid_tick_sums(f, g)
            num = total * tab - ta * tb
            den = total * ta2 - ta * ta
            raw = num / den
            sigma0 = min(max(raw, s_lo), s_hi)
            h0 = (tb - sigma0 * ta) / total
        else:
            s1a, s1b, s2a, sab, total = _segment_moments(segs)
            raw = (sab - s1a * s1b / total) / (s2a - s1a * s1a / total)
            sigma0 = min(max(raw, s_lo), s_hi)
            h0 = (s1b - sigma0 * s1a) / total
        notes = []
        if raw <= 0.0:
            notes.append("closed-form scale was non-positive; clamped to sigma_min")
        elif sigma0 != raw:
            notes.append("closed-form scale clamped to the search bounds")
        dist = _objective_on_segments(segs, sigma0, h0, 2.0)
        return AlignmentResult(
            optimal=Transform(sigma0, h0),
            distance=dist,
            metric=metric,
            argmin_h_interval=(h0, h0),
            argmin_sigma_interval=(sigma0, sigma0),
            evaluations=1,
            solver="closed-form",
            notes=tuple(notes),
        )
    return _alternating_joint(f, g, metric, segs, bounds)


def _atoms_median_min_abs(c: np.ndarray, w: np.ndarray) -> float:
    """Minimal-|h| weighted median of atoms (float cumulative weights)."""
    order = np.argsort(c, kind="stable")
    cs, ws = c[order], w[order]
    cum = np.cumsum(ws)
    half = 0.5 * cum[-1]
    i = int(np.searchsorted(cum, half, side="left"))
    lo = float(cs[i])
    hi = float(cs[min(i + 1, cs.size - 1)]) if cum[i] == half else lo
    return _min_abs_in_interval(lo, hi)


def _alternating_joint(f, g, metric: Metric, segs: QuantileSegments, bounds) -> AlignmentResult:
    """Coordinate descent for Mallows orders without a joint closed form.

    Joint convexity makes every sweep non-increasing; three starting
    scales guard against stalls on flat valleys.  All-atom grids (two
    samples) take a streamlined objective without the piecewise
    integration branches.
    """
    r = metric.r
    s_lo, s_hi = bounds.sigma_range
    evals = 0
    atoms_only = bool(np.all(segs.a1 == 0.0) and np.all(segs.b1 == 0.0))
    w, a, b = segs.weights, segs.a0, segs.b0

    if atoms_only:
        def objective(sigma: float, h: float) -> float:
            return float(np.sum(w * np.abs(sigma * a + h - b) ** r)) ** (1.0 / r)
    else:
        def objective(sigma: float, h: float) -> float:
            return _objective_on_segments(segs, sigma, h, r)

    s1a, s1b, s2a, sab, total = _segment_moments(segs)

    def h_step(sigma: float) -> float:
        if r == 1.0:
            if atoms_only:
                return _atoms_median_min_abs(b - sigma * a, w)
            lo, hi = _median_interval_mixture(
                segs.u0, segs.u1, segs.b0 - sigma * segs.a0, segs.b1 - sigma * segs.a1
            )
            return _min_abs_in_interval(lo, hi)
        if r == 2.0:
            return (s1b - sigma * s1a) / total
        lo, hi = _shift_bracket(segs, sigma)
        h, _, _ = _golden_section(lambda hh: objective(sigma, hh), lo, hi)
        return h

    # starts: 1 (clamped), the geometric mid of the bracket, and the
    # least-squares scale as a warm start
    ls = (sab - s1a * s1b / total) / (s2a - s1a * s1a / total)
    starts = sorted(
        {
            min(max(1.0, s_lo), s_hi),
            math.sqrt(s_lo * s_hi),
            min(max(ls, s_lo), s_hi) if ls > 0 else s_lo,
        }
    )
    best = None
    for sigma in starts:
        h = h_step(sigma)
        value = objective(sigma, h)
        evals += 1
        for _ in range(60):
            sigma, _, ge = _golden_section(lambda s: objective(s, h), s_lo, s_hi)
            evals += ge
            h = h_step(sigma)
            new_value = objective(sigma, h)
            evals += 1
            if value - new_value < _ALTERNATE_TOL:
                value = min(value, new_value)
                break
            value = new_value
        if best is None or value < best[0]:
            best = (value, sigma, h)
    value, sigma, h = best
    return AlignmentResult(
        optimal=Transform(sigma, h),
        distance=value,
        metric=metric,
        evaluations=evals,
        solver="alternating-descent",
    )


def _ks_joint_grid(f: Dist, g: Dist, metric: Metric, bounds) -> AlignmentResult:
    """Coarse grid plus local refinement for joint K-S minimization."""
    s_lo, s_hi = bounds.sigma_range
    h_lo, h_hi = bounds.h_range
    evals = 0
    best = (math.inf, 1.0, 0.0)
    steps = _KS_JOINT_STEPS
    for round_no in range(_KS_REFINE_ROUNDS + 1):
        sigmas = np.linspace(s_lo, s_hi, steps)
        hs = np.linspace(h_lo, h_hi, steps)
        block = np.empty((sigmas.size, hs.size))
        for i, s in enumerate(sigmas.tolist()):
            if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
                block[i] = _ks_shift_values(s * f.values, g.values, hs)
            else:
                fs = f.transformed(s, 0.0)
                block[i] = [ks_objective_shift(fs, g, float(h)) for h in hs]
        evals += block.size
        i, j = np.unravel_index(np.argmin(block), block.shape)
        if block[i, j] < best[0]:
            best = (float(block[i, j]), float(sigmas[i]), float(hs[j]))
        s_lo, s_hi = float(sigmas[max(i - 1, 0)]), float(sigmas[min(i + 1, sigmas.size - 1)])
        h_lo, h_hi = float(hs[max(j - 1, 0)]), float(hs[min(j + 1, hs.size - 1)])
        steps = 21
    value, sigma, h = best
    return AlignmentResult(
        optimal=Transform(sigma, h),
        distance=value,
        metric=metric,
        evaluations=evals,
        solver="grid+refine",
        notes=("non-certified: no convexity theorem covers joint K-S minimization",),
    )


# ---------------------------------------------------------------------------
# Profiles


def profile_shift_curve(
    f: Dist, g: Dist, metric: Metric, h_range: tuple[float, float], steps: int
) -> list[tuple[float, float]]:
    """Objective D(h) on an evenly spaced shift grid, ascending in h.

    For K-S output the decrease-then-increase shape is checked and a
    warning is emitted if the sampled curve violates it.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    h_lo, h_hi = h_range
    if not h_lo < h_hi:
        raise ValueError("h_range must be nonempty")
    hs = np.linspace(h_lo, h_hi, steps)
    if metric.kind == "ks":
        vals = _ks_shift_curve(f, g, hs)
        if not _structure_ok(vals):
            warnings.warn("sampled K-S shift curve is not decrease-then-increase", stacklevel=2)
    else:
        segs = quantile_segments(f, g)
        vals = np.array([_objective_on_segments(segs, 1.0, float(h), metric.r) for h in hs])
    return list(zip(hs.tolist(), vals.tolist()))


def profile_surface(
    f: Dist,
    g: Dist,
    metric: Metric,
    bounds: SearchBounds,
    steps_sigma: int,
    steps_h: int,
) -> list[tuple[float, float, float]]:
    """Objective D(sigma, h) on a row-major (sigma, h) grid."""
    if steps_sigma < 2 or steps_h < 2:
        raise ValueError("each axis needs at least 2 steps")
    s_lo, s_hi = bounds.sigma_range
    h_lo, h_hi = bounds.h_range
    sigmas = np.linspace(s_lo, s_hi, steps_sigma)
    hs = np.linspace(h_lo, h_hi, steps_h)
    rows: list[tuple[float, float, float]] = []
    segs = None if metric.kind == "ks" else quantile_segments(f, g)
    for s in sigmas.tolist():
        if metric.kind == "ks":
            if isinstance(f, EmpiricalDist) and isinstance(g, EmpiricalDist):
                vals = _ks_shift_values(s * f.values, g.values, hs)
            else:
                fs = f.transformed(s, 0.0)
                vals = np.array([ks_objective_shift(fs, g, float(h)) for h in hs])
        else:
            vals = np.array([_objective_on_segments(segs, s, float(h), metric.r) for h in hs])
        rows.extend(zip([s] * hs.size, hs.tolist(), vals.tolist()))
    return rows
