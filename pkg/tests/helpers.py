"""Shared instance generators and brute-force oracles for the test suite.

Oracles here deliberately avoid the library's solver code paths: Riemann
sums for integrals, dense scans for suprema, grid search with local
refinement for argmins, and explicit sign enumeration for the signed-rank
null distribution.
"""

import numpy as np

from distalign import EmpiricalDist, PiecewiseLinearDist


def random_empirical(rng, max_n=50, lo=-50.0, hi=50.0, min_n=1):
    n = int(rng.integers(min_n, max_n + 1))
    values = rng.uniform(lo, hi, n)
    if n > 3 and rng.random() < 0.3:  # inject ties
        values[: n // 2] = np.round(values[: n // 2])
    return EmpiricalDist.from_values(values)


def random_integer_empirical(rng, max_n=30, span=50, min_n=1):
    n = int(rng.integers(min_n, max_n + 1))
    return EmpiricalDist.from_values(rng.integers(-span, span + 1, n).astype(float))


def random_dyadic_empirical(rng, max_n=20, span=50, min_n=2):
    """Values k/64 with k integer: sums/shifts by dyadics stay exact."""
    n = int(rng.integers(min_n, max_n + 1))
    k = rng.integers(-span * 64, span * 64 + 1, n)
    return EmpiricalDist.from_values(k / 64.0)


def random_piecewise_linear(rng, max_knots=6):
    k = int(rng.integers(2, max_knots + 1))
    xs = np.sort(rng.uniform(-20, 20, k))
    while np.any(np.diff(xs) <= 0):
        xs = np.sort(rng.uniform(-20, 20, k))
    ps = np.sort(rng.uniform(0, 1, k))
    ps[0], ps[-1] = 0.0, 1.0
    return PiecewiseLinearDist(xs, ps)


def riemann_mallows(f, g, r, points=1_000_000):
    """Midpoint Riemann sum of the quantile-difference integral."""
    u = (np.arange(points) + 0.5) / points
    diff = np.abs(f.quantile_values(u) - g.quantile_values(u))
    return float(np.mean(diff**r) ** (1.0 / r))


def ks_scan(f, g, points=20001):
    """Dense scan of sup |F - G|: all breakpoints, their left sides, and a grid."""
    z = np.concatenate([f.x_breaks(), g.x_breaks()])
    eps = 1e-9 * (1.0 + np.abs(z))
    grid = np.concatenate([z, z - eps, np.linspace(z.min() - 1, z.max() + 1, points)])
    return float(np.max(np.abs(f.cdf_values(grid) - g.cdf_values(grid))))


def grid_search_1d(fn, lo, hi, steps=2001, rounds=3):
    """Grid argmin with local refinement; fn is scalar -> scalar."""
    best_x, best_v = lo, np.inf
    for _ in range(rounds):
        xs = np.linspace(lo, hi, steps)
        vals = np.array([fn(float(x)) for x in xs])
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_x, best_v = float(xs[i]), float(vals[i])
        lo, hi = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, steps - 1)])
    return best_x, best_v


def mallows_objective_arrays(w, a, b, sigmas, hs, r):
    """Objective surface over (sigma, h) grids, computed from the defining sum."""
    resid = np.abs(
        sigmas[:, None, None] * a[None, None, :] + hs[None, :, None] - b[None, None, :]
    )
    return np.sum(w[None, None, :] * resid**r, axis=-1) ** (1.0 / r)


def grid_search_joint(w, a, b, r, slo, shi, hlo, hhi, steps=61, rounds=6):
    """2-D grid argmin with refinement over the weighted-sum objective."""
    best = (np.inf, None, None)
    for _ in range(rounds):
        ss = np.linspace(slo, shi, steps)
        hs = np.linspace(hlo, hhi, steps)
        vals = mallows_objective_arrays(w, a, b, ss, hs, r)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[i, j] < best[0]:
            best = (float(vals[i, j]), float(ss[i]), float(hs[j]))
        slo, shi = float(ss[max(i - 1, 0)]), float(ss[min(i + 1, steps - 1)])
        hlo, hhi = float(hs[max(j - 1, 0)]), float(hs[min(j + 1, steps - 1)])
    return best


def wilcoxon_bruteforce_p(ranks, w_obs):
    """Two-sided p by explicit enumeration of every sign assignment."""
    ranks = np.asarray(ranks, dtype=np.float64)
    n = ranks.size
    masks = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    ws = masks @ ranks
    top = float(ranks.sum())
    mirror = top - w_obs
    lo, hi = min(w_obs, mirror), max(w_obs, mirror)
    p = (np.sum(ws <= lo) + np.sum(ws >= hi)) / 2.0**n
    return min(1.0, float(p))
