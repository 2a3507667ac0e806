"""One-dimensional distributions: empirical step CDFs and piecewise-linear CDFs.

Two representations cover everything the library needs.  ``EmpiricalDist``
is the right-continuous step CDF of a finite sample; ``PiecewiseLinearDist``
is a continuous CDF that is linear between knots (it represents uniform
mixtures and similar cases exactly).  Both expose CDF evaluation, the
left-continuous generalized inverse

    quantile(u) = inf{x : F(x) >= u},    u in (0, 1],

and positive affine transforms x -> sigma*x + h.

``merged_grid`` aligns two empirical distributions on the union of their
probability breakpoints {i/n} and {j/m}; on each segment both quantile
functions are constant, so integrals of functions of the quantile
difference reduce to finite weighted sums.  ``quantile_segments`` is the
general form: on each segment of the merged grid both quantile functions
are affine in u (constant for step CDFs), which the distance and alignment
code integrates exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

__all__ = [
    "EmptySample",
    "NonFiniteValue",
    "InvalidProbability",
    "SampleParseError",
    "Sample",
    "EmpiricalDist",
    "PiecewiseLinearDist",
    "Dist",
    "QuantileGrid",
    "QuantileSegments",
    "make_sample",
    "cdf_eval",
    "quantile",
    "merged_grid",
    "quantile_segments",
    "read_sample",
]


class EmptySample(ValueError):
    """A sample was constructed from an empty list of values."""


class NonFiniteValue(ValueError):
    """A sample contains NaN or infinite values."""


class InvalidProbability(ValueError):
    """A quantile was requested at u outside (0, 1]."""


class SampleParseError(ValueError):
    """A sample file could not be parsed as numeric data."""

    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


@dataclass(frozen=True, eq=False)
class Sample:
    """Sorted finite observations; build with :func:`make_sample`."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise EmptySample("sample needs at least one value")
        if not np.all(np.isfinite(v)):
            raise NonFiniteValue("sample values must be finite")
        if np.any(np.diff(v) < 0):
            raise ValueError("sample values must be sorted ascending")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size


def make_sample(values) -> Sample:
    """Build a :class:`Sample` from values in any order.

    Raises
    ------
    EmptySample
        if ``values`` is empty.
    NonFiniteValue
        if any entry is NaN or infinite.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise EmptySample("sample needs at least one value")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue("sample values must be finite")
    return Sample(np.sort(v))


@dataclass(frozen=True, eq=False)
class EmpiricalDist:
    """Right-continuous step CDF of a finite sample: F(x) = #{values <= x}/n."""

    sample: Sample

    @classmethod
    def from_values(cls, values) -> "EmpiricalDist":
        return cls(make_sample(values))

    @property
    def values(self) -> np.ndarray:
        return self.sample.values

    @property
    def n(self) -> int:
        return self.sample.n

    def cdf_values(self, xs: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.values, xs, side="right") / self.n

    def cdf_left_values(self, xs: np.ndarray) -> np.ndarray:
        """Left limits F(x-)."""
        return np.searchsorted(self.values, xs, side="left") / self.n

    def quantile_values(self, us: np.ndarray) -> np.ndarray:
        cum = np.arange(1, self.n + 1) / self.n
        idx = np.searchsorted(cum, us, side="left")
        return self.values[np.minimum(idx, self.n - 1)]

    def transformed(self, sigma: float, h: float) -> "EmpiricalDist":
        """Distribution of sigma*X + h for sigma > 0."""
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return EmpiricalDist(Sample(sigma * self.values + h))

    def x_breaks(self) -> np.ndarray:
        """Jump locations of the CDF."""
        return np.unique(self.values)

    @property
    def support_min(self) -> float:
        return float(self.values[0])

    @property
    def support_max(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True, eq=False)
class PiecewiseLinearDist:
    """Continuous CDF, linear between knots.

    ``xs`` must be strictly increasing and ``ps`` nondecreasing from
    exactly 0 to exactly 1.  Flat stretches (equal consecutive ``ps``)
    put zero mass on the corresponding x-interval.
    """

    xs: np.ndarray
    ps: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        ps = np.asarray(self.ps, dtype=np.float64)
        if xs.ndim != 1 or xs.size < 2 or xs.shape != ps.shape:
            raise ValueError("need two or more (x, p) knots")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ps))):
            raise NonFiniteValue("knots must be finite")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("knot x values must be strictly increasing")
        if np.any(np.diff(ps) < 0):
            raise ValueError("knot probabilities must be nondecreasing")
        if ps[0] != 0.0 or ps[-1] != 1.0:
            raise ValueError("knot probabilities must run from 0 to 1")
        xs, ps = xs.copy(), ps.copy()
        xs.flags.writeable = False
        ps.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)

    @classmethod
    def from_knots(cls, knots) -> "PiecewiseLinearDist":
        """Build from an iterable of (x, p) pairs."""
        arr = np.asarray(list(knots), dtype=np.float64)
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "PiecewiseLinearDist":
        return cls(np.array([lo, hi]), np.array([0.0, 1.0]))

    def cdf_values(self, xs: np.ndarray) -> np.ndarray:
        return np.interp(xs, self.xs, self.ps)

    def cdf_left_values(self, xs: np.ndarray) -> np.ndarray:
        # continuous CDF: left limit equals the value
        return np.interp(xs, self.xs, self.ps)

    def quantile_values(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        # first knot with p >= u; its predecessor has p < u, so the
        # bracketing pair is never flat and interpolation is well defined
        j = np.searchsorted(self.ps, us, side="left")
        j = np.clip(j, 1, self.ps.size - 1)
        p0, p1 = self.ps[j - 1], self.ps[j]
        x0, x1 = self.xs[j - 1], self.xs[j]
        return x0 + (us - p0) * (x1 - x0) / (p1 - p0)

    def transformed(self, sigma: float, h: float) -> "PiecewiseLinearDist":
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return PiecewiseLinearDist(sigma * self.xs + h, self.ps)

    def x_breaks(self) -> np.ndarray:
        return self.xs

    @property
    def support_min(self) -> float:
        return float(self.xs[0])

    @property
    def support_max(self) -> float:
        return float(self.xs[-1])


Dist = Union[EmpiricalDist, PiecewiseLinearDist]


def cdf_eval(dist: Dist, x: float) -> float:
    """CDF value F(x) in [0, 1]."""
    return float(dist.cdf_values(np.asarray(x, dtype=np.float64)))


def quantile(dist: Dist, u: float) -> float:
    """Left-continuous generalized inverse inf{x : F(x) >= u} for u in (0, 1]."""
    if not (0.0 < u <= 1.0) or math.isnan(u):
        raise InvalidProbability(f"u must be in (0, 1], got {u!r}")
    return float(dist.quantile_values(np.asarray(u, dtype=np.float64)))


@dataclass(frozen=True, eq=False)
class QuantileGrid:
    """Merged probability grid of two empirical distributions.

    ``breakpoints`` is 0 = u_0 < u_1 < ... < u_K = 1, the union of
    {i/n} and {j/m}.  On segment k = (u_{k-1}, u_k] both quantile
    functions are constant: ``f_quantiles[k]`` and ``g_quantiles[k]``.
    ``tick_weights`` holds the segment weights as exact integer
    numerators over ``ticks_total = n*m``; ``weights`` is their float
    form u_k - u_{k-1}.
    """

    breakpoints: np.ndarray
    weights: np.ndarray
    f_quantiles: np.ndarray
    g_quantiles: np.ndarray
    tick_weights: np.ndarray
    ticks_total: int

    def __post_init__(self):
        if abs(float(np.sum(self.weights)) - 1.0) > 1e-12:
            raise ValueError("segment weights must sum to 1")
        if np.any(self.weights <= 0):
            raise ValueError("segment weights must be positive")

    @property
    def segments(self) -> list[tuple[float, float, float]]:
        """Segments as (weight, f_quantile, g_quantile) triples."""
        return list(
            zip(self.weights.tolist(), self.f_quantiles.tolist(), self.g_quantiles.tolist())
        )


def merged_grid(f: EmpiricalDist, g: EmpiricalDist) -> QuantileGrid:
    """Merged quantile grid of two empirical distributions.

    Segment boundaries are kept as integer ticks over n*m, so weights and
    quantile assignments are exact; there are at most n + m - 1 segments.
    """
    n, m = f.n, g.n
    ticks = np.union1d(
        np.arange(1, n + 1, dtype=np.int64) * m,
        np.arange(1, m + 1, dtype=np.int64) * n,
    )
    tick_weights = np.diff(np.concatenate([[np.int64(0)], ticks]))
    total = n * m
    # order statistic covering segment (t_{k-1}, t_k]: index ceil(t_k / m)
    a = f.values[(ticks + m - 1) // m - 1]
    b = g.values[(ticks + n - 1) // n - 1]
    breakpoints = np.concatenate([[0.0], ticks / total])
    return QuantileGrid(
        breakpoints=breakpoints,
        weights=tick_weights / total,
        f_quantiles=a,
        g_quantiles=b,
        tick_weights=tick_weights,
        ticks_total=total,
    )


@dataclass(frozen=True, eq=False)
class QuantileSegments:
    """Per-segment affine representation of two quantile functions.

    On u in (u0[k], u1[k]] the quantile of the first distribution is
    a0[k] + a1[k]*u and of the second b0[k] + b1[k]*u.  Step CDFs have
    zero slopes; piecewise-linear CDFs have the slopes of their inverse.
    """

    u0: np.ndarray
    u1: np.ndarray
    a0: np.ndarray
    a1: np.ndarray
    b0: np.ndarray
    b1: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        return self.u1 - self.u0

    def f_end_values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.a0 + self.a1 * self.u0, self.a0 + self.a1 * self.u1

    def g_end_values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.b0 + self.b1 * self.u0, self.b0 + self.b1 * self.u1

    def scaled_f(self, sigma: float) -> "QuantileSegments":
        """Segments for (sigma * F, G)."""
        return QuantileSegments(
            self.u0, self.u1, sigma * self.a0, sigma * self.a1, self.b0, self.b1
        )


def _u_breaks(dist: Dist) -> np.ndarray:
    """Probability levels where the quantile function changes pieces (0 excluded)."""
    if isinstance(dist, EmpiricalDist):
        return np.arange(1, dist.n + 1) / dist.n
    return np.unique(dist.ps)[1:]


def _affine_coeffs(dist: Dist, u_ends: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Affine quantile coefficients on segments ending at u_ends."""
    if isinstance(dist, EmpiricalDist):
        c0 = dist.quantile_values(u_ends)
        return c0, np.zeros_like(c0)
    j = np.searchsorted(dist.ps, u_ends, side="left")
    j = np.clip(j, 1, dist.ps.size - 1)
    slope = (dist.xs[j] - dist.xs[j - 1]) / (dist.ps[j] - dist.ps[j - 1])
    intercept = dist.xs[j - 1] - dist.ps[j - 1] * slope
    return intercept, slope


def quantile_segments(f: Dist, g: Dist) -> QuantileSegments:
    """Merged segments on which both quantile functions are affine in u."""
    merged = np.union1d(_u_breaks(f), _u_breaks(g))
    u1 = merged
    u0 = np.concatenate([[0.0], merged[:-1]])
    keep = u1 > u0
    u0, u1 = u0[keep], u1[keep]
    a0, a1 = _affine_coeffs(f, u1)
    b0, b1 = _affine_coeffs(g, u1)
    return QuantileSegments(u0, u1, a0, a1, b0, b1)


def _spread(dist: Dist) -> float:
    """Interquartile range, falling back to the full range, then to 1."""
    iqr = quantile(dist, 0.75) - quantile(dist, 0.25)
    if iqr > 0:
        return iqr
    full = dist.support_max - dist.support_min
    return full if full > 0 else 1.0


def read_sample(path) -> Sample:
    """Read a sample from newline-delimited numbers or a single-column CSV.

    A non-numeric first line is treated as a header.  Blank lines are
    skipped; any other unparsable or non-finite entry raises
    :class:`SampleParseError` carrying the line number.
    """
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise SampleParseError(path, 0, f"cannot read file ({exc.strerror})") from exc
    values: list[float] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        entry = raw.strip()
        if not entry:
            continue
        if "," in entry:
            fields = [fld.strip() for fld in entry.split(",")]
            if any(fields[1:]):
                raise SampleParseError(path, line_no, "expected a single column")
            entry = fields[0]
        try:
            value = float(entry)
        except ValueError:
            if line_no == 1 and not values:
                continue  # header row
            raise SampleParseError(path, line_no, f"not a number: {entry!r}") from None
        if not math.isfinite(value):
            raise SampleParseError(path, line_no, f"non-finite value: {entry!r}")
        values.append(value)
    if not values:
        raise SampleParseError(path, 0, "no numeric data")
    return make_sample(values)
