"""Location-scale alignment of one-dimensional distributions.

Given two samples (or continuous piecewise-linear CDFs), find the linear
transform x -> sigma*x + h of the first distribution minimizing its
Mallows r-distance or Kolmogorov-Smirnov distance to the second, with
exact solvers where the objective structure allows, canonical selection
among non-unique minimizers, a paired-treatment Wilcoxon workflow, and a
Monte-Carlo simulation harness.
"""

from .align import (
    AlignmentResult,
    DegenerateScale,
    SearchBounds,
    Transform,
    canonical_select,
    default_bounds,
    optimal_scale,
    optimal_shift,
    optimal_shift_scale,
    profile_shift_curve,
    profile_surface,
)
from .distance import (
    InvalidOrder,
    Metric,
    NonPositiveScale,
    TransformedObjective,
    ks_distance,
    ks_objective_shift,
    mallows_1_via_cdf,
    mallows_distance,
    transformed_objective,
)
from .empirical import (
    Dist,
    EmpiricalDist,
    EmptySample,
    InvalidProbability,
    NonFiniteValue,
    PiecewiseLinearDist,
    QuantileGrid,
    QuantileSegments,
    Sample,
    SampleParseError,
    cdf_eval,
    make_sample,
    merged_grid,
    quantile,
    quantile_segments,
    read_sample,
)
from .inference import (
    AllZeroDifferences,
    ComparisonRow,
    PairedShifts,
    TreatmentComparisonReport,
    WilcoxonResult,
    paired_treatment_compare,
    wilcoxon_signed_rank,
)
from .simulate import (
    InvalidParameter,
    SimulationCell,
    SimulationConfig,
    SimulationReport,
    run_simulation,
    sample_normal,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "AllZeroDifferences",
    "ComparisonRow",
    "DegenerateScale",
    "Dist",
    "EmpiricalDist",
    "EmptySample",
    "InvalidOrder",
    "InvalidParameter",
    "InvalidProbability",
    "Metric",
    "NonFiniteValue",
    "NonPositiveScale",
    "PairedShifts",
    "PiecewiseLinearDist",
    "QuantileGrid",
    "QuantileSegments",
    "Sample",
    "SampleParseError",
    "SearchBounds",
    "SimulationCell",
    "SimulationConfig",
    "SimulationReport",
    "Transform",
    "TransformedObjective",
    "TreatmentComparisonReport",
    "WilcoxonResult",
    "canonical_select",
    "cdf_eval",
    "default_bounds",
    "ks_distance",
    "ks_objective_shift",
    "make_sample",
    "mallows_1_via_cdf",
    "mallows_distance",
    "merged_grid",
    "optimal_scale",
    "optimal_shift",
    "optimal_shift_scale",
    "paired_treatment_compare",
    "profile_shift_curve",
    "profile_surface",
    "quantile",
    "quantile_segments",
    "read_sample",
    "run_simulation",
    "sample_normal",
    "transformed_objective",
    "wilcoxon_signed_rank",
]
