"""Hierarchically generated random point clouds in high-dimensional space and
how close their normalized distance matrices come to ultrametric matrices.

Generate clouds over a branching label tree (independent or cluster-correlated
coordinates), measure ultrametricity triangle by triangle, and compare against
the analytic ultrametric limit the distances concentrate on as the dimension
grows.
"""

from .core import (
    DistanceMatrix,
    GenSpec,
    HierarchicalSpec,
    IndependentSpec,
    NonConvergentRegimeWarning,
    PointCloud,
    Seed,
    SpecValidationError,
    decode_multiindex,
    derive_substream,
    encode_multiindex,
    iter_multiindices,
    validate_spec,
)
from .experiment import (
    ConvergenceResult,
    MomentProbeReport,
    SweepResult,
    convergence_probe,
    default_epsilon,
    limit_for_spec,
    moment_probe,
    sweep_ultrametricity,
)
from .generate import (
    generate_coordinate_field,
    generate_hierarchical,
    generate_independent,
    hierarchical_levels,
    independent_levels,
)
from .kernels import BACKEND
from .metric import MetricAxiomReport, check_metric_axioms, distance_matrix
from .theory import (
    LimitMatrix,
    MomentSummary,
    effective_sigmas,
    expected_squared_difference,
    hier_covariance,
    hier_variance,
    limit_matrix,
    markov_condition_sum,
    moment_summary,
    pair_class_counts,
)
from .ultrametry import (
    StrongTriangleCheck,
    UltrametricityReport,
    is_ultrametric,
    subdominant_ultrametric,
    triangle_degree,
    ultrametricity_degree,
    ultrametricity_report,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceResult",
    "DistanceMatrix",
    "GenSpec",
    "HierarchicalSpec",
    "IndependentSpec",
    "LimitMatrix",
    "MetricAxiomReport",
    "MomentProbeReport",
    "MomentSummary",
    "NonConvergentRegimeWarning",
    "PointCloud",
    "Seed",
    "SpecValidationError",
    "StrongTriangleCheck",
    "SweepResult",
    "UltrametricityReport",
    "check_metric_axioms",
    "convergence_probe",
    "decode_multiindex",
    "default_epsilon",
    "derive_substream",
    "distance_matrix",
    "effective_sigmas",
    "encode_multiindex",
    "expected_squared_difference",
    "generate_coordinate_field",
    "generate_hierarchical",
    "generate_independent",
    "hier_covariance",
    "hier_variance",
    "hierarchical_levels",
    "independent_levels",
    "is_ultrametric",
    "iter_multiindices",
    "limit_for_spec",
    "limit_matrix",
    "markov_condition_sum",
    "moment_probe",
    "moment_summary",
    "pair_class_counts",
    "subdominant_ultrametric",
    "sweep_ultrametricity",
    "triangle_degree",
    "ultrametricity_degree",
    "ultrametricity_report",
    "validate_spec",
    "__version__",
]
