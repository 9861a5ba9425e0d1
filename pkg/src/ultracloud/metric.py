"""Normalized distance matrices over point clouds and metric-axiom checking.

The distance with exponent ``alpha`` is ((1/n) sum_i |x_i - y_i|^alpha)^(1/alpha),
so for alpha=2 it is (1/sqrt(n)) times the Euclidean distance; the 1/n
normalization makes distances comparable across ambient dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DistanceMatrix, PointCloud

__all__ = ["distance_matrix", "check_metric_axioms", "MetricAxiomReport"]


def _entries(d) -> np.ndarray:
    if isinstance(d, DistanceMatrix):
        return d.entries
    return np.ascontiguousarray(d, dtype=np.float64)


def distance_matrix(cloud, alpha: float = 2.0) -> DistanceMatrix:
    """Pairwise normalized Minkowski distances of a cloud (or P x n array).

    ``alpha`` must be >= 1 (below 1 the triangle inequality fails);
    ``math.inf`` selects the maximum-coordinate metric.
    """
    points = cloud.points if isinstance(cloud, PointCloud) else np.ascontiguousarray(cloud, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError(f"need a nonempty P x n point array, got shape {points.shape}")
    alpha = float(alpha)
    if not alpha >= 1.0:
        raise ValueError(f"alpha must be in [1, inf], got {alpha}: the result would not be a metric")
    return DistanceMatrix(entries=kernels.pairwise_minkowski(points, alpha), alpha=alpha)


@dataclass(frozen=True)
class MetricAxiomReport:
    """Outcome of checking nonnegativity, zero diagonal, symmetry, and the
    triangle inequality, each within an absolute tolerance."""

    passed: bool
    worst_asymmetry: float
    worst_triangle_deficit: float | None
    min_entry: float
    max_diagonal: float
    tol: float

    def __bool__(self) -> bool:
        return self.passed


def check_metric_axioms(d, tol: float = 0.0) -> MetricAxiomReport:
    """Verify the metric axioms of a square matrix within absolute ``tol``.

    The triangle deficit is max over ordered triples (a, b, c) of
    d[a,b] - d[a,c] - d[c,b]; positive values beyond ``tol`` fail the check.
    ``worst_triangle_deficit`` is None when there are fewer than 3 points.
    """
    ent = _entries(d)
    if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
        raise ValueError(f"need a square matrix, got shape {ent.shape}")
    worst_asym = float(np.abs(ent - ent.T).max()) if ent.size else 0.0
    min_entry = float(ent.min()) if ent.size else 0.0
    max_diag = float(np.abs(np.diagonal(ent)).max()) if ent.size else 0.0
    worst_deficit, _ = kernels.metric_triangle_scan(ent)
    deficit: float | None = None if worst_deficit == -math.inf else float(worst_deficit)
    passed = (
        min_entry >= -tol
        and max_diag <= tol
        and worst_asym <= tol
        and (deficit is None or deficit <= tol)
    )
    return MetricAxiomReport(
        passed=passed,
        worst_asymmetry=worst_asym,
        worst_triangle_deficit=deficit,
        min_entry=min_entry,
        max_diagonal=max_diag,
        tol=float(tol),
    )
