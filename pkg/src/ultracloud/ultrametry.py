"""How ultrametric a distance matrix is.

A triangle is ultrametric when its two longest sides are equal; its degree
2 * mid / max - 1 is 1 exactly in that case and decreases toward 0 as the
triangle flattens. The global degree averages over all unordered triples.
The subdominant ultrametric is the largest ultrametric matrix entrywise
below a given metric, obtained as minimax path costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DistanceMatrix
from .metric import _entries

__all__ = [
    "triangle_degree",
    "ultrametricity_degree",
    "is_ultrametric",
    "StrongTriangleCheck",
    "subdominant_ultrametric",
    "ultrametricity_report",
    "UltrametricityReport",
]


def triangle_degree(d_ab: float, d_bc: float, d_ca: float) -> float:
    """Degree 2 * mid / max - 1 of one triangle.

    Requires nonnegative sides. The all-zero triangle (three coincident
    points) counts as perfectly ultrametric. Sides violating the triangle
    inequality are not rejected; they simply score below 0.
    """
    sides = sorted((float(d_ab), float(d_bc), float(d_ca)))
    if sides[0] < 0:
        raise ValueError(f"triangle sides must be nonnegative, got {sides[0]}")
    if sides[2] == 0.0:
        return 1.0
    return 2.0 * sides[1] / sides[2] - 1.0


def ultrametricity_degree(d) -> float:
    """Mean triangle degree over all C(P, 3) unordered triples."""
    ent = _entries(d)
    if ent.shape[0] < 3:
        raise ValueError(f"ultrametricity degree is undefined for {ent.shape[0]} point(s); need 3")
    total, _, _, _, _, count = kernels.triangle_degree_scan(ent)
    return total / count


@dataclass(frozen=True)
class StrongTriangleCheck:
    """Result of checking max side <= max(other two) + tol over all triples.

    ``worst_deficit`` is the largest (max side - second side); both it and
    ``worst_triple`` are None when fewer than 3 points make the check
    vacuous. Truthiness equals ``passed``.
    """

    passed: bool
    worst_triple: tuple[int, int, int] | None
    worst_deficit: float | None
    violations: int
    tol: float

    def __bool__(self) -> bool:
        return self.passed


def is_ultrametric(d, tol: float = 0.0) -> StrongTriangleCheck:
    """Exact strong-triangle check with absolute tolerance ``tol``."""
    ent = _entries(d)
    if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
        raise ValueError(f"need a square matrix, got shape {ent.shape}")
    worst, worst_t, violations, count = kernels.strong_triangle_scan(ent, float(tol))
    if count == 0:
        return StrongTriangleCheck(True, None, None, 0, float(tol))
    return StrongTriangleCheck(
        passed=violations == 0,
        worst_triple=worst_t,
        worst_deficit=float(worst),
        violations=int(violations),
        tol=float(tol),
    )


def subdominant_ultrametric(d) -> DistanceMatrix:
    """Largest ultrametric matrix entrywise below the given metric.

    Entry (a, b) is the minimax path cost: the minimum over paths from a to
    b of the largest edge on the path (single-linkage merge heights).
    Ultrametric inputs come back unchanged.
    """
    ent = _entries(d)
    if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
        raise ValueError(f"need a square matrix, got shape {ent.shape}")
    closed = kernels.minimax_closure(ent)
    alpha = d.alpha if isinstance(d, DistanceMatrix) else 2.0
    return DistanceMatrix(entries=closed, alpha=alpha)


@dataclass(frozen=True)
class UltrametricityReport:
    """Global degree plus per-triangle extremes and the violation census."""

    degree: float
    min_triangle_degree: float
    min_triangle: tuple[int, int, int]
    max_triangle_degree: float
    max_triangle: tuple[int, int, int]
    strong_check: StrongTriangleCheck
    degenerate: bool


def ultrametricity_report(d, tol: float = 0.0) -> UltrametricityReport:
    """One-pass summary used by the analyze command.

    ``degenerate`` marks an all-zero matrix (coincident points), whose
    degree is 1 by the coincident-triangle convention.
    """
    ent = _entries(d)
    if ent.shape[0] < 3:
        raise ValueError(f"ultrametricity report is undefined for {ent.shape[0]} point(s); need 3")
    total, mn, mn_t, mx, mx_t, count = kernels.triangle_degree_scan(ent)
    return UltrametricityReport(
        degree=total / count,
        min_triangle_degree=float(mn),
        min_triangle=mn_t,
        max_triangle_degree=float(mx),
        max_triangle=mx_t,
        strong_check=is_ultrametric(ent, tol),
        degenerate=bool(ent.max() == 0.0),
    )
