"""Kernel dispatch: compiled extension when built, numpy fallback otherwise.

``BACKEND`` names the active implementation ("cython" or "numpy"). Both
backends share contracts and agree to floating-point roundoff; within one
build, results are bit-stable across runs.
"""

from __future__ import annotations

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _fallback as _impl

    BACKEND = "numpy"

pairwise_minkowski = _impl.pairwise_minkowski
triangle_degree_scan = _impl.triangle_degree_scan
strong_triangle_scan = _impl.strong_triangle_scan
metric_triangle_scan = _impl.metric_triangle_scan
minimax_closure = _impl.minimax_closure

__all__ = [
    "BACKEND",
    "pairwise_minkowski",
    "triangle_degree_scan",
    "strong_triangle_scan",
    "metric_triangle_scan",
    "minimax_closure",
]
