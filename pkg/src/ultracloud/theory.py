"""Analytic predictions for the generators.

For the independent-coordinate process, the normalized distance between two
points whose labels first differ at level j concentrates, as the dimension
grows, on sqrt(2 * (sigma_j^2 + ... + sigma_N^2)). Collecting those values
over all label pairs gives an exactly ultrametric limit matrix. For the
correlated-coordinate process the same holds with every level's sigma^2
replaced by the per-coordinate variance of one field draw, provided the
coordinate coupling decays (lam > 1); the covariance sums checked by
:func:`markov_condition_sum` are the sufficient condition for that
concentration (a law of large numbers for dependent summands).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DistanceMatrix, HierarchicalSpec, iter_multiindices, validate_spec

__all__ = [
    "LimitMatrix",
    "limit_matrix",
    "expected_squared_difference",
    "hier_variance",
    "hier_covariance",
    "effective_sigmas",
    "MomentSummary",
    "moment_summary",
    "pair_class_counts",
    "markov_condition_sum",
]


@dataclass(frozen=True)
class LimitMatrix:
    """Ultrametric limit of the normalized distance matrices.

    ``entries[a, b] = sqrt(2 * sum of sigma_l^2 over levels l >= j)`` where
    j is the first level at which labels a and b differ; zero diagonal.
    """

    entries: np.ndarray
    branching: tuple[int, ...]
    sigmas: tuple[float, ...]
    labels: tuple[tuple[int, ...], ...]

    def as_distance_matrix(self) -> DistanceMatrix:
        return DistanceMatrix(entries=self.entries, alpha=2.0)

    @property
    def n_points(self) -> int:
        return self.entries.shape[0]


def limit_matrix(branching: Sequence[int], sigmas: Sequence[float]) -> LimitMatrix:
    """Build the limit matrix for the given branching and step deviations.

    Computed from the delta-product form: entry^2 = 2 * sum over levels l of
    (1 - [labels agree through level l]) * sigma_l^2, which equals the
    first-difference form quoted above.
    """
    branching = tuple(int(p) for p in branching)
    sigmas = tuple(float(s) for s in sigmas)
    if len(branching) != len(sigmas):
        raise ValueError(f"{len(sigmas)} step deviations for {len(branching)} levels")
    labels = tuple(iter_multiindices(branching))
    lab = np.array(labels, dtype=np.int64)
    agree = lab[:, None, :] == lab[None, :, :]
    prefix_agree = np.cumprod(agree, axis=2)
    sig2 = np.asarray(sigmas, dtype=np.float64) ** 2
    squared = 2.0 * ((1 - prefix_agree) * sig2).sum(axis=2)
    return LimitMatrix(
        entries=np.sqrt(squared),
        branching=branching,
        sigmas=sigmas,
        labels=labels,
    )


def expected_squared_difference(
    a: Sequence[int], b: Sequence[int], sigmas: Sequence[float]
) -> float:
    """Expected squared per-coordinate difference of two generated points.

    Equals 2 * sum over levels l of (1 - [prefixes agree through l]) *
    sigma_l^2, i.e. the squared limit-matrix entry for the label pair; 0
    exactly when the labels coincide.
    """
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    if not len(a) == len(b) == len(sigmas):
        raise ValueError(
            f"label lengths {len(a)}, {len(b)} and {len(sigmas)} deviations must all match"
        )
    total = 0.0
    agree = True
    for a_l, b_l, s_l in zip(a, b, sigmas):
        agree = agree and a_l == b_l
        if not agree:
            total += 2.0 * float(s_l) ** 2
    return total


def hier_variance(tree_depth: int, lam: float, sigma: float) -> float:
    """Per-coordinate variance of one correlated field draw.

    sigma^2 * (1 + lam^-2 + ... + lam^-2(k-1)); the lam = 1 case is the
    plain k-term sum (the geometric closed form would be 0/0).
    """
    if tree_depth < 1:
        raise ValueError(f"tree depth must be >= 1, got {tree_depth}")
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if lam == 1.0:
        return sigma * sigma * tree_depth
    ratio = lam**-2.0
    return sigma * sigma * (1.0 - ratio**tree_depth) / (1.0 - ratio)


def hier_covariance(diverge_at: int, tree_depth: int, lam: float, sigma: float) -> float:
    """Covariance of two field coordinates whose tree indices first differ
    at position ``diverge_at`` (1-based).

    Only the node draws along the shared prefix (lengths 1 .. diverge_at-1)
    appear in both coordinates, each with weight lam^-(tree_depth - length),
    so cov = sigma^2 * sum over shared lengths s of lam^-2(tree_depth - s).
    ``diverge_at = tree_depth + 1`` conventionally means identical
    coordinates and returns the variance.
    """
    if not 1 <= diverge_at <= tree_depth + 1:
        raise ValueError(
            f"divergence position {diverge_at} outside the valid range 1..{tree_depth + 1}"
        )
    if diverge_at == tree_depth + 1:
        return hier_variance(tree_depth, lam, sigma)
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    return sigma * sigma * sum(lam ** (-2.0 * (tree_depth - s)) for s in range(1, diverge_at))


def effective_sigmas(spec: HierarchicalSpec) -> tuple[float, ...]:
    """Per-level step deviations that make :func:`limit_matrix` predict the
    correlated-coordinate process.

    Every composition level adds one independent, identically distributed
    field, so the sequence is constant: sqrt(hier_variance) at every level.
    """
    validate_spec(spec)
    step = math.sqrt(hier_variance(spec.tree_depth, spec.lam, spec.sigma))
    return (step,) * spec.depth


@dataclass(frozen=True)
class MomentSummary:
    """Closed-form moments of one field draw: mean, variance, covariance by
    divergence position (1..k), and the effective per-level deviation."""

    mean: float
    variance: float
    covariances: tuple[float, ...]
    step_sigma: float


def moment_summary(spec: HierarchicalSpec) -> MomentSummary:
    var = hier_variance(spec.tree_depth, spec.lam, spec.sigma)
    covs = tuple(
        hier_covariance(r, spec.tree_depth, spec.lam, spec.sigma)
        for r in range(1, spec.tree_depth + 1)
    )
    return MomentSummary(mean=0.0, variance=var, covariances=covs, step_sigma=math.sqrt(var))


def pair_class_counts(arity: int, tree_depth: int) -> np.ndarray:
    """Number of unordered coordinate pairs first differing at each tree
    position r = 1..k: arity^(r-1) * C(arity, 2) * arity^(2(k-r)).

    The counts sum to n(n-1)/2 with n = arity^tree_depth.
    """
    m, k = int(arity), int(tree_depth)
    return np.array(
        [m ** (r - 1) * (m * (m - 1) // 2) * m ** (2 * (k - r)) for r in range(1, k + 1)],
        dtype=np.float64,
    )


def markov_condition_sum(spec: HierarchicalSpec, l1: int, l2: int) -> float:
    """(1/n^2) * sum over coordinate pairs i<j of cov[x_i^l1, x_j^l2] for one
    field draw, evaluated in closed form.

    The coordinates are jointly Gaussian with mean zero, so mixed odd powers
    have zero covariance exactly, and cov[x^2, y^2] = 2 cov[x, y]^2. Pairs
    are grouped by divergence position; vanishing of this sum as the
    dimension grows is the concentration condition behind the ultrametric
    limit. Decays to 0 for lam > 1 as tree_depth grows.
    """
    if l1 not in (1, 2) or l2 not in (1, 2):
        raise ValueError(f"powers must be 1 or 2, got ({l1}, {l2})")
    if (l1 + l2) % 2 == 1:
        return 0.0
    validate_spec(spec)
    counts = pair_class_counts(spec.arity, spec.tree_depth)
    covs = np.array(
        [
            hier_covariance(r, spec.tree_depth, spec.lam, spec.sigma)
            for r in range(1, spec.tree_depth + 1)
        ]
    )
    if l1 == 1:
        pair_sum = float(counts @ covs)
    else:
        pair_sum = float(counts @ (2.0 * covs**2))
    n = spec.dim
    return pair_sum / (float(n) * float(n))
