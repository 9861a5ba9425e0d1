"""Random point-cloud generators.

Both procedures grow a branching tree of depth N over the labels: level j
splits each point into branching[j-1] children. In the independent variant a
child offsets every coordinate of its parent by an i.i.d. Gaussian step; in
the correlated variant the offset is one draw of the cluster-correlated
coordinate field, so coordinates inside a point are coupled while distinct
branches stay independent.

Every tree node draws from its own substream, keyed by the node's label
path, so any generation schedule produces bit-identical clouds and editing
one branch cannot perturb another.
"""

from __future__ import annotations

import numpy as np

from .core import (
    HierarchicalSpec,
    IndependentSpec,
    PointCloud,
    Seed,
    iter_multiindices,
    validate_spec,
)

__all__ = [
    "generate_independent",
    "independent_levels",
    "generate_coordinate_field",
    "generate_hierarchical",
    "hierarchical_levels",
]


def _node_seed(seed: Seed, prefix: tuple[int, ...]) -> Seed:
    for a in prefix:
        seed = seed.child(a - 1)
    return seed


def independent_levels(spec: IndependentSpec, seed: Seed) -> list[np.ndarray]:
    """All levels of the independent walk; level j has shape (p_1...p_j, n).

    Level-1 points step from the origin; a level-(j+1) point steps from its
    parent's realized coordinates with deviation sigmas[j]. The returned
    list's last element is the cloud returned by :func:`generate_independent`.
    """
    validate_spec(spec)
    levels: list[np.ndarray] = []
    parent = np.zeros((1, spec.dim))
    for j, (p_j, sigma_j) in enumerate(zip(spec.branching, spec.sigmas), start=1):
        prefixes = list(iter_multiindices(spec.branching[:j]))
        pts = np.empty((len(prefixes), spec.dim))
        for row, prefix in enumerate(prefixes):
            rng = _node_seed(seed, prefix).generator()
            pts[row] = parent[row // p_j] + rng.normal(0.0, sigma_j, size=spec.dim)
        levels.append(pts)
        parent = pts
    return levels


def generate_independent(spec: IndependentSpec, seed: Seed) -> PointCloud:
    """Final-level points of the independent-coordinate branching walk."""
    points = independent_levels(spec, seed)[-1]
    return PointCloud(
        points=points,
        labels=tuple(iter_multiindices(spec.branching)),
        spec=spec,
        seed=seed,
    )


def generate_coordinate_field(
    arity: int, tree_depth: int, lam: float, sigma: float, seed: Seed
) -> np.ndarray:
    """One draw of the cluster-correlated coordinate field, length arity**tree_depth.

    Coordinates are indexed by k-tuples over 1..arity, laid out
    lexicographically. Each tree prefix of length s contributes a single
    N(0, sigma) draw weighted by lam**-(tree_depth - s), shared by all
    coordinates under that prefix; the draws are taken level by level in a
    fixed order, so the field is deterministic in the seed.
    """
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    if tree_depth < 1:
        raise ValueError(f"tree depth must be >= 1, got {tree_depth}")
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    rng = seed.generator()
    field = np.zeros(arity**tree_depth)
    for level in range(1, tree_depth + 1):
        draws = rng.normal(0.0, sigma, size=arity**level)
        weight = float(lam) ** (level - tree_depth)
        field += weight * np.repeat(draws, arity ** (tree_depth - level))
    return field


def hierarchical_levels(spec: HierarchicalSpec, seed: Seed) -> list[np.ndarray]:
    """All levels of the correlated walk; level j has shape (p_1...p_j, n).

    Each node adds its own independent field draw to its parent's
    coordinates, so a level-j point is the sum of j field draws along its
    label path.
    """
    validate_spec(spec)
    levels: list[np.ndarray] = []
    parent = np.zeros((1, spec.dim))
    for j, p_j in enumerate(spec.branching, start=1):
        prefixes = list(iter_multiindices(spec.branching[:j]))
        pts = np.empty((len(prefixes), spec.dim))
        for row, prefix in enumerate(prefixes):
            field = generate_coordinate_field(
                spec.arity, spec.tree_depth, spec.lam, spec.sigma, _node_seed(seed, prefix)
            )
            pts[row] = parent[row // p_j] + field
        levels.append(pts)
        parent = pts
    return levels


def generate_hierarchical(spec: HierarchicalSpec, seed: Seed) -> PointCloud:
    """Final-level points of the correlated-coordinate branching walk."""
    points = hierarchical_levels(spec, seed)[-1]
    return PointCloud(
        points=points,
        labels=tuple(iter_multiindices(spec.branching)),
        spec=spec,
        seed=seed,
    )
