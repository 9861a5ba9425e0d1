"""Shared domain types: generation specs, multi-index bookkeeping, point
clouds, distance matrices, and seeded random substreams.

Points carry multi-index labels (a_1, ..., a_N), 1-based at every level and
enumerated lexicographically with a_1 varying slowest, so that matrices built
over a cloud share one canonical row order. Randomness flows from a single
:class:`Seed`: a master integer plus a derivation path. Distinct paths give
statistically independent Philox streams; identical (master, path) pairs
reproduce bit-identical draws regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence, Union
import warnings

import numpy as np

__all__ = [
    "SpecValidationError",
    "NonConvergentRegimeWarning",
    "Seed",
    "derive_substream",
    "IndependentSpec",
    "HierarchicalSpec",
    "GenSpec",
    "PointCloud",
    "DistanceMatrix",
    "encode_multiindex",
    "decode_multiindex",
    "iter_multiindices",
    "validate_spec",
]


class SpecValidationError(ValueError):
    """A generation spec violates one of its structural invariants."""


class NonConvergentRegimeWarning(UserWarning):
    """Correlation decay lam <= 1: generation works, but distances are not
    expected to concentrate on the analytic limit as dimension grows."""


@dataclass(frozen=True)
class Seed:
    """Master seed plus substream derivation path.

    ``child(i)`` appends ``i`` to the path; the resulting streams are
    independent for distinct paths because the path feeds the Philox key
    derivation (counter-based, so parallel generation order cannot change
    any draw).
    """

    master: int
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))
        if self.master < 0 or self.master >= 2**64:
            raise ValueError(f"master seed must be a 64-bit unsigned integer, got {self.master}")
        if any(p < 0 for p in self.path):
            raise ValueError(f"substream path components must be non-negative, got {self.path}")

    def child(self, index: int) -> "Seed":
        if index < 0:
            raise ValueError(f"child index must be non-negative, got {index}")
        return Seed(self.master, self.path + (int(index),))

    def generator(self) -> np.random.Generator:
        """Fresh Gaussian-capable generator for this (master, path)."""
        seq = np.random.SeedSequence(self.master, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(seq))


def derive_substream(seed: Seed, child: int) -> Seed:
    """Deterministic substream derivation; equivalent to ``seed.child(child)``."""
    return seed.child(child)


@dataclass(frozen=True)
class IndependentSpec:
    """Parameters of the branching generator with independent coordinates.

    Level j of the walk splits every point into ``branching[j-1]`` children,
    each child offsetting every coordinate by an independent draw from
    N(0, sigmas[j-1]). ``sigmas`` are standard deviations. ``dim`` is the
    ambient dimension n.
    """

    branching: tuple[int, ...]
    sigmas: tuple[float, ...]
    dim: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "branching", tuple(int(p) for p in self.branching))
        object.__setattr__(self, "sigmas", tuple(float(s) for s in self.sigmas))
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def depth(self) -> int:
        return len(self.branching)

    @property
    def n_points(self) -> int:
        return math.prod(self.branching)


@dataclass(frozen=True)
class HierarchicalSpec:
    """Parameters of the branching generator with cluster-correlated coordinates.

    Coordinates live on the leaves of a full ``arity``-ary tree of depth
    ``tree_depth`` (so dim = arity ** tree_depth); each tree node carries an
    independent N(0, sigma) draw, attenuated by ``lam ** -(distance from
    leaf level)``, and shared by every coordinate below it. ``lam`` controls
    how strongly coordinates are coupled: large values decouple them,
    ``lam <= 1`` makes ancestor terms dominate.
    """

    branching: tuple[int, ...]
    arity: int
    tree_depth: int
    lam: float
    sigma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "branching", tuple(int(p) for p in self.branching))
        object.__setattr__(self, "arity", int(self.arity))
        object.__setattr__(self, "tree_depth", int(self.tree_depth))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def dim(self) -> int:
        return self.arity**self.tree_depth

    @property
    def depth(self) -> int:
        return len(self.branching)

    @property
    def n_points(self) -> int:
        return math.prod(self.branching)

    @property
    def convergent_regime(self) -> bool:
        return self.lam > 1.0


GenSpec = Union[IndependentSpec, HierarchicalSpec]


@dataclass(frozen=True)
class PointCloud:
    """P x n matrix of generated points with their multi-index labels.

    ``spec`` and ``seed`` record provenance when the cloud was generated
    here; both are None for clouds read back from files.
    """

    points: np.ndarray
    labels: tuple[tuple[int, ...], ...]
    spec: GenSpec | None = None
    seed: Seed | None = None

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-d array, got shape {pts.shape}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", tuple(tuple(int(a) for a in lab) for lab in self.labels))
        if len(self.labels) != pts.shape[0]:
            raise ValueError(f"{pts.shape[0]} rows but {len(self.labels)} labels")

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Square matrix of pairwise distances plus the Minkowski exponent used.

    ``alpha`` is in [1, inf]; ``math.inf`` means the maximum-coordinate
    metric. Valid instances are symmetric, nonnegative, zero on the
    diagonal, and satisfy the triangle inequality; the constructor only
    enforces shape so that imperfect matrices read from files can still be
    represented and diagnosed.
    """

    entries: np.ndarray
    alpha: float = 2.0

    def __post_init__(self) -> None:
        ent = np.ascontiguousarray(self.entries, dtype=np.float64)
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {ent.shape}")
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def n_points(self) -> int:
        return self.entries.shape[0]


def _strides(branching: Sequence[int]) -> list[int]:
    # stride of level j = product of branching below it (a_1 slowest)
    strides = [1] * len(branching)
    for j in range(len(branching) - 2, -1, -1):
        strides[j] = strides[j + 1] * branching[j + 1]
    return strides


def encode_multiindex(idx: Sequence[int], branching: Sequence[int]) -> int:
    """Lexicographic rank of a multi-index, first level varying slowest."""
    if len(idx) != len(branching):
        raise SpecValidationError(
            f"multi-index has {len(idx)} levels, branching has {len(branching)}"
        )
    for j, (a, p) in enumerate(zip(idx, branching), start=1):
        if not 1 <= a <= p:
            raise SpecValidationError(
                f"component {a} at level {j} outside the valid range 1..{p}"
            )
    strides = _strides(branching)
    return sum((a - 1) * s for a, s in zip(idx, strides))


def decode_multiindex(ordinal: int, branching: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`encode_multiindex`."""
    total = math.prod(branching)
    if not 0 <= ordinal < total:
        raise SpecValidationError(f"ordinal {ordinal} outside the valid range 0..{total - 1}")
    out = []
    rem = int(ordinal)
    for s in _strides(branching):
        out.append(rem // s + 1)
        rem %= s
    return tuple(out)


def iter_multiindices(branching: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All multi-indices in lexicographic order (first level slowest)."""
    return product(*(range(1, p + 1) for p in branching))


def validate_spec(spec: GenSpec) -> GenSpec:
    """Check structural invariants; return the spec unchanged if they hold.

    A hierarchical spec with ``lam <= 1`` is accepted but triggers a
    :class:`NonConvergentRegimeWarning`.
    """
    if isinstance(spec, IndependentSpec):
        _validate_branching(spec.branching)
        if len(spec.sigmas) != len(spec.branching):
            raise SpecValidationError(
                f"{len(spec.sigmas)} step deviations for {len(spec.branching)} levels"
            )
        _validate_sigmas(spec.sigmas)
        if spec.dim < 1:
            raise SpecValidationError(f"dimension must be positive, got {spec.dim}")
        if spec.n_points < 2:
            raise SpecValidationError(
                f"branching {spec.branching} yields {spec.n_points} point(s); need at least 2"
            )
        return spec
    if isinstance(spec, HierarchicalSpec):
        _validate_branching(spec.branching)
        if spec.arity < 2:
            raise SpecValidationError(f"coordinate tree arity must be >= 2, got {spec.arity}")
        if spec.tree_depth < 1:
            raise SpecValidationError(f"coordinate tree depth must be >= 1, got {spec.tree_depth}")
        if spec.sigma < 0:
            raise SpecValidationError(f"sigma must be nonnegative, got {spec.sigma}")
        if spec.lam <= 0:
            raise SpecValidationError(f"lam must be positive, got {spec.lam}")
        if spec.lam <= 1.0:
            warnings.warn(
                f"lam={spec.lam} is outside the convergent regime (lam > 1); "
                "distances will not concentrate on the analytic limit",
                NonConvergentRegimeWarning,
                stacklevel=2,
            )
        return spec
    raise TypeError(f"not a generation spec: {type(spec).__name__}")


def _validate_branching(branching: tuple[int, ...]) -> None:
    if len(branching) == 0:
        raise SpecValidationError("depth must be at least 1 (empty branching)")
    for j, p in enumerate(branching, start=1):
        if p < 1:
            raise SpecValidationError(f"branching factor {p} at level {j} must be positive")


def _validate_sigmas(sigmas: tuple[float, ...]) -> None:
    for j, s in enumerate(sigmas, start=1):
        if s < 0 or not math.isfinite(s):
            raise SpecValidationError(f"step deviation {s} at level {j} must be a finite nonnegative real")
