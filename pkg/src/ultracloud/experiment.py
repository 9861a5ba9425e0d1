"""Monte Carlo studies over the generators.

Three probes: ultrametricity-degree sweeps across ambient dimension,
convergence of distance matrices onto the analytic limit, and validation of
the field moments against their closed forms. All results are deterministic
in the master seed: realization r of sweep row i always draws from substream
seed.child(i).child(r), so scheduling cannot change any number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    GenSpec,
    HierarchicalSpec,
    IndependentSpec,
    PointCloud,
    Seed,
    SpecValidationError,
    iter_multiindices,
)
from .generate import generate_coordinate_field, generate_hierarchical, generate_independent
from .metric import distance_matrix
from .theory import (
    LimitMatrix,
    effective_sigmas,
    hier_covariance,
    hier_variance,
    limit_matrix,
)
from .ultrametry import ultrametricity_degree

__all__ = [
    "SweepRow",
    "SweepResult",
    "sweep_ultrametricity",
    "ConvergenceRow",
    "ConvergenceResult",
    "convergence_probe",
    "default_epsilon",
    "MomentCheck",
    "MomentProbeReport",
    "moment_probe",
    "limit_for_spec",
]


def _generate(spec: GenSpec, seed: Seed) -> PointCloud:
    if isinstance(spec, IndependentSpec):
        return generate_independent(spec, seed)
    return generate_hierarchical(spec, seed)


def _spec_with_dim(spec: GenSpec, n: int) -> GenSpec:
    """Template spec rebased to ambient dimension n.

    For the correlated family n must be a power of the arity (the sweep
    effectively varies the tree depth).
    """
    if isinstance(spec, IndependentSpec):
        if n < 1:
            raise SpecValidationError(f"dimension must be positive, got {n}")
        return replace(spec, dim=int(n))
    k = round(math.log(n, spec.arity)) if n >= 1 else 0
    if n < 1 or spec.arity**k != n:
        raise SpecValidationError(f"n={n} is not a positive power of the arity {spec.arity}")
    return replace(spec, tree_depth=k)


def limit_for_spec(spec: GenSpec) -> LimitMatrix:
    """Analytic limit matrix of a spec: its own sigmas for the independent
    family, the constant effective deviations for the correlated one."""
    if isinstance(spec, IndependentSpec):
        return limit_matrix(spec.branching, spec.sigmas)
    return limit_matrix(spec.branching, effective_sigmas(spec))


@dataclass(frozen=True)
class SweepRow:
    n: int
    mean_u: float | None
    std_u: float | None
    realizations: int
    degenerate: bool = False
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    spec: GenSpec
    master: int
    alpha: float


def sweep_ultrametricity(
    spec: GenSpec,
    n_values,
    realizations: int,
    seed: Seed,
    alpha: float = 2.0,
) -> SweepResult:
    """Mean and spread of the ultrametricity degree per ambient dimension.

    Generates ``realizations`` independent clouds per n value. Dimensions
    invalid for the family (e.g. not a power of the arity) produce an error
    row and the sweep continues. A row where any realization collapses to
    coincident points carries degree 1 and the ``degenerate`` flag.
    """
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1, got {realizations}")
    rows: list[SweepRow] = []
    for i, n in enumerate(n_values):
        try:
            row_spec = _spec_with_dim(spec, n)
        except SpecValidationError as exc:
            rows.append(SweepRow(n=int(n), mean_u=None, std_u=None, realizations=0, error=str(exc)))
            continue
        degrees = np.empty(realizations)
        degenerate = False
        for r in range(realizations):
            cloud = _generate(row_spec, seed.child(i).child(r))
            dmat = distance_matrix(cloud, alpha)
            if dmat.entries.max() == 0.0:
                degenerate = True
            degrees[r] = ultrametricity_degree(dmat)
        rows.append(
            SweepRow(
                n=int(n),
                mean_u=float(degrees.mean()),
                std_u=float(degrees.std(ddof=1)) if realizations > 1 else 0.0,
                realizations=realizations,
                degenerate=degenerate,
            )
        )
    return SweepResult(rows=tuple(rows), spec=spec, master=seed.master, alpha=float(alpha))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    exceedance: dict[int, float]
    max_rel_dev_mean: float | None
    max_rel_dev_worst: float | None
    error: str | None = None


@dataclass(frozen=True)
class ConvergenceResult:
    rows: tuple[ConvergenceRow, ...]
    epsilon: float
    spec: GenSpec
    master: int


def default_epsilon(limit: LimitMatrix) -> float:
    """10% of the smallest nonzero limit entry."""
    off = limit.entries[limit.entries > 0]
    if off.size == 0:
        raise ValueError("limit matrix has no nonzero entries; pick epsilon explicitly")
    return 0.1 * float(off.min())


def convergence_probe(
    spec: GenSpec,
    n_values,
    epsilon: float,
    realizations: int,
    seed: Seed,
    alpha: float = 2.0,
) -> ConvergenceResult:
    """Empirical frequency of |distance - limit| >= epsilon per pair class.

    Pairs are classed by the first label level at which they differ (all
    pairs of a class share one limit value). Also reports the per-cloud
    maximum of |d - u| / u over off-diagonal pairs, averaged over
    realizations and at its worst.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1, got {realizations}")
    lim = limit_for_spec(spec)
    u = lim.entries
    lab = np.array(lim.labels, dtype=np.int64)
    neq = lab[:, None, :] != lab[None, :, :]
    first_diff = neq.argmax(axis=2) + 1
    iu, ju = np.triu_indices(u.shape[0], 1)
    pair_level = first_diff[iu, ju]
    pair_limit = u[iu, ju]
    levels = sorted(set(int(v) for v in pair_level))
    rows: list[ConvergenceRow] = []
    for i, n in enumerate(n_values):
        try:
            row_spec = _spec_with_dim(spec, n)
        except SpecValidationError as exc:
            rows.append(
                ConvergenceRow(n=int(n), exceedance={}, max_rel_dev_mean=None, max_rel_dev_worst=None, error=str(exc))
            )
            continue
        exceed = {lvl: 0 for lvl in levels}
        max_devs = np.empty(realizations)
        for r in range(realizations):
            cloud = _generate(row_spec, seed.child(i).child(r))
            d = distance_matrix(cloud, alpha).entries[iu, ju]
            abs_dev = np.abs(d - pair_limit)
            for lvl in levels:
                exceed[lvl] += int((abs_dev[pair_level == lvl] >= epsilon).sum())
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.where(pair_limit > 0, abs_dev / pair_limit, 0.0)
            max_devs[r] = rel.max()
        freqs = {
            lvl: exceed[lvl] / (realizations * int((pair_level == lvl).sum())) for lvl in levels
        }
        rows.append(
            ConvergenceRow(
                n=int(n),
                exceedance=freqs,
                max_rel_dev_mean=float(max_devs.mean()),
                max_rel_dev_worst=float(max_devs.max()),
            )
        )
    return ConvergenceResult(rows=tuple(rows), epsilon=float(epsilon), spec=spec, master=seed.master)


@dataclass(frozen=True)
class MomentCheck:
    name: str
    observed: float
    expected: float
    se: float
    z: float


@dataclass(frozen=True)
class MomentProbeReport:
    checks: tuple[MomentCheck, ...]
    flagged: tuple[str, ...]
    realizations: int
    spec: HierarchicalSpec
    master: int

    @property
    def passed(self) -> bool:
        return not self.flagged


def moment_probe(
    spec: HierarchicalSpec,
    realizations: int,
    seed: Seed,
    max_pairs_per_class: int = 1000,
) -> MomentProbeReport:
    """Empirical field moments versus their closed forms, as z-scores.

    One statistic per realization (a within-field average), so standard
    errors come from independent replicates even though coordinates inside
    one field are correlated. Covariance classes larger than
    ``max_pairs_per_class`` are truncated deterministically (first pairs in
    index order). Any |z| > 4 lands in ``flagged``.
    """
    if realizations < 2:
        raise ValueError(f"realizations must be >= 2, got {realizations}")
    m, k = spec.arity, spec.tree_depth
    fields = np.stack(
        [
            generate_coordinate_field(m, k, spec.lam, spec.sigma, seed.child(t))
            for t in range(realizations)
        ]
    )
    coords = np.array(list(iter_multiindices((m,) * k)), dtype=np.int64)
    iu, ju = np.triu_indices(coords.shape[0], 1)
    pair_level = (coords[iu] != coords[ju]).argmax(axis=1) + 1

    checks: list[MomentCheck] = []

    def add(name: str, per_realization: np.ndarray, expected: float) -> None:
        observed = float(per_realization.mean())
        se = float(per_realization.std(ddof=1)) / math.sqrt(realizations)
        if se == 0.0:
            z = 0.0 if observed == expected else math.inf
        else:
            z = (observed - expected) / se
        checks.append(MomentCheck(name=name, observed=observed, expected=expected, se=se, z=z))

    add("mean", fields.mean(axis=1), 0.0)
    add("variance", (fields**2).mean(axis=1), hier_variance(k, spec.lam, spec.sigma))
    for r in range(1, k + 1):
        sel = np.flatnonzero(pair_level == r)[:max_pairs_per_class]
        prods = fields[:, iu[sel]] * fields[:, ju[sel]]
        add(f"cov[r={r}]", prods.mean(axis=1), hier_covariance(r, k, spec.lam, spec.sigma))

    flagged = tuple(c.name for c in checks if abs(c.z) > 4.0)
    return MomentProbeReport(
        checks=tuple(checks),
        flagged=flagged,
        realizations=realizations,
        spec=spec,
        master=seed.master,
    )
