"""Serialization: matrix and cloud CSV, result tables, JSON reports, manifests.

CSV is RFC-4180-style, UTF-8, LF line endings. Floats are written with
``repr``, the shortest decimal that round-trips, so read(write(x)) is
bit-exact and files carry no locale formatting.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import GenSpec, HierarchicalSpec, IndependentSpec, PointCloud
from .experiment import ConvergenceResult, MomentProbeReport, SweepResult

__all__ = [
    "CsvFormatError",
    "write_matrix_csv",
    "read_matrix_csv",
    "validate_distance_entries",
    "write_cloud_csv",
    "read_cloud_csv",
    "spec_to_dict",
    "spec_from_dict",
    "sweep_to_csv",
    "convergence_to_dict",
    "moment_report_to_dict",
    "dumps_json",
    "write_json",
    "write_manifest",
    "read_manifest",
]


class CsvFormatError(ValueError):
    """Malformed CSV input; the message carries the row/column location."""


def _fmt(value: float) -> str:
    return repr(float(value))


def write_matrix_csv(matrix, dest, labels: Sequence[str] | None = None) -> None:
    """Write a square matrix, optionally preceded by one header row of labels.

    Header labels must not parse as numbers, or the reader will take the
    header for a data row; use a name-like form such as "x1.2.1".
    """
    ent = np.asarray(matrix, dtype=np.float64)
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if labels is not None:
            writer.writerow(labels)
        for row in ent:
            writer.writerow([_fmt(v) for v in row])


def read_matrix_csv(source) -> np.ndarray:
    """Read a square numeric CSV; a single non-numeric first row is skipped
    as a label header."""
    rows: list[list[float]] = []
    with open(source, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for i, cells in enumerate(reader, start=1):
            if not cells:
                continue
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                if i == 1:
                    continue
                bad = next(j for j, c in enumerate(cells, start=1) if not _is_number(c))
                raise CsvFormatError(
                    f"{source}: row {i}, column {bad}: not a number: {cells[bad - 1]!r}"
                ) from None
    if not rows:
        raise CsvFormatError(f"{source}: no data rows")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise CsvFormatError(f"{source}: row {i} has {len(row)} columns, expected {width}")
    if len(rows) != width:
        raise CsvFormatError(f"{source}: matrix is {len(rows)}x{width}, not square")
    return np.array(rows, dtype=np.float64)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def validate_distance_entries(matrix, tol: float = 0.0) -> None:
    """Check that a matrix read from file is a plausible distance matrix.

    Verifies symmetry, zero diagonal, and nonnegativity within absolute
    ``tol``; raises ValueError naming the offending cells otherwise.
    """
    ent = np.asarray(matrix, dtype=np.float64)
    asym = np.abs(ent - ent.T)
    if ent.size and asym.max() > tol:
        a, b = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise ValueError(
            f"asymmetric at ({a}, {b}): {ent[a, b]!r} vs {ent[b, a]!r} "
            f"(difference {asym[a, b]:.6g} exceeds tolerance {tol:.6g})"
        )
    diag = np.abs(np.diagonal(ent))
    if ent.size and diag.max() > tol:
        i = int(np.argmax(diag))
        raise ValueError(f"nonzero diagonal at ({i}, {i}): {ent[i, i]!r}")
    if ent.size and ent.min() < -tol:
        a, b = np.unravel_index(int(np.argmin(ent)), ent.shape)
        raise ValueError(f"negative entry at ({a}, {b}): {ent[a, b]!r}")


def write_cloud_csv(cloud: PointCloud, dest) -> None:
    """One row per point: the label "a1.a2.....aN", then the coordinates."""
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for label, row in zip(cloud.labels, cloud.points):
            writer.writerow([".".join(str(a) for a in label)] + [_fmt(v) for v in row])


def read_cloud_csv(source) -> PointCloud:
    """Inverse of :func:`write_cloud_csv`; provenance fields come back None."""
    labels: list[tuple[int, ...]] = []
    rows: list[list[float]] = []
    with open(source, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for i, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if len(cells) < 2:
                raise CsvFormatError(f"{source}: row {i}: need a label plus coordinates")
            try:
                labels.append(tuple(int(a) for a in cells[0].split(".")))
            except ValueError:
                raise CsvFormatError(
                    f"{source}: row {i}: malformed label {cells[0]!r}"
                ) from None
            try:
                rows.append([float(c) for c in cells[1:]])
            except ValueError:
                bad = next(j for j, c in enumerate(cells[1:], start=2) if not _is_number(c))
                raise CsvFormatError(
                    f"{source}: row {i}, column {bad}: not a number: {cells[bad - 1]!r}"
                ) from None
    if not rows:
        raise CsvFormatError(f"{source}: no data rows")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise CsvFormatError(f"{source}: row {i} has {len(row)} coordinates, expected {width}")
    return PointCloud(points=np.array(rows, dtype=np.float64), labels=tuple(labels))


def spec_to_dict(spec: GenSpec) -> dict:
    if isinstance(spec, IndependentSpec):
        return {
            "model": "independent",
            "branching": list(spec.branching),
            "sigmas": list(spec.sigmas),
            "n": spec.dim,
        }
    return {
        "model": "hierarchical",
        "branching": list(spec.branching),
        "m": spec.arity,
        "k": spec.tree_depth,
        "lambda": spec.lam,
        "sigma": spec.sigma,
    }


def spec_from_dict(data: dict) -> GenSpec:
    model = data.get("model")
    if model == "independent":
        return IndependentSpec(
            branching=tuple(data["branching"]), sigmas=tuple(data["sigmas"]), dim=int(data["n"])
        )
    if model == "hierarchical":
        return HierarchicalSpec(
            branching=tuple(data["branching"]),
            arity=int(data["m"]),
            tree_depth=int(data["k"]),
            lam=float(data["lambda"]),
            sigma=float(data["sigma"]),
        )
    raise ValueError(f"unknown model {model!r}")


def sweep_to_csv(result: SweepResult, dest) -> None:
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "mean_u", "std_u", "realizations", "degenerate", "error"])
        for row in result.rows:
            writer.writerow(
                [
                    row.n,
                    "" if row.mean_u is None else _fmt(row.mean_u),
                    "" if row.std_u is None else _fmt(row.std_u),
                    row.realizations,
                    int(row.degenerate),
                    row.error or "",
                ]
            )


def convergence_to_dict(result: ConvergenceResult) -> dict:
    return {
        "epsilon": result.epsilon,
        "master_seed": result.master,
        "spec": spec_to_dict(result.spec),
        "rows": [
            {
                "n": row.n,
                "exceedance": {str(level): freq for level, freq in row.exceedance.items()},
                "max_rel_dev_mean": row.max_rel_dev_mean,
                "max_rel_dev_worst": row.max_rel_dev_worst,
                "error": row.error,
            }
            for row in result.rows
        ],
    }


def moment_report_to_dict(report: MomentProbeReport) -> dict:
    return {
        "realizations": report.realizations,
        "master_seed": report.master,
        "spec": spec_to_dict(report.spec),
        "passed": report.passed,
        "flagged": list(report.flagged),
        "checks": [asdict(c) for c in report.checks],
    }


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(obj, dest) -> None:
    Path(dest).write_text(dumps_json(obj), encoding="utf-8")


def write_manifest(
    dest, command: str, argv: Sequence[str], params: dict, outputs: dict[str, str]
) -> None:
    """Record everything needed to reproduce a run byte for byte.

    ``argv`` must be the resolved argument vector (explicit seed included);
    re-running it from the same working directory rewrites every output
    identically.
    """
    from . import __version__
    from .kernels import BACKEND

    manifest = {
        "tool": {
            "name": "ultracloud",
            "version": __version__,
            "numpy": np.__version__,
            "kernel_backend": BACKEND,
        },
        "command": command,
        "argv": list(argv),
        "params": params,
        "outputs": outputs,
    }
    write_json(manifest, dest)


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
