"""Command-line front end.

Subcommands: generate, distances, analyze, limit, sweep, moments. Runs that
write files also write a JSON manifest (default ``<out>.manifest.json``)
recording the resolved parameters, seed, and tool versions; re-running the
manifest's ``argv`` from the same directory reproduces every output byte for
byte. Errors go to stderr as one JSON object; exit status is 0 on success, 2
on usage errors, 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import math
import secrets
import sys

import numpy as np

from .core import (
    HierarchicalSpec,
    IndependentSpec,
    Seed,
    SpecValidationError,
    validate_spec,
)
from .experiment import convergence_probe, moment_probe, sweep_ultrametricity
from .generate import generate_hierarchical, generate_independent
from .metric import check_metric_axioms, distance_matrix
from .storage import (
    CsvFormatError,
    convergence_to_dict,
    dumps_json,
    moment_report_to_dict,
    read_cloud_csv,
    read_matrix_csv,
    spec_to_dict,
    sweep_to_csv,
    validate_distance_entries,
    write_cloud_csv,
    write_json,
    write_manifest,
    write_matrix_csv,
)
from .theory import effective_sigmas, limit_matrix
from .ultrametry import subdominant_ultrametric, ultrametricity_report

__all__ = ["cli_dispatch", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _ints_csv(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats_csv(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _alpha(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ultracloud", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_gen = sub.add_parser("generate", help="generate a labeled point cloud CSV")
    p_gen.add_argument("--model", choices=["independent", "hierarchical"], required=True)
    p_gen.add_argument("--branching", type=_ints_csv, required=True, metavar="P1,P2,...")
    p_gen.add_argument("--sigmas", type=_floats_csv, metavar="S1,S2,...")
    p_gen.add_argument("--n", type=int, help="ambient dimension (independent model)")
    p_gen.add_argument("--m", type=int, help="coordinate tree arity (hierarchical model)")
    p_gen.add_argument("--k", type=int, help="coordinate tree depth (hierarchical model)")
    p_gen.add_argument("--lambda", dest="lam", type=float, help="coordinate coupling decay")
    p_gen.add_argument("--sigma", type=float, help="node deviation (hierarchical model)")
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--manifest")

    p_dist = sub.add_parser("distances", help="distance matrix CSV from a cloud CSV")
    p_dist.add_argument("--in", dest="src", required=True)
    p_dist.add_argument("--alpha", type=_alpha, default=2.0)
    p_dist.add_argument("--out", required=True)
    p_dist.add_argument("--manifest")

    p_an = sub.add_parser("analyze", help="ultrametricity report JSON from a distance CSV")
    p_an.add_argument("--in", dest="src", required=True)
    p_an.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="tolerance relative to the largest entry (default 1e-9)",
    )
    p_an.add_argument(
        "--symmetrize",
        action="store_true",
        help="average the matrix with its transpose instead of rejecting asymmetry",
    )
    p_an.add_argument("--subdominant-out", help="also write the subdominant ultrametric CSV here")
    p_an.add_argument("--out", help="report path (default: stdout)")
    p_an.add_argument("--manifest")

    p_lim = sub.add_parser("limit", help="analytic limit matrix CSV")
    p_lim.add_argument("--branching", type=_ints_csv, required=True, metavar="P1,P2,...")
    p_lim.add_argument("--sigmas", type=_floats_csv, metavar="S1,S2,...")
    p_lim.add_argument("--m", type=int)
    p_lim.add_argument("--k", type=int)
    p_lim.add_argument("--lambda", dest="lam", type=float)
    p_lim.add_argument("--sigma", type=float)
    p_lim.add_argument("--out", required=True)
    p_lim.add_argument("--manifest")

    p_sw = sub.add_parser("sweep", help="ultrametricity degree versus dimension")
    p_sw.add_argument("--model", choices=["independent", "hierarchical"], required=True)
    p_sw.add_argument("--branching", type=_ints_csv, required=True, metavar="P1,P2,...")
    p_sw.add_argument("--sigmas", type=_floats_csv)
    p_sw.add_argument("--n-list", type=_ints_csv, dest="n_list", metavar="N1,N2,...")
    p_sw.add_argument("--m", type=int)
    p_sw.add_argument("--lambda", dest="lam", type=float)
    p_sw.add_argument("--sigma", type=float)
    p_sw.add_argument("--k-list", type=_ints_csv, dest="k_list", metavar="K1,K2,...")
    p_sw.add_argument("--realizations", type=int, default=10)
    p_sw.add_argument(
        "--alpha",
        type=_alpha,
        default=2.0,
        help="metric exponent for the degree sweep (the convergence probe always uses 2)",
    )
    p_sw.add_argument("--epsilon", type=float, help="also run the convergence probe")
    p_sw.add_argument("--convergence-out", help="convergence probe JSON path")
    p_sw.add_argument("--seed", type=int)
    p_sw.add_argument("--out", required=True)
    p_sw.add_argument("--manifest")

    p_mom = sub.add_parser("moments", help="field moments versus closed forms")
    p_mom.add_argument("--m", type=int, required=True)
    p_mom.add_argument("--k", type=int, required=True)
    p_mom.add_argument("--lambda", dest="lam", type=float, required=True)
    p_mom.add_argument("--sigma", type=float, required=True)
    p_mom.add_argument("--realizations", type=int, default=10000)
    p_mom.add_argument("--seed", type=int)
    p_mom.add_argument("--out", required=True)
    p_mom.add_argument("--manifest")

    return parser


def _require(ns, names: list[str], model: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(ns, n) is None]
    if missing:
        raise _UsageError(f"model {model!r} requires {', '.join(missing)}")


def _forbid(ns, names: list[str], model: str) -> None:
    extra = [f"--{n.replace('_', '-')}" for n in names if getattr(ns, n) is not None]
    if extra:
        raise _UsageError(f"model {model!r} does not accept {', '.join(extra)}")


def _resolve_seed(ns, argv: list[str]) -> tuple[Seed, list[str]]:
    if ns.seed is None:
        master = secrets.randbits(64)
        return Seed(master), list(argv) + ["--seed", str(master)]
    if ns.seed < 0:
        raise _UsageError(f"--seed must be nonnegative, got {ns.seed}")
    return Seed(ns.seed), list(argv)


def _manifest_path(ns) -> str | None:
    if ns.manifest:
        return ns.manifest
    out = getattr(ns, "out", None)
    return f"{out}.manifest.json" if out else None


def _spec_from_args(ns, model: str):
    if model == "independent":
        _require(ns, ["sigmas", "n"], model)
        _forbid(ns, ["m", "k", "lam", "sigma"], model)
        return IndependentSpec(branching=ns.branching, sigmas=ns.sigmas, dim=ns.n)
    _require(ns, ["m", "k", "lam", "sigma"], model)
    _forbid(ns, ["sigmas", "n"], model)
    return HierarchicalSpec(
        branching=ns.branching, arity=ns.m, tree_depth=ns.k, lam=ns.lam, sigma=ns.sigma
    )


def _cmd_generate(ns, argv: list[str]) -> None:
    spec = validate_spec(_spec_from_args(ns, ns.model))
    seed, argv = _resolve_seed(ns, argv)
    cloud = (
        generate_independent(spec, seed)
        if ns.model == "independent"
        else generate_hierarchical(spec, seed)
    )
    write_cloud_csv(cloud, ns.out)
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(
            mpath,
            "generate",
            argv,
            {"spec": spec_to_dict(spec), "seed": seed.master},
            {"cloud": ns.out},
        )


def _cmd_distances(ns, argv: list[str]) -> None:
    cloud = read_cloud_csv(ns.src)
    dmat = distance_matrix(cloud, ns.alpha)
    labels = ["x" + ".".join(str(a) for a in lab) for lab in cloud.labels]
    write_matrix_csv(dmat.entries, ns.out, labels=labels)
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(
            mpath,
            "distances",
            argv,
            {"alpha": ns.alpha if math.isfinite(ns.alpha) else "inf", "in": ns.src},
            {"distances": ns.out},
        )


def _cmd_analyze(ns, argv: list[str]) -> None:
    entries = read_matrix_csv(ns.src)
    scale = float(np.abs(entries).max()) or 1.0
    tol_abs = ns.tol * scale
    if ns.symmetrize:
        entries = 0.5 * (entries + entries.T)
    validate_distance_entries(entries, tol_abs)
    axioms = check_metric_axioms(entries, tol_abs)
    ultra = ultrametricity_report(entries, tol_abs)
    report = {
        "n_points": int(entries.shape[0]),
        "scale": scale,
        "tol_relative": ns.tol,
        "tol_absolute": tol_abs,
        "symmetrized": bool(ns.symmetrize),
        "metric_axioms": {
            "passed": axioms.passed,
            "worst_asymmetry": axioms.worst_asymmetry,
            "worst_triangle_deficit": axioms.worst_triangle_deficit,
            "min_entry": axioms.min_entry,
            "max_diagonal": axioms.max_diagonal,
        },
        "ultrametricity": {
            "degree": ultra.degree,
            "min_triangle_degree": ultra.min_triangle_degree,
            "min_triangle": list(ultra.min_triangle),
            "max_triangle_degree": ultra.max_triangle_degree,
            "max_triangle": list(ultra.max_triangle),
            "strong_triangle": {
                "passed": ultra.strong_check.passed,
                "worst_deficit": ultra.strong_check.worst_deficit,
                "worst_triple": list(ultra.strong_check.worst_triple)
                if ultra.strong_check.worst_triple
                else None,
                "violations": ultra.strong_check.violations,
            },
            "degenerate": ultra.degenerate,
        },
    }
    outputs = {}
    if ns.subdominant_out:
        sub = subdominant_ultrametric(entries)
        write_matrix_csv(sub.entries, ns.subdominant_out)
        outputs["subdominant"] = ns.subdominant_out
    if ns.out:
        write_json(report, ns.out)
        outputs["report"] = ns.out
    else:
        sys.stdout.write(dumps_json(report))
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(
            mpath,
            "analyze",
            argv,
            {"in": ns.src, "tol": ns.tol, "symmetrize": bool(ns.symmetrize)},
            outputs,
        )


def _cmd_limit(ns, argv: list[str]) -> None:
    hier_given = [v for v in (ns.m, ns.k, ns.lam, ns.sigma) if v is not None]
    if ns.sigmas is not None and hier_given:
        raise _UsageError("give either --sigmas or the hierarchical parameters, not both")
    if ns.sigmas is not None:
        sigmas = ns.sigmas
        params: dict = {"branching": list(ns.branching), "sigmas": list(sigmas)}
    elif len(hier_given) == 4:
        spec = validate_spec(
            HierarchicalSpec(
                branching=ns.branching, arity=ns.m, tree_depth=ns.k, lam=ns.lam, sigma=ns.sigma
            )
        )
        sigmas = effective_sigmas(spec)
        params = {"spec": spec_to_dict(spec), "effective_sigmas": list(sigmas)}
    else:
        raise _UsageError("need --sigmas, or all of --m/--k/--lambda/--sigma")
    lim = limit_matrix(ns.branching, sigmas)
    labels = ["x" + ".".join(str(a) for a in lab) for lab in lim.labels]
    write_matrix_csv(lim.entries, ns.out, labels=labels)
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(mpath, "limit", argv, params, {"limit": ns.out})


def _cmd_sweep(ns, argv: list[str]) -> None:
    if ns.model == "independent":
        _require(ns, ["sigmas", "n_list"], ns.model)
        _forbid(ns, ["m", "lam", "sigma", "k_list"], ns.model)
        n_values = list(ns.n_list)
        spec = IndependentSpec(branching=ns.branching, sigmas=ns.sigmas, dim=n_values[0])
    else:
        _require(ns, ["m", "lam", "sigma", "k_list"], ns.model)
        _forbid(ns, ["sigmas", "n_list"], ns.model)
        n_values = [ns.m**k for k in ns.k_list]
        spec = HierarchicalSpec(
            branching=ns.branching,
            arity=ns.m,
            tree_depth=ns.k_list[0],
            lam=ns.lam,
            sigma=ns.sigma,
        )
    validate_spec(spec)
    seed, argv = _resolve_seed(ns, argv)
    if ns.epsilon is not None and not ns.convergence_out:
        raise _UsageError("--epsilon requires --convergence-out")
    result = sweep_ultrametricity(spec, n_values, ns.realizations, seed, ns.alpha)
    sweep_to_csv(result, ns.out)
    outputs = {"sweep": ns.out}
    if ns.epsilon is not None:
        conv = convergence_probe(spec, n_values, ns.epsilon, ns.realizations, seed)
        write_json(convergence_to_dict(conv), ns.convergence_out)
        outputs["convergence"] = ns.convergence_out
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(
            mpath,
            "sweep",
            argv,
            {
                "spec": spec_to_dict(spec),
                "seed": seed.master,
                "n_values": n_values,
                "realizations": ns.realizations,
                "alpha": ns.alpha if math.isfinite(ns.alpha) else "inf",
                "epsilon": ns.epsilon,
            },
            outputs,
        )


def _cmd_moments(ns, argv: list[str]) -> None:
    spec = validate_spec(
        HierarchicalSpec(branching=(1,), arity=ns.m, tree_depth=ns.k, lam=ns.lam, sigma=ns.sigma)
    )
    seed, argv = _resolve_seed(ns, argv)
    report = moment_probe(spec, ns.realizations, seed)
    write_json(moment_report_to_dict(report), ns.out)
    mpath = _manifest_path(ns)
    if mpath:
        write_manifest(
            mpath,
            "moments",
            argv,
            {"spec": spec_to_dict(spec), "seed": seed.master, "realizations": ns.realizations},
            {"moments": ns.out},
        )


_HANDLERS = {
    "generate": _cmd_generate,
    "distances": _cmd_distances,
    "analyze": _cmd_analyze,
    "limit": _cmd_limit,
    "sweep": _cmd_sweep,
    "moments": _cmd_moments,
}


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "message": message}}) + "\n")


def cli_dispatch(argv=None) -> int:
    """Run one CLI invocation; returns the exit status instead of exiting."""
    argv = list(sys.argv[1:]) if argv is None else [str(a) for a in argv]
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if not getattr(ns, "command", None):
            raise _UsageError("no subcommand given (try --help)")
        _HANDLERS[ns.command](ns, argv)
        return 0
    except _UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except CsvFormatError as exc:
        _emit_error("format", str(exc))
        return 1
    except SpecValidationError as exc:
        _emit_error("validation", str(exc))
        return 1
    except FileNotFoundError as exc:
        _emit_error("io", str(exc))
        return 1
    except (ValueError, OSError) as exc:
        _emit_error("error", str(exc))
        return 1


def main() -> None:
    sys.exit(cli_dispatch())
