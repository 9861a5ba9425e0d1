import json
import math
from pathlib import Path

import numpy as np
import pytest

from ultracloud.cli import cli_dispatch
from ultracloud.storage import read_manifest, read_matrix_csv

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    status = cli_dispatch([str(a) for a in argv])
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def last_error(err: str) -> dict:
    return json.loads(err.strip().splitlines()[-1])


class TestGenerate:
    def test_independent_pipeline(self, tmp_path, capsys):
        cloud = tmp_path / "cloud.csv"
        dist = tmp_path / "dist.csv"
        status, _, _ = run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,2,2",
            "--sigmas", "10,10,10", "--n", "50", "--seed", "42", "--out", cloud,
        )
        assert status == 0
        assert cloud.exists() and read_manifest(f"{cloud}.manifest.json")["command"] == "generate"
        status, _, _ = run(capsys, "distances", "--in", cloud, "--alpha", "2", "--out", dist)
        assert status == 0
        status, out, _ = run(capsys, "analyze", "--in", dist)
        assert status == 0
        report = json.loads(out)
        assert 0.0 <= report["ultrametricity"]["degree"] <= 1.0
        assert report["metric_axioms"]["passed"]

    def test_generate_twice_identical_files(self, tmp_path, capsys):
        args = [
            "generate", "--model", "hierarchical", "--branching", "2,2,2",
            "--m", "2", "--k", "3", "--lambda", "2", "--sigma", "10",
            "--seed", "1",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, *args, "--out", a)[0] == 0
        assert run(capsys, *args, "--out", b)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_distances_with_infinite_alpha(self, tmp_path, capsys):
        from ultracloud.metric import distance_matrix
        from ultracloud.storage import read_cloud_csv

        cloud_path = tmp_path / "cloud.csv"
        dist_path = tmp_path / "dist.csv"
        assert run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,2",
            "--sigmas", "3,1", "--n", "20", "--seed", "8", "--out", cloud_path,
        )[0] == 0
        assert run(capsys, "distances", "--in", cloud_path, "--alpha", "inf", "--out", dist_path)[0] == 0
        got = read_matrix_csv(dist_path)
        want = distance_matrix(read_cloud_csv(cloud_path), math.inf).entries
        assert np.array_equal(got, want)

    def test_model_flag_mismatch_is_usage_error(self, tmp_path, capsys):
        status, _, err = run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,2",
            "--sigmas", "1,1", "--n", "4", "--m", "2",
            "--seed", "1", "--out", tmp_path / "c.csv",
        )
        assert status == 2
        assert last_error(err)["error"]["kind"] == "usage"

    def test_missing_required_flags(self, tmp_path, capsys):
        status, _, err = run(
            capsys,
            "generate", "--model", "hierarchical", "--branching", "2,2",
            "--seed", "1", "--out", tmp_path / "c.csv",
        )
        assert status == 2
        assert "--m" in last_error(err)["error"]["message"]

    def test_invalid_spec_is_validation_error(self, tmp_path, capsys):
        status, _, err = run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,0,2",
            "--sigmas", "1,1,1", "--n", "4", "--seed", "1", "--out", tmp_path / "c.csv",
        )
        assert status == 1
        assert last_error(err)["error"]["kind"] == "validation"

    def test_unknown_flag(self, tmp_path, capsys):
        status, _, err = run(capsys, "generate", "--frobnicate")
        assert status == 2
        assert last_error(err)["error"]["kind"] == "usage"

    def test_omitted_seed_recorded_and_replayable(self, tmp_path, capsys):
        out = tmp_path / "cloud.csv"
        status, _, _ = run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,2",
            "--sigmas", "1,1", "--n", "8", "--out", out,
        )
        assert status == 0
        manifest = read_manifest(f"{out}.manifest.json")
        assert "--seed" in manifest["argv"]
        first = out.read_bytes()
        out.unlink()
        assert cli_dispatch(manifest["argv"]) == 0
        capsys.readouterr()
        assert out.read_bytes() == first


class TestAnalyze:
    def test_asymmetric_input_rejected_with_cell_pair(self, capsys):
        status, _, err = run(capsys, "analyze", "--in", DATA / "dist8_dim1000.csv")
        assert status == 1
        message = last_error(err)["error"]["message"]
        assert "asymmetric at (0, 6)" in message
        assert "25.14" in message and "24.14" in message

    def test_symmetrize_reports_degree(self, capsys):
        status, out, _ = run(
            capsys, "analyze", "--in", DATA / "dist8_dim10.csv", "--symmetrize"
        )
        assert status == 0
        report = json.loads(out)
        assert report["ultrametricity"]["degree"] == pytest.approx(0.8047333777076983, rel=1e-12)
        assert report["symmetrized"] is True

    def test_degrees_grow_with_sampling_dimension(self, capsys):
        degrees = []
        for name in ("dist8_dim10.csv", "dist8_dim100.csv", "dist8_dim1000.csv"):
            status, out, _ = run(capsys, "analyze", "--in", DATA / name, "--symmetrize")
            assert status == 0
            degrees.append(json.loads(out)["ultrametricity"]["degree"])
        assert degrees == sorted(degrees)
        assert degrees[1] == pytest.approx(0.8869445873974107, rel=1e-12)

    def test_subdominant_output(self, tmp_path, capsys):
        sub_path = tmp_path / "sub.csv"
        status, out, _ = run(
            capsys,
            "analyze", "--in", DATA / "dist8_dim1000.csv", "--symmetrize",
            "--subdominant-out", sub_path,
        )
        assert status == 0
        sub = read_matrix_csv(sub_path)
        src = read_matrix_csv(DATA / "dist8_dim1000.csv")
        sym = 0.5 * (src + src.T)
        assert np.all(sub <= sym + 1e-12)
        from ultracloud.ultrametry import is_ultrametric

        assert is_ultrametric(sub, tol=0.0)

    def test_report_to_file_with_manifest(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        status, out, _ = run(
            capsys,
            "analyze", "--in", DATA / "dist8_dim10.csv", "--symmetrize",
            "--out", report_path, "--manifest", tmp_path / "m.json",
        )
        assert status == 0 and out == ""
        assert json.loads(report_path.read_text())["n_points"] == 8
        assert read_manifest(tmp_path / "m.json")["outputs"]["report"] == str(report_path)

    def test_missing_file_is_io_error(self, capsys):
        status, _, err = run(capsys, "analyze", "--in", "no-such-file.csv")
        assert status == 1
        assert last_error(err)["error"]["kind"] == "io"


class TestLimit:
    def test_reference_block_matrix(self, tmp_path, capsys):
        out = tmp_path / "limit.csv"
        status, _, _ = run(
            capsys, "limit", "--branching", "2,2,2", "--sigmas", "10,10,10", "--out", out
        )
        assert status == 0
        lim = read_matrix_csv(out)
        values = sorted(set(np.round(lim[np.triu_indices(8, 1)], 12)))
        assert values == pytest.approx([10 * math.sqrt(2), 20.0, 10 * math.sqrt(6)], rel=1e-12)

    def test_hierarchical_parameters(self, tmp_path, capsys):
        out = tmp_path / "limit.csv"
        status, _, _ = run(
            capsys,
            "limit", "--branching", "2,2", "--m", "2", "--k", "3",
            "--lambda", "2", "--sigma", "10", "--out", out,
        )
        assert status == 0
        lim = read_matrix_csv(out)
        step2 = 131.25
        assert lim[0, 1] == pytest.approx(math.sqrt(2 * step2), rel=1e-12)
        assert lim[0, 2] == pytest.approx(math.sqrt(4 * step2), rel=1e-12)

    def test_requires_exactly_one_parameterization(self, tmp_path, capsys):
        status, _, err = run(
            capsys,
            "limit", "--branching", "2,2", "--sigmas", "1,1", "--m", "2", "--k", "2",
            "--lambda", "2", "--sigma", "1", "--out", tmp_path / "x.csv",
        )
        assert status == 2
        status, _, err = run(capsys, "limit", "--branching", "2,2", "--out", tmp_path / "x.csv")
        assert status == 2


class TestSweepAndMoments:
    def test_sweep_with_convergence(self, tmp_path, capsys):
        sweep_path = tmp_path / "sweep.csv"
        conv_path = tmp_path / "conv.json"
        status, _, _ = run(
            capsys,
            "sweep", "--model", "independent", "--branching", "2,2,2",
            "--sigmas", "10,10,10", "--n-list", "8,64", "--realizations", "3",
            "--epsilon", "2.0", "--convergence-out", conv_path,
            "--seed", "3", "--out", sweep_path,
        )
        assert status == 0
        lines = sweep_path.read_text().splitlines()
        assert len(lines) == 3
        conv = json.loads(conv_path.read_text())
        assert [row["n"] for row in conv["rows"]] == [8, 64]
        manifest = read_manifest(f"{sweep_path}.manifest.json")
        assert manifest["outputs"]["convergence"] == str(conv_path)

    def test_hierarchical_sweep_uses_k_list(self, tmp_path, capsys):
        sweep_path = tmp_path / "sweep.csv"
        status, _, _ = run(
            capsys,
            "sweep", "--model", "hierarchical", "--branching", "2,2",
            "--m", "2", "--lambda", "2", "--sigma", "5", "--k-list", "2,3",
            "--realizations", "2", "--seed", "4", "--out", sweep_path,
        )
        assert status == 0
        lines = sweep_path.read_text().splitlines()
        assert lines[1].startswith("4,") and lines[2].startswith("8,")

    def test_epsilon_requires_convergence_out(self, tmp_path, capsys):
        status, _, err = run(
            capsys,
            "sweep", "--model", "independent", "--branching", "2,2",
            "--sigmas", "1,1", "--n-list", "4", "--epsilon", "1.0",
            "--seed", "5", "--out", tmp_path / "s.csv",
        )
        assert status == 2

    def test_moments_report(self, tmp_path, capsys):
        out = tmp_path / "moments.json"
        status, _, _ = run(
            capsys,
            "moments", "--m", "2", "--k", "3", "--lambda", "2", "--sigma", "10",
            "--realizations", "400", "--seed", "6", "--out", out,
        )
        assert status == 0
        report = json.loads(out.read_text())
        assert report["spec"]["m"] == 2
        assert len(report["checks"]) == 5

    def test_no_subcommand_is_usage_error(self, capsys):
        status, _, err = run(capsys)
        assert status == 2


def test_full_pipeline_bit_identical_across_runs(tmp_path, capsys):
    for d in ("one", "two"):
        base = tmp_path / d
        base.mkdir()
        assert run(
            capsys,
            "generate", "--model", "independent", "--branching", "2,2,2",
            "--sigmas", "10,10,10", "--n", "100", "--seed", "99",
            "--out", base / "cloud.csv",
        )[0] == 0
        assert run(
            capsys, "distances", "--in", base / "cloud.csv", "--out", base / "dist.csv"
        )[0] == 0
        assert run(
            capsys, "analyze", "--in", base / "dist.csv", "--out", base / "report.json"
        )[0] == 0
    for name in ("cloud.csv", "dist.csv", "report.json"):
        a = (tmp_path / "one" / name).read_bytes()
        b = (tmp_path / "two" / name).read_bytes()
        assert a == b
