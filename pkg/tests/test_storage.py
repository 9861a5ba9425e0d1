import numpy as np
import pytest

from ultracloud.core import HierarchicalSpec, IndependentSpec, PointCloud, Seed
from ultracloud.experiment import moment_probe, sweep_ultrametricity
from ultracloud.generate import generate_independent
from ultracloud.storage import (
    CsvFormatError,
    dumps_json,
    moment_report_to_dict,
    read_cloud_csv,
    read_manifest,
    read_matrix_csv,
    spec_from_dict,
    spec_to_dict,
    sweep_to_csv,
    validate_distance_entries,
    write_cloud_csv,
    write_manifest,
    write_matrix_csv,
)


class TestMatrixCsv:
    def test_zero_matrix_layout(self, tmp_path):
        path = tmp_path / "m.csv"
        write_matrix_csv(np.zeros((2, 2)), path)
        assert path.read_text() == "0.0,0.0\n0.0,0.0\n"

    def test_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(90)
        m = rng.normal(size=(8, 8))
        path = tmp_path / "m.csv"
        write_matrix_csv(m, path)
        assert np.array_equal(read_matrix_csv(path), m)

    def test_roundtrip_with_label_header(self, tmp_path):
        m = np.arange(9.0).reshape(3, 3)
        path = tmp_path / "m.csv"
        write_matrix_csv(m, path, labels=["x1.1", "x1.2", "x2.1"])
        assert np.array_equal(read_matrix_csv(path), m)

    def test_ragged_row_reported(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(CsvFormatError, match="row 2"):
            read_matrix_csv(path)

    def test_non_numeric_cell_located(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,x\n")
        with pytest.raises(CsvFormatError, match="row 2, column 2"):
            read_matrix_csv(path)

    def test_non_square_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n")
        with pytest.raises(CsvFormatError, match="not square"):
            read_matrix_csv(path)

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("")
        with pytest.raises(CsvFormatError, match="no data"):
            read_matrix_csv(path)


class TestDistanceValidation:
    def test_asymmetry_names_cells(self):
        m = np.array([[0.0, 1.0], [1.5, 0.0]])
        with pytest.raises(ValueError, match=r"asymmetric at \(0, 1\)"):
            validate_distance_entries(m, tol=0.1)

    def test_nonzero_diagonal_named(self):
        m = np.array([[0.0, 1.0], [1.0, 0.5]])
        with pytest.raises(ValueError, match=r"\(1, 1\)"):
            validate_distance_entries(m, tol=0.1)

    def test_negative_entry_named(self):
        m = np.array([[0.0, -1.0], [-1.0, 0.0]])
        with pytest.raises(ValueError, match="negative"):
            validate_distance_entries(m, tol=0.1)

    def test_tolerance_admits_noise(self):
        m = np.array([[0.0, 1.0], [1.005, 0.0]])
        validate_distance_entries(m, tol=0.01)


class TestCloudCsv:
    def test_roundtrip_bit_exact(self, tmp_path):
        spec = IndependentSpec((2, 2), (3.0, 1.0), dim=5)
        cloud = generate_independent(spec, Seed(91))
        path = tmp_path / "cloud.csv"
        write_cloud_csv(cloud, path)
        back = read_cloud_csv(path)
        assert np.array_equal(back.points, cloud.points)
        assert back.labels == cloud.labels
        assert back.spec is None and back.seed is None

    def test_label_layout(self, tmp_path):
        cloud = PointCloud(points=np.array([[1.0, 2.0]]), labels=((3, 1, 4),))
        path = tmp_path / "cloud.csv"
        write_cloud_csv(cloud, path)
        assert path.read_text() == "3.1.4,1.0,2.0\n"

    def test_malformed_label_reported(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("1.x,0.5\n")
        with pytest.raises(CsvFormatError, match="label"):
            read_cloud_csv(path)

    def test_ragged_coordinates_reported(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("1,0.5,1.5\n2,0.5\n")
        with pytest.raises(CsvFormatError, match="row 2"):
            read_cloud_csv(path)


class TestSpecDicts:
    @pytest.mark.parametrize(
        "spec",
        [
            IndependentSpec((2, 3), (1.0, 0.5), dim=64),
            HierarchicalSpec((2, 2, 2), arity=3, tree_depth=2, lam=1.2, sigma=4.0),
        ],
    )
    def test_roundtrip(self, spec):
        assert spec_from_dict(spec_to_dict(spec)) == spec

    def test_unknown_model(self):
        with pytest.raises(ValueError, match="model"):
            spec_from_dict({"model": "other"})


def test_sweep_csv_layout(tmp_path):
    spec = IndependentSpec((2, 2), (1.0, 1.0), dim=4)
    result = sweep_ultrametricity(spec, [4, 8], 2, Seed(92))
    path = tmp_path / "sweep.csv"
    sweep_to_csv(result, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,mean_u,std_u,realizations,degenerate,error"
    assert len(lines) == 3
    assert lines[1].startswith("4,0.")


def test_moment_report_dict_is_json_ready():
    spec = HierarchicalSpec((1,), arity=2, tree_depth=2, lam=2.0, sigma=1.0)
    report = moment_probe(spec, 50, Seed(93))
    text = dumps_json(moment_report_to_dict(report))
    assert '"checks"' in text and '"passed"' in text


def test_manifest_roundtrip(tmp_path):
    path = tmp_path / "run.manifest.json"
    write_manifest(
        path,
        "generate",
        ["generate", "--seed", "5"],
        {"spec": {"model": "independent"}},
        {"cloud": "cloud.csv"},
    )
    manifest = read_manifest(path)
    assert manifest["command"] == "generate"
    assert manifest["argv"] == ["generate", "--seed", "5"]
    assert manifest["tool"]["name"] == "ultracloud"
    assert manifest["tool"]["kernel_backend"] in ("cython", "numpy")
