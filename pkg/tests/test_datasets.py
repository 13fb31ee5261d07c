"""Tests for the dataset registry and CSV ingestion."""

import numpy as np
import pytest

from libgood import (
    DataError,
    UnknownDatasetError,
    dataset,
    get_dataset,
    list_datasets,
    load_covariates,
    load_csv,
)


def write_csv(tmp_path, text: str, name: str = "data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestRegistry:
    def test_names(self):
        assert [entry.name for entry in list_datasets()] == ["discoveries", "strikes", "polarbears"]

    @pytest.mark.parametrize(
        "name,n,mean",
        [("discoveries", 100, 3.10), ("strikes", 156, 155 / 156), ("polarbears", 231, 394 / 231)],
    )
    def test_sizes_and_means(self, name, n, mean):
        values = dataset(name)
        assert values.size == n
        assert values.mean() == pytest.approx(mean)
        assert get_dataset(name).n == n

    def test_observations_follow_frequency_table(self):
        entry = get_dataset("strikes")
        counts = np.bincount(entry.observations)
        assert counts.tolist() == [46, 76, 24, 9, 1]

    def test_model_data_uses_dataset_name(self):
        data = get_dataset("polarbears").model_data()
        assert data.response_name == "polarbears"
        assert data.p == 0
        assert data.response.min() == 1

    def test_unknown_dataset(self):
        with pytest.raises(UnknownDatasetError) as excinfo:
            get_dataset("nope")
        assert excinfo.value.available == ["discoveries", "polarbears", "strikes"]
        assert excinfo.value.exit_code == 2


class TestLoadCsv:
    def test_response_and_covariates(self, tmp_path):
        path = write_csv(tmp_path, "y,parity,age\n3,1,20.5\n5,2,31\n0,4,25\n")
        data = load_csv(path, "y", ["parity", "age"])
        assert data.response.tolist() == [3, 5, 0]
        np.testing.assert_array_equal(data.covariates, [[1, 20.5], [2, 31], [4, 25]])
        assert data.covariate_names == ("parity", "age")
        assert data.response_name == "y"

    def test_response_only(self, tmp_path):
        path = write_csv(tmp_path, "count\n1\n2\n2.0\n")
        data = load_csv(path, "count")
        assert data.response.tolist() == [1, 2, 2]
        assert data.p == 0

    def test_delimiter(self, tmp_path):
        path = write_csv(tmp_path, "y;x\n1;0.5\n2;1.5\n")
        data = load_csv(path, "y", ["x"], delimiter=";")
        assert data.covariates[:, 0].tolist() == [0.5, 1.5]

    def test_negative_count_reports_row(self, tmp_path):
        rows = "\n".join(["1", "2", "0", "4", "1", "3", "-1", "2"])
        path = write_csv(tmp_path, f"y\n{rows}\n")
        with pytest.raises(DataError, match="row 7") as excinfo:
            load_csv(path, "y")
        assert excinfo.value.row == 7

    def test_fractional_count(self, tmp_path):
        path = write_csv(tmp_path, "y\n1\n2.5\n")
        with pytest.raises(DataError, match="not an integer"):
            load_csv(path, "y")

    def test_non_numeric_count(self, tmp_path):
        path = write_csv(tmp_path, "y\n1\nmany\n")
        with pytest.raises(DataError, match="row 2"):
            load_csv(path, "y")

    def test_nan_covariate(self, tmp_path):
        path = write_csv(tmp_path, "y,x\n1,0.5\n2,nan\n")
        with pytest.raises(DataError, match="not finite") as excinfo:
            load_csv(path, "y", ["x"])
        assert excinfo.value.row == 2

    def test_empty_covariate_cell(self, tmp_path):
        path = write_csv(tmp_path, "y,x\n1,0.5\n2,\n")
        with pytest.raises(DataError, match="not a number"):
            load_csv(path, "y", ["x"])

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path, "y,x\n1,2\n")
        with pytest.raises(DataError, match="Missing column"):
            load_csv(path, "y", ["z"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            load_csv(tmp_path / "absent.csv", "y")

    def test_header_only(self, tmp_path):
        path = write_csv(tmp_path, "y\n")
        with pytest.raises(DataError, match="no data rows"):
            load_csv(path, "y")

    def test_zero_variance_covariate(self, tmp_path):
        path = write_csv(tmp_path, "y,x\n1,3\n2,3\n0,3\n")
        with pytest.raises(DataError, match="zero variance"):
            load_csv(path, "y", ["x"])


class TestLoadCovariates:
    def test_reads_requested_columns(self, tmp_path):
        path = write_csv(tmp_path, "x,w,y\n1,10,5\n2,20,6\n")
        np.testing.assert_array_equal(load_covariates(path, ["w", "x"]), [[10, 1], [20, 2]])

    def test_constant_column_allowed(self, tmp_path):
        path = write_csv(tmp_path, "x\n4\n4\n")
        assert load_covariates(path, ["x"]).tolist() == [[4.0], [4.0]]

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path, "x\n1\n")
        with pytest.raises(DataError):
            load_covariates(path, ["w"])
