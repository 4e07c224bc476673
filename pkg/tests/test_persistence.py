"""Tests for the file report store."""

import numpy as np
import pandas as pd
import pytest

from hardydiv.core.errors import DataError
from hardydiv.decomposition.io import read_grid_npz
from hardydiv.domain.report import Check, SweepReport, SweepRow
from hardydiv.services.persistence import create_report_store, dumps_report, to_jsonable
from hardydiv.solver import local_solve


def make_report(run_id="run_0123456789abcdef"):
    rows = [
        SweepRow("beta", -1.0, checks=[Check("4A_N", 3.0, 4.0)], values={"bound": 4.0}),
        SweepRow("beta", 0.0, values={"bound": float("inf")}),
        SweepRow("beta", 1.0, error={"error": "DOMAIN_ERROR", "message": "bad", "details": {}}),
    ]
    return SweepReport(
        run_id=run_id,
        title="Power weights",
        config={"gamma": 2.0},
        rows=rows,
        checks=[Check("blowup_factor", 1.5, 2.0)],
    )


class TestToJsonable:
    """Tests for to_jsonable."""

    def test_non_finite_floats(self):
        """Test inf and nan become strings."""
        assert to_jsonable([np.inf, -np.inf, np.nan]) == ["inf", "-inf", "nan"]

    def test_numpy_scalars_and_arrays(self):
        """Test numpy types become plain Python types."""
        data = to_jsonable(
            {"a": np.float64(1.5), "b": np.int64(3), "c": np.array([1.0, 2.0]), 4: np.bool_(True)}
        )
        assert data == {"a": 1.5, "b": 3, "c": [1.0, 2.0], "4": True}
        assert type(data["b"]) is int

    def test_dumps_sorted_and_strict(self):
        """Test keys are sorted and no bare Infinity is written."""
        text = dumps_report({"b": float("inf"), "a": 1})
        assert text.index('"a"') < text.index('"b"')
        assert "Infinity" not in text


class TestFileReportStore:
    """Tests for FileReportStore."""

    def test_save_and_load(self, store):
        """Test a report round-trips through JSON with its statuses."""
        path = store.save_report(make_report())
        loaded = store.load_report("run_0123456789abcdef")
        assert path.name == "run_0123456789abcdef.json"
        assert [r["status"] for r in loaded["rows"]] == ["PASS", "PASS", "ERROR"]
        assert loaded["rows"][1]["values"]["bound"] == "inf"
        assert loaded["failed"] is False

    def test_deterministic_bytes(self, store, tmp_path):
        """Test the same report written twice gives identical files."""
        other = create_report_store(tmp_path / "other")
        first = store.save_report(make_report()).read_bytes()
        second = other.save_report(make_report()).read_bytes()
        assert first == second

    def test_flat_row_table(self, store):
        """Test the CSV has one line per row with measured and bound columns."""
        store.save_report(make_report())
        frame = pd.read_csv(store.root / "run_0123456789abcdef.csv")
        assert len(frame) == 3
        assert {"beta", "status", "4A_N", "4A_N_bound", "error"} <= set(frame.columns)
        assert list(frame["status"]) == ["PASS", "PASS", "ERROR"]

    def test_missing_report(self, store):
        """Test an unknown run id loads as None."""
        assert store.load_report("run_missing") is None

    def test_corrupt_report(self, store):
        """Test a truncated JSON file is a data error."""
        (store.root / "run_broken.json").write_text("{\"rows\": [")
        with pytest.raises(DataError):
            store.load_report("run_broken")

    def test_list_reports(self, store):
        """Test run ids are listed sorted and limited."""
        for run_id in ("run_b", "run_a", "run_c"):
            store.save_report(make_report(run_id))
        assert store.list_reports() == ["run_a", "run_b", "run_c"]
        assert store.list_reports(limit=2) == ["run_a", "run_b"]

    def test_grid_function_exports(self, store, dipole_f):
        """Test CSV and npz exports of a grid function."""
        csv_path = store.save_grid_function(dipole_f, "f")
        npz_path = store.save_grid_function(dipole_f, "f", binary=True)
        assert csv_path.suffix == ".csv"
        np.testing.assert_array_equal(read_grid_npz(npz_path).values, dipole_f.values)

    def test_field_export(self, store, bump0_f):
        """Test the field table has one line per face."""
        field, _ = local_solve(bump0_f, 0)
        frame = pd.read_csv(store.save_field(field, "u"), float_precision="round_trip")
        assert len(frame) == field.layout.n_faces
        np.testing.assert_allclose(frame["value"].to_numpy(), field.values, rtol=1e-15)
