import numpy as np
import pytest

from backcom import ClusterModel, NetworkParams
from backcom.experiments import (
    CurveRow,
    ExperimentSpec,
    figure_registry,
    run_experiment,
    write_csv,
)

FAST = NetworkParams(lambda_pb=1.0, c_bar=1.0, p_c=2.0,
                     cluster=ClusterModel.thomas(0.5))


class TestSpecValidation:
    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            ExperimentSpec(name="x", sweep_values=())

    def test_decreasing_sweep_rejected(self):
        with pytest.raises(ValueError):
            ExperimentSpec(name="x", sweep_values=(2.0, 1.0))

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError, match="wavelength"):
            ExperimentSpec(name="x", sweep_param="wavelength", sweep_values=(1.0,))

    def test_unknown_metric_rejected(self):
        with pytest.raises(ValueError):
            ExperimentSpec(name="x", sweep_values=(1.0,), metric="latency")


class TestRegistry:
    def test_all_figures_present(self):
        assert set(figure_registry()) == {
            "fig4", "fig5", "fig6a", "fig6b", "fig7", "fig8a", "fig8b"
        }

    def test_specs_are_valid(self):
        for spec in figure_registry().values():
            assert len(spec.sweep_values) >= 5


class TestRunExperiment:
    def test_success_sweep(self):
        spec = ExperimentSpec(name="mini", metric="success", sweep_param="theta",
                              sweep_values=(0.1, 1.0), trials=200, batch_size=100)
        rows = run_experiment(FAST, spec)
        assert len(rows) == 2
        assert all(0.0 <= r.y_mc <= 1.0 for r in rows)
        assert all(r.trials == 200 for r in rows)

    def test_series_fanout(self):
        spec = ExperimentSpec(name="mini", metric="power_outage",
                              sweep_param="duty", sweep_values=(0.2, 0.6),
                              series_param="c_bar", series_values=(1.0, 2.0),
                              trials=300, batch_size=100)
        rows = run_experiment(FAST, spec)
        assert {r.series for r in rows} == {"c_bar=1.0", "c_bar=2.0"}
        assert len(rows) == 4

    def test_infeasible_point_kept_with_absent_values(self):
        spec = ExperimentSpec(name="mini", metric="power_outage",
                              sweep_param="duty", sweep_values=(0.5, 1.2),
                              trials=100, batch_size=100)
        rows = run_experiment(FAST, spec)
        assert len(rows) == 2
        assert rows[0].y_mc is not None
        assert rows[1].y_mc is None and rows[1].y_analytic is None

    def test_variant_series_with_noise_suffix(self):
        spec = ExperimentSpec(name="mini", metric="success", sweep_param="theta",
                              sweep_values=(0.5,), series_param="variant",
                              series_values=("normal", "dense", "dense+noise"),
                              trials=200, batch_size=100)
        rows = run_experiment(FAST.with_(noise=1e-12), spec)
        assert [r.series for r in rows] == ["normal", "dense", "dense+noise"]


class TestWriteCsv:
    def test_schema_and_absent_fields(self, tmp_path):
        rows = [
            CurveRow("e", "s", 1.0, 0.5, 0.01, 0.4, 100),
            CurveRow("e", "s", 2.0, None, None, None, 0),
        ]
        path = write_csv(rows, tmp_path / "out.csv")
        lines = path.read_text().splitlines()
        assert lines[1] == "experiment,series,x,y_mc,y_mc_stderr,y_analytic,trials"
        assert lines[2] == "e,s,1,0.5,0.01,0.4,100"
        assert lines[3] == "e,s,2,,,,0"
