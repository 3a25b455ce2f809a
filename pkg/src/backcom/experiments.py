"""Experiment registry and CSV emission.

An experiment sweeps one parameter, optionally fans out into series over a
second parameter (or over the network variant), runs the Monte Carlo
estimator for its metric at every point, attaches the matching analytic
value where one exists, and writes one CurveRow per (series, x) to CSV.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analytics
from .channel import NetworkParams
from .simulator import (
    TrialConfig,
    estimate_capacity,
    estimate_power_outage,
    estimate_success,
)

_PARAM_FIELDS = {f.name for f in dataclasses.fields(NetworkParams)}
_SPECIAL_AXES = {"variant"}
METRICS = ("success", "capacity", "power_outage")
ANALYTICS = ("none", "coverage_bound", "chernoff_bound", "capacity_approx")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    variant: str = "normal"              # default when the series axis is not 'variant'
    sweep_param: str = "theta"
    sweep_values: tuple = ()
    series_param: str | None = None
    series_values: tuple = ()
    metric: str = "success"
    analytic: str = "none"
    trials: int = 10_000
    seed: int = 1
    batch_size: int = 128
    out_path: str | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.analytic not in ANALYTICS:
            raise ValueError(f"unknown analytic column {self.analytic!r}")
        for axis, label in ((self.sweep_param, "sweep"), (self.series_param, "series")):
            if axis is not None and axis not in _PARAM_FIELDS and axis not in _SPECIAL_AXES:
                raise ValueError(f"{label} parameter {axis!r} is not a network parameter")
        vals = np.asarray(self.sweep_values, dtype=float)
        if vals.size == 0:
            raise ValueError("sweep_values must be nonempty")
        if vals.size > 1 and not np.all(np.diff(vals) > 0):
            raise ValueError("sweep values must be strictly increasing")


@dataclass(frozen=True)
class CurveRow:
    experiment: str
    series: str
    x: float
    y_mc: float | None
    y_mc_stderr: float | None
    y_analytic: float | None
    trials: int


def _apply_axis(params: NetworkParams, axis: str | None, value) -> tuple[NetworkParams, str]:
    """Bind one sweep/series value; returns (params, variant-or-'')."""
    if axis is None:
        return params, ""
    if axis == "variant":
        return params, str(value)
    return params.with_(**{axis: float(value)}), ""


def _estimate(params: NetworkParams, variant: str, metric: str,
              cfg: TrialConfig):
    noise_on = variant.endswith("+noise")
    base_variant = variant.removesuffix("+noise") or "normal"
    cfg = dataclasses.replace(cfg, include_noise=noise_on)
    if metric == "power_outage":
        return estimate_power_outage(params, cfg, base_variant)
    if metric == "capacity":
        return estimate_capacity(params, cfg, base_variant)
    return estimate_success(params, cfg, base_variant)


def _analytic_value(params: NetworkParams, variant: str, analytic: str) -> float | None:
    base_variant = variant.removesuffix("+noise") or "normal"
    if analytic == "none" or variant.endswith("+noise"):
        return None
    if analytic == "chernoff_bound":
        return analytics.chernoff_p0_dense(params).bound
    if analytic == "capacity_approx":
        return analytics.capacity_approx(params)
    if analytic == "coverage_bound":
        if base_variant == "dense":
            return analytics.coverage_lb_dense(params)
        return analytics.coverage_lb_normal(params)
    return None


def run_experiment(params: NetworkParams, spec: ExperimentSpec) -> list[CurveRow]:
    """Execute every (series, sweep) point; infeasible points keep their row
    with absent y values instead of being dropped."""
    cfg = TrialConfig(trials=spec.trials, seed=spec.seed,
                      batch_size=min(spec.batch_size, spec.trials))
    series_axis = spec.series_param
    series_vals: Sequence = spec.series_values if series_axis else (None,)
    rows: list[CurveRow] = []
    for sv in series_vals:
        label = f"{series_axis}={sv}" if series_axis not in (None, "variant") else str(sv or spec.variant)
        for x in spec.sweep_values:
            try:
                p1, var1 = _apply_axis(params, series_axis, sv)
                p2, var2 = _apply_axis(p1, spec.sweep_param, x)
                variant = var1 or var2 or spec.variant
                est = _estimate(p2, variant, spec.metric, cfg)
                ya = _analytic_value(p2, variant, spec.analytic)
                rows.append(CurveRow(spec.name, label, float(x), est.mean,
                                     est.stderr, ya, est.trials))
            except ValueError:
                rows.append(CurveRow(spec.name, label, float(x), None, None,
                                     None, 0))
    return rows


def write_csv(rows: Sequence[CurveRow], path) -> Path:
    """Write rows with the stable CurveRow column schema.

    The first line is a timestamp comment; everything below it is
    deterministic for a fixed config.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        w = csv.writer(fh)
        w.writerow(["experiment", "series", "x", "y_mc", "y_mc_stderr",
                    "y_analytic", "trials"])
        for r in rows:
            w.writerow([
                r.experiment, r.series, f"{r.x:.10g}",
                "" if r.y_mc is None else f"{r.y_mc:.10g}",
                "" if r.y_mc_stderr is None else f"{r.y_mc_stderr:.10g}",
                "" if r.y_analytic is None else f"{r.y_analytic:.10g}",
                r.trials,
            ])
    return path


def _db(values) -> tuple:
    return tuple(float(10.0 ** (v / 10.0)) for v in values)


def figure_registry() -> dict[str, ExperimentSpec]:
    """Stock experiments reproducing the headline result curves."""
    theta_grid = _db(np.arange(-20.0, 10.1, 2.5))
    return {
        "fig4": ExperimentSpec(
            name="fig4", variant="dense", metric="power_outage",
            analytic="chernoff_bound", sweep_param="duty",
            sweep_values=tuple(np.round(np.arange(0.1, 0.91, 0.1), 10)),
        ),
        "fig5": ExperimentSpec(
            name="fig5", metric="success", analytic="coverage_bound",
            sweep_param="theta", sweep_values=theta_grid,
            series_param="variant",
            series_values=("normal", "dense", "normal+noise", "dense+noise"),
        ),
        "fig6a": ExperimentSpec(
            name="fig6a", metric="success", analytic="coverage_bound",
            sweep_param="beta",
            sweep_values=tuple(np.round(np.arange(0.1, 0.91, 0.1), 10)),
            series_param="c_bar", series_values=(3.0, 4.0, 5.0),
        ),
        "fig6b": ExperimentSpec(
            name="fig6b", metric="success", analytic="coverage_bound",
            sweep_param="duty",
            sweep_values=tuple(np.round(np.arange(0.1, 0.91, 0.1), 10)),
            series_param="c_bar", series_values=(3.0, 4.0, 5.0),
        ),
        "fig7": ExperimentSpec(
            name="fig7", metric="capacity", analytic="capacity_approx",
            sweep_param="lambda_pb",
            sweep_values=tuple(np.round(np.arange(0.05, 0.51, 0.05), 10)),
            series_param="c_bar", series_values=(3.0, 4.0, 5.0),
        ),
        "fig8a": ExperimentSpec(
            name="fig8a", metric="capacity", analytic="capacity_approx",
            sweep_param="duty",
            sweep_values=tuple(np.round(np.arange(0.1, 1.01, 0.06), 10)),
            series_param="c_bar", series_values=(3.0, 4.0, 5.0),
        ),
        "fig8b": ExperimentSpec(
            name="fig8b", metric="capacity", analytic="capacity_approx",
            sweep_param="beta",
            sweep_values=tuple(np.round(np.arange(0.1, 0.91, 0.1), 10)),
            series_param="c_bar", series_values=(3.0, 4.0, 5.0),
        ),
    }


def run_figure(name: str, params: NetworkParams | None = None,
               out_dir=".", trials: int | None = None,
               seed: int | None = None) -> Path:
    registry = figure_registry()
    if name not in registry:
        raise ValueError(f"unknown figure {name!r}; choose from {sorted(registry)}")
    spec = registry[name]
    if trials is not None:
        spec = dataclasses.replace(spec, trials=trials)
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    params = params if params is not None else NetworkParams()
    # noise series read params.noise; give the stock figures the standard
    # -90 dBm thermal floor so the with-noise curves mean something
    if name == "fig5" and params.noise == 0.0:
        params = params.with_(noise=1e-12)
    rows = run_experiment(params, spec)
    return write_csv(rows, Path(out_dir) / f"{name}.csv")
