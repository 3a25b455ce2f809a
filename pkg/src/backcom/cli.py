"""Command-line entry points and config ingestion.

``backcom run <config>`` executes the experiment described by a flat
key-value config file, ``backcom fig <name>`` runs a stock figure
experiment, and ``backcom validate <config>`` checks a config without
running anything.  dB/dBm values are accepted only here; everything past
the config boundary is linear (watts, meters, probabilities).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .channel import NetworkParams
from .experiments import (
    ExperimentSpec,
    figure_registry,
    run_experiment,
    run_figure,
    write_csv,
)
from .geometry import ClusterModel


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watt_to_dbm(watt: float) -> float:
    return 10.0 * math.log10(watt * 1000.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


_FLOAT_KEYS = {
    "lambda_pb", "c_bar", "lambda_nd", "m_bar", "g", "alpha1", "alpha2",
    "beta", "duty", "d2d", "nu", "sigma2", "a",
}
_DB_KEYS = {"eta_dbm", "p_c_dbm", "theta_db", "noise_dbm", "p_sum_dbm"}
_INT_KEYS = {"seed", "trials", "batch_size"}
_EXP_KEYS = {"experiment", "variant", "metric", "analytic", "sweep",
             "sweep_values", "series", "series_values", "out"}
_ALL_KEYS = _FLOAT_KEYS | _DB_KEYS | _INT_KEYS | _EXP_KEYS | {"cluster"}


def _parse_kv(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ValueError(f"{path}:{ln}: unknown config key {key!r}")
        out[key] = value
    return out


def load_config(path) -> tuple[NetworkParams, ExperimentSpec | None]:
    """Parse a flat key-value config into network parameters and, when the
    experiment keys are present, an experiment spec.

    Unset keys fall back to the standard defaults.  Diagnostics name the
    offending key.
    """
    kv = _parse_kv(path)

    def pop_float(key, default=None):
        if key in kv:
            try:
                return float(kv.pop(key))
            except ValueError as exc:
                raise ValueError(f"config key {key!r}: not a number") from exc
        return default

    beta = pop_float("beta")
    duty = pop_float("duty")
    if beta is not None and duty is not None and beta * duty >= 1.0:
        raise ValueError("config keys 'beta'/'duty': beta*duty must be < 1 "
                         "or no node can ever satisfy the circuit-power constraint")

    variant = kv.pop("cluster", "thomas").strip().lower()
    sigma2 = pop_float("sigma2")
    a = pop_float("a")
    if variant == "thomas":
        if a is not None:
            raise ValueError("config key 'a' only applies to the matern cluster")
        cluster = ClusterModel.thomas(math.sqrt(sigma2) if sigma2 is not None else 2.0)
    elif variant == "matern":
        if sigma2 is not None:
            raise ValueError("config key 'sigma2' only applies to the thomas cluster")
        cluster = ClusterModel.matern(a if a is not None else 10.0)
    else:
        raise ValueError(f"config key 'cluster': unknown value {variant!r}")

    fields: dict = {"cluster": cluster}
    for key in ("lambda_pb", "c_bar", "lambda_nd", "m_bar", "g", "alpha1",
                "alpha2", "nu"):
        v = pop_float(key)
        if v is not None:
            fields[key] = v
    if beta is not None:
        fields["beta"] = beta
    if duty is not None:
        fields["duty"] = duty
    v = pop_float("d2d")
    if v is not None:
        fields["d2d_dist"] = v
    for key, field in (("eta_dbm", "eta"), ("p_c_dbm", "p_c"),
                       ("noise_dbm", "noise"), ("p_sum_dbm", "p_sum")):
        v = pop_float(key)
        if v is not None:
            fields[field] = dbm_to_watt(v)
    v = pop_float("theta_db")
    if v is not None:
        fields["theta"] = db_to_linear(v)

    try:
        params = NetworkParams(**fields)
    except ValueError as exc:
        raise ValueError(f"invalid configuration: {exc}") from exc

    spec = None
    if "experiment" in kv or "sweep" in kv:
        def pop_values(key):
            if key not in kv:
                return ()
            return tuple(float(tok) for tok in kv.pop(key).split(","))

        try:
            spec = ExperimentSpec(
                name=kv.pop("experiment", "custom"),
                variant=kv.pop("variant", "normal"),
                metric=kv.pop("metric", "success"),
                analytic=kv.pop("analytic", "none"),
                sweep_param=kv.pop("sweep", "theta"),
                sweep_values=pop_values("sweep_values"),
                series_param=kv.pop("series", None),
                series_values=pop_values("series_values"),
                trials=int(kv.pop("trials", 10000)),
                seed=int(kv.pop("seed", 1)),
                batch_size=int(kv.pop("batch_size", 128)),
                out_path=kv.pop("out", None),
            )
        except ValueError as exc:
            raise ValueError(f"invalid experiment config: {exc}") from exc
    else:
        for key in ("trials", "seed", "batch_size", "out", "variant", "metric",
                    "analytic", "series", "series_values"):
            kv.pop(key, None)
    return params, spec


def _cmd_run(args) -> int:
    params, spec = load_config(args.config)
    if spec is None:
        print("config has no experiment section; nothing to run", file=sys.stderr)
        return 2
    rows = run_experiment(params, spec)
    out = args.out or spec.out_path or f"{spec.name}.csv"
    path = write_csv(rows, out)
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _cmd_fig(args) -> int:
    path = run_figure(args.name, out_dir=args.out, trials=args.trials,
                      seed=args.seed)
    print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    params, spec = load_config(args.config)
    from .analytics import p0_closed
    from .channel import circuit_threshold, d0_threshold

    print(f"cluster          : {params.cluster.variant}")
    print(f"operating range  : d0 = {d0_threshold(params):.4g} m")
    print(f"gate threshold   : {circuit_threshold(params) * 1e3:.4g} mW")
    print(f"power outage p0  : {p0_closed(params):.4g}")
    if spec is not None:
        print(f"experiment       : {spec.name} ({spec.metric} vs {spec.sweep_param}, "
              f"{len(spec.sweep_values)} points, {spec.trials} trials)")
    print("config OK")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="backcom",
        description="Backscatter-network Monte Carlo experiments and analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment described by a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output CSV path")
    p_run.set_defaults(fn=_cmd_run)

    p_fig = sub.add_parser("fig", help="run a stock figure experiment")
    p_fig.add_argument("name", choices=sorted(figure_registry()))
    p_fig.add_argument("--out", default=".", help="output directory")
    p_fig.add_argument("--trials", type=int, default=None)
    p_fig.add_argument("--seed", type=int, default=None)
    p_fig.set_defaults(fn=_cmd_fig)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("config")
    p_val.set_defaults(fn=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
