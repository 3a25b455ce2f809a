"""Simulator and analytics toolkit for wirelessly powered backscatter
networks modeled as Poisson cluster processes."""

from .channel import (
    NetworkParams,
    circuit_gate,
    circuit_threshold,
    d0_threshold,
    received_power_dense,
    received_power_normal,
    sample_fading,
    transmit_power,
    truncated_path_loss,
)
from .geometry import (
    ORIGIN,
    ClusterModel,
    Point,
    Window,
    radial_pdf,
    sample_cluster,
    sample_ppp,
    thin,
)
from .simulator import (
    LaplaceEstimate,
    MCEstimate,
    Realization,
    TrialConfig,
    default_window,
    estimate_capacity,
    estimate_laplace,
    estimate_micro_pb_power,
    estimate_power_outage,
    estimate_success,
    estimate_success_const_power,
    interference_at,
    realize_dense,
    realize_normal,
)

__all__ = [
    "ClusterModel", "LaplaceEstimate", "MCEstimate", "NetworkParams", "ORIGIN",
    "Point", "Realization", "TrialConfig", "Window", "circuit_gate",
    "circuit_threshold", "d0_threshold", "default_window", "estimate_capacity",
    "estimate_laplace", "estimate_micro_pb_power", "estimate_power_outage",
    "estimate_success", "estimate_success_const_power", "interference_at",
    "radial_pdf", "realize_dense", "realize_normal", "received_power_dense",
    "received_power_normal", "sample_cluster", "sample_fading", "sample_ppp",
    "thin", "transmit_power", "truncated_path_loss",
]

__version__ = "0.1.0"
