"""Link-level model: path loss, Rayleigh fading, received power for both
network variants, and the circuit-power gate that decides whether a node
can transmit at all.

All powers are in watts; dB/dBm conversions happen only at the config
boundary (see :mod:`backcom.cli`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import ClusterModel


@dataclass(frozen=True)
class NetworkParams:
    """Every scalar of the network model, with the standard defaults.

    ``lambda_pb``/``c_bar`` describe the variant with nodes clustered on
    power beacons; ``lambda_nd``/``m_bar`` the dense-beacon variant with
    the roles swapped.  ``nu`` (truncation radius) and ``p_sum``
    (per-cluster power budget) only matter for the dense micro-beacon
    limit.  ``theta`` is the linear SIR threshold for the default D2D
    distance of 1 m; other distances rescale it via ``theta_effective``.
    """

    lambda_pb: float = 0.2          # beacons / m^2 (normal variant)
    c_bar: float = 3.0              # mean nodes per cluster
    lambda_nd: float = 0.2          # transmitting nodes / m^2 (dense variant)
    m_bar: float = 3.0              # mean beacons per cluster (dense variant)
    eta: float = 10.0               # W per-node beacon transmit power (40 dBm)
    g: float = 1.0                  # beamforming gain
    alpha1: float = 3.0             # path-loss exponent, powering links
    alpha2: float = 3.0             # path-loss exponent, D2D links
    beta: float = 0.6               # reflection coefficient
    duty: float = 0.4               # backscatter duty cycle D = 1/M
    p_c: float = 10.0**0.7 / 1000.0  # W circuit power (7 dBm)
    theta: float = 10.0**-0.5       # linear SIR threshold (-5 dB)
    d2d_dist: float = 1.0           # m
    noise: float = 0.0              # W thermal noise (0 = interference-limited)
    nu: float = 0.5                 # m truncated-path-loss radius (micro-PB)
    p_sum: float = 1.0              # W per-cluster power budget (micro-PB)
    cluster: ClusterModel = ClusterModel.thomas(2.0)  # sigma^2 = 4

    def __post_init__(self):
        if self.lambda_pb < 0 or self.lambda_nd < 0:
            raise ValueError("densities must be >= 0")
        if self.c_bar < 0 or self.m_bar < 0:
            raise ValueError("mean cluster counts must be >= 0")
        for name in ("eta", "g", "p_sum"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        # p_c = 0 is kept as a valid degenerate boundary (gate always open).
        if self.p_c < 0 or self.noise < 0:
            raise ValueError("p_c and noise must be >= 0")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if not 0.0 < self.duty <= 1.0:
            raise ValueError("duty must lie in (0, 1]")
        if self.alpha1 <= 2 or self.alpha2 <= 2:
            raise ValueError("path-loss exponents must exceed 2 for integrability")
        if not self.theta > 0:
            raise ValueError("theta must be > 0")
        if not self.d2d_dist > 0:
            raise ValueError("d2d_dist must be > 0")
        if not self.nu > 0:
            raise ValueError("nu must be > 0")
        if self.cluster.variant == "matern" and not self.nu < self.cluster.a:
            raise ValueError("truncation radius nu must be smaller than the matern radius")

    def with_(self, **kw) -> "NetworkParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **kw)

    @property
    def theta_effective(self) -> float:
        """SIR threshold against the unit-distance signal convention."""
        return self.theta * self.d2d_dist**self.alpha2


def circuit_threshold(params: NetworkParams) -> float:
    """Minimum received power for a node to operate, P_c / (1 - beta*D).

    The boundary beta*D = 1 yields an infinite threshold: no node can
    ever transmit.
    """
    denom = 1.0 - params.beta * params.duty
    if denom <= 0.0:
        return math.inf
    return params.p_c / denom


def circuit_gate(p_in, params: NetworkParams):
    """Received power passed through the circuit-power constraint.

    Returns ``p_in`` where it meets the operating threshold and 0 elsewhere.
    """
    p = np.asarray(p_in, dtype=float)
    if np.any(p < 0):
        raise ValueError("received power must be >= 0")
    out = np.where(p >= circuit_threshold(params), p, 0.0)
    return out if out.ndim else float(out)


def transmit_power(p_in, params: NetworkParams):
    """Backscattered power: the reflection coefficient times the gated input."""
    out = params.beta * np.asarray(circuit_gate(p_in, params))
    return out if out.ndim else float(out)


def d0_threshold(params: NetworkParams) -> float:
    """Largest beacon separation at which a node can still operate.

    [eta*g*(1 - beta*D) / P_c]^(1/alpha1); 0 when beta*D = 1 and +inf when
    the circuit power is zero.
    """
    num = params.eta * params.g * (1.0 - params.beta * params.duty)
    if num <= 0.0:
        return 0.0
    if params.p_c == 0.0:
        return math.inf
    return (num / params.p_c) ** (1.0 / params.alpha1)


def _pairwise_dist(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.hypot(a[..., 0] - b[..., 0], a[..., 1] - b[..., 1])


def received_power_normal(node, pb, params: NetworkParams):
    """Power a node harvests from its serving beacon: eta*g*d^(-alpha1)."""
    d = _pairwise_dist(node, pb)
    if np.any(d == 0):
        raise ValueError("node and beacon coincide; the path-loss law is singular")
    out = params.eta * params.g * d ** (-params.alpha1)
    return out if out.ndim else float(out)


def received_power_dense(node, pbs, params: NetworkParams) -> float:
    """Power a node harvests from its whole beacon cluster (sum over beacons)."""
    pbs = np.asarray(pbs, dtype=float).reshape(-1, 2)
    if pbs.shape[0] == 0:
        raise ValueError("beacon cluster is empty")
    d = _pairwise_dist(np.asarray(node, dtype=float), pbs)
    if np.any(d == 0):
        raise ValueError("node and beacon coincide; the path-loss law is singular")
    return float(params.eta * params.g * np.sum(d ** (-params.alpha1)))


def truncated_path_loss(dist, params: NetworkParams):
    """Bounded path-loss law max(nu, dist)^(-alpha1) used in the micro-PB limit."""
    d = np.maximum(np.asarray(dist, dtype=float), params.nu)
    out = d ** (-params.alpha1)
    return out if out.ndim else float(out)


def sample_fading(rng: np.random.Generator, size=None):
    """Unit-mean exponential power fading (Rayleigh amplitude)."""
    return rng.exponential(1.0, size=size)
