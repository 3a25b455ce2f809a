"""Monte Carlo estimation of power outage, interference Laplace
functionals, success probability, and capacity for both network variants.

Trials are grouped into batches; the RNG stream of batch ``i`` is derived
from ``(seed, i)`` with a splittable seed sequence, and batch statistics
are reduced in batch-index order, so an estimate is bit-reproducible for a
fixed ``(seed, batch_size)`` no matter how batches are executed.  Batches
share no mutable state and are safe to run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import (
    NetworkParams,
    circuit_threshold,
    d0_threshold,
)
from .geometry import ORIGIN, Point, Window, cluster_offsets, sample_radial


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean, its standard error, and the trial count behind them."""

    mean: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class TrialConfig:
    trials: int = 10_000
    window: Window | None = None  # None: sized from the guard rule below
    seed: int = 0
    batch_size: int = 128
    include_noise: bool = False

    def __post_init__(self):
        if not 1 <= self.batch_size <= self.trials:
            raise ValueError("need trials >= batch_size >= 1")


@dataclass
class Realization:
    """One sampled network snapshot.

    ``nodes`` rows are transmitting nodes; ``active`` marks those that are
    both in the observed mini-slot and above the circuit-power threshold
    (the typical node is exempt from the mini-slot draw but not from the
    gate).  For the normal variant ``node_parent`` indexes each node's
    serving beacon in ``pbs``; for the dense variant the beacons carry a
    ``pb_parent`` index into ``nodes`` instead.
    """

    variant: str
    pbs: np.ndarray
    nodes: np.ndarray
    node_parent: np.ndarray
    pb_parent: np.ndarray | None
    active: np.ndarray
    fading: np.ndarray
    received_power: np.ndarray
    typical_node: int
    typical_receiver: Point


def _batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(batch_index,))
    )


def guard_radius(params: NetworkParams, variant: str = "normal") -> float:
    """Guard separation between the typical link and the window boundary:
    max(5*d0, 10/sqrt(parent density))."""
    lam = params.lambda_pb if variant == "normal" else params.lambda_nd * params.duty
    candidates = []
    d0 = d0_threshold(params)
    if math.isfinite(d0) and d0 > 0:
        candidates.append(5.0 * d0)
    if lam > 0:
        candidates.append(10.0 / math.sqrt(lam))
    if not candidates:
        raise ValueError("cannot size a window for these parameters; pass one explicitly")
    return max(candidates)


def default_window(params: NetworkParams, variant: str = "normal") -> Window:
    return Window(ORIGIN, guard_radius(params, variant))


def _check_window(params: NetworkParams, window: Window | None, variant: str) -> Window:
    if window is None:
        return default_window(params, variant)
    if window.radius < guard_radius(params, variant):
        raise ValueError(
            f"window radius {window.radius:g} m is smaller than the guard "
            f"separation {guard_radius(params, variant):g} m"
        )
    return window


def interference_field_radius(params: NetworkParams, variant: str = "normal",
                              window: Window | None = None) -> float:
    """Radius of the disk on which interference parents are generated.

    For the normal variant, beacons (cluster parents) are sampled on the
    window extended by the cluster reach so that clusters overlapping the
    window are not lost; analytics that truncate the matching integrals
    should use this same radius.
    """
    w = _check_window(params, window, variant)
    if variant == "normal":
        return w.radius + params.cluster.reach
    return w.radius


# ---------------------------------------------------------------------------
# batched sampling kernels (one code path serves realize_* and the estimators)
# ---------------------------------------------------------------------------


def _uniform_disk(radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    phi = rng.random(n) * (2.0 * math.pi)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def _normal_batch(params: NetworkParams, window: Window, rng: np.random.Generator,
                  n: int) -> dict:
    d0 = d0_threshold(params)
    r_field = window.radius + params.cluster.reach
    counts_pb = rng.poisson(params.lambda_pb * math.pi * r_field**2, size=n)
    tot_pb = int(counts_pb.sum())
    pb_trial = np.repeat(np.arange(n), counts_pb)
    pb_pos = _uniform_disk(r_field, tot_pb, rng)

    # serving beacon of the typical node, drawn from the radial offset law
    r0 = sample_radial(params.cluster, n, rng)
    a0 = rng.random(n) * (2.0 * math.pi)
    y0 = np.column_stack([r0 * np.cos(a0), r0 * np.sin(a0)])

    # sibling nodes in the typical cluster (the typical node itself excluded)
    c_sib = rng.poisson(params.c_bar, size=n)
    sib_trial = np.repeat(np.arange(n), c_sib)
    off_s = cluster_offsets(params.cluster, int(c_sib.sum()), rng)
    sib_pos = y0[sib_trial] + off_s
    sib_u = np.hypot(off_s[:, 0], off_s[:, 1])

    # daughter nodes of every field beacon
    c_pb = rng.poisson(params.c_bar, size=tot_pb)
    nd_pb = np.repeat(np.arange(tot_pb), c_pb)
    nd_trial = pb_trial[nd_pb]
    off_p = cluster_offsets(params.cluster, int(c_pb.sum()), rng)
    nd_pos = pb_pos[nd_pb] + off_p
    nd_u = np.hypot(off_p[:, 0], off_p[:, 1])

    # a node interferes if it picked the observed mini-slot and is gated on
    sib_act = (rng.random(sib_u.shape[0]) < params.duty) & (sib_u <= d0)
    nd_act = (rng.random(nd_u.shape[0]) < params.duty) & (nd_u <= d0)
    sib_h = rng.exponential(1.0, sib_u.shape[0])
    nd_h = rng.exponential(1.0, nd_u.shape[0])

    az = rng.random(n) * (2.0 * math.pi)
    z = params.d2d_dist * np.column_stack([np.cos(az), np.sin(az)])
    h0 = rng.exponential(1.0, n)
    return {
        "pb_trial": pb_trial, "pb_pos": pb_pos, "r0": r0, "y0": y0,
        "sib_trial": sib_trial, "sib_pos": sib_pos, "sib_u": sib_u,
        "sib_act": sib_act, "sib_h": sib_h,
        "nd_trial": nd_trial, "nd_pb": nd_pb, "nd_pos": nd_pos, "nd_u": nd_u,
        "nd_act": nd_act, "nd_h": nd_h,
        "z": z, "h0": h0, "typ_act": r0 <= d0,
    }


def _dense_batch(params: NetworkParams, window: Window, rng: np.random.Generator,
                 n: int) -> dict:
    thr = circuit_threshold(params)
    a1 = params.alpha1
    counts = rng.poisson(params.lambda_nd * params.duty * math.pi * window.radius**2,
                         size=n)
    tot = int(counts.sum())
    nd_trial = np.repeat(np.arange(n), counts)
    nd_pos = _uniform_disk(window.radius, tot, rng)

    m_cnt = rng.poisson(params.m_bar, size=tot)
    pb_node = np.repeat(np.arange(tot), m_cnt)
    off = cluster_offsets(params.cluster, int(m_cnt.sum()), rng)
    u = np.hypot(off[:, 0], off[:, 1])
    p_rx = params.eta * params.g * np.bincount(pb_node, weights=u ** (-a1), minlength=tot)
    nd_act = p_rx >= thr
    nd_h = rng.exponential(1.0, tot)

    # the typical node's own beacon cluster
    m0 = rng.poisson(params.m_bar, size=n)
    own0 = np.repeat(np.arange(n), m0)
    off0 = cluster_offsets(params.cluster, int(m0.sum()), rng)
    u0 = np.hypot(off0[:, 0], off0[:, 1])
    p_rx0 = params.eta * params.g * np.bincount(own0, weights=u0 ** (-a1), minlength=n)
    typ_act = p_rx0 >= thr

    az = rng.random(n) * (2.0 * math.pi)
    z = params.d2d_dist * np.column_stack([np.cos(az), np.sin(az)])
    h0 = rng.exponential(1.0, n)
    return {
        "nd_trial": nd_trial, "nd_pos": nd_pos, "p_rx": p_rx, "nd_act": nd_act,
        "nd_h": nd_h, "pb_node": pb_node, "pb_off": off, "u": u,
        "m0": m0, "own0": own0, "off0": off0, "p_rx0": p_rx0, "typ_act": typ_act,
        "z": z, "h0": h0,
    }


def _sum_contributions(pos, power, h, act, trial, z, params, n) -> np.ndarray:
    """Per-trial interference totals from one group of candidate interferers."""
    i = np.flatnonzero(act)
    if i.size == 0:
        return np.zeros(n)
    d = np.hypot(pos[i, 0] - z[trial[i], 0], pos[i, 1] - z[trial[i], 1])
    w = params.beta * power[i] * h[i] * d ** (-params.alpha2)
    return np.bincount(trial[i], weights=w, minlength=n)


def _normal_interference(b: dict, params: NetworkParams, n: int):
    a1 = params.alpha1
    ehg = params.eta * params.g
    p_sib = ehg * b["sib_u"] ** (-a1)
    p_nd = ehg * b["nd_u"] ** (-a1)
    intra = _sum_contributions(b["sib_pos"], p_sib, b["sib_h"], b["sib_act"],
                               b["sib_trial"], b["z"], params, n)
    inter = _sum_contributions(b["nd_pos"], p_nd, b["nd_h"], b["nd_act"],
                               b["nd_trial"], b["z"], params, n)
    return intra, inter


def _normal_signal(b: dict, params: NetworkParams) -> np.ndarray:
    sig = params.beta * params.eta * params.g * b["r0"] ** (-params.alpha1) * b["h0"]
    return np.where(b["typ_act"], sig, 0.0)


def _dense_interference(b: dict, params: NetworkParams, n: int) -> np.ndarray:
    return _sum_contributions(b["nd_pos"], b["p_rx"], b["nd_h"], b["nd_act"],
                              b["nd_trial"], b["z"], params, n)


def _dense_signal(b: dict, params: NetworkParams) -> np.ndarray:
    return np.where(b["typ_act"], params.beta * b["p_rx0"] * b["h0"], 0.0)


# ---------------------------------------------------------------------------
# single realizations
# ---------------------------------------------------------------------------


def realize_normal(params: NetworkParams, window: Window | None = None,
                   rng: np.random.Generator | None = None) -> Realization:
    """Sample one normal-variant network with the typical node at the origin."""
    window = _check_window(params, window, "normal")
    rng = rng if rng is not None else np.random.default_rng()
    b = _normal_batch(params, window, rng, 1)
    ehg = params.eta * params.g
    pbs = np.vstack([b["y0"], b["pb_pos"]])
    nodes = np.vstack([[0.0, 0.0], b["sib_pos"], b["nd_pos"]])
    parent = np.concatenate([[0], np.zeros(b["sib_u"].shape[0], dtype=int),
                             b["nd_pb"] + 1])
    active = np.concatenate([b["typ_act"], b["sib_act"], b["nd_act"]])
    fading = np.concatenate([b["h0"], b["sib_h"], b["nd_h"]])
    dist = np.concatenate([b["r0"], b["sib_u"], b["nd_u"]])
    return Realization(
        variant="normal", pbs=pbs, nodes=nodes, node_parent=parent,
        pb_parent=None, active=active, fading=fading,
        received_power=ehg * dist ** (-params.alpha1),
        typical_node=0, typical_receiver=Point(*b["z"][0]),
    )


def realize_dense(params: NetworkParams, window: Window | None = None,
                  rng: np.random.Generator | None = None) -> Realization:
    """Sample one dense-variant network with the typical node at the origin."""
    window = _check_window(params, window, "dense")
    rng = rng if rng is not None else np.random.default_rng()
    b = _dense_batch(params, window, rng, 1)
    nodes = np.vstack([[0.0, 0.0], b["nd_pos"]])
    pbs = np.vstack([b["off0"], b["pb_off"] + b["nd_pos"][b["pb_node"]]])
    pb_parent = np.concatenate([np.zeros(b["off0"].shape[0], dtype=int),
                                b["pb_node"] + 1])
    return Realization(
        variant="dense", pbs=pbs, nodes=nodes,
        node_parent=np.full(nodes.shape[0], -1, dtype=int),
        pb_parent=pb_parent,
        active=np.concatenate([b["typ_act"], b["nd_act"]]),
        fading=np.concatenate([b["h0"], b["nd_h"]]),
        received_power=np.concatenate([b["p_rx0"], b["p_rx"]]),
        typical_node=0, typical_receiver=Point(*b["z"][0]),
    )


def interference_at(realization: Realization, params: NetworkParams):
    """Interference power at the typical receiver, split as (intra, inter).

    Intra covers active nodes sharing the typical node's cluster; for the
    dense variant there is no cluster of interferers and the intra part
    is 0 by convention.
    """
    r = realization
    z = np.asarray(r.typical_receiver, dtype=float)
    mask = r.active.copy()
    mask[r.typical_node] = False
    idx = np.flatnonzero(mask)
    d = np.hypot(r.nodes[idx, 0] - z[0], r.nodes[idx, 1] - z[1])
    w = params.beta * r.received_power[idx] * r.fading[idx] * d ** (-params.alpha2)
    if r.variant == "dense":
        return 0.0, float(np.sum(w))
    same = r.node_parent[idx] == r.node_parent[r.typical_node]
    return float(np.sum(w[same])), float(np.sum(w[~same]))


# ---------------------------------------------------------------------------
# batched estimators
# ---------------------------------------------------------------------------


def _accumulate(cfg: TrialConfig, kernel) -> tuple[np.ndarray, np.ndarray, int]:
    """Run kernel(rng, n) -> (n, d) over batches; reduce in batch order."""
    s1 = s2 = None
    done = 0
    i = 0
    while done < cfg.trials:
        n = min(cfg.batch_size, cfg.trials - done)
        vals = np.asarray(kernel(_batch_rng(cfg.seed, i), n), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if s1 is None:
            s1 = np.zeros(vals.shape[1])
            s2 = np.zeros(vals.shape[1])
        s1 += vals.sum(axis=0)
        s2 += (vals * vals).sum(axis=0)
        done += n
        i += 1
    return s1, s2, done


def _finalize(s1: np.ndarray, s2: np.ndarray, n: int) -> list[MCEstimate]:
    mean = s1 / n
    if n > 1:
        var = np.maximum(s2 - s1 * s1 / n, 0.0) / (n - 1)
        stderr = np.sqrt(var / n)
    else:
        stderr = np.zeros_like(mean)
    return [MCEstimate(float(m), float(se), n) for m, se in zip(mean, stderr)]


def _mc(cfg: TrialConfig, kernel) -> list[MCEstimate]:
    return _finalize(*_accumulate(cfg, kernel))


def estimate_power_outage(params: NetworkParams, trial_cfg: TrialConfig,
                          variant: str = "normal") -> MCEstimate:
    """Fraction of trials in which the typical node cannot power its circuit.

    The outage event depends only on the typical node's own cluster
    geometry, so no interference field is sampled; the offset laws are
    sampled exactly (no window truncation).
    """
    if variant == "normal":
        d0 = d0_threshold(params)

        def kernel(rng, n):
            return (sample_radial(params.cluster, n, rng) > d0).astype(float)

    elif variant == "dense":
        thr = circuit_threshold(params)
        a1 = params.alpha1
        ehg = params.eta * params.g

        def kernel(rng, n):
            cnt = rng.poisson(params.m_bar, size=n)
            off = cluster_offsets(params.cluster, int(cnt.sum()), rng)
            u = np.hypot(off[:, 0], off[:, 1])
            own = np.repeat(np.arange(n), cnt)
            p = ehg * np.bincount(own, weights=u ** (-a1), minlength=n)
            return (p < thr).astype(float)

    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _mc(trial_cfg, kernel)[0]


@dataclass(frozen=True)
class LaplaceEstimate:
    """Monte Carlo mean of exp(-s I) split by interference component."""

    intra: MCEstimate
    inter: MCEstimate
    total: MCEstimate


def estimate_laplace(params: NetworkParams, s, trial_cfg: TrialConfig,
                     variant: str = "normal"):
    """Empirical Laplace functional of the interference power at the receiver.

    For the normal variant an estimate is produced for the intra-cluster,
    inter-cluster, and total interference; the dense variant has a single
    component.  ``s`` may be a scalar or a sequence (one shared set of
    realizations serves every value).
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0):
        raise ValueError("s must be >= 0")
    window = _check_window(params, trial_cfg.window, variant)
    scalar = np.isscalar(s) or np.asarray(s).ndim == 0

    if variant == "normal":

        def kernel(rng, n):
            b = _normal_batch(params, window, rng, n)
            intra, inter = _normal_interference(b, params, n)
            cols = [np.exp(-sv * intra) for sv in s_arr]
            cols += [np.exp(-sv * inter) for sv in s_arr]
            cols += [np.exp(-sv * (intra + inter)) for sv in s_arr]
            return np.column_stack(cols)

        ests = _mc(trial_cfg, kernel)
        k = s_arr.size
        out = [LaplaceEstimate(ests[j], ests[k + j], ests[2 * k + j])
               for j in range(k)]
        return out[0] if scalar else out

    if variant == "dense":

        def kernel(rng, n):
            b = _dense_batch(params, window, rng, n)
            tot = _dense_interference(b, params, n)
            return np.column_stack([np.exp(-sv * tot) for sv in s_arr])

        ests = _mc(trial_cfg, kernel)
        return ests[0] if scalar else ests

    raise ValueError(f"unknown variant {variant!r}")


def estimate_success(params: NetworkParams, trial_cfg: TrialConfig,
                     variant: str = "normal", thetas=None,
                     conditioned_on_active: bool = False):
    """Probability that the typical link's SIR (or SINR) clears the threshold.

    ``thetas`` (linear) overrides ``params.theta`` and may be a sequence
    evaluated on shared realizations.  With ``conditioned_on_active`` the
    estimate is restricted to trials where the typical node is gated on.
    Noise enters the denominator only when the trial config asks for it.
    """
    th = params.theta if thetas is None else thetas
    th_arr = np.atleast_1d(np.asarray(th, dtype=float)) * params.d2d_dist**params.alpha2
    scalar = np.isscalar(th) or np.asarray(th).ndim == 0
    window = _check_window(params, trial_cfg.window, variant)
    noise = params.noise if trial_cfg.include_noise else 0.0

    def kernel(rng, n):
        if variant == "normal":
            b = _normal_batch(params, window, rng, n)
            intra, inter = _normal_interference(b, params, n)
            tot = intra + inter
            sig = _normal_signal(b, params)
        elif variant == "dense":
            b = _dense_batch(params, window, rng, n)
            tot = _dense_interference(b, params, n)
            sig = _dense_signal(b, params)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        # a gated-off node transmits nothing, so it cannot succeed even
        # against zero interference
        ok = (sig[:, None] >= th_arr[None, :] * (tot[:, None] + noise)) \
            & b["typ_act"][:, None]
        if conditioned_on_active:
            act = b["typ_act"].astype(float)
            return np.column_stack([ok * act[:, None], act])
        return ok.astype(float)

    if not conditioned_on_active:
        ests = _mc(trial_cfg, kernel)
        return ests[0] if scalar else ests

    s1, _, _ = _accumulate(trial_cfg, kernel)
    n_act = s1[-1]
    out = []
    for j in range(th_arr.size):
        p = s1[j] / n_act if n_act > 0 else 0.0
        se = math.sqrt(max(p * (1 - p), 0.0) / n_act) if n_act > 1 else 0.0
        out.append(MCEstimate(float(p), se, int(n_act)))
    return out[0] if scalar else out


def estimate_capacity(params: NetworkParams, trial_cfg: TrialConfig,
                      variant: str = "normal", thetas=None):
    """Spatial throughput: active-link density times success probability."""
    dens = (params.lambda_pb * params.c_bar * params.duty if variant == "normal"
            else params.lambda_nd * params.duty)
    ps = estimate_success(params, trial_cfg, variant, thetas=thetas)
    if isinstance(ps, MCEstimate):
        return MCEstimate(dens * ps.mean, dens * ps.stderr, ps.trials)
    return [MCEstimate(dens * p.mean, dens * p.stderr, p.trials) for p in ps]


def estimate_micro_pb_power(params: NetworkParams, m_bar_list: Sequence[float],
                            trial_cfg: TrialConfig) -> list[MCEstimate]:
    """Mean received power when each cluster shares a fixed power budget.

    Every beacon of a size-N cluster radiates p_sum/N and the powering
    links obey the truncated path-loss law; an empty cluster delivers 0.
    """
    a1 = params.alpha1
    scale = params.eta * params.g * params.p_sum

    out = []
    for m in m_bar_list:
        if m < 0:
            raise ValueError("mean beacon count must be >= 0")

        def kernel(rng, n, m=m):
            cnt = rng.poisson(m, size=n)
            off = cluster_offsets(params.cluster, int(cnt.sum()), rng)
            u = np.maximum(np.hypot(off[:, 0], off[:, 1]), params.nu)
            own = np.repeat(np.arange(n), cnt)
            s = np.bincount(own, weights=u ** (-a1), minlength=n)
            return np.where(cnt > 0, scale * s / np.maximum(cnt, 1), 0.0)

        out.append(_mc(trial_cfg, kernel)[0])
    return out


def estimate_success_const_power(params: NetworkParams,
                                 trial_cfg: TrialConfig) -> MCEstimate:
    """Success probability with the gate forced on and equal node powers.

    Interferers form a PPP of density lambda_nd * duty and the common
    transmit power cancels from the SIR, which isolates the pure
    interference geometry.
    """
    window = _check_window(params, trial_cfg.window, "dense")
    th = params.theta_effective
    a2 = params.alpha2

    def kernel(rng, n):
        counts = rng.poisson(params.lambda_nd * params.duty * window.area, size=n)
        tot = int(counts.sum())
        trial = np.repeat(np.arange(n), counts)
        pos = _uniform_disk(window.radius, tot, rng)
        h = rng.exponential(1.0, tot)
        az = rng.random(n) * (2.0 * math.pi)
        z = params.d2d_dist * np.column_stack([np.cos(az), np.sin(az)])
        d = np.hypot(pos[:, 0] - z[trial, 0], pos[:, 1] - z[trial, 1])
        i_norm = np.bincount(trial, weights=h * d ** (-a2), minlength=n)
        h0 = rng.exponential(1.0, n)
        return (h0 >= th * i_norm).astype(float)

    return _mc(trial_cfg, kernel)[0]
