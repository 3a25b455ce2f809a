"""Numerical evaluation of the model's closed forms, interference
characteristic functionals, Chernoff power-outage bound, coverage lower
bounds, micro-beacon limits, and capacity optimizers.

2-D integrals run in polar coordinates.  Infinite outer domains that decay
algebraically are truncated; by default the inter-cluster functional is cut
at the same radius on which the simulator generates interference parents,
so Monte Carlo estimates and these values describe the same (finite)
network.  Every truncation logs a tail estimate.  With equal path-loss
exponents the exact infinite-plane functional degenerates to 0 (the tail
integrand decays like 1/rho^(2*alpha2/alpha1) * rho, which is not
integrable when alpha2 <= alpha1), so the matched-truncation convention is
load-bearing, not a convenience.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .channel import NetworkParams, circuit_threshold, d0_threshold
from .geometry import ClusterModel, radial_pdf
from .numerics import QuadratureSpec, beta_fn, find_root, integrate_1d, upper_incomplete_gamma
from .simulator import interference_field_radius

log = logging.getLogger(__name__)

INNER_QUAD = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-13)
OUTER_QUAD = QuadratureSpec(rel_tol=1e-5, abs_tol=1e-12)


@dataclass(frozen=True)
class ChernoffSolution:
    """Optimized exponential-bound multiplier and the bound it yields."""

    mu_star: float
    bound: float


@dataclass(frozen=True)
class CoverageRegion:
    """Boolean map over (duty, beta) of near-full-coverage operation."""

    duty_values: np.ndarray
    beta_values: np.ndarray
    mask: np.ndarray  # mask[i, j] for (duty_values[i], beta_values[j])
    epsilon: float


def _inner_radius(params: NetworkParams, d0: float) -> float:
    """Upper radial limit of the gated-offset integrals (support of f within the gate)."""
    c = params.cluster
    lim = c.a if c.variant == "matern" else 8.0 * c.sigma
    return min(d0, lim) if math.isfinite(d0) else lim


def q_integrand(s: float, x, y, z, params: NetworkParams) -> float:
    """Integrand of the gated-interferer integral at offset x (before f(|x|) dx)."""
    sbg = s * params.beta * params.eta * params.g
    if sbg == 0:
        return 0.0
    xx = np.asarray(x, float)
    r = math.hypot(*xx)
    d = math.hypot(xx[0] + y[0] - z[0], xx[1] + y[1] - z[1])
    return 1.0 / (1.0 + r**params.alpha1 * d**params.alpha2 / sbg)


def _q_exact(rho: float, sbg: float, d0: float, params: NetworkParams,
             spec: QuadratureSpec = INNER_QUAD) -> float:
    """q at center-to-receiver distance rho, by nested adaptive quadrature."""
    if sbg == 0.0 or d0 <= 0.0:
        return 0.0
    a1, a2 = params.alpha1, params.alpha2
    rmax = _inner_radius(params, d0)
    inv = 0.0 if math.isinf(sbg) else 1.0 / sbg
    # radius below which the integrand plateaus at ~1; resolve it explicitly
    knee = (sbg * max(rho, 1e-9) ** -a2) ** (1.0 / a1) if inv else rmax

    def ring(r):
        fr = radial_pdf(params.cluster, r)
        if fr == 0.0 or r == 0.0:
            return 0.0
        ra = r**a1 * inv

        def ig(phi):
            d2 = r * r + rho * rho + 2.0 * r * rho * math.cos(phi)
            return 1.0 / (1.0 + ra * d2 ** (0.5 * a2))

        val = integrate_1d(ig, 0.0, math.pi, spec)
        return 2.0 * val * fr * r

    return integrate_1d(ring, 0.0, rmax, spec, points=[knee, rho])


def q_integral(s: float, y, z, params: NetworkParams,
               spec: QuadratureSpec = INNER_QUAD) -> float:
    """Gated-interferer integral q for a cluster centered at y and receiver at z.

    Depends on (y, z) only through |y - z| because the offset law is
    isotropic.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    sbg = s * params.beta * params.eta * params.g
    rho = math.hypot(y[0] - z[0], y[1] - z[1])
    return _q_exact(rho, sbg, d0_threshold(params), params, spec)


class _RadialTable:
    """Chebyshev-free monotone interpolant of an expensive radial profile."""

    def __init__(self, fn, rho_max: float, n_nodes: int = 96):
        nodes = np.concatenate([[0.0], np.geomspace(0.02, max(rho_max, 0.05), n_nodes)])
        vals = np.array([fn(r) for r in nodes])
        self.rho_max = nodes[-1]
        self._interp = PchipInterpolator(nodes, vals, extrapolate=False)
        self._edge = vals[-1]

    def __call__(self, rho):
        rho = np.minimum(np.asarray(rho, float), self.rho_max)
        out = self._interp(rho)
        return float(out) if out.ndim == 0 else out


def _q_table(sbg: float, d0: float, params: NetworkParams, rho_max: float,
             spec: QuadratureSpec = INNER_QUAD) -> _RadialTable:
    return _RadialTable(lambda r: _q_exact(r, sbg, d0, params, spec), rho_max)


def _polar_profile_integral(fn, zr: float, r_lim: float, weight,
                            spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Integral over the origin-centered disk of radius r_lim of
    weight(|y|) * fn(|y - z|), with |z| = zr."""

    def ring(y):
        w = weight(y)
        if w == 0.0 or y == 0.0:
            return 0.0

        def ig(phi):
            rho = math.sqrt(max(y * y + zr * zr - 2.0 * y * zr * math.cos(phi), 0.0))
            return fn(rho)

        return 2.0 * integrate_1d(ig, 0.0, math.pi, spec) * w * y

    return integrate_1d(ring, 0.0, r_lim, spec, points=[zr])


def _intra_core(qt, cd: float, params: NetworkParams, zr: float,
                spec: QuadratureSpec = OUTER_QUAD) -> float:
    c = params.cluster
    ymax = c.a if c.variant == "matern" else 8.0 * c.sigma
    return _polar_profile_integral(
        lambda rho: math.exp(-cd * qt(rho)), zr, ymax,
        lambda y: radial_pdf(c, y), spec,
    )


def _inter_exponent(qt, cd: float, lam: float, zr: float, r_max: float,
                    spec: QuadratureSpec = OUTER_QUAD) -> float:
    val = _polar_profile_integral(
        lambda rho: -math.expm1(-cd * qt(rho)), zr, r_max, lambda y: 1.0, spec
    )
    return lam * val


def _log_tail(kind: str, q_edge: float, cd: float, lam: float, r_max: float,
              params: NetworkParams) -> None:
    p = 2.0 * params.alpha2 / params.alpha1
    if p > 2.0:
        tail = lam * 2.0 * math.pi * cd * q_edge * r_max**2 / (p - 2.0)
        log.debug("%s truncated at %.3g m; tail exponent estimate %.3g", kind, r_max, tail)
    else:
        log.debug(
            "%s truncated at %.3g m; the tail integrand ~ rho^(1-%.3g) does not "
            "converge, so the value describes the disk-restricted network",
            kind, r_max, p,
        )


def intra_cf(s: float, params: NetworkParams, z_dist: float | None = None,
             spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Characteristic functional of intra-cluster interference at the receiver.

    Isotropy of the offset law makes this a function of the receiver
    distance |z| alone.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0 or params.c_bar == 0:
        return 1.0
    zr = params.d2d_dist if z_dist is None else z_dist
    sbg = s * params.beta * params.eta * params.g
    d0 = d0_threshold(params)
    c = params.cluster
    ymax = c.a if c.variant == "matern" else 8.0 * c.sigma
    qt = _q_table(sbg, d0, params, ymax + zr)
    return _intra_core(qt, params.c_bar * params.duty, params, zr, spec)


def inter_cf(s: float, params: NetworkParams, z_dist: float | None = None,
             r_max: float | None = None, spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Characteristic functional of inter-cluster interference.

    The outer integral over cluster centers is truncated at ``r_max``
    (default: the radius on which the simulator generates beacons, so the
    two sides of a cross-validation describe the same network).
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0 or params.lambda_pb == 0 or params.c_bar == 0:
        return 1.0
    zr = params.d2d_dist if z_dist is None else z_dist
    rm = interference_field_radius(params, "normal") if r_max is None else r_max
    sbg = s * params.beta * params.eta * params.g
    d0 = d0_threshold(params)
    cd = params.c_bar * params.duty
    qt = _q_table(sbg, d0, params, rm + zr)
    expo = _inter_exponent(qt, cd, params.lambda_pb, zr, rm, spec)
    _log_tail("inter-cluster functional", qt(rm), cd, params.lambda_pb, rm, params)
    return math.exp(-expo)


def _u_exact(rho: float, sbg: float, params: NetworkParams,
             spec: QuadratureSpec = INNER_QUAD) -> float:
    """Per-interferer cluster integral u of the dense-variant bound."""
    if sbg == 0.0:
        return 0.0
    a1, a2 = params.alpha1, params.alpha2
    c = params.cluster
    rlim = c.a if c.variant == "matern" else 10.0 * c.sigma
    inv = 0.0 if math.isinf(sbg) else 1.0 / sbg
    da2 = rho**a2

    def ig(r):
        fr = radial_pdf(c, r)
        if fr == 0.0:
            return 0.0
        return fr * r / (1.0 + r**a1 * da2 * inv)

    knee = (sbg / da2) ** (1.0 / a1) if (inv and da2 > 0) else rlim
    return 2.0 * math.pi * integrate_1d(ig, 0.0, rlim, spec, points=[knee])


def dense_cf_lb(s: float, params: NetworkParams, z_dist: float | None = None,
                r_max: float | None = None, spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Lower bound on the dense-variant interference functional.

    Obtained by letting every node transmit regardless of the circuit gate,
    which can only add interference.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0 or params.m_bar == 0 or params.lambda_nd == 0:
        return 1.0
    zr = params.d2d_dist if z_dist is None else z_dist
    rm = interference_field_radius(params, "dense") if r_max is None else r_max
    sbg = s * params.beta * params.eta * params.g
    ut = _RadialTable(lambda r: _u_exact(r, sbg, params, INNER_QUAD), rm + zr)
    lam = params.lambda_nd * params.duty
    mb = params.m_bar
    expo = _polar_profile_integral(
        lambda rho: -math.expm1(-mb * ut(rho)), zr, rm, lambda y: 1.0, spec
    ) * lam
    _log_tail("dense functional", ut(rm), mb, lam, rm, params)
    return math.exp(-expo)


# ---------------------------------------------------------------------------
# transmit-power distribution
# ---------------------------------------------------------------------------


def p0_closed(params: NetworkParams) -> float:
    """Power-outage probability of the typical node (normal variant)."""
    d0 = d0_threshold(params)
    c = params.cluster
    if c.variant == "matern":
        return 1.0 - (d0 / c.a) ** 2 if d0 < c.a else 0.0
    if math.isinf(d0):
        return 0.0
    return math.exp(-d0 * d0 / (2.0 * c.sigma**2))


def ccdf_transmit(tau: float, params: NetworkParams) -> float:
    """P(transmit power >= tau) on the positive branch of its support."""
    tau_min = params.beta * circuit_threshold(params)
    if not tau >= tau_min:
        raise ValueError(f"tau must be >= beta*P_c/(1-beta*D) = {tau_min:g} W")
    bng = params.beta * params.eta * params.g
    c = params.cluster
    if c.variant == "matern":
        if tau <= bng / c.a**params.alpha1:
            return 1.0
        return (bng / tau) ** (2.0 / params.alpha1) / c.a**2
    return -math.expm1(-((bng / tau) ** (2.0 / params.alpha1)) / (2.0 * c.sigma**2))


def _one_minus_exp_pow(scale: float, a1: float, v: float) -> float:
    """1 - exp(-scale * v^(-a1/2)), stable down to v -> 0."""
    le = math.log(scale) - 0.5 * a1 * math.log(v)
    if le > 40.0:
        return 1.0
    return -math.expm1(-math.exp(le))


def _pow_exp_pow(log_pref: float, scale: float, a1: float, v: float,
                 extra: float = 0.0) -> float:
    """v^(-a1/2) * exp(log_pref - extra - scale * v^(-a1/2)), stable at v -> 0."""
    w = -0.5 * a1 * math.log(v)
    if w > 690.0:  # scale * e^w dwarfs everything; the product underflows to 0
        return 0.0
    return math.exp(w + log_pref - extra - scale * math.exp(w))


def _chernoff_integrals(params: NetworkParams):
    """Exponent integral J(mu) and its derivative J'(mu) for the cluster law.

    J(mu) = 2*pi*Int (1 - exp(-mu t^-alpha1)) f(t) t dt, written through the
    squared-radius substitution so both cluster laws share one shape.
    """
    a1 = params.alpha1
    c = params.cluster

    if c.variant == "matern":
        a2_ = c.a**2

        def J(mu):
            return integrate_1d(
                lambda v: _one_minus_exp_pow(mu, a1, v),
                0.0, a2_, INNER_QUAD, points=[mu ** (2.0 / a1)],
            ) / a2_

        def Jp(mu):
            return integrate_1d(
                lambda v: _pow_exp_pow(0.0, mu, a1, v),
                0.0, a2_, INNER_QUAD, points=[mu ** (2.0 / a1)],
            ) / a2_

        return J, Jp

    cth = (math.sqrt(2.0) * c.sigma) ** (-a1)
    # e^(-v) makes everything beyond v ~ 200 vanish for every mu, so a fixed
    # finite domain with explicit knee/peak breakpoints is robust where the
    # semi-infinite transform cannot resolve the exponential cutoff near 0
    v_hi = 200.0

    def _marks(mu):
        knee = (mu * cth) ** (2.0 / a1)
        peak = (0.5 * a1 * mu * cth) ** (1.0 / (1.0 + 0.5 * a1))
        return [knee, peak]

    def J(mu):
        return integrate_1d(
            lambda v: _one_minus_exp_pow(mu * cth, a1, v) * math.exp(-v),
            0.0, v_hi, INNER_QUAD, points=_marks(mu),
        )

    def Jp(mu):
        return integrate_1d(
            lambda v: _pow_exp_pow(math.log(cth), mu * cth, a1, v, extra=v),
            0.0, v_hi, INNER_QUAD, points=_marks(mu),
        )

    return J, Jp


def _thomas_bound_exponent_as_printed(params: NetworkParams, mu: float) -> float:
    """Cluster-integral factor of the published Thomas-variant bound, which
    carries an extra e^(-t) inside the parenthesis relative to the form the
    stationarity equation is consistent with."""
    a1 = params.alpha1
    cth = (math.sqrt(2.0) * params.cluster.sigma) ** (-a1)

    def ig(v):
        le = math.log(mu * cth) - 0.5 * a1 * math.log(v)
        second = 0.0 if le > 40.0 else math.exp(-2.0 * v - math.exp(le))
        return math.exp(-v) - second

    return integrate_1d(ig, 0.0, 200.0, INNER_QUAD,
                        points=[(mu * cth) ** (2.0 / a1)])


def chernoff_p0_dense(params: NetworkParams, form: str = "rederived") -> ChernoffSolution:
    """Optimized exponential upper bound on the dense-variant power outage.

    ``form="as_printed"`` reproduces the published Thomas-variant bound
    (see module tests for the discrepancy); both forms share the same
    stationarity equation for the multiplier.  Returns bound 1.0 when no
    useful multiplier exists.
    """
    if form not in ("rederived", "as_printed"):
        raise ValueError(f"unknown form {form!r}")
    thr = circuit_threshold(params)
    if math.isinf(thr) or params.m_bar == 0:
        return ChernoffSolution(math.nan, 1.0)
    p_tilde = thr / (params.eta * params.g)
    if p_tilde == 0.0:
        # no power is required; outage reduces to the empty-cluster event
        return ChernoffSolution(math.inf, math.exp(-params.m_bar))
    J, Jp = _chernoff_integrals(params)
    try:
        mu = find_root(lambda m: params.m_bar * Jp(m) - p_tilde, tol=1e-8)
    except ValueError:
        return ChernoffSolution(math.nan, 1.0)
    if form == "as_printed" and params.cluster.variant == "thomas":
        expo = mu * p_tilde - params.m_bar * _thomas_bound_exponent_as_printed(params, mu)
    else:
        expo = mu * p_tilde - params.m_bar * J(mu)
    return ChernoffSolution(mu, min(1.0, math.exp(expo)))


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------


def coverage_threshold_s(params: NetworkParams) -> float:
    """Argument theta*(1 - beta*D)/(beta*P_c) of the coverage lower bounds."""
    if params.beta == 0.0:
        return math.inf
    return (params.theta_effective * (1.0 - params.beta * params.duty)
            / (params.beta * params.p_c)) if params.p_c > 0 else math.inf


def interference_cf(s: float, params: NetworkParams, z_dist: float | None = None,
                    r_max: float | None = None,
                    spec: QuadratureSpec = OUTER_QUAD) -> tuple[float, float]:
    """(intra, inter) characteristic functionals sharing one radial table."""
    if s < 0:
        raise ValueError("s must be >= 0")
    zr = params.d2d_dist if z_dist is None else z_dist
    sbg = s * params.beta * params.eta * params.g
    return _interference_cf_core(sbg, params.c_bar * params.duty, params, zr,
                                 r_max, spec)


def _interference_cf_core(sbg: float, cd: float, params: NetworkParams, zr: float,
                          r_max: float | None,
                          spec: QuadratureSpec = OUTER_QUAD) -> tuple[float, float]:
    if sbg == 0.0 or cd == 0.0:
        return 1.0, 1.0
    rm = interference_field_radius(params, "normal") if r_max is None else r_max
    d0 = d0_threshold(params)
    qt = _q_table(sbg, d0, params, rm + zr)
    ca = _intra_core(qt, cd, params, zr, spec)
    if params.lambda_pb == 0.0:
        return ca, 1.0
    expo = _inter_exponent(qt, cd, params.lambda_pb, zr, rm, spec)
    _log_tail("inter-cluster functional", qt(rm), cd, params.lambda_pb, rm, params)
    return ca, math.exp(-expo)


def coverage_lb_normal(params: NetworkParams, r_max: float | None = None,
                       spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Lower bound on the normal-variant success probability:
    (1 - p0) * C_a(s) * C_b(s) at s = theta*(1 - beta*D)/(beta*P_c)."""
    p0 = p0_closed(params)
    if p0 >= 1.0:
        return 0.0
    zr = params.d2d_dist
    # parametrize by s*beta to stay finite as beta -> 0
    sbg = (params.theta_effective * (1.0 - params.beta * params.duty)
           * params.eta * params.g / params.p_c) if params.p_c > 0 else math.inf
    ca, cb = _interference_cf_core(sbg, params.c_bar * params.duty, params, zr,
                                   r_max, spec)
    return (1.0 - p0) * ca * cb


def coverage_lb_dense(params: NetworkParams, r_max: float | None = None,
                      spec: QuadratureSpec = OUTER_QUAD) -> float:
    """Lower bound on the dense-variant success probability:
    (1 - power-outage bound) * (interference-functional lower bound)."""
    sol = chernoff_p0_dense(params)
    head = max(0.0, 1.0 - sol.bound)
    if head == 0.0:
        return 0.0
    s = coverage_threshold_s(params)
    return head * dense_cf_lb(s, params, r_max=r_max, spec=spec)


# ---------------------------------------------------------------------------
# dense micro-beacon limit
# ---------------------------------------------------------------------------


def micro_pb_power(params: NetworkParams, variant: str = "rederived") -> float:
    """Almost-sure received power in the shared-budget micro-beacon limit.

    ``rederived`` integrates 2*pi*eta*g*P_sum * Int max(nu, r)^(-alpha1) f(r) r dr
    directly; ``as_printed`` evaluates the published closed forms, which
    differ (Matern: a pi/(alpha1-2) factor where the integral gives
    2/(alpha1-2); Thomas: 1-e^(-nu) where the integral gives
    1-e^(-nu^2/(2 sigma^2))).
    """
    scale = params.eta * params.g * params.p_sum
    a1, nu = params.alpha1, params.nu
    c = params.cluster
    if variant == "rederived":
        rlim = c.a if c.variant == "matern" else 12.0 * c.sigma

        def ig(r):
            return max(nu, r) ** (-a1) * radial_pdf(c, r) * r

        return 2.0 * math.pi * scale * integrate_1d(ig, 0.0, rlim, INNER_QUAD,
                                                    points=[nu])
    if variant != "as_printed":
        raise ValueError(f"unknown variant {variant!r}")
    if c.variant == "matern":
        a = c.a
        return (scale / a**2) * (
            math.pi / (a1 - 2.0) * (nu ** (2.0 - a1) - a ** (2.0 - a1))
            + nu ** (2.0 - a1)
        )
    s = c.sigma
    return scale * (
        nu ** (-a1) * -math.expm1(-nu)
        + (math.sqrt(2.0) * s) ** (-a1)
        * upper_incomplete_gamma(1.0 - a1 / 2.0, nu**2 / (2.0 * s**2))
    )


def micro_pb_discrepancy(params: NetworkParams) -> dict:
    """Side-by-side of the published and re-derived micro-beacon powers."""
    printed = micro_pb_power(params, "as_printed")
    derived = micro_pb_power(params, "rederived")
    return {
        "as_printed": printed,
        "rederived": derived,
        "abs_diff": abs(printed - derived),
        "rel_diff": abs(printed - derived) / max(abs(derived), 1e-300),
    }


def format_micro_pb_report(params: NetworkParams) -> str:
    d = micro_pb_discrepancy(params)
    return (
        f"micro-beacon received power [{params.cluster.variant}]: "
        f"as printed = {d['as_printed']:.6g} W, re-derived integral = "
        f"{d['rederived']:.6g} W (relative difference {d['rel_diff']:.3g}); "
        "the Monte Carlo estimator arbitrates between the two forms"
    )


def min_sum_power(params: NetworkParams, variant: str = "rederived") -> float:
    """Smallest per-cluster power budget that keeps micro-powered nodes on.

    Scales as 1/(1 - beta*D) and linearly in the circuit power.
    """
    denom = 1.0 - params.beta * params.duty
    if denom <= 0.0:
        return math.inf
    phi = micro_pb_power(params.with_(p_sum=1.0), variant) / (params.eta * params.g)
    return params.p_c / (denom * params.eta * params.g * phi)


def ps_micro(params: NetworkParams) -> float:
    """Success probability in the constant-power limit (pure PPP of equal-power
    transmitters): exp(-(2 pi D / alpha2) * lambda_nd * theta^(2/alpha2) * B)."""
    a2 = params.alpha2
    b = beta_fn(2.0 / a2, 1.0 - 2.0 / a2)
    return math.exp(
        -(2.0 * math.pi * params.duty / a2) * params.lambda_nd
        * params.theta_effective ** (2.0 / a2) * b
    )


# ---------------------------------------------------------------------------
# capacity
# ---------------------------------------------------------------------------


def capacity_approx(params: NetworkParams, duty=None):
    """Near-full-coverage capacity approximation (active-node density times
    the transmission probability), as a function of the duty cycle."""
    d = params.duty if duty is None else np.asarray(duty, dtype=float)
    if np.any(d <= 0) or np.any(d > 1):
        raise ValueError("duty must lie in (0, 1]")
    x = params.eta * params.g * (1.0 - params.beta * d) / params.p_c
    c = params.cluster
    if c.variant == "matern":
        out = params.lambda_pb * params.c_bar * d / c.a**2 * x ** (2.0 / params.alpha1)
    else:
        out = params.lambda_pb * params.c_bar * d * (
            -np.expm1(-(x ** (2.0 / params.alpha1)) / (2.0 * c.sigma**2))
        )
    return float(out) if np.ndim(out) == 0 else out


def optimal_duty(params: NetworkParams) -> float:
    """Capacity-maximizing duty cycle.

    Matern uses the closed form min(1, alpha1/(2 + alpha1*beta)); Thomas is
    maximized numerically by golden-section search.
    """
    if params.cluster.variant == "matern":
        return min(1.0, params.alpha1 / (2.0 + params.alpha1 * params.beta))
    return _golden_max(lambda d: capacity_approx(params, d), 1e-9, 1.0)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def max_capacity(params: NetworkParams) -> float:
    """Capacity at the closed-form optimal duty cycle.

    For Matern this is the closed form obtained by substituting the optimal
    duty into the capacity approximation; for Thomas the numerical optimum
    is evaluated directly.
    """
    if params.cluster.variant == "matern":
        a1, b = params.alpha1, params.beta
        k = 2.0 + a1 * b
        return (params.lambda_pb * params.c_bar * a1 / (params.cluster.a**2 * k)
                * (2.0 * params.eta * params.g / (params.p_c * k)) ** (2.0 / a1))
    return capacity_approx(params, optimal_duty(params))


def optimal_duty_grid(params: NetworkParams, resolution: float = 1e-3) -> float:
    """Brute-force grid argmax of the capacity approximation over (0, 1]."""
    d = np.arange(resolution, 1.0 + resolution / 2.0, resolution)
    return float(d[np.argmax(capacity_approx(params, d))])


# ---------------------------------------------------------------------------
# operating region
# ---------------------------------------------------------------------------


def coverage_region(params: NetworkParams, epsilon: float, duty_values,
                    beta_values, r_max: float | None = None,
                    spec: QuadratureSpec = OUTER_QUAD) -> CoverageRegion:
    """Inner bound of the (duty, beta) region with near-full coverage:
    cells where the total interference functional stays above 1 - epsilon."""
    duty_values = np.asarray(duty_values, dtype=float)
    beta_values = np.asarray(beta_values, dtype=float)
    if np.any(duty_values < 0) or np.any(duty_values > 1):
        raise ValueError("duty grid must lie in [0, 1]")
    if np.any(beta_values < 0) or np.any(beta_values > 1):
        raise ValueError("beta grid must lie in [0, 1]")
    mask = np.zeros((duty_values.size, beta_values.size), dtype=bool)
    if epsilon >= 1.0:
        mask[:] = True
        return CoverageRegion(duty_values, beta_values, mask, epsilon)
    zr = params.d2d_dist
    for i, dv in enumerate(duty_values):
        for j, bv in enumerate(beta_values):
            bd = bv * dv
            if bd >= 1.0:
                continue
            sbg = (params.theta_effective * (1.0 - bd) * params.eta * params.g
                   / params.p_c) if params.p_c > 0 else math.inf
            trial = params.with_(beta=bv, duty=max(dv, 1e-12))
            ca, cb = _interference_cf_core(sbg, params.c_bar * dv, trial, zr,
                                           r_max, spec)
            mask[i, j] = ca * cb >= 1.0 - epsilon
    return CoverageRegion(duty_values, beta_values, mask, epsilon)
