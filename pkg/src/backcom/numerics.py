"""Shared quadrature, root finding, and special functions.

Thin, deterministic wrappers around scipy primitives with the semi-infinite
transform and bracket-expansion policies the analytics layer relies on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_depth: int = 200  # subinterval limit passed to the adaptive rule

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def integrate_1d(f, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUAD,
                 points=None) -> float:
    """Adaptive Gauss-Kronrod estimate of the 1-D integral of f on [lo, hi].

    A semi-infinite upper limit is mapped to [0, 1) with x = lo + t/(1-t),
    which is smooth for the algebraically decaying tails that occur here.
    ``points`` marks known interior breakpoints (kinks, sharp peaks).
    """
    if math.isinf(lo):
        raise ValueError("lower limit must be finite")
    with warnings.catch_warnings():
        # steep-cutoff integrands trip QUADPACK's divergence heuristic even
        # though every integral here is finite; the estimates are validated
        # against independent oracles in the test suite
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if math.isinf(hi):
            def g(t):
                w = 1.0 - t
                return f(lo + t / w) / (w * w)

            val, _ = integrate.quad(
                g, 0.0, 1.0, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                limit=spec.max_depth,
            )
            return val
        pts = None
        if points is not None:
            pts = [p for p in points if lo < p < hi]
            pts = pts or None
        val, _ = integrate.quad(
            f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_depth, points=pts,
        )
    return val


def integrate_polar(f, r_max: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Integral of f(r, phi) over the disk of radius r_max, with area element r dphi dr."""
    if not r_max > 0:
        raise ValueError("r_max must be > 0")

    def ring(r):
        val, _ = integrate.quad(
            lambda phi: f(r, phi), 0.0, 2.0 * math.pi,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_depth,
        )
        return val * r

    return integrate_1d(ring, 0.0, r_max, spec)


def find_root(g, lo: float = 1e-12, hi: float = 1e12, tol: float = 1e-8,
              max_expansions: int = 8) -> float:
    """Root of a monotone g on a positive bracket, to relative tolerance tol.

    The bracket expands geometrically until g changes sign; the solve runs
    in log-space, so Brent's bisection fallback converges for any monotone
    sign-changing g regardless of scale.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    glo, ghi = g(lo), g(hi)
    for _ in range(max_expansions):
        if np.sign(glo) != np.sign(ghi):
            break
        lo, hi = lo / 1e3, hi * 1e3
        glo, ghi = g(lo), g(hi)
    else:
        raise ValueError("no sign change found while expanding the bracket")
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    t = optimize.brentq(lambda u: g(math.exp(u)), math.log(lo), math.log(hi),
                        xtol=tol, rtol=4 * np.finfo(float).eps)
    return math.exp(t)


def beta_fn(x: float, y: float) -> float:
    """Euler beta function B(x, y)."""
    return float(special.beta(x, y))


def upper_incomplete_gamma(a: float, x: float,
                           spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Gamma(a, x) = integral of t^(a-1) e^(-t) on [x, inf), for x > 0.

    Evaluated by adaptive quadrature, which stays valid for a <= 0 where
    the usual regularized implementations do not apply.
    """
    if not x > 0:
        raise ValueError("x must be > 0")
    return integrate_1d(lambda t: t ** (a - 1.0) * math.exp(-t), x, math.inf, spec)
