"""Planar point processes: homogeneous PPPs, Matern/Thomas cluster
sampling, independent thinning.

All samplers are stateless and take an explicit ``numpy.random.Generator``;
callers that need reproducibility or concurrency supply their own streams.
Point sets are returned as ``(n, 2)`` float arrays in meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Point(NamedTuple):
    """Planar location in meters."""

    x: float
    y: float


ORIGIN = Point(0.0, 0.0)


@dataclass(frozen=True)
class ClusterModel:
    """Radial displacement law of cluster members around their parent.

    ``matern`` scatters points uniformly on a disk of radius ``a``;
    ``thomas`` draws each coordinate from a zero-mean Gaussian with
    standard deviation ``sigma``.  Exactly one shape parameter is active.
    """

    variant: str
    a: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.variant == "matern":
            if self.a is None or self.sigma is not None:
                raise ValueError("matern cluster takes exactly the disk radius 'a'")
            if not self.a > 0:
                raise ValueError("matern disk radius must be > 0")
        elif self.variant == "thomas":
            if self.sigma is None or self.a is not None:
                raise ValueError("thomas cluster takes exactly the scale 'sigma'")
            if not self.sigma > 0:
                raise ValueError("thomas scale must be > 0")
        else:
            raise ValueError(f"unknown cluster variant {self.variant!r}")

    @classmethod
    def matern(cls, a: float) -> "ClusterModel":
        return cls("matern", a=a)

    @classmethod
    def thomas(cls, sigma: float) -> "ClusterModel":
        return cls("thomas", sigma=sigma)

    @property
    def reach(self) -> float:
        """Radius containing essentially all offsets (exact for matern,
        6 sigma for thomas, which truncates < 2e-8 of the mass)."""
        return float(self.a) if self.variant == "matern" else 6.0 * float(self.sigma)


@dataclass(frozen=True)
class Window:
    """Disk-shaped sampling region."""

    center: Point = ORIGIN
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("window radius must be > 0")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


def radial_pdf(model: ClusterModel, r):
    """Planar density f(r) of a cluster offset, evaluated at radius r >= 0.

    This is a density per unit *area*; the radial distance density is
    f(r) * 2*pi*r.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be >= 0")
    if model.variant == "matern":
        out = np.where(r <= model.a, 1.0 / (math.pi * model.a**2), 0.0)
    else:
        s2 = model.sigma**2
        out = np.exp(-(r**2) / (2.0 * s2)) / (2.0 * math.pi * s2)
    return out if out.ndim else float(out)


def sample_radial(model: ClusterModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n radii from the offset distance law f(r) * 2*pi*r (exact inversion)."""
    u = 1.0 - rng.random(n)  # (0, 1]; avoids log(0) / sqrt of an exact 0 tie
    if model.variant == "matern":
        return model.a * np.sqrt(u)
    return model.sigma * np.sqrt(-2.0 * np.log(u))


def _uniform_angles(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random(n) * (2.0 * math.pi)


def cluster_offsets(model: ClusterModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n isotropic offsets from the cluster displacement law."""
    if model.variant == "thomas":
        return rng.normal(0.0, model.sigma, size=(n, 2))
    r = sample_radial(model, n, rng)
    phi = _uniform_angles(n, rng)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def sample_ppp(density: float, window: Window, rng: np.random.Generator) -> np.ndarray:
    """Sample a homogeneous PPP of the given density on a disk window."""
    if density < 0:
        raise ValueError("density must be >= 0")
    n = rng.poisson(density * window.area)
    r = window.radius * np.sqrt(rng.random(n))
    phi = _uniform_angles(n, rng)
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    pts[:, 0] += window.center.x
    pts[:, 1] += window.center.y
    return pts


def sample_cluster(
    model: ClusterModel, mean_count: float, center, rng: np.random.Generator
) -> np.ndarray:
    """Sample one cluster: Poisson(mean_count) members displaced from center."""
    if mean_count < 0:
        raise ValueError("mean_count must be >= 0")
    n = rng.poisson(mean_count)
    off = cluster_offsets(model, n, rng)
    cx, cy = float(center[0]), float(center[1])
    off[:, 0] += cx
    off[:, 1] += cy
    return off


def thin(points: np.ndarray, keep_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Retain each point independently with probability keep_prob."""
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError("keep_prob must lie in [0, 1]")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    keep = rng.random(points.shape[0]) < keep_prob
    return points[keep]
