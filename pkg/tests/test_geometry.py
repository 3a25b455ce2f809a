import math

import numpy as np
import pytest
from scipy import stats

from backcom import ClusterModel, ORIGIN, Window, radial_pdf, sample_cluster, sample_ppp, thin
from backcom.geometry import cluster_offsets, sample_radial
from backcom.numerics import integrate_1d

MATERN = ClusterModel.matern(10.0)
THOMAS = ClusterModel.thomas(2.0)


class TestClusterModel:
    def test_exactly_one_shape_parameter(self):
        with pytest.raises(ValueError):
            ClusterModel("matern", a=1.0, sigma=1.0)
        with pytest.raises(ValueError):
            ClusterModel("thomas")
        with pytest.raises(ValueError):
            ClusterModel.matern(-1.0)
        with pytest.raises(ValueError):
            ClusterModel("gauss", a=1.0)

    def test_radial_pdf_values(self):
        # uniform disk: 1/(pi a^2) inside, 0 outside
        assert radial_pdf(MATERN, 5.0) == pytest.approx(1.0 / (100.0 * math.pi))
        assert radial_pdf(MATERN, 12.0) == 0.0
        # gaussian scatter at the origin: 1/(2 pi sigma^2)
        assert radial_pdf(THOMAS, 0.0) == pytest.approx(1.0 / (8.0 * math.pi))
        with pytest.raises(ValueError):
            radial_pdf(THOMAS, -1.0)

    @pytest.mark.parametrize("model", [MATERN, THOMAS], ids=["matern", "thomas"])
    def test_radial_pdf_normalized(self, model):
        hi = model.a if model.variant == "matern" else 16.0 * model.sigma
        mass = integrate_1d(lambda r: radial_pdf(model, r) * 2.0 * math.pi * r, 0.0, hi)
        assert mass == pytest.approx(1.0, abs=1e-8)


class TestSamplePPP:
    def test_zero_density_empty(self, rng):
        assert sample_ppp(0.0, Window(ORIGIN, 10.0), rng).shape == (0, 2)

    def test_negative_density_rejected(self, rng):
        with pytest.raises(ValueError):
            sample_ppp(-0.1, Window(ORIGIN, 10.0), rng)

    def test_poisson_mean_count(self, rng):
        # density 0.2 on a 50 m disk: mean = 0.2 * pi * 2500 ~ 1570.8
        w = Window(ORIGIN, 50.0)
        draws = 10_000
        counts = np.array([sample_ppp(0.2, w, rng).shape[0] for _ in range(draws)])
        expected = 0.2 * math.pi * 2500.0
        stderr = math.sqrt(expected / draws)
        assert abs(counts.mean() - expected) < 3.0 * stderr

    def test_points_inside_window(self, rng):
        w = Window(ORIGIN, 7.0)
        pts = sample_ppp(2.0, w, rng)
        assert np.all(np.hypot(pts[:, 0], pts[:, 1]) <= w.radius + 1e-12)

    def test_uniform_on_disk(self, rng):
        # radial CDF of a uniform disk is (r/R)^2
        pts = sample_ppp(5.0, Window(ORIGIN, 10.0), rng)
        r = np.hypot(pts[:, 0], pts[:, 1])
        ks = stats.kstest(r, lambda x: (x / 10.0) ** 2)
        assert ks.statistic < 0.02


class TestSampleCluster:
    def test_zero_mean_empty(self, rng):
        assert sample_cluster(MATERN, 0.0, (0.0, 0.0), rng).shape == (0, 2)

    def test_negative_mean_rejected(self, rng):
        with pytest.raises(ValueError):
            sample_cluster(MATERN, -1.0, (0.0, 0.0), rng)

    def test_centering(self, rng):
        pts = sample_cluster(THOMAS, 500.0, (5.0, -3.0), rng)
        assert abs(pts[:, 0].mean() - 5.0) < 0.5
        assert abs(pts[:, 1].mean() + 3.0) < 0.5

    def test_matern_radial_cdf(self, rng):
        # distance law integrates Eq-style density: CDF(r) = r^2 / a^2 on [0, a]
        r = sample_radial(MATERN, 100_000, rng)
        ks = stats.kstest(r, lambda x: np.clip((x / 10.0) ** 2, 0.0, 1.0))
        assert ks.statistic < 0.01
        assert r.max() <= 10.0

    def test_thomas_radial_moment(self, rng):
        # E[r^2] = 2 sigma^2 for the gaussian offset law
        r = sample_radial(THOMAS, 100_000, rng)
        assert abs((r**2).mean() - 8.0) / 8.0 < 0.02

    def test_thomas_radial_cdf(self, rng):
        r = sample_radial(THOMAS, 100_000, rng)
        ks = stats.kstest(r, lambda x: 1.0 - np.exp(-(x**2) / 8.0))
        assert ks.statistic < 0.01

    def test_offsets_isotropic(self, rng):
        off = cluster_offsets(THOMAS, 100_000, rng)
        phi = np.arctan2(off[:, 1], off[:, 0])
        ks = stats.kstest(phi, stats.uniform(loc=-math.pi, scale=2 * math.pi).cdf)
        assert ks.statistic < 0.01


class TestThin:
    def test_identity_and_empty(self, rng):
        pts = rng.normal(size=(500, 2))
        assert thin(pts, 1.0, rng).shape == (500, 2)
        assert thin(pts, 0.0, rng).shape == (0, 2)

    def test_out_of_range_rejected(self, rng):
        with pytest.raises(ValueError):
            thin(np.zeros((3, 2)), 1.5, rng)
        with pytest.raises(ValueError):
            thin(np.zeros((3, 2)), -0.1, rng)

    def test_retention_fraction(self, rng):
        pts = rng.normal(size=(100_000, 2))
        kept = thin(pts, 0.4, rng).shape[0] / 100_000
        # binomial stderr ~ sqrt(0.4*0.6/1e5) ~ 0.0015
        assert abs(kept - 0.4) < 0.005


def test_superposition_intensity(rng):
    # union of Poisson(c) clusters on PPP parents has intensity lambda * c;
    # count in an inner disk to dodge edge losses
    lam, cbar = 0.5, 3.0
    r_outer, r_inner = 30.0, 15.0
    total = 0
    draws = 400
    for _ in range(draws):
        parents = sample_ppp(lam, Window(ORIGIN, r_outer), rng)
        for p in parents:
            pts = sample_cluster(THOMAS, cbar, p, rng)
            if pts.shape[0]:
                total += int(np.sum(np.hypot(pts[:, 0], pts[:, 1]) <= r_inner))
    area = math.pi * r_inner**2
    expected = lam * cbar * area * draws
    assert abs(total - expected) < 3.0 * math.sqrt(expected)


def test_samplers_deterministic():
    a = sample_ppp(1.0, Window(ORIGIN, 10.0), np.random.default_rng(42))
    b = sample_ppp(1.0, Window(ORIGIN, 10.0), np.random.default_rng(42))
    np.testing.assert_array_equal(a, b)
    c = sample_cluster(THOMAS, 5.0, (1.0, 2.0), np.random.default_rng(7))
    d = sample_cluster(THOMAS, 5.0, (1.0, 2.0), np.random.default_rng(7))
    np.testing.assert_array_equal(c, d)
