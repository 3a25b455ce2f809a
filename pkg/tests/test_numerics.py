import math

import mpmath
import pytest

from backcom.numerics import (
    QuadratureSpec,
    beta_fn,
    find_root,
    integrate_1d,
    integrate_polar,
    upper_incomplete_gamma,
)


class TestIntegrate1D:
    def test_polynomial(self):
        assert integrate_1d(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0)

    def test_semi_infinite_exponential(self):
        assert integrate_1d(lambda t: math.exp(-t), 0.0, math.inf) == pytest.approx(1.0)

    def test_tail_gamma_against_published_value(self):
        # integral of t^(-3/2) e^(-t) on [1, inf) = Gamma(-1/2, 1) ~ 0.17811
        val = integrate_1d(lambda t: t**-1.5 * math.exp(-t), 1.0, math.inf)
        assert val == pytest.approx(0.1781477, abs=1e-5)
        assert val == pytest.approx(2.0 / math.e - 2.0 * math.sqrt(math.pi) * math.erfc(1.0),
                                    rel=1e-9)
        # independent series/continued-fraction evaluation
        assert val == pytest.approx(float(mpmath.gammainc(-0.5, 1.0)), rel=1e-8)

    def test_additivity(self):
        spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14)
        f = lambda x: math.sin(x) ** 2 + 0.3 * x
        whole = integrate_1d(f, 0.0, 7.0, spec)
        split = integrate_1d(f, 0.0, 2.3, spec) + integrate_1d(f, 2.3, 7.0, spec)
        assert abs(whole - split) < 2e-10 * abs(whole)

    def test_breakpoint_hint(self):
        f = lambda x: abs(x - 0.37) ** 0.5
        exact = (0.37**1.5 + 0.63**1.5) / 1.5
        assert integrate_1d(f, 0.0, 1.0, points=[0.37]) == pytest.approx(exact, rel=1e-9)


class TestIntegratePolar:
    def test_disk_area(self):
        assert integrate_polar(lambda r, phi: 1.0, 1.0) == pytest.approx(math.pi)

    def test_gaussian_mass(self):
        s2 = 4.0
        f = lambda r, phi: math.exp(-r * r / (2 * s2)) / (2 * math.pi * s2)
        assert integrate_polar(f, 8.0 * 2.0) == pytest.approx(1.0, abs=1e-8)

    def test_matches_radial_reduction(self):
        g = lambda r: 1.0 / (1.0 + r**3)
        full = integrate_polar(lambda r, phi: g(r), 50.0)
        rad = 2.0 * math.pi * integrate_1d(lambda r: g(r) * r, 0.0, 50.0)
        assert full == pytest.approx(rad, rel=1e-7)

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            integrate_polar(lambda r, phi: 1.0, 0.0)


class TestFindRoot:
    def test_linear(self):
        assert find_root(lambda x: x - 2.0) == pytest.approx(2.0, rel=1e-8)

    def test_exponential(self):
        assert find_root(lambda x: math.exp(-x) - 0.5) == pytest.approx(math.log(2.0), rel=1e-8)

    def test_deterministic_and_tolerance_monotone(self):
        g = lambda x: x**3 - 7.0
        loose = find_root(g, tol=1e-4)
        tight = find_root(g, tol=1e-10)
        assert find_root(g, tol=1e-4) == loose
        assert abs(loose - tight) <= 1e-4 * max(1.0, abs(tight))

    def test_expands_bracket(self):
        # root far outside the initial bracket
        assert find_root(lambda x: x - 5e13, hi=1e12) == pytest.approx(5e13, rel=1e-6)

    def test_no_sign_change(self):
        with pytest.raises(ValueError):
            find_root(lambda x: 1.0 + x * 0, max_expansions=2)


class TestSpecialFunctions:
    def test_beta_trivial(self):
        assert beta_fn(1.0, 1.0) == pytest.approx(1.0)

    def test_beta_reflection(self):
        # B(2/3, 1/3) = pi / sin(2 pi / 3) = 2 pi / sqrt(3)
        assert beta_fn(2.0 / 3.0, 1.0 / 3.0) == pytest.approx(
            2.0 * math.pi / math.sqrt(3.0), abs=1e-10
        )

    def test_gamma_a_one(self):
        for x in (0.1, 1.0, 4.2):
            assert upper_incomplete_gamma(1.0, x) == pytest.approx(math.exp(-x), rel=1e-8)

    def test_gamma_negative_a_vs_mpmath(self):
        for a, x in ((-0.5, 1.0), (-0.5, 0.03125), (-1.2, 0.4), (0.7, 2.0)):
            ref = float(mpmath.gammainc(a, x))
            assert upper_incomplete_gamma(a, x) == pytest.approx(ref, rel=1e-7)

    def test_gamma_requires_positive_x(self):
        with pytest.raises(ValueError):
            upper_incomplete_gamma(-0.5, 0.0)
