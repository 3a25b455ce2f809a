import math

import numpy as np
import pytest

from backcom import (
    ClusterModel,
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

P = NetworkParams()  # eta 40 dBm, P_c 7 dBm, beta 0.6, D 0.4, alpha 3


class TestParams:
    def test_defaults_are_consistent(self):
        assert P.eta == pytest.approx(10.0)
        assert P.p_c == pytest.approx(5.0119e-3, rel=1e-4)
        assert P.theta == pytest.approx(0.316228, rel=1e-5)

    def test_invalid_rejected(self):
        for bad in (
            dict(beta=1.2), dict(duty=0.0), dict(alpha1=2.0), dict(eta=0.0),
            dict(theta=-1.0), dict(lambda_pb=-0.1), dict(noise=-1e-9),
            dict(nu=0.0), dict(d2d_dist=0.0),
        ):
            with pytest.raises(ValueError):
                NetworkParams(**bad)
        with pytest.raises(ValueError):
            # truncation radius must stay inside the matern disk
            NetworkParams(cluster=ClusterModel.matern(1.0), nu=2.0)

    def test_full_reflection_full_duty_is_degenerate_boundary(self):
        p = NetworkParams(beta=1.0, duty=1.0)
        assert circuit_threshold(p) == math.inf
        assert d0_threshold(p) == 0.0


class TestCircuitGate:
    def test_pass_and_block(self):
        # operating threshold P_c/(1 - 0.24) ~ 6.594 mW
        assert circuit_threshold(P) == pytest.approx(6.5946e-3, rel=1e-4)
        assert circuit_gate(1.0, P) == 1.0
        assert circuit_gate(6e-3, P) == 0.0

    def test_zero_reflection_threshold_is_pc(self):
        p = NetworkParams(beta=0.0)
        assert circuit_threshold(p) == pytest.approx(p.p_c)

    def test_idempotent_and_monotone(self):
        grid = np.linspace(0.0, 0.02, 200)
        gated = circuit_gate(grid, P)
        assert np.array_equal(circuit_gate(gated, P), gated)
        assert np.all(np.diff(gated) >= 0.0)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            circuit_gate(-0.1, P)


class TestTransmitPower:
    def test_values(self):
        assert transmit_power(1.0, P) == pytest.approx(0.6)
        assert transmit_power(6e-3, P) == 0.0
        p0 = NetworkParams(beta=0.0)
        assert transmit_power(1.0, p0) == 0.0

    def test_never_amplifies(self):
        grid = np.linspace(0.0, 5.0, 300)
        assert np.all(transmit_power(grid, P) <= P.beta * grid + 1e-15)


class TestD0Threshold:
    def test_default_value(self):
        # (10 * 0.76 / 5.0119e-3)^(1/3) = 1516.4^(1/3)
        assert d0_threshold(P) == pytest.approx(11.4887, abs=2e-4)

    def test_limits(self):
        assert d0_threshold(NetworkParams(beta=1.0, duty=1.0)) == 0.0
        assert d0_threshold(NetworkParams(p_c=0.0)) == math.inf

    def test_decreasing_in_beta_duty_and_pc(self):
        d = [d0_threshold(NetworkParams(beta=b, duty=0.5)) for b in (0.2, 0.5, 0.8)]
        assert d[0] > d[1] > d[2]
        d = [d0_threshold(NetworkParams(p_c=pc)) for pc in (1e-3, 1e-2, 1e-1)]
        assert d[0] > d[1] > d[2]

    def test_gate_met_with_equality_at_d0(self):
        d0 = d0_threshold(P)
        p_at_d0 = received_power_normal((0.0, 0.0), (d0, 0.0), P)
        assert p_at_d0 == pytest.approx(circuit_threshold(P), rel=1e-12)
        assert circuit_gate(p_at_d0 * (1 + 1e-9), P) > 0.0


class TestReceivedPower:
    def test_unit_distance(self):
        assert received_power_normal((0.0, 0.0), (1.0, 0.0), P) == pytest.approx(10.0)

    def test_distance_two(self):
        assert received_power_normal((0.0, 0.0), (0.0, 2.0), P) == pytest.approx(1.25)

    def test_linear_in_gain(self):
        p2 = NetworkParams(g=2.0)
        for d in (0.7, 1.0, 3.3):
            assert received_power_normal((0.0, 0.0), (d, 0.0), p2) == pytest.approx(
                2.0 * received_power_normal((0.0, 0.0), (d, 0.0), P)
            )

    def test_colocated_rejected(self):
        with pytest.raises(ValueError):
            received_power_normal((1.0, 1.0), (1.0, 1.0), P)

    def test_dense_sums_over_cluster(self):
        one = received_power_dense((0.0, 0.0), [(1.0, 0.0)], P)
        assert one == pytest.approx(received_power_normal((0.0, 0.0), (1.0, 0.0), P))
        two = received_power_dense((0.0, 0.0), [(1.0, 0.0), (0.0, 2.0)], P)
        assert two == pytest.approx(11.25)
        with pytest.raises(ValueError):
            received_power_dense((0.0, 0.0), np.empty((0, 2)), P)


class TestTruncatedPathLoss:
    def test_plateau_and_tail(self):
        p = NetworkParams(nu=0.5)
        assert truncated_path_loss(0.1, p) == truncated_path_loss(0.0, p)
        assert truncated_path_loss(0.5, p) == pytest.approx(0.5**-3)
        assert truncated_path_loss(2.0, p) == pytest.approx(0.125)

    def test_continuous_at_nu(self):
        p = NetworkParams(nu=0.5)
        eps = 1e-9
        below = truncated_path_loss(p.nu - eps, p)
        above = truncated_path_loss(p.nu + eps, p)
        assert below == pytest.approx(above, rel=1e-7)


class TestFading:
    def test_moments_and_support(self, rng):
        h = sample_fading(rng, 1_000_000)
        assert np.all(h > 0)
        assert abs(h.mean() - 1.0) < 0.003
        assert abs(np.mean(h > 1.0) - math.exp(-1.0)) < 0.002
