"""Theta kernel: frozen values, finite-difference oracle, invariants, backends."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaphase._kernels import _theta3_du_sum_numpy, _theta3_sum_numpy, theta3_du_sum, theta3_sum
from thetaphase.errors import NonconvergentTau, TruncationOverflow
from thetaphase.theta import ThetaConfig, jacobi_residual, theta3, theta3_du

NO_TRANSFORM = ThetaConfig(transform_threshold=1e-30)


def brute_theta3(u, tau, n_terms):
    return sum(np.exp(1j * np.pi * tau * n**2 + 2j * n * u) for n in range(-n_terms, n_terms + 1))


def brute_theta3_du(u, tau, n_terms):
    return sum(
        2j * n * np.exp(1j * np.pi * tau * n**2 + 2j * n * u)
        for n in range(-n_terms, n_terms + 1)
    )


class TestTheta3:
    def test_value_at_origin_tau_i(self):
        # oracle: direct partial sum to 20 terms; 1 + 2e^{-pi} + 2e^{-4pi} + ...
        assert brute_theta3(0.0, 1j, 20) == pytest.approx(1.0864348112133082, abs=1e-15)
        assert theta3(0, 1j) == pytest.approx(1.0864348112133082 + 0j, abs=1e-14)

    def test_period_pi_in_u(self):
        assert abs(theta3(np.pi, 1j) - theta3(0, 1j)) < 1e-14

    def test_transform_path_matches_direct(self):
        u, tau = 0.0, 1j / 5
        assert abs(theta3(u, tau) - theta3(u, tau, NO_TRANSFORM)) < 1e-12

    @pytest.mark.parametrize("u,tau", [(0.3 + 0.2j, 1j / 3), (1.7, 1j / 11), (0.4 - 1.1j, 2j)])
    def test_against_brute_force(self, u, tau):
        ref = brute_theta3(u, tau, 400)
        assert abs(theta3(u, tau) - ref) / max(1.0, abs(ref)) < 1e-13

    def test_array_input_matches_scalars(self):
        us = np.array([0.1, 0.2 + 0.3j, -1.0 - 0.5j])
        vals = theta3(us, 1j / 3)
        for u, v in zip(us, vals):
            assert v == theta3(complex(u), 1j / 3)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(NonconvergentTau):
            theta3(0.0, -1j)
        with pytest.raises(NonconvergentTau):
            theta3(0.0, 1.0 + 0j)

    def test_term_cap_overflow(self):
        with pytest.raises(TruncationOverflow):
            theta3(0.0, 1j / 5, ThetaConfig(max_terms=2, transform_threshold=1e-30))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ThetaConfig(eps=0.0)
        with pytest.raises(ValueError):
            ThetaConfig(max_terms=0)
        with pytest.raises(ValueError):
            ThetaConfig(transform_threshold=-1.0)


class TestTheta3Derivative:
    def test_zero_at_origin(self):
        # terms are odd in the summation index at u = 0
        assert abs(theta3_du(0, 1j)) < 1e-14

    @pytest.mark.parametrize(
        "u,tau,rel",
        [(0.3, 1j, 1e-8), (0.3 + 0.2j, 1j / 3, 1e-7)],
    )
    def test_finite_difference_oracle(self, u, tau, rel):
        h = 1e-6
        fd = (theta3(u + h, tau) - theta3(u - h, tau)) / (2 * h)
        assert abs(theta3_du(u, tau) - fd) / abs(fd) < rel

    def test_against_brute_force(self):
        u, tau = 0.5 - 0.4j, 1j / 7
        ref = brute_theta3_du(u, tau, 400)
        assert abs(theta3_du(u, tau) - ref) / abs(ref) < 1e-12


class TestJacobiIdentity:
    @pytest.mark.parametrize(
        "u,tau,bound",
        [(0.0, 1j, 1e-13), (1 + 0.5j, 2j, 1e-12), (0.7, 1j / 7, 1e-11)],
    )
    def test_residual_small(self, u, tau, bound):
        assert jacobi_residual(u, tau) < bound

    def test_both_sides_by_direct_summation(self):
        # independent oracle: both sides summed with 400 explicit terms
        u, tau = 0.9, 1j / 9
        lhs = brute_theta3(u, tau, 400)
        rhs = (-1j * tau) ** -0.5 * np.exp(u**2 / (1j * np.pi * tau)) * brute_theta3(
            u / tau, -1 / tau, 400
        )
        assert abs(lhs - rhs) < 1e-12
        assert jacobi_residual(u, tau) < 1e-11


# moderate example counts: each case sums a few hundred terms
@settings(max_examples=40, deadline=None)
@given(
    ur=st.floats(-3, 3),
    ui=st.floats(-2, 2),
    d=st.integers(1, 15),
)
def test_periodicity_property(ur, ui, d):
    u = complex(ur, ui)
    tau = 1j / d
    a, b = theta3(u + np.pi, tau), theta3(u, tau)
    assert abs(a - b) <= 1e-13 * max(1.0, abs(a), abs(b))


@settings(max_examples=40, deadline=None)
@given(ur=st.floats(-3, 3), ui=st.floats(-2, 2), d=st.integers(1, 15))
def test_evenness_property(ur, ui, d):
    u = complex(ur, ui)
    tau = 1j / d
    a, b = theta3(-u, tau), theta3(u, tau)
    assert abs(a - b) <= 1e-13 * max(1.0, abs(a), abs(b))


@settings(max_examples=40, deadline=None)
@given(ur=st.floats(-2, 2), ui=st.floats(-1, 1), ti=st.floats(0.2, 4))
def test_quasiperiodicity_property(ur, ui, ti):
    u = complex(ur, ui)
    tau = 1j * ti
    a = theta3(u + np.pi * tau, tau)
    b = np.exp(-1j * np.pi * tau - 2j * u) * theta3(u, tau)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def test_transform_consistency_sweep():
    # direct vs transform-accelerated paths across the small-Im-tau family,
    # measured against the largest series term (the cancellation scale)
    rng = np.random.default_rng(0)
    us = rng.uniform(-3, 3, size=16) + 1j * rng.uniform(-3, 3, size=16)
    for d in range(3, 33, 2):
        tau = 1j / d
        direct = theta3(us, tau, NO_TRANSFORM)
        fast = theta3(us, tau)
        peak = np.exp(us.imag**2 * d / np.pi)
        scale = np.maximum(np.maximum(np.abs(direct), 1.0), peak)
        assert (np.abs(direct - fast) / scale).max() < 1e-11


class TestBackends:
    def test_sum_kernels_agree(self):
        u = (np.linspace(-2, 2, 41) + 0.3j).astype(np.complex128)
        tau = 0.7j
        a = theta3_sum(u, tau, 25)
        b = _theta3_sum_numpy(u, tau, 25)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)

    def test_du_kernels_agree(self):
        u = (np.linspace(-2, 2, 41) - 0.2j).astype(np.complex128)
        tau = 1.1j
        a = theta3_du_sum(u, tau, 25)
        b = _theta3_du_sum_numpy(u, tau, 25)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)
