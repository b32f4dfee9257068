"""Strip representation: closed forms, kernel, zeros, coherent expansions."""

import warnings

import numpy as np
import pytest

from thetaphase import circle as ci
from thetaphase import strip as st
from thetaphase.errors import DegenerateLeadingCoefficientWarning


@pytest.fixture
def rng():
    return np.random.default_rng(3)


@pytest.fixture
def gaussian8():
    return ci.gaussian_momenta_fiducial(8)


@pytest.fixture
def random_state8():
    return ci.seeded_random_fiducial_circle(8, 5).state


class TestRepresentation:
    def test_ground_momentum_state_is_constant(self):
        Q = st.strip_rep(ci.momentum_circle_state(4, 0))
        zs = np.array([0.0, 1.0 + 2j, 5.5 - 3j])
        np.testing.assert_allclose(Q.evaluate(zs), 2 * np.pi, atol=1e-14)

    def test_momentum_state_closed_form(self):
        Q = st.strip_rep(ci.momentum_circle_state(4, 3))
        z = 0.5
        assert Q.evaluate(z) == pytest.approx(2 * np.pi * np.exp(-4.5 + 1.5j), abs=1e-12)

    def test_exact_two_pi_periodicity(self, random_state8):
        Q = st.strip_rep(random_state8)
        z = 1.3 + 0.7j
        assert Q.evaluate(z + 2 * np.pi) == pytest.approx(Q.evaluate(z), rel=1e-14)

    def test_direct_integral_oracle(self, random_state8):
        Q = st.strip_rep(random_state8)
        z = 1.0 + 0.5j
        assert abs(Q.evaluate_via_integral(z) - Q.evaluate(z)) < 1e-10


class TestScalarProduct:
    def test_normalized_gaussian(self, gaussian8):
        Q = st.strip_rep(gaussian8.state)
        assert st.strip_scalar_product(Q, Q) == pytest.approx(1.0 + 0j, abs=1e-7)

    def test_momentum_orthogonality(self):
        Q1 = st.strip_rep(ci.momentum_circle_state(8, 1))
        Q2 = st.strip_rep(ci.momentum_circle_state(8, 2))
        assert abs(st.strip_scalar_product(Q1, Q2)) < 1e-8

    def test_matches_coefficient_sum(self, random_state8):
        q2 = ci.seeded_random_fiducial_circle(8, 9).state
        got = st.strip_scalar_product(st.strip_rep(random_state8), st.strip_rep(q2))
        assert abs(got - np.vdot(q2.q, random_state8.q)) < 1e-7

    def test_mixed_truncations_embed(self, random_state8):
        # <N=1 | q> = q_1 after the narrower state is zero-padded
        small = ci.momentum_circle_state(4, 1)
        got = st.strip_scalar_product(st.strip_rep(random_state8), st.strip_rep(small))
        assert abs(got - random_state8.coeff(1)) < 1e-7


class TestInversion:
    def test_constant_state(self):
        Q = st.strip_rep(ci.momentum_circle_state(4, 0))
        for x in (0.0, 2.0):
            assert st.strip_invert(Q, x) == pytest.approx(1.0 + 0j, abs=1e-8)

    def test_matches_fourier_synthesis(self, random_state8):
        Q = st.strip_rep(random_state8)
        x = np.pi / 3
        ref = complex(random_state8.wavefunction(np.array(x)))
        assert abs(st.strip_invert(Q, x) - ref) < 1e-7

    def test_linear_in_the_representation(self, random_state8):
        q2 = ci.seeded_random_fiducial_circle(8, 7).state
        a, b = 0.6 - 0.1j, -0.4 + 0.9j
        comb = ci.CircleState(8, a * random_state8.q + b * q2.q, normalized=False)
        x = 1.1
        lhs = st.strip_invert(st.strip_rep(comb), x)
        rhs = a * st.strip_invert(st.strip_rep(random_state8), x) + b * st.strip_invert(
            st.strip_rep(q2), x)
        assert abs(lhs - rhs) < 1e-10


class TestCoherentEval:
    def test_zero_label_is_fiducial(self, gaussian8):
        z = 0.4 + 1.2j
        got = st.strip_coherent_eval(gaussian8, z, ci.PhaseLabelCircle(0.0, 0))
        ref = st.strip_rep(gaussian8.state).evaluate(z)
        assert got == pytest.approx(ref, rel=1e-14)

    def test_paths_agree(self, rng):
        r = ci.gaussian_momenta_fiducial(16)
        p = ci.PhaseLabelCircle(0.7, 2)
        zs = rng.normal(size=10) + 1j * rng.normal(size=10)
        for z in zs:
            assert st.strip_coherent_eval_residual(r, z, p) < 1e-9

    def test_cocycle(self, gaussian8):
        z = 0.2 + 0.1j
        a, K = 0.3, 3
        c1 = st.strip_coherent_eval(gaussian8, z, ci.PhaseLabelCircle(a + 2 * np.pi, K))
        c2 = st.strip_coherent_eval(gaussian8, z, ci.PhaseLabelCircle(a, K))
        assert abs(complex(c1) + complex(c2)) < 1e-10

    def test_fourier_pairing(self, gaussian8):
        assert st.strip_coherent_fourier_residual(
            gaussian8, 0.4, ci.PhaseLabelCircle(0.0, 0), 24, 96) < 1e-7
        assert st.strip_coherent_fourier_residual(
            gaussian8, 0.2 + 0.3j, ci.PhaseLabelCircle(1.1, 1), 24, 96) < 1e-7

    def test_fourier_pairing_truncation_monotone(self):
        # error decreases as the momentum cutoff doubles (Gaussian fiducial)
        r = ci.gaussian_momenta_fiducial(12)
        z, p = 0.2 + 0.3j, ci.PhaseLabelCircle(1.1, 1)
        res = [st.strip_coherent_fourier_residual(r, z, p, k, 96) for k in (8, 16, 32)]
        assert res[1] <= res[0] + 1e-15
        assert res[2] <= res[1] + 1e-15


class TestZeros:
    def test_two_level_superposition_zero(self):
        # q = |0> + |1> has the single zero of 1 + e^{-1/2} e^{iz}:
        # e^{iz} = -e^{1/2}, so z = pi - i/2
        q = np.zeros(5, complex)
        q[2] = 1.0
        q[3] = 1.0
        s = ci.CircleState(2, q, normalized=False)
        with pytest.warns(DegenerateLeadingCoefficientWarning):
            zs = st.strip_zeros(st.strip_rep(s))
        assert zs.degree == 1
        assert zs.zeros[0] == pytest.approx(np.pi - 0.5j, abs=1e-12)
        # direct confirmation it is a zero
        assert abs(st.strip_rep(s).evaluate(np.pi - 0.5j)) < 1e-12

    def test_count_matches_order_span(self):
        s = ci.seeded_random_fiducial_circle(6, 21, support=6).state
        zs = st.strip_zeros(st.strip_rep(s))
        assert zs.degree == 2 * 6
        assert zs.n_low == -6 and zs.n_high == 6

    def test_all_zeros_evaluate_small(self):
        s = ci.seeded_random_fiducial_circle(6, 22, support=6).state
        Q = st.strip_rep(s)
        zs = st.strip_zeros(Q)
        # measured against the strip-grid maximum of |Q|
        grid, _ = st.strip_grid(Q.n_max, Q.y_max, st.StripQuadratureSpec())
        peak = np.abs(Q.evaluate(grid)).max()
        assert zs.q_residuals.max() < 1e-9 * peak
        assert zs.backward_errors.max() < 1e-12

    def test_displacement_translates_zeros(self):
        s = ci.seeded_random_fiducial_circle(8, 3, support=5).state
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateLeadingCoefficientWarning)
            zs0 = st.strip_zeros(st.strip_rep(s))
            p = ci.PhaseLabelCircle(0.9, 2)
            zs1 = st.strip_zeros(st.strip_rep(ci.circle_displace(s, p)))
        expected = zs0.zeros - 1j * p.K + p.a
        expected = np.mod(expected.real, 2 * np.pi) + 1j * expected.imag
        assert np.abs(np.sort_complex(expected) - np.sort_complex(zs1.zeros)).max() < 1e-8


class TestKernel:
    def test_closed_form_vs_quadrature(self):
        z, w = 0.3 + 0.1j, 1.2 - 0.4j
        got = st.kernel_c(z, w)
        assert abs(st.kernel_c_quadrature(z, np.conj(w), 512) - got) < 1e-9

    def test_joint_negation_symmetry(self, rng):
        for _ in range(20):
            z = complex(rng.uniform(0, 2 * np.pi), rng.normal())
            w = complex(rng.uniform(0, 2 * np.pi), rng.normal())
            a = st.kernel_c_points(z, np.conj(w))
            assert abs(a - st.kernel_c_points(-z, -np.conj(w))) < 1e-11

    def test_resolution_of_identity(self, gaussian8):
        z, w = 0.8 + 0.4j, 2.1 - 0.3j
        got = st.kernel_c_from_family(gaussian8, z, w, 24, 96)
        assert abs(got - st.kernel_c(z, w)) < 1e-7

    def test_fiducial_independence(self, gaussian8):
        r2 = ci.seeded_random_fiducial_circle(8, 31)
        z, w = 0.8 + 0.4j, 2.1 - 0.3j
        a = st.kernel_c_from_family(gaussian8, z, w, 24, 96)
        b = st.kernel_c_from_family(r2, z, w, 24, 96)
        assert abs(a - b) < 1e-7


class TestReproduce:
    def test_constant_state(self):
        Q = st.strip_rep(ci.momentum_circle_state(8, 0))
        z = 1 + 0.2j
        assert abs(st.strip_reproduce(Q, z) - complex(Q.evaluate(z))) < 1e-7

    def test_random_states(self, rng, random_state8):
        Q = st.strip_rep(random_state8)
        worst = 0.0
        for _ in range(10):
            z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1.5, 1.5))
            worst = max(worst, abs(st.strip_reproduce(Q, z) - complex(Q.evaluate(z))))
        assert worst < 1e-6

    def test_linearity(self, random_state8):
        q2 = ci.seeded_random_fiducial_circle(8, 77).state
        a, b = 1.2, -0.5 + 0.3j
        comb = ci.CircleState(8, a * random_state8.q + b * q2.q, normalized=False)
        z = 2.0 + 0.4j
        lhs = st.strip_reproduce(st.strip_rep(comb), z)
        rhs = a * st.strip_reproduce(st.strip_rep(random_state8), z) + b * st.strip_reproduce(
            st.strip_rep(q2), z)
        assert abs(lhs - rhs) < 1e-10


class TestCoherentExpansion:
    def test_self_coefficient_at_origin(self, gaussian8):
        exp = st.strip_coherent_coeffs(gaussian8.state, gaussian8, 64, 24)
        assert complex(exp.coeff(np.array(0.0), 0)) == pytest.approx(1.0 + 0j, abs=1e-12)

    def test_synthesis(self, gaussian8, random_state8, rng):
        exp = st.strip_coherent_coeffs(random_state8, gaussian8, 64, 24)
        Q = st.strip_rep(random_state8)
        for _ in range(10):
            z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
            assert abs(exp.synthesize(z) - complex(Q.evaluate(z))) < 1e-6
            assert abs(exp.synthesize_parity(z) - complex(Q.evaluate(z))) < 1e-6

    def test_quadrature_inverses(self, gaussian8, random_state8):
        exp = st.strip_coherent_coeffs(random_state8, gaussian8, 64, 24)
        a, K = 0.9, 2
        assert abs(exp.coeff_by_quadrature(a, K)
                   - complex(exp.coeff(np.array(a), K))) < 1e-7
        assert abs(exp.parity_coeff_by_quadrature(a, K)
                   - complex(exp.parity_coeff(np.array(a), K))) < 1e-7

    def test_parity_link(self, gaussian8, random_state8):
        exp = st.strip_coherent_coeffs(random_state8, gaussian8, 64, 24)
        assert exp.parity_link_residual(0.9, 2) < 1e-6
        assert exp.parity_link_residual(0.3, -1) < 1e-6

    def test_cocycles(self, gaussian8, random_state8):
        exp = st.strip_coherent_coeffs(random_state8, gaussian8, 64, 24)
        assert exp.cocycle_residual(0.3, 3) < 1e-12
        qt1 = complex(exp.parity_coeff(np.array(0.4 + 2 * np.pi), 3))
        qt2 = complex(exp.parity_coeff(np.array(0.4), 3))
        assert abs(qt1 + qt2) < 1e-12


class TestMarginals:
    def test_momentum_extraction_at_zero(self, gaussian8):
        # the angle integral picks out 4 pi^2 r_0
        got = st.strip_marginals(gaussian8, 0.0, "integral_over_a", 0)
        assert got == pytest.approx(4 * np.pi**2 * gaussian8.state.coeff(0), abs=1e-8)

    def test_momentum_sum(self, gaussian8):
        z = 0.3
        got = st.strip_marginals(gaussian8, z, "sum_over_K", 0.0)
        ref = st.strip_marginal_reference(gaussian8, z, "sum_over_K", 0.0)
        assert abs(got - ref) < 1e-8

    def test_angle_integral_complex_point(self, gaussian8):
        z = 0.1 + 0.4j
        got = st.strip_marginals(gaussian8, z, "integral_over_a", 2)
        ref = st.strip_marginal_reference(gaussian8, z, "integral_over_a", 2)
        assert abs(got - ref) < 1e-8


def test_orthogonality_comb_against_bandlimited_functions():
    # the two-kernel cell integral acts as the periodic delta when paired
    # against any trigonometric polynomial of bounded order
    n_max = 6
    sq = st.StripQuadratureSpec()
    nodes, wt = st.strip_grid(n_max, n_max + 6.0, sq)
    q = ci.seeded_random_fiducial_circle(n_max, 80).state
    from thetaphase.theta import theta3

    y = 1.3
    th_y = theta3((y - np.conj(nodes)) / 2.0, 1j / (2 * np.pi))
    acc = 0j
    n_x = 4 * n_max + 9
    xs = np.arange(n_x) * 2 * np.pi / n_x
    qx = q.wavefunction(xs)
    for x, qv in zip(xs, qx):
        th_x = theta3((x - nodes) / 2.0, 1j / (2 * np.pi))
        acc += qv * (th_x * th_y * wt).sum() * (2 * np.pi / n_x)
    assert abs(acc - complex(q.wavefunction(np.array(y)))) < 1e-7
