"""Torus representation: evaluation, periodicity, quadrature, coefficient recovery."""

import numpy as np
import pytest

from thetaphase.errors import DimensionMismatch
from thetaphase.finite import Dimension, momentum_coeffs, momentum_state, position_state, \
    random_state
from thetaphase.theta import theta3
from thetaphase.torus import (
    QuadratureSpec,
    cell_grid,
    coefficients_from_torus,
    scalar_product_analytic,
    torus_rep,
)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


class TestEvaluation:
    def test_single_term_for_position_state(self):
        # |X;0> at z = 0 collapses to one theta value
        dim = Dimension(3)
        G = torus_rep(position_state(dim, 0))
        expected = np.pi**-0.25 * theta3(0, 1j / 3)
        assert G.evaluate(0) == pytest.approx(expected, abs=1e-14)

    def test_momentum_state_closed_form(self, rng):
        # the momentum-state representation collapses to a Gaussian times one theta
        d, k = 5, 2
        dim = Dimension(d)
        G = torus_rep(momentum_state(dim, k))
        zs = rng.normal(size=6) + 1j * rng.normal(size=6)
        expected = (
            np.pi**-0.25
            * np.exp(-(zs**2) / 2.0)
            * theta3(np.pi * k / d - 1j * zs * np.sqrt(np.pi / (2 * d)), 1j / d)
        )
        np.testing.assert_allclose(G.evaluate(zs), expected, atol=1e-10)

    def test_real_periodicity(self, rng):
        dim = Dimension(5)
        G = torus_rep(random_state(dim, rng))
        L = dim.cell_side
        z = 0.37 + 0.21j
        assert abs(G.evaluate(z + L) - G.evaluate(z)) / abs(G.evaluate(z)) < 1e-10

    def test_imaginary_quasi_periodicity(self, rng):
        dim = Dimension(5)
        G = torus_rep(random_state(dim, rng))
        L = dim.cell_side
        z = 0.37 + 0.21j
        lhs = G.evaluate(z + 1j * L)
        rhs = G.evaluate(z) * np.exp(np.pi * dim.d - 1j * z * L)
        assert abs(lhs - rhs) / abs(lhs) < 1e-9

    def test_derivative_matches_finite_difference(self, rng):
        G = torus_rep(random_state(Dimension(3), rng))
        z, h = 0.6 + 0.4j, 1e-6
        fd = (G.evaluate(z + h) - G.evaluate(z - h)) / (2 * h)
        assert abs(G.evaluate_du(z) - fd) / abs(fd) < 1e-8


class TestScalarProduct:
    def test_normalization(self):
        dim = Dimension(3)
        G = torus_rep(position_state(dim, 0))
        # the bilinear pairing of a real basis vector with itself is 1
        assert scalar_product_analytic(G, G) == pytest.approx(1.0, abs=1e-8)

    def test_basis_orthogonality(self):
        dim = Dimension(3)
        G0 = torus_rep(position_state(dim, 0))
        G1 = torus_rep(position_state(dim, 1))
        assert abs(scalar_product_analytic(G0, G1)) < 1e-8

    def test_matches_coefficient_sum(self, rng):
        dim = Dimension(5)
        g1, g2 = random_state(dim, rng), random_state(dim, rng)
        sp = scalar_product_analytic(torus_rep(g1), torus_rep(g2))
        assert abs(sp - np.sum(g1.g * g2.g)) < 1e-7

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            scalar_product_analytic(
                torus_rep(random_state(Dimension(3), rng)),
                torus_rep(random_state(Dimension(5), rng)),
            )

    def test_quadrature_convergence_on_refinement(self, rng):
        # doubling the grid changes nothing beyond roundoff: the weighted
        # integrand is doubly periodic and entire
        for d in (3, 11):
            dim = Dimension(d)
            g1, g2 = random_state(dim, rng), random_state(dim, rng)
            G1, G2 = torus_rep(g1), torus_rep(g2)
            coarse = scalar_product_analytic(G1, G2, QuadratureSpec(96, 96))
            fine = scalar_product_analytic(G1, G2, QuadratureSpec(192, 192))
            assert abs(coarse - fine) < 1e-9


class TestCoefficientRecovery:
    def test_basis_round_trip(self):
        dim = Dimension(5)
        g = position_state(dim, 2)
        rec = coefficients_from_torus(torus_rep(g))
        assert np.abs(rec.g - g.g).max() < 1e-8

    def test_random_round_trip(self, rng):
        dim = Dimension(7)
        g = random_state(dim, rng)
        rec = coefficients_from_torus(torus_rep(g))
        assert np.abs(rec.g - g.g).max() < 1e-7

    def test_momentum_variant_matches_momentum_coeffs(self, rng):
        dim = Dimension(5)
        g = random_state(dim, rng)
        rec = coefficients_from_torus(torus_rep(g), momentum=True)
        assert np.abs(rec.g - momentum_coeffs(g).g).max() < 1e-7


def test_orthogonality_kernel_matrix():
    # Gram matrix of the theta kernels under the cell measure is the identity
    spec = QuadratureSpec()
    for d in (3, 5, 7):
        dim = Dimension(d)
        z, w = cell_grid(dim, spec)
        scale = np.sqrt(np.pi / (2 * d))
        shifts = (np.pi * np.arange(d) / d).reshape(-1, 1, 1)
        th = theta3(shifts - z[np.newaxis] * scale, 1j / d)
        thc = theta3(shifts - np.conj(z)[np.newaxis] * scale, 1j / d)
        gram = np.einsum("nij,mij,ij->nm", th, thc, w) * (2**-0.5 * np.pi**-1 * d**-1.5)
        assert np.abs(gram - np.eye(d)).max() < 1e-7


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(n_real=4)
