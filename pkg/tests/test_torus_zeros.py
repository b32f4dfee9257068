"""Zero location in the cell, the zero-sum constraint, and reconstruction."""

import numpy as np
import pytest

from thetaphase.errors import ConstraintViolation
from thetaphase.finite import Dimension, momentum_state, random_state
from thetaphase.torus import ZeroSet, find_zeros, state_from_zeros, torus_rep, zero_sum_target


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def winding_over_window(G, delta0, L, samples=2048):
    """Independent zero-count oracle: accumulated boundary phase of G."""
    t = np.arange(samples) / samples
    edges = np.concatenate(
        [
            delta0 + t * L + 1j * delta0,
            delta0 + L + 1j * (delta0 + t * L),
            delta0 + (1 - t) * L + 1j * (delta0 + L),
            delta0 + 1j * (delta0 + (1 - t) * L),
        ]
    )
    vals = G.evaluate(edges)
    dargs = np.angle(np.roll(vals, -1) / vals)
    assert np.abs(dargs).max() < np.pi / 2, "oracle needs more boundary samples"
    return int(round(dargs.sum() / (2 * np.pi)))


def grid_zero_candidates(G, delta0, L, n=512):
    """Independent localization oracle: strict local minima of |G| on a dense grid."""
    xs = delta0 + np.arange(n) * L / n
    Z = xs[:, None] + 1j * xs[None, :]
    A = np.abs(G.evaluate(Z))
    inner = A[1:-1, 1:-1]
    neighbors = np.stack(
        [A[:-2, 1:-1], A[2:, 1:-1], A[1:-1, :-2], A[1:-1, 2:],
         A[:-2, :-2], A[2:, 2:], A[:-2, 2:], A[2:, :-2]]
    )
    mask = (inner < neighbors.min(axis=0)) & (inner < np.median(A))
    ii, jj = np.nonzero(mask)
    return Z[1:-1, 1:-1][ii, jj]


class TestZeroCount:
    def test_winding_oracle_agrees(self, rng):
        dim = Dimension(3)
        G = torus_rep(random_state(dim, rng))
        zs = find_zeros(G)
        L = dim.cell_side
        assert winding_over_window(G, zs.window_offset, L) == 3
        assert len(zs.zeros) == 3

    def test_twenty_seeded_states_d5(self):
        dim = Dimension(5)
        for seed in range(20):
            g = random_state(dim, np.random.default_rng(seed))
            zs = find_zeros(torus_rep(g))
            assert len(zs.zeros) == 5

    def test_zero_set_requires_d_entries(self, rng):
        dim = Dimension(3)
        zs = find_zeros(torus_rep(random_state(dim, rng)))
        from thetaphase.errors import ZeroCountMismatch

        with pytest.raises(ZeroCountMismatch):
            ZeroSet(
                dim=dim,
                zeros=zs.zeros[:2],
                sum_residual=0j,
                newton_residuals=zs.newton_residuals[:2],
                cell=(0, 0),
            )


class TestZeroSum:
    def test_d3_principal_cell(self, rng):
        dim = Dimension(3)
        zs = find_zeros(torus_rep(random_state(dim, rng)))
        target = zero_sum_target(dim, zs.cell)
        assert abs(zs.zeros.sum() - target) < 1e-6
        assert abs(zs.sum_residual) < 1e-6
        # d^{3/2} sqrt(pi/2) (1+i) for the (0,0) cell
        assert zero_sum_target(dim) == pytest.approx(
            3**1.5 * np.sqrt(np.pi / 2) * (1 + 1j), abs=1e-14
        )

    @pytest.mark.parametrize("d", [3, 5])
    def test_sum_residual_small_across_seeds(self, d):
        dim = Dimension(d)
        for seed in (1, 2, 3):
            zs = find_zeros(torus_rep(random_state(dim, np.random.default_rng(seed))))
            assert abs(zs.sum_residual) < 1e-6


class TestMomentumStateZeros:
    def test_horizontal_line_and_spacing(self):
        # analytically, the zeros sit on one horizontal line with spacing
        # sqrt(2 pi / d) in the real direction
        d = 3
        dim = Dimension(d)
        G = torus_rep(momentum_state(dim, 0))
        zs = find_zeros(G)
        L = dim.cell_side
        imag_parts = np.sort(zs.zeros.imag)
        assert np.ptp(imag_parts) < 1e-9
        reals = np.sort(zs.zeros.real)
        np.testing.assert_allclose(np.diff(reals), np.sqrt(2 * np.pi / 3), atol=1e-9)
        expected_reals = sorted((-L * (1 + 2 * t) / (2 * d)) % L for t in range(d))
        np.testing.assert_allclose(reals, expected_reals, atol=1e-9)
        assert zs.newton_residuals.max() < 1e-9

    def test_grid_oracle_localizes_same_zeros(self):
        dim = Dimension(3)
        G = torus_rep(momentum_state(dim, 0))
        zs = find_zeros(G)
        cands = grid_zero_candidates(G, zs.window_offset, dim.cell_side)
        # every found zero has a dense-grid candidate nearby
        for z in zs.zeros:
            assert np.abs(cands - z).min() < 2 * dim.cell_side / 512


class TestReconstruction:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_round_trip_d3(self, seed):
        dim = Dimension(3)
        g = random_state(dim, np.random.default_rng(seed))
        zs = find_zeros(torus_rep(g))
        rec = state_from_zeros(zs)
        assert abs(np.vdot(rec.state.g, g.g)) > 1 - 1e-7

    def test_momentum_state_round_trip(self):
        dim = Dimension(3)
        g = momentum_state(dim, 1)
        zs = find_zeros(torus_rep(g))
        rec = state_from_zeros(zs)
        assert abs(np.vdot(rec.state.g, g.g)) > 1 - 1e-7

    def test_round_trip_d5(self, rng):
        dim = Dimension(5)
        g = random_state(dim, rng)
        zs = find_zeros(torus_rep(g))
        rec = state_from_zeros(zs)
        assert abs(np.vdot(rec.state.g, g.g)) > 1 - 1e-7

    def test_perturbed_zero_breaks_constraint(self, rng):
        dim = Dimension(3)
        zs = find_zeros(torus_rep(random_state(dim, rng)))
        zs.zeros[0] += 0.1
        with pytest.raises(ConstraintViolation):
            state_from_zeros(zs)


def test_zero_displacement_under_phase_space_translation(rng):
    # zeros of the displaced state are the fiducial zeros translated by
    # beta*sqrt(2 pi/d) - i*alpha*sqrt(2 pi/d), modulo the cell lattice
    from thetaphase.coherent import CoherentFamilyFinite, discrete_gaussian_fiducial
    from thetaphase.finite import PhaseLabelFinite

    dim = Dimension(3)
    fam = CoherentFamilyFinite(discrete_gaussian_fiducial(dim))
    zs0 = find_zeros(fam._rep)
    L = dim.cell_side
    s = np.sqrt(2 * np.pi / dim.d)
    for p in (PhaseLabelFinite(1, 2), PhaseLabelFinite(2, 1)):
        moved = find_zeros(fam.member_rep(p))
        expected = zs0.zeros - 1j * p.alpha * s + p.beta * s
        for e in expected:
            diffs = moved.zeros - e
            diffs -= L * np.round(diffs.real / L) + 1j * L * np.round(diffs.imag / L)
            assert np.abs(diffs).min() < 1e-8
