"""Wigner and Weyl functions for both systems, each computed two ways.

Ground truth is always the operator expectation (displacement for Weyl,
displaced parity for Wigner); the coherent-coefficient formulas are
implemented as independent alternates so that any convention slip shows up
as a reproducible residual.  The finite Weyl/Wigner pair is an exact
two-dimensional Fourier transform of each other.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .circle import (
    TWO_PI,
    CircleState,
    FiducialCircle,
    PhaseLabelCircle,
    circle_displace,
    circle_parity,
)
from .coherent import FiducialFinite, coherent_coeffs
from .errors import TruncationLossWarning
from .finite import (
    Dimension,
    FiniteState,
    PhaseLabelFinite,
    displaced_parity,
    displacement,
    omega,
)

__all__ = [
    "WeylTableFinite",
    "WignerTableFinite",
    "PhaseMapCircle",
    "weyl_finite",
    "wigner_finite",
    "wigner_weyl_link_residual",
    "weyl_finite_from_coherent",
    "wigner_finite_from_coherent",
    "weyl_circle",
    "wigner_circle",
    "wigner_circle_link_residual",
    "weyl_circle_from_coeffs",
    "wigner_circle_from_coeffs",
    "circle_coherent_coeff",
]


@dataclass
class WeylTableFinite:
    """<g|D(alpha,beta)|g> over the full d x d label lattice."""

    dim: Dimension
    values: np.ndarray


@dataclass
class WignerTableFinite:
    """<g|P(alpha,beta)|g> over the full d x d label lattice; real up to roundoff."""

    dim: Dimension
    values: np.ndarray

    def max_imag(self) -> float:
        return float(np.abs(self.values.imag).max())


def weyl_finite(g: FiniteState) -> WeylTableFinite:
    d = g.dim.d
    vals = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            vals[a, b] = np.vdot(g.g, displacement(g.dim, PhaseLabelFinite(a, b)).entries @ g.g)
    return WeylTableFinite(g.dim, vals)


def wigner_finite(g: FiniteState) -> WignerTableFinite:
    d = g.dim.d
    vals = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            vals[a, b] = np.vdot(g.g, displaced_parity(g.dim, PhaseLabelFinite(a, b)).entries @ g.g)
    return WignerTableFinite(g.dim, vals)


def wigner_weyl_link_residual(g: FiniteState) -> float:
    """Max residual of W(gamma,delta) = (1/d) sum omega(beta gamma - alpha delta) W~(alpha,beta)."""
    dim = g.dim
    wt = weyl_finite(g).values
    wg = wigner_finite(g).values
    idx = np.arange(dim.d)
    worst = 0.0
    for ga in range(dim.d):
        for de in range(dim.d):
            ph = omega(idx[np.newaxis, :] * ga - idx[:, np.newaxis] * de, dim)
            worst = max(worst, abs((wt * ph).sum() / dim.d - wg[ga, de]))
    return worst


def weyl_finite_from_coherent(g: FiniteState, f: FiducialFinite) -> WeylTableFinite:
    """Weyl table from the coherent coefficients g(gamma,delta;f):

    W~(alpha,beta) = (1/d) sum_{gamma,delta} g(gamma,delta;f)
                     g*(gamma+alpha, delta+beta;f) omega[2^{-1}(alpha delta - beta gamma)].
    """
    dim = g.dim
    d = dim.d
    tab = coherent_coeffs(g, f)
    idx = np.arange(d)
    vals = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            shifted = np.conj(tab[np.ix_((idx + a) % d, (idx + b) % d)])
            ph = omega(dim.inv2 * (a * idx[np.newaxis, :] - b * idx[:, np.newaxis]), dim)
            vals[a, b] = (tab * shifted * ph).sum() / d
    return WeylTableFinite(dim, vals)


def wigner_finite_from_coherent(g: FiniteState, f: FiducialFinite) -> WignerTableFinite:
    """Wigner table from the coherent coefficients, as the quadruple sum

    W(alpha,beta) = (1/d^2) sum_{gamma,delta,eps,zeta} g(eps,zeta;f) g*(gamma,delta;f)
        omega(alpha delta - beta gamma + 2^{-1} zeta gamma - zeta alpha
              - 2^{-1} eps delta + eps beta).
    """
    dim = g.dim
    d = dim.d
    tab = coherent_coeffs(g, f)
    idx = np.arange(d)
    # omega(2^{-1} zeta gamma) and omega(-2^{-1} eps delta) couple the two tables
    half = omega(dim.inv2 * np.outer(idx, idx), dim)  # [zeta, gamma] and [eps, delta]
    vals = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            left = tab * omega(-a * idx[np.newaxis, :] + b * idx[:, np.newaxis], dim)
            # left[eps, zeta] = g(eps,zeta) omega(-zeta a + eps b)
            right = np.conj(tab) * omega(a * idx[np.newaxis, :] - b * idx[:, np.newaxis], dim)
            # right[gamma, delta] = g*(gamma,delta) omega(a delta - b gamma)
            # sum_{eps,zeta,gamma,delta} left[eps,zeta] half[zeta,gamma]
            #   right[gamma,delta] conj(half)[eps,delta]
            vals[a, b] = np.einsum(
                "ez,zg,gd,ed->", left, half, right, np.conj(half), optimize=True
            ) / d**2
    return WignerTableFinite(dim, vals)


@dataclass
class PhaseMapCircle:
    """Weyl or Wigner values sampled on an (a, K) lattice.

    The accessor applies the sign cocycle, so values at a + 2*pi*m are
    (-1)^{K m} times the stored ones.
    """

    a_grid: np.ndarray
    k_range: np.ndarray
    values: np.ndarray

    def value_at(self, a_index: int, K: int, wraps: int = 0) -> complex:
        k_index = int(np.where(self.k_range == K)[0][0])
        return complex(self.values[a_index, k_index] * (-1) ** (K * wraps))


def _displaced(q: CircleState, a: float, K: int) -> CircleState:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationLossWarning)
        return circle_displace(q, PhaseLabelCircle(a, K))


def weyl_circle(q: CircleState, p: PhaseLabelCircle) -> complex:
    """W~(a,K;q) = <q|D(a,K)|q>."""
    return complex(np.vdot(q.q, _displaced(q, p.a, p.K).q))


def wigner_circle(q: CircleState, p: PhaseLabelCircle) -> complex:
    """W(a,K;q) = <q|U(a,K)|q> = <q|D(a,K) U_0|q>."""
    return complex(np.vdot(q.q, _displaced(circle_parity(q), p.a, p.K).q))


def wigner_circle_link_residual(
    q: CircleState, p: PhaseLabelCircle, k_max: int, n_b: int
) -> float:
    """Residual of the Fourier link between the circle Wigner and Weyl functions:

    W(a,M;q) = (1/2 pi) sum_K int db W~(b, M+2K; q) exp[(i/2)(bM - aM - 2Ka)].
    """
    a, M = p.a, p.K
    lhs = wigner_circle(q, p)
    b = np.arange(n_b) * TWO_PI / n_b
    acc = 0j
    for K in range(-k_max, k_max + 1):
        wv = np.array([weyl_circle(q, PhaseLabelCircle(bb, M + 2 * K)) for bb in b])
        acc += np.sum(wv * np.exp(0.5j * (b * M - a * M - 2 * K * a))) / n_b
    return abs(lhs - acc)


def circle_coherent_coeff(q: CircleState, r: FiducialCircle, a, K: int):
    """q(a,K;r) = <r|D(-a,-K)|q>, vectorized over a."""
    a = np.asarray(a, dtype=float)
    acc = np.zeros(a.shape, dtype=np.complex128)
    for N in r.state.n_range:
        qc = q.coeff(N + K)
        if qc != 0:
            acc += np.conj(r.state.coeff(N)) * qc * np.exp(1j * a * N)
    return acc * np.exp(0.5j * a * K)


def weyl_circle_from_coeffs(
    q: CircleState, r: FiducialCircle, p: PhaseLabelCircle, k_max: int, n_b: int
) -> complex:
    """Weyl function from the coherent coefficients:

    W~(a,K;q) = (1/2 pi) sum_M int db q*(b,M;r) q(b-a, M-K; r)
                exp[(i/2)(-aM + Kb)].
    """
    a, K = p.a, p.K
    b = np.arange(n_b) * TWO_PI / n_b
    acc = 0j
    for M in range(-k_max, k_max + 1):
        qb = circle_coherent_coeff(q, r, b, M)
        qs = circle_coherent_coeff(q, r, b - a, M - K)
        acc += np.sum(np.conj(qb) * qs * np.exp(0.5j * (-a * M + K * b))) / n_b
    return complex(acc)


def wigner_circle_from_coeffs(
    q: CircleState,
    r: FiducialCircle,
    p: PhaseLabelCircle,
    k_max: int,
    n_b: int,
    n_gamma: int | None = None,
) -> complex:
    """Wigner function from the coherent coefficients, as the double lattice sum
    with two angle integrals:

    W(a,K;q) = (1/4 pi^2) sum_{M,N} int db int dg [q(b,M;r)]* q(-g, M-K-2N; r)
               exp[(i/2)(gK - gM - aK - 2aN + 2bK - bM + 2bN)].

    The b- and g-integrals factorize and are evaluated on uniform grids
    (exact once the grid exceeds the integrand bandwidth).
    """
    a, K = p.a, p.K
    n_gamma = n_gamma or n_b
    b = np.arange(n_b) * TWO_PI / n_b
    gam = np.arange(n_gamma) * TWO_PI / n_gamma
    acc = 0j
    for M in range(-k_max, k_max + 1):
        qb = np.conj(circle_coherent_coeff(q, r, b, M))
        for N in range(-k_max, k_max + 1):
            qg = circle_coherent_coeff(q, r, -gam, -K + M - 2 * N)
            Sg = np.sum(qg * np.exp(0.5j * gam * (K - M))) / n_gamma
            if Sg == 0:
                continue
            Sb = np.sum(qb * np.exp(0.5j * b * (2 * K - M + 2 * N))) / n_b
            acc += Sb * Sg * np.exp(-0.5j * a * (K + 2 * N))
    return complex(acc)
