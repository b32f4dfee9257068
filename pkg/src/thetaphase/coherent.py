"""Coherent states D(alpha,beta)|f> of finite systems in the analytic language.

A generic fiducial vector |f> generates d^2 coherent states whose analytic
representations close under a two-dimensional Fourier transform, resolve
the identity through a fiducial-independent reproducing kernel, and expand
any state with coefficients <f|D(-alpha,-beta)|g>.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonGenericFiducial
from .finite import (
    Dimension,
    FiniteState,
    PhaseLabelFinite,
    displaced_fourier,
    displaced_parity,
    displacement,
    momentum_coeffs,
    omega,
)
from .theta import DEFAULT_THETA, ThetaConfig, theta3
from .torus import QuadratureSpec, TorusFunction, cell_grid, torus_rep

__all__ = [
    "FiducialKind",
    "FiducialFinite",
    "CoherentFamilyFinite",
    "coherent_eval",
    "coherent_eval_residual",
    "coherent_fourier_relation_residual",
    "parity_rep_fourier_residual",
    "parity_rep_reflection_residual",
    "kernel",
    "kernel_points",
    "kernel_from_family",
    "reproduce",
    "coherent_coeffs",
    "coherent_coeffs_by_quadrature",
    "synthesize",
    "parity_coeffs",
    "parity_coeffs_by_quadrature",
    "synthesize_from_parity",
    "parity_fourier_link_residual",
    "marginals",
    "fourier_fiducial_eval",
    "fourier_fiducial_residual",
    "overlap_formula_residual",
    "discrete_gaussian_fiducial",
    "seeded_random_fiducial",
]

_GENERIC_TOL = 1e-6


class FiducialKind(Enum):
    DISCRETE_GAUSSIAN = "discrete_gaussian"
    SEEDED_RANDOM = "seeded_random"
    USER = "user"


@dataclass(frozen=True)
class FiducialFinite:
    """A generic (neither position- nor momentum-like) normalized state."""

    state: FiniteState
    kind: FiducialKind = FiducialKind.USER

    def __post_init__(self) -> None:
        g = self.state.g
        gt = momentum_coeffs(self.state).g
        if np.abs(g).max() >= 1 - _GENERIC_TOL or np.abs(gt).max() >= 1 - _GENERIC_TOL:
            raise NonGenericFiducial(
                "fiducial must not be a position or momentum basis vector "
                f"(max |g|={np.abs(g).max():.6f}, max |g~|={np.abs(gt).max():.6f})"
            )


def discrete_gaussian_fiducial(dim: Dimension) -> FiducialFinite:
    """f_m proportional to exp(-pi m^2/d) with m the centered representative."""
    m = np.arange(dim.d)
    centered = np.where(m <= (dim.d - 1) // 2, m, m - dim.d)
    f = np.exp(-np.pi * centered.astype(float) ** 2 / dim.d)
    return FiducialFinite(FiniteState(dim, f), FiducialKind.DISCRETE_GAUSSIAN)


def seeded_random_fiducial(dim: Dimension, seed: int) -> FiducialFinite:
    rng = np.random.default_rng(seed)
    for _ in range(64):
        g = rng.normal(size=dim.d) + 1j * rng.normal(size=dim.d)
        state = FiniteState(dim, g)
        try:
            return FiducialFinite(state, FiducialKind.SEEDED_RANDOM)
        except NonGenericFiducial:
            continue
    raise NonGenericFiducial(f"could not draw a generic fiducial from seed {seed}")


class CoherentFamilyFinite:
    """The d^2 states D(alpha,beta)|f> with cached displaced vectors."""

    def __init__(self, fiducial: FiducialFinite, theta_cfg: ThetaConfig = DEFAULT_THETA) -> None:
        self.fiducial = fiducial
        self.dim = fiducial.state.dim
        self.theta_cfg = theta_cfg
        self._rep = torus_rep(fiducial.state, theta_cfg)
        self._vectors: dict[tuple[int, int], np.ndarray] = {}

    def vector(self, p: PhaseLabelFinite) -> np.ndarray:
        """Amplitudes of D(alpha,beta)|f> in the position basis."""
        p = p.reduced(self.dim)
        key = (p.alpha, p.beta)
        if key not in self._vectors:
            self._vectors[key] = displacement(self.dim, p).entries @ self.fiducial.state.g
        return self._vectors[key]

    def member_rep(self, p: PhaseLabelFinite) -> TorusFunction:
        return torus_rep(
            FiniteState(self.dim, self.vector(p), normalized=False), self.theta_cfg
        )

    def labels(self):
        d = self.dim.d
        return (PhaseLabelFinite(a, b) for a in range(d) for b in range(d))


def coherent_eval(fam: CoherentFamilyFinite, z, p: PhaseLabelFinite, method: str = "shift"):
    """Representation of D(alpha,beta)|f> at z.

    ``method="matrix"`` represents the displaced vector directly;
    ``method="shift"`` uses the closed shift form
    omega(-2^{-1} a b) F(z - b s + i a s) exp(i z a s - pi a^2/d), s = sqrt(2 pi/d).
    """
    dim = fam.dim
    p = p.reduced(dim)
    if method == "matrix":
        return fam.member_rep(p).evaluate(z)
    if method != "shift":
        raise ValueError(f"unknown method {method!r}")
    s = np.sqrt(2.0 * np.pi / dim.d)
    z = np.asarray(z, dtype=np.complex128)
    F = fam._rep.evaluate(z - p.beta * s + 1j * p.alpha * s)
    return (
        omega(-dim.inv2 * p.alpha * p.beta, dim)
        * F
        * np.exp(1j * z * p.alpha * s - np.pi * p.alpha**2 / dim.d)
    )


def coherent_eval_residual(fam: CoherentFamilyFinite, z, p: PhaseLabelFinite) -> float:
    """|matrix path - shift path|, which vanishes analytically."""
    a = coherent_eval(fam, z, p, method="matrix")
    b = coherent_eval(fam, z, p, method="shift")
    return float(np.abs(a - b).max())


def _parity_rep(fam: CoherentFamilyFinite, z, p: PhaseLabelFinite):
    """Representation of P(alpha,beta)|f> at z."""
    vec = displaced_parity(fam.dim, p).entries @ fam.fiducial.state.g
    return torus_rep(FiniteState(fam.dim, vec, normalized=False), fam.theta_cfg).evaluate(z)


def coherent_fourier_relation_residual(
    fam: CoherentFamilyFinite, z: complex, p: PhaseLabelFinite
) -> float:
    """Residual of the 2D Fourier pairing between the family at z and at -z:

    D(z; gamma, delta; f) = (1/d) sum_{a,b} omega(-2^{-1} b gamma + 2^{-1} a delta)
                            D(-z; a, b; f).
    """
    dim = fam.dim
    p = p.reduced(dim)
    lhs = coherent_eval(fam, z, p)
    acc = 0j
    for q in fam.labels():
        acc += omega(-dim.inv2 * q.beta * p.alpha + dim.inv2 * q.alpha * p.beta, dim) * coherent_eval(
            fam, -z, q
        )
    return float(abs(lhs - acc / dim.d))


def parity_rep_fourier_residual(fam: CoherentFamilyFinite, z: complex, p: PhaseLabelFinite) -> float:
    """Residual of: parity-displaced representation as a 2D Fourier sum of the
    displacement-displaced ones (same z)."""
    dim = fam.dim
    p = p.reduced(dim)
    lhs = _parity_rep(fam, z, p)
    acc = 0j
    for q in fam.labels():
        acc += omega(q.beta * p.alpha - q.alpha * p.beta, dim) * coherent_eval(fam, z, q)
    return float(abs(lhs - acc / dim.d))


def parity_rep_reflection_residual(
    fam: CoherentFamilyFinite, z: complex, p: PhaseLabelFinite
) -> float:
    """Residual of: P-family member at z equals the D-family member at -z with
    doubled, negated labels."""
    dim = fam.dim
    p = p.reduced(dim)
    lhs = _parity_rep(fam, z, p)
    rhs = coherent_eval(fam, -z, PhaseLabelFinite(-2 * p.alpha, -2 * p.beta))
    return float(abs(lhs - rhs))


def kernel_points(dim: Dimension, a, b, theta_cfg: ThetaConfig = DEFAULT_THETA):
    """Two-slot kernel pi^{-1/2} sum_m Theta_3(u_m(a)) Theta_3(u_m(b)).

    Symmetric in its slots and invariant under negating both.
    """
    scale = np.sqrt(np.pi / (2.0 * dim.d))
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    shifts = np.pi * np.arange(dim.d) / dim.d
    sh = shifts.reshape((-1,) + (1,) * max(a.ndim, b.ndim))
    tha = theta3(sh - a[np.newaxis] * scale, 1j / dim.d, theta_cfg)
    thb = theta3(sh - b[np.newaxis] * scale, 1j / dim.d, theta_cfg)
    return np.pi**-0.5 * (tha * thb).sum(axis=0)


def kernel(dim: Dimension, z, w, theta_cfg: ThetaConfig = DEFAULT_THETA):
    """Reproducing kernel K(z, w*): second slot takes the conjugate of w."""
    return kernel_points(dim, z, np.conj(w), theta_cfg)


def kernel_from_family(fam: CoherentFamilyFinite, z: complex, w: complex) -> complex:
    """(1/d) sum_{a,b} D(z;a,b;f) [D(w;a,b;f)]*; fiducial independent."""
    acc = 0j
    for p in fam.labels():
        acc += coherent_eval(fam, z, p) * np.conj(coherent_eval(fam, w, p))
    return complex(acc / fam.dim.d)


def reproduce(
    G: TorusFunction, z, q: QuadratureSpec = QuadratureSpec(), theta_cfg: ThetaConfig | None = None
):
    """(d^{-3/2}/sqrt(2 pi)) int_S dmu(w) K(z, w*) G(w) -- returns G(z)."""
    dim = G.dim
    theta_cfg = theta_cfg or G.theta_cfg
    w_nodes, wt = cell_grid(dim, q)
    kz = kernel(dim, z, w_nodes, theta_cfg)
    val = (kz * G.evaluate(w_nodes) * wt).sum()
    return complex(val / (dim.d**1.5 * np.sqrt(2.0 * np.pi)))


def coherent_coeffs(g: FiniteState, f: FiducialFinite) -> np.ndarray:
    """Analysis coefficients g(alpha,beta;f) = <f|D(-alpha,-beta)|g>, a d x d table."""
    dim = g.dim
    out = np.empty((dim.d, dim.d), dtype=np.complex128)
    for a in range(dim.d):
        for b in range(dim.d):
            out[a, b] = np.vdot(f.state.g, displacement(dim, PhaseLabelFinite(-a, -b)).entries @ g.g)
    return out


def synthesize(fam: CoherentFamilyFinite, coeffs: np.ndarray, z):
    """(1/d) sum_{a,b} D(z; a,b; f) g(a,b;f) -- rebuilds G(z)."""
    acc = 0j
    for p in fam.labels():
        acc = acc + coherent_eval(fam, z, p) * coeffs[p.alpha, p.beta]
    return acc / fam.dim.d


def coherent_coeffs_by_quadrature(
    G: TorusFunction, fam: CoherentFamilyFinite, q: QuadratureSpec = QuadratureSpec()
) -> np.ndarray:
    """Quadrature analysis: g(a,b;f) = (d^{-3/2}/sqrt(2 pi)) int dmu(w) [D(w;a,b;f)]* G(w)."""
    dim = fam.dim
    w_nodes, wt = cell_grid(dim, q)
    Gw = G.evaluate(w_nodes) * wt
    out = np.empty((dim.d, dim.d), dtype=np.complex128)
    for p in fam.labels():
        out[p.alpha, p.beta] = (np.conj(coherent_eval(fam, w_nodes, p)) * Gw).sum()
    return out / (dim.d**1.5 * np.sqrt(2.0 * np.pi))


def parity_coeffs(g: FiniteState, f: FiducialFinite) -> np.ndarray:
    """Parity-family coefficients g~(gamma,delta;f) = <f|P(-2^{-1}gamma, -2^{-1}delta)|g>."""
    dim = g.dim
    out = np.empty((dim.d, dim.d), dtype=np.complex128)
    for ga in range(dim.d):
        for de in range(dim.d):
            P = displaced_parity(dim, PhaseLabelFinite(-dim.inv2 * ga, -dim.inv2 * de))
            out[ga, de] = np.vdot(f.state.g, P.entries @ g.g)
    return out


def synthesize_from_parity(fam: CoherentFamilyFinite, coeffs: np.ndarray, z):
    """(1/d) sum_{gamma,delta} D(-z; gamma,delta; f) g~(gamma,delta;f) -- rebuilds G(z)."""
    acc = 0j
    for p in fam.labels():
        acc = acc + coherent_eval(fam, -np.asarray(z, complex), p) * coeffs[p.alpha, p.beta]
    return acc / fam.dim.d


def parity_coeffs_by_quadrature(
    G: TorusFunction, fam: CoherentFamilyFinite, q: QuadratureSpec = QuadratureSpec()
) -> np.ndarray:
    """g~(gamma,delta;f) = (d^{-3/2}/sqrt(2 pi)) int dmu(w) [D(-w;gamma,delta;f)]* G(w)."""
    dim = fam.dim
    w_nodes, wt = cell_grid(dim, q)
    Gw = G.evaluate(w_nodes) * wt
    out = np.empty((dim.d, dim.d), dtype=np.complex128)
    for p in fam.labels():
        out[p.alpha, p.beta] = (np.conj(coherent_eval(fam, -w_nodes, p)) * Gw).sum()
    return out / (dim.d**1.5 * np.sqrt(2.0 * np.pi))


def parity_fourier_link_residual(dim: Dimension, coeffs: np.ndarray, pcoeffs: np.ndarray) -> float:
    """Max residual of the 2D Fourier map from displacement to parity coefficients:

    g~(gamma,delta) = (1/d) sum_{a,b} g(a,b) omega(2^{-1} b gamma - 2^{-1} a delta).
    """
    a = np.arange(dim.d)
    worst = 0.0
    for ga in range(dim.d):
        for de in range(dim.d):
            ph = omega(dim.inv2 * (a[np.newaxis, :] * ga - a[:, np.newaxis] * de), dim)
            val = (coeffs * ph).sum() / dim.d
            worst = max(worst, abs(val - pcoeffs[ga, de]))
    return worst


def marginals(fam: CoherentFamilyFinite, z, label: int, which: str):
    """Partial label averages of the coherent family.

    which="alpha_sum": (1/d) sum_a D(z; a, 2*beta; f), equal to
        pi^{-1/4} f_{-beta} Theta_3[pi*beta/d - z sqrt(pi/2d); i/d].
    which="beta_sum":  (1/d) sum_b D(z; 2*alpha, b; f), equal to
        pi^{-1/4} f~_{-alpha} exp(-z^2/2) Theta_3[pi*alpha/d - i z sqrt(pi/2d); i/d].
    """
    dim = fam.dim
    if which == "alpha_sum":
        acc = sum(coherent_eval(fam, z, PhaseLabelFinite(a, 2 * label)) for a in range(dim.d))
    elif which == "beta_sum":
        acc = sum(coherent_eval(fam, z, PhaseLabelFinite(2 * label, b)) for b in range(dim.d))
    else:
        raise ValueError(f"which must be 'alpha_sum' or 'beta_sum', got {which!r}")
    return acc / dim.d


def marginal_reference(fam: CoherentFamilyFinite, z, label: int, which: str):
    """Closed forms the marginals must equal."""
    dim = fam.dim
    scale = np.sqrt(np.pi / (2.0 * dim.d))
    z = np.asarray(z, dtype=np.complex128)
    if which == "alpha_sum":
        fm = fam.fiducial.state.g[(-label) % dim.d]
        return np.pi**-0.25 * fm * theta3(np.pi * label / dim.d - z * scale, 1j / dim.d, fam.theta_cfg)
    if which == "beta_sum":
        ft = momentum_coeffs(fam.fiducial.state).g[(-label) % dim.d]
        return (
            np.pi**-0.25
            * ft
            * np.exp(-(z**2) / 2.0)
            * theta3(np.pi * label / dim.d - 1j * z * scale, 1j / dim.d, fam.theta_cfg)
        )
    raise ValueError(f"which must be 'alpha_sum' or 'beta_sum', got {which!r}")


def fourier_fiducial_eval(fam: CoherentFamilyFinite, z, p: PhaseLabelFinite):
    """Representation of the displaced-Fourier orbit member F(alpha,beta)|f>."""
    vec = displaced_fourier(fam.dim, p).entries @ fam.fiducial.state.g
    return torus_rep(FiniteState(fam.dim, vec, normalized=False), fam.theta_cfg).evaluate(z)


def fourier_fiducial_residual(fam: CoherentFamilyFinite, z, p: PhaseLabelFinite) -> float:
    """Residual of the relation tying the F-fiducial family to the D-family:

    F[z; -2^{-1}(a-b), -2^{-1}(a+b); f]
        = omega(4^{-1}(a^2+b^2)) exp(-z^2/2) D(iz; a, b; f),
    with 4^{-1} = (2^{-1})^2 mod d.
    """
    dim = fam.dim
    inv4 = (dim.inv2 * dim.inv2) % dim.d
    a, b = p.alpha, p.beta
    lhs = fourier_fiducial_eval(
        fam, z, PhaseLabelFinite(-dim.inv2 * (a - b), -dim.inv2 * (a + b))
    )
    z = np.asarray(z, dtype=np.complex128)
    rhs = (
        omega(inv4 * (a * a + b * b), dim)
        * np.exp(-(z**2) / 2.0)
        * coherent_eval(fam, 1j * z, p)
    )
    return float(np.abs(lhs - rhs).max())


def overlap_formula_residual(
    f: FiducialFinite, p1: PhaseLabelFinite, p2: PhaseLabelFinite
) -> float:
    """Residual of the closed coefficient form of the coherent-state overlap:

    <f|D(-gamma,-delta) D(alpha,beta)|f> =
        omega(2^{-1}(alpha beta + gamma delta) - beta gamma)
        sum_n f*_{n+beta-delta} f_n omega((alpha-gamma) n).
    """
    dim = f.state.dim
    g_, de = p1.alpha, p1.beta
    al, be = p2.alpha, p2.beta
    lhs = np.vdot(
        f.state.g,
        displacement(dim, PhaseLabelFinite(-g_, -de)).entries
        @ displacement(dim, PhaseLabelFinite(al, be)).entries
        @ f.state.g,
    )
    n = np.arange(dim.d)
    rhs = omega(dim.inv2 * (al * be + g_ * de) - be * g_, dim) * np.sum(
        np.conj(f.state.g[(n + be - de) % dim.d]) * f.state.g * omega((al - g_) * n, dim)
    )
    return float(abs(lhs - rhs))
