"""Analytic representation of finite-system states on the torus cell.

A state with position amplitudes g_m is represented by the entire function

    G(z) = pi^{-1/4} sum_m g_m Theta_3[pi*m/d - z*sqrt(pi/2d); i/d]

which is periodic with period L = sqrt(2*pi*d) in Re(z) and quasi-periodic
in Im(z):  G(z + iL) = G(z) exp(pi*d - i*z*L).  The Gaussian-weighted
measure exp(-Im(z)^2) d^2 z makes scalar products, coefficient recovery and
the reproducing kernel exact identities; because weight times quasi-period
factor is exactly doubly periodic, the uniform midpoint rule on the cell
converges superalgebraically.

G has exactly d zeros per L x L cell, their sum fixed to
L(M + iN) + d^{3/2} sqrt(pi/2) (1+i) by the boundary conditions; d-1 zeros
therefore determine the state, and the state is rebuilt from its zeros via
a product of Theta_3 factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstraintViolation,
    DimensionMismatch,
    NonconvergedNewton,
    ZeroCountMismatch,
)
from .finite import Dimension, FiniteState, momentum_coeffs
from .theta import DEFAULT_THETA, ThetaConfig, theta3, theta3_du

__all__ = [
    "TorusFunction",
    "QuadratureSpec",
    "ZeroSet",
    "torus_rep",
    "scalar_product_analytic",
    "coefficients_from_torus",
    "find_zeros",
    "state_from_zeros",
    "cell_grid",
    "zero_sum_target",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform midpoint tensor grid over the cell [0,L)^2."""

    n_real: int = 96
    n_imag: int = 96

    def __post_init__(self) -> None:
        if self.n_real < 8 or self.n_imag < 8:
            raise ValueError("quadrature grids need at least 8 points per direction")


def cell_grid(dim: Dimension, spec: QuadratureSpec):
    """Midpoint nodes z and weights exp(-Im(z)^2) h_r h_i on the cell."""
    L = dim.cell_side
    hr = L / spec.n_real
    hi = L / spec.n_imag
    xr = (np.arange(spec.n_real) + 0.5) * hr
    xi = (np.arange(spec.n_imag) + 0.5) * hi
    ZR, ZI = np.meshgrid(xr, xi, indexing="ij")
    z = ZR + 1j * ZI
    w = np.exp(-(ZI**2)) * hr * hi
    return z, w


class TorusFunction:
    """Evaluatable analytic representation of a FiniteState on the cell."""

    def __init__(
        self,
        state: FiniteState,
        cell: tuple[int, int] = (0, 0),
        theta_cfg: ThetaConfig = DEFAULT_THETA,
    ) -> None:
        self.state = state
        self.dim = state.dim
        self.cell = cell
        self.theta_cfg = theta_cfg
        self._scale = np.sqrt(np.pi / (2.0 * self.dim.d))
        self._shifts = np.pi * np.arange(self.dim.d) / self.dim.d

    @property
    def side(self) -> float:
        return self.dim.cell_side

    def _args(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        return self._shifts.reshape((-1,) + (1,) * z.ndim) - z[np.newaxis] * self._scale

    def evaluate(self, z):
        th = theta3(self._args(z), 1j / self.dim.d, self.theta_cfg)
        g = self.state.g.reshape((-1,) + (1,) * (th.ndim - 1))
        return np.pi**-0.25 * (g * th).sum(axis=0)

    def evaluate_du(self, z):
        """dG/dz, by termwise differentiation of the theta series."""
        th = theta3_du(self._args(z), 1j / self.dim.d, self.theta_cfg)
        g = self.state.g.reshape((-1,) + (1,) * (th.ndim - 1))
        return -self._scale * np.pi**-0.25 * (g * th).sum(axis=0)

    __call__ = evaluate


def torus_rep(state: FiniteState, theta_cfg: ThetaConfig = DEFAULT_THETA) -> TorusFunction:
    """Analytic representation G(z) of a position-amplitude vector."""
    return TorusFunction(state, theta_cfg=theta_cfg)


def scalar_product_analytic(
    G1: TorusFunction, G2: TorusFunction, q: QuadratureSpec = QuadratureSpec()
) -> complex:
    """(d^{-3/2}/sqrt(2 pi)) int_S dmu(z) G1(z) G2(z*).

    Equals the bilinear coefficient sum sum_m g1_m g2_m (the bra carries
    the conjugated amplitudes, so no conjugation appears here).
    """
    if G1.dim.d != G2.dim.d:
        raise DimensionMismatch("representations of different dimension")
    z, w = cell_grid(G1.dim, q)
    val = (G1.evaluate(z) * G2.evaluate(np.conj(z)) * w).sum()
    return complex(val / (G1.dim.d**1.5 * np.sqrt(2.0 * np.pi)))


def _recover_coefficients(evaluate, dim: Dimension, theta_cfg: ThetaConfig, q: QuadratureSpec):
    z, w = cell_grid(dim, q)
    Gz = evaluate(np.conj(z)) * w
    scale = np.sqrt(np.pi / (2.0 * dim.d))
    args = (np.pi * np.arange(dim.d) / dim.d).reshape(-1, 1, 1) - z[np.newaxis] * scale
    th = theta3(args, 1j / dim.d, theta_cfg)
    return (th * Gz).sum(axis=(1, 2)) * (2**-0.5 * np.pi**-0.75 * dim.d**-1.5)


def coefficients_from_torus(
    G: TorusFunction, q: QuadratureSpec = QuadratureSpec(), momentum: bool = False
) -> FiniteState:
    """Recover the amplitudes g_m (or momentum coefficients) from G.

    g_m = 2^{-1/2} pi^{-3/4} d^{-3/2} int_S dmu(z)
          Theta_3[pi*m/d - z*sqrt(pi/2d); i/d] G(z*).
    """
    raw = _recover_coefficients(G.evaluate, G.dim, G.theta_cfg, q)
    out = FiniteState(G.dim, raw, normalized=False)
    if momentum:
        out = momentum_coeffs(out)
    return out


def zero_sum_target(dim: Dimension, cell: tuple[int, int] = (0, 0)) -> complex:
    """Fixed value of the sum of the d zeros in cell (M, N)."""
    L = dim.cell_side
    M, N = cell
    return L * (M + 1j * N) + dim.d**1.5 * np.sqrt(np.pi / 2.0) * (1 + 1j)


@dataclass
class ZeroSet:
    """The d zeros of a torus function in one (offset) cell window.

    ``cell`` holds the lattice labels (M, N) inferred from the zero sum;
    ``sum_residual`` is the deviation of sum(zeros) from the constrained
    value after that lattice accounting.
    """

    dim: Dimension
    zeros: np.ndarray
    sum_residual: complex
    newton_residuals: np.ndarray
    cell: tuple[int, int]
    window_offset: float = 0.0
    target: complex = field(default=0j)

    def __post_init__(self) -> None:
        if len(self.zeros) != self.dim.d:
            raise ZeroCountMismatch(
                f"zero set must hold exactly d={self.dim.d} zeros, got {len(self.zeros)}"
            )


def _box_boundary(x0: float, y0: float, w: float, h: float, k: int) -> np.ndarray:
    t = np.arange(k) / k
    bottom = (x0 + t * w) + 1j * y0
    right = (x0 + w) + 1j * (y0 + t * h)
    top = (x0 + w - t * w) + 1j * (y0 + h)
    left = x0 + 1j * (y0 + h - t * h)
    return np.concatenate([bottom, right, top, left])


def _winding(G: TorusFunction, box, k0: int = 64, k_cap: int = 8192):
    """Winding number of G around a box by adaptive boundary phase tracking.

    Doubles the per-edge sampling until the accumulated argument of G along
    the boundary is an integer multiple of 2 pi within 0.1 and no single
    step rotates the phase by more than pi/2.  Returns None if a boundary
    sample lands (numerically) on a zero.
    """
    x0, y0, w, h = box
    k = k0
    while True:
        pts = _box_boundary(x0, y0, w, h, k)
        vals = G.evaluate(pts)
        mags = np.abs(vals)
        if mags.min() < 1e-13 * max(mags.max(), 1e-300):
            return None
        dargs = np.angle(np.roll(vals, -1) / vals)
        wind = dargs.sum() / (2.0 * np.pi)
        if np.abs(dargs).max() < np.pi / 2 and abs(wind - round(wind)) < 0.1:
            return int(round(wind))
        k *= 2
        if k > k_cap:
            raise ZeroCountMismatch(
                f"winding estimate over box {box} did not stabilize at {k_cap} samples/edge"
            )


def _newton_refine(G: TorusFunction, z0: complex, tol: float, max_iter: int = 50) -> complex:
    z = z0
    for _ in range(max_iter):
        dz = complex(G.evaluate(z)) / complex(G.evaluate_du(z))
        z = z - dz
        if abs(dz) < tol:
            return z
    raise NonconvergedNewton(f"Newton refinement from {z0} did not converge")


def find_zeros(G: TorusFunction) -> ZeroSet:
    """Locate the d zeros in one cell by argument-principle subdivision.

    The search window is the cell shifted by a small irrational-flavored
    offset so that zeros of symmetric states do not land on subdivision
    boundaries.  Boxes with winding number >= 1 are quartered until a
    single zero is isolated, then polished by Newton iteration with the
    analytic derivative.
    """
    dim = G.dim
    L = dim.cell_side
    delta0 = 1e-3 * L * (1 + np.sqrt(2.0)) / 2.0
    newton_tol = 1e-12 * L

    def winding_robust(box):
        wind = _winding(G, box)
        if wind is None:
            # boundary grazed a zero: inflate the box slightly and retry
            x0, y0, w, h = box
            eps = 1e-4 * (1 + np.sqrt(3.0)) / 2.0
            wind = _winding(G, (x0 - eps * w, y0 - eps * h, w * (1 + 2 * eps), h * (1 + 2 * eps)))
            if wind is None:
                raise ZeroCountMismatch(f"zero sits on the boundary of box {box}")
        return wind

    root_box = (delta0, delta0, L, L)
    total = winding_robust(root_box)
    if total != dim.d:
        raise ZeroCountMismatch(
            f"cell winding gives {total} zeros, expected d={dim.d}"
        )

    zeros: list[complex] = []
    stack = [(root_box, total)]
    while stack:
        box, wind = stack.pop()
        if wind == 0:
            continue
        x0, y0, w, h = box
        if wind == 1 and max(w, h) <= L / 16:
            z0 = complex(x0 + w / 2, y0 + h / 2)
            try:
                z = _newton_refine(G, z0, newton_tol)
            except NonconvergedNewton:
                z = None
            if z is not None and abs(z - z0) <= 1.5 * max(w, h):
                zeros.append(z)
                continue
        if max(w, h) < 1e-9 * L:
            # unresolvably clustered zeros: refine once from the center and
            # record with multiplicity
            z = _newton_refine(G, complex(x0 + w / 2, y0 + h / 2), newton_tol, max_iter=200)
            zeros.extend([z] * wind)
            continue
        halves = [
            (x0, y0, w / 2, h / 2),
            (x0 + w / 2, y0, w / 2, h / 2),
            (x0, y0 + h / 2, w / 2, h / 2),
            (x0 + w / 2, y0 + h / 2, w / 2, h / 2),
        ]
        child_winds = [winding_robust(b) for b in halves]
        if sum(child_winds) != wind:
            raise ZeroCountMismatch(
                f"child windings {child_winds} do not sum to parent {wind} for box {box}"
            )
        stack.extend(zip(halves, child_winds))

    # fold into the offset window (Newton may step across the boundary)
    folded = [
        complex((z.real - delta0) % L + delta0, (z.imag - delta0) % L + delta0) for z in zeros
    ]
    if len(folded) != dim.d:
        raise ZeroCountMismatch(f"isolated {len(folded)} zeros, expected {dim.d}")
    folded.sort(key=lambda z: (z.imag, z.real))
    zs = np.array(folded)
    target = zero_sum_target(dim)
    s = zs.sum() - target
    M = int(np.round(s.real / L))
    N = int(np.round(s.imag / L))
    residual = complex(s - L * (M + 1j * N))
    return ZeroSet(
        dim=dim,
        zeros=zs,
        sum_residual=residual,
        newton_residuals=np.abs(G.evaluate(zs)),
        cell=(M, N),
        window_offset=delta0,
        target=complex(target + L * (M + 1j * N)),
    )


def state_from_zeros(
    zs: ZeroSet,
    cell_n: int | None = None,
    dim: Dimension | None = None,
    theta_cfg: ThetaConfig = DEFAULT_THETA,
    q: QuadratureSpec = QuadratureSpec(),
    constraint_tol: float = 1e-6,
) -> TorusFunction:
    """Rebuild the representation (and its state) from a zero set.

    G(z) = C exp(-i sqrt(2 pi/d) N z) prod_n Theta_3[w_n(z); i] with
    w_n(z) = sqrt(pi/2d)(z - zeta_n) + pi(1+i)/2.  |C| is fixed by
    normalization and arg(C) by making the largest recovered amplitude
    real positive.
    """
    dim = dim or zs.dim
    L = dim.cell_side
    target = zero_sum_target(dim)
    s = zs.zeros.sum() - target
    M = int(np.round(s.real / L))
    N_inferred = int(np.round(s.imag / L))
    residual = s - L * (M + 1j * N_inferred)
    if abs(residual) > constraint_tol:
        raise ConstraintViolation(
            f"zero-sum constraint violated: residual {abs(residual):.3e} "
            f"exceeds {constraint_tol:.1e}"
        )
    N = N_inferred if cell_n is None else cell_n
    scale = np.sqrt(np.pi / (2.0 * dim.d))
    shift = np.pi * (1 + 1j) / 2.0

    def product_form(z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.exp(-1j * np.sqrt(2.0 * np.pi / dim.d) * N * z)
        for zeta in zs.zeros:
            out = out * theta3(scale * (z - zeta) + shift, 1j, theta_cfg)
        return out

    raw = _recover_coefficients(product_form, dim, theta_cfg, q)
    g = raw / np.linalg.norm(raw)
    g = g * np.exp(-1j * np.angle(g[np.argmax(np.abs(g))]))
    return torus_rep(FiniteState(dim, g), theta_cfg=theta_cfg)
