"""Analytic representation of circle states on the strip [0, 2*pi) x R.

A state with momentum coefficients q_N is represented by

    Q(z) = 2*pi sum_N q_N exp(-N^2/2 + i N z),

the closed form of the theta-kernel transform of the wavefunction; Q is
exactly 2*pi-periodic in Re(z).  The Gaussian-weighted measure
dm(z) = exp(-Im z^2) d^2 z / (4 pi^{5/2}) makes scalar products and the
reproducing kernel exact.  Substituting w = exp(iz) turns Q into a Laurent
polynomial, so its zeros are companion-matrix eigenvalues; displacing the
state by (a, K) translates every zero by a - iK.
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
)
from .errors import DegenerateLeadingCoefficientWarning, TruncationLossWarning
from .theta import DEFAULT_THETA, ThetaConfig, theta3

__all__ = [
    "StripFunction",
    "StripQuadratureSpec",
    "StripZeroSet",
    "strip_rep",
    "strip_grid",
    "strip_scalar_product",
    "strip_invert",
    "strip_coherent_eval",
    "strip_coherent_eval_residual",
    "strip_coherent_fourier_residual",
    "strip_zeros",
    "kernel_c",
    "kernel_c_points",
    "kernel_c_quadrature",
    "kernel_c_from_family",
    "strip_reproduce",
    "StripCoherentExpansion",
    "strip_coherent_coeffs",
    "strip_marginals",
    "strip_marginal_reference",
]


@dataclass(frozen=True)
class StripQuadratureSpec:
    """Uniform grid on [0, 2*pi) x [-y_max, y_max]: periodic in x, trapezoid in y."""

    n_real: int = 128
    n_imag: int = 160

    def __post_init__(self) -> None:
        if self.n_real < 8 or self.n_imag < 8:
            raise ValueError("strip quadrature grids need at least 8 points per direction")

    def validate_for(self, n_max: int, y_max: float) -> None:
        if self.n_real < 4 * n_max + 2:
            raise ValueError(
                f"n_real={self.n_real} below the exact-trapezoid bound {4 * n_max + 2} "
                f"for n_max={n_max}"
            )
        if self.n_imag < int(2.5 * 2 * y_max):
            raise ValueError(
                f"n_imag={self.n_imag} too coarse for y_max={y_max:.1f}; "
                f"need at least {int(2.5 * 2 * y_max)}"
            )


class StripFunction:
    """Evaluatable analytic representation of a CircleState on the strip."""

    def __init__(self, state: CircleState, theta_cfg: ThetaConfig = DEFAULT_THETA) -> None:
        self.state = state
        self.n_max = state.n_max
        self.theta_cfg = theta_cfg
        self.y_max = float(state.n_max + 6)
        # exp(N z_I - N^2/2) against the measure exp(-z_I^2) leaves mass
        # below e^{-36} of peak at |z_I| = y_max
        self._coeffs = TWO_PI * state.q * np.exp(-(state.n_range.astype(float) ** 2) / 2.0)

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        n = self.state.n_range
        return np.exp(1j * np.multiply.outer(z, n)) @ self._coeffs

    __call__ = evaluate

    def evaluate_via_integral(self, z, n_x: int | None = None):
        """Direct transform of the wavefunction against the strip theta kernel;
        retained as a cross-check of the closed form."""
        n_x = n_x or 8 * self.n_max + 33
        x = np.arange(n_x) * TWO_PI / n_x
        qx = self.state.wavefunction(x)
        z = np.asarray(z, dtype=np.complex128)
        th = theta3((x - z[..., np.newaxis]) / 2.0, 1j / TWO_PI, self.theta_cfg)
        return (TWO_PI / n_x) * (qx * th).sum(axis=-1)


def strip_rep(state: CircleState, theta_cfg: ThetaConfig = DEFAULT_THETA) -> StripFunction:
    return StripFunction(state, theta_cfg)


def strip_grid(n_max: int, y_max: float, sq: StripQuadratureSpec):
    """Nodes z and measure weights exp(-z_I^2) hx hy / (4 pi^{5/2})."""
    sq.validate_for(n_max, y_max)
    x = np.arange(sq.n_real) * TWO_PI / sq.n_real
    y = np.linspace(-y_max, y_max, sq.n_imag)
    hx = TWO_PI / sq.n_real
    hy = y[1] - y[0]
    ZR, ZI = np.meshgrid(x, y, indexing="ij")
    w = np.exp(-(ZI**2)) * hx * hy / (4.0 * np.pi**2.5)
    w[:, 0] *= 0.5
    w[:, -1] *= 0.5
    return ZR + 1j * ZI, w


def strip_scalar_product(
    Q1: StripFunction, Q2: StripFunction, sq: StripQuadratureSpec = StripQuadratureSpec()
) -> complex:
    """<q2|q1> = (1/2 pi) int_A dm(z) Q1(z) [Q2(z)]* = sum_N q1_N q2*_N."""
    if Q1.n_max != Q2.n_max:
        big = max(Q1.n_max, Q2.n_max)
        Q1 = strip_rep(Q1.state.embedded(big), Q1.theta_cfg)
        Q2 = strip_rep(Q2.state.embedded(big), Q2.theta_cfg)
    z, w = strip_grid(Q1.n_max, Q1.y_max, sq)
    val = (Q1.evaluate(z) * np.conj(Q2.evaluate(z)) * w).sum()
    return complex(val / TWO_PI)


def strip_invert(
    Q: StripFunction, x: float, sq: StripQuadratureSpec = StripQuadratureSpec()
) -> complex:
    """Recover the wavefunction: q(x) = int_A dm(z) Q(z) Theta_3[(x-z*)/2; i/2 pi]."""
    z, w = strip_grid(Q.n_max, Q.y_max, sq)
    th = theta3((x - np.conj(z)) / 2.0, 1j / TWO_PI, Q.theta_cfg)
    return complex((Q.evaluate(z) * w * th).sum())


def strip_coherent_eval(
    r: FiducialCircle,
    z,
    p: PhaseLabelCircle,
    method: str = "shift",
    theta_cfg: ThetaConfig = DEFAULT_THETA,
):
    """Representation of the coherent state D(a,K)|r> at z.

    method="displace": strip representation of the displaced coefficients
    (subject to lattice truncation).  method="shift": the closed form
    exp(-i K a/2 + i K z - K^2/2) R(z + iK - a).
    """
    if method == "displace":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationLossWarning)
            moved = circle_displace(r.state, p)
        return strip_rep(moved, theta_cfg).evaluate(z)
    if method != "shift":
        raise ValueError(f"unknown method {method!r}")
    z = np.asarray(z, dtype=np.complex128)
    return _shift_form(r.state, z, p.a, p.K)


def _shift_form(state: CircleState, z: np.ndarray, a, K: int):
    """exp(-i K a/2 + i K z - K^2/2) R(z + iK - a), with the Gaussian factors
    combined per term so that large |K| never over- or underflows."""
    N = state.n_range
    M = (N + K).astype(float)
    expo = (
        -(M**2) / 2.0
        + 1j * np.multiply.outer(z, M)
        - 1j * np.multiply.outer(np.asarray(a, dtype=float), N + K / 2.0)
    )
    return TWO_PI * (np.exp(expo) @ state.q)


def strip_coherent_eval_residual(r: FiducialCircle, z, p: PhaseLabelCircle) -> float:
    a = strip_coherent_eval(r, z, p, method="displace")
    b = strip_coherent_eval(r, z, p, method="shift")
    return float(np.abs(a - b).max())


def strip_coherent_fourier_residual(
    r: FiducialCircle, z: complex, p: PhaseLabelCircle, k_max: int, n_b: int
) -> float:
    """Residual of the 2D Fourier pairing on the strip:

    d(-z; a, K; r) = (1/2 pi) sum_M int db d(z; b, 2M-K; r)
                     exp[(i/2)(-bK - aK + 2Ma)].
    """
    a, K = p.a, p.K
    lhs = strip_coherent_eval(r, -z, p)
    b = np.arange(n_b) * TWO_PI / n_b
    acc = 0j
    for M in range(-k_max, k_max + 1):
        vals = strip_coherent_eval_batch(r, z, b, 2 * M - K)
        acc += np.sum(vals * np.exp(0.5j * (-b * K - a * K + 2 * M * a))) / n_b
    return float(abs(lhs - acc))


def strip_coherent_eval_batch(r: FiducialCircle, z: complex, a_values: np.ndarray, K: int):
    """Shift-form coherent evaluation vectorized over the displacement a."""
    return _shift_form(r.state, np.asarray(complex(z)), np.asarray(a_values, dtype=float), K)


@dataclass
class StripZeroSet:
    """Zeros of a strip function, from the Laurent-polynomial substitution w=e^{iz}."""

    zeros: np.ndarray
    q_residuals: np.ndarray
    backward_errors: np.ndarray
    degree: int
    n_low: int
    n_high: int


def _horner(coeffs: np.ndarray, w: complex) -> tuple[complex, complex]:
    """(p(w), p'(w)) for monomial coefficients ordered low -> high degree."""
    p = 0j
    dp = 0j
    for c in coeffs[::-1]:
        dp = dp * w + p
        p = p * w + c
    return p, dp


def _polish_root(coeffs: np.ndarray, w: complex, steps: int = 40) -> complex:
    # roots outside the unit circle are polished on the reversed polynomial
    # so Horner never overflows
    rev = np.abs(w) > 1.0
    cs = coeffs[::-1] if rev else coeffs
    v = 1.0 / w if rev else w
    for _ in range(steps):
        p, dp = _horner(cs, v)
        if dp == 0:
            break
        dv = p / dp
        v = v - dv
        if abs(dv) < 1e-14 * max(1.0, abs(v)):
            break
    return 1.0 / v if rev else v


def strip_zeros(Q: StripFunction) -> StripZeroSet:
    """All zeros of Q in the strip, real parts folded into [0, 2*pi).

    Q/(2 pi) = sum_N q_N e^{-N^2/2} w^N with w = e^{iz} is a Laurent
    polynomial; its roots come from the companion matrix of the monomial
    rescaling, Newton-polished, and mapped back by z = -i log w.  Roots at
    |w| < 1e-12 or > 1e12 are compactification artifacts (z_I -> -+ inf)
    and are discarded.
    """
    n = Q.n_max
    c = Q._coeffs / TWO_PI
    idx = np.nonzero(np.abs(c) > 0)[0]
    if idx.size == 0:
        raise ValueError("zero function has no zeros to find")
    lo, hi = idx[0], idx[-1]
    if lo != 0 or hi != len(c) - 1:
        warnings.warn(
            DegenerateLeadingCoefficientWarning(
                f"leading Laurent coefficients vanish; effective order reduced to "
                f"[{lo - n}, {hi - n}] from [{-n}, {n}]"
            ),
            stacklevel=2,
        )
    cs = c[lo : hi + 1]
    if cs.size == 1:
        return StripZeroSet(
            zeros=np.empty(0, complex),
            q_residuals=np.empty(0, float),
            backward_errors=np.empty(0, float),
            degree=0,
            n_low=int(lo - n),
            n_high=int(hi - n),
        )
    roots = np.roots(cs[::-1])
    roots = roots[(np.abs(roots) > 1e-12) & (np.abs(roots) < 1e12)]
    roots = np.array([_polish_root(cs, w) for w in roots])
    z = np.angle(roots) % TWO_PI - 1j * np.log(np.abs(roots))
    order = np.lexsort((z.real, z.imag))
    z = z[order]
    roots = roots[order]
    backward = np.empty(len(roots))
    for j, w in enumerate(roots):
        mags = np.abs(cs) * np.abs(w) ** np.arange(len(cs))
        p, _ = _horner(cs, w)
        backward[j] = abs(p) / mags.sum()
    return StripZeroSet(
        zeros=z,
        q_residuals=np.abs(Q.evaluate(z)),
        backward_errors=backward,
        degree=len(roots),
        n_low=int(lo - n),
        n_high=int(hi - n),
    )


def kernel_c_points(a, b, theta_cfg: ThetaConfig = DEFAULT_THETA):
    """int dx Theta_3[(x-a)/2; i/2 pi] Theta_3[(x-b)/2; i/2 pi], in closed form
    2 pi Theta_3[(b-a)/2; i/pi]; symmetric and invariant under negating both."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return TWO_PI * theta3((b - a) / 2.0, 1j / np.pi, theta_cfg)


def kernel_c(z, w, theta_cfg: ThetaConfig = DEFAULT_THETA):
    """Reproducing kernel K_c(z, w*): second slot takes the conjugate of w."""
    return kernel_c_points(z, np.conj(np.asarray(w, dtype=np.complex128)), theta_cfg)


def kernel_c_quadrature(
    z: complex, wstar: complex, n_x: int = 512, theta_cfg: ThetaConfig = DEFAULT_THETA
) -> complex:
    """Trapezoid evaluation of the kernel's defining x-integral (cross-check)."""
    x = np.arange(n_x) * TWO_PI / n_x
    vals = theta3((x - z) / 2.0, 1j / TWO_PI, theta_cfg) * theta3(
        (x - wstar) / 2.0, 1j / TWO_PI, theta_cfg
    )
    return complex((TWO_PI / n_x) * vals.sum())


def kernel_c_from_family(
    r: FiducialCircle, z: complex, w: complex, k_max: int, n_a: int
) -> complex:
    """(1/4 pi^2) sum_K int da d(z;a,K;r) [d(w;a,K;r)]*; fiducial independent."""
    a = np.arange(n_a) * TWO_PI / n_a
    acc = 0j
    for K in range(-k_max, k_max + 1):
        dz = strip_coherent_eval_batch(r, z, a, K)
        dw = strip_coherent_eval_batch(r, w, a, K)
        acc += np.sum(dz * np.conj(dw)) * (TWO_PI / n_a)
    return complex(acc / (4.0 * np.pi**2))


def strip_reproduce(
    Q: StripFunction, z, sq: StripQuadratureSpec = StripQuadratureSpec()
) -> complex:
    """int_A dm(w) K_c(z, w*) Q(w) -- returns Q(z)."""
    nodes, wt = strip_grid(Q.n_max, Q.y_max, sq)
    vals = Q.evaluate(nodes) * wt
    return complex((kernel_c(z, nodes, Q.theta_cfg) * vals).sum())


class StripCoherentExpansion:
    """Expansion of a circle state over the coherent family of a fiducial.

    Exposes the displacement-coefficient family q(a,K;r) = <r|D(-a,-K)|q>,
    the parity family q~(b,M;r) = <r|U(-b,-M)|q>, their syntheses of Q(z),
    their quadrature inverses, and the half-integer Fourier link between
    the two families.
    """

    def __init__(
        self,
        state: CircleState,
        fiducial: FiducialCircle,
        n_a: int = 64,
        k_max: int | None = None,
        theta_cfg: ThetaConfig = DEFAULT_THETA,
    ) -> None:
        self.state = state
        self.fiducial = fiducial
        self.n_a = n_a
        self.k_max = k_max if k_max is not None else 2 * max(state.n_max, fiducial.state.n_max) + 8
        self.theta_cfg = theta_cfg
        self.a_grid = np.arange(n_a) * TWO_PI / n_a

    def coeff(self, a, K: int):
        """q(a,K;r) = <r|D(-a,-K)|q> = e^{i a K/2} sum_N r*_N q_{N+K} e^{i a N}."""
        r = self.fiducial.state
        q = self.state
        a = np.asarray(a, dtype=float)
        acc = np.zeros(a.shape, dtype=np.complex128)
        for N in r.n_range:
            qc = q.coeff(N + K)
            if qc != 0:
                acc += np.conj(r.coeff(N)) * qc * np.exp(1j * a * N)
        return acc * np.exp(0.5j * a * K)

    def parity_coeff(self, b, M: int):
        """q~(b,M;r) = <r|U(-b,-M)|q> = e^{i b M/2} sum_N r*_N q_{-N-M} e^{i b N}."""
        r = self.fiducial.state
        q = self.state
        b = np.asarray(b, dtype=float)
        acc = np.zeros(b.shape, dtype=np.complex128)
        for N in r.n_range:
            qc = q.coeff(-N - M)
            if qc != 0:
                acc += np.conj(r.coeff(N)) * qc * np.exp(1j * b * N)
        return acc * np.exp(0.5j * b * M)

    def synthesize(self, z: complex) -> complex:
        """(1/2 pi) sum_K int da d(z;a,K;r) q(a,K;r) -- rebuilds Q(z)."""
        acc = 0j
        for K in range(-self.k_max, self.k_max + 1):
            dv = strip_coherent_eval_batch(self.fiducial, z, self.a_grid, K)
            acc += np.sum(dv * self.coeff(self.a_grid, K)) / self.n_a
        return complex(acc)

    def synthesize_parity(self, z: complex) -> complex:
        """(1/2 pi) sum_M int db d(-z;b,M;r) q~(b,M;r) -- rebuilds Q(z)."""
        acc = 0j
        for M in range(-self.k_max, self.k_max + 1):
            dv = strip_coherent_eval_batch(self.fiducial, -z, self.a_grid, M)
            acc += np.sum(dv * self.parity_coeff(self.a_grid, M)) / self.n_a
        return complex(acc)

    def coeff_by_quadrature(
        self, a: float, K: int, sq: StripQuadratureSpec = StripQuadratureSpec()
    ) -> complex:
        """q(a,K;r) = (1/2 pi) int_A dm(w) [d(w;a,K;r)]* Q(w)."""
        Q = strip_rep(self.state, self.theta_cfg)
        nodes, wt = strip_grid(Q.n_max, Q.y_max, sq)
        dvals = strip_coherent_eval(self.fiducial, nodes, PhaseLabelCircle(a, K))
        return complex((np.conj(dvals) * Q.evaluate(nodes) * wt).sum() / TWO_PI)

    def parity_coeff_by_quadrature(
        self, b: float, M: int, sq: StripQuadratureSpec = StripQuadratureSpec()
    ) -> complex:
        """q~(b,M;r) = (1/2 pi) int_A dm(w) [d(-w;b,M;r)]* Q(w)."""
        Q = strip_rep(self.state, self.theta_cfg)
        nodes, wt = strip_grid(Q.n_max, Q.y_max, sq)
        dvals = strip_coherent_eval(self.fiducial, -nodes, PhaseLabelCircle(b, M))
        return complex((np.conj(dvals) * Q.evaluate(nodes) * wt).sum() / TWO_PI)

    def parity_link_residual(self, b: float, M: int) -> float:
        """Residual of
        q~(b,M;r) = (1/2 pi) sum_K int da q(-a, M-2K; r) exp[(i/2)(-aM - bM + 2Kb)].
        """
        lhs = complex(self.parity_coeff(np.array(b), M))
        acc = 0j
        bound = self.state.n_max + self.fiducial.state.n_max
        for K in range(-self.k_max, self.k_max + 1):
            if abs(M - 2 * K) > bound:
                continue
            vals = self.coeff(-self.a_grid, M - 2 * K)
            acc += np.sum(vals * np.exp(0.5j * (-self.a_grid * M - b * M + 2 * K * b))) / self.n_a
        return abs(lhs - acc)

    def cocycle_residual(self, a: float, K: int) -> float:
        """|q(a + 2 pi, K) - (-1)^K q(a, K)|."""
        lhs = complex(self.coeff(np.array(a + TWO_PI), K))
        rhs = (-1) ** K * complex(self.coeff(np.array(a), K))
        return abs(lhs - rhs)


def strip_coherent_coeffs(
    state: CircleState, r: FiducialCircle, n_a: int, k_max: int
) -> StripCoherentExpansion:
    """Coherent expansion of a state sampled on the (a, K) lattice."""
    return StripCoherentExpansion(state, r, n_a=n_a, k_max=k_max)


def strip_marginals(
    r: FiducialCircle,
    z: complex,
    which: str,
    label,
    k_max: int | None = None,
    n_a: int = 128,
):
    """Partial phase-space reductions of the strip coherent family.

    which="sum_over_K" (label = a):  sum_K d(z;a,K;r), equal to
        2 pi r(-a/2) Theta_3[(a-2z)/4; i/2 pi].
    which="integral_over_a" (label = K):  int da d(z;a,-2K;r), equal to
        4 pi^2 r_K exp(-izK - K^2/2).
    """
    n_max = r.state.n_max
    k_max = k_max if k_max is not None else 2 * n_max + 8
    if which == "sum_over_K":
        a = float(label)
        acc = 0j
        for K in range(-k_max, k_max + 1):
            acc += complex(
                strip_coherent_eval(r, np.asarray(z, complex), PhaseLabelCircle(a, K))
            )
        return acc
    if which == "integral_over_a":
        K = int(label)
        a = np.arange(n_a) * TWO_PI / n_a
        vals = strip_coherent_eval_batch(r, complex(z), a, -2 * K)
        return complex(vals.sum() * (TWO_PI / n_a))
    raise ValueError(f"which must be 'sum_over_K' or 'integral_over_a', got {which!r}")


def strip_marginal_reference(
    r: FiducialCircle, z: complex, which: str, label, theta_cfg: ThetaConfig = DEFAULT_THETA
):
    """Closed forms the marginals must reproduce."""
    if which == "sum_over_K":
        a = float(label)
        rx = complex(r.state.wavefunction(np.array(-a / 2.0)))
        return TWO_PI * rx * complex(theta3((a - 2 * z) / 4.0, 1j / TWO_PI, theta_cfg))
    if which == "integral_over_a":
        K = int(label)
        return 4.0 * np.pi**2 * r.state.coeff(K) * np.exp(-1j * z * K - K**2 / 2.0)
    raise ValueError(f"which must be 'sum_over_K' or 'integral_over_a', got {which!r}")
