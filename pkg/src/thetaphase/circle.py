"""Hilbert-space layer for a particle on the circle: truncated momentum lattice.

States are truncated Fourier-coefficient vectors q_N, N in [-n_max, n_max].
Displacements D(a,K) act coefficientwise,
q'_M = q_{M-K} exp[-i a (M - K/2)], and are 2*pi-periodic in a up to the
sign cocycle (-1)^K (4*pi-periodic exactly).  Truncation is a property of
the state: an operation whose result spills past n_max truncates and
reports the lost norm.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, NonGenericFiducial, ParseError, TruncationLossWarning

__all__ = [
    "CircleState",
    "PhaseLabelCircle",
    "FiducialCircle",
    "CircleFiducialKind",
    "circle_displace",
    "circle_parity",
    "displaced_parity_circle",
    "coherent_overlap_circle",
    "resolution_identity_circle",
    "displacement_matrix",
    "displaced_parity_matrix",
    "momentum_circle_state",
    "gaussian_momenta_fiducial",
    "seeded_random_fiducial_circle",
    "stride_balanced_fiducial",
    "position_samples",
]

TWO_PI = 2.0 * np.pi


class CircleState:
    """Truncated momentum-Fourier coefficients of a wavefunction on the circle."""

    def __init__(
        self,
        n_max: int,
        q,
        normalized: bool = True,
        tail_tol: float = 1e-12,
        truncation_loss: float = 0.0,
    ) -> None:
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        q = np.asarray(q, dtype=np.complex128).copy()
        if q.shape != (2 * n_max + 1,):
            raise DimensionMismatch(
                f"expected {2 * n_max + 1} coefficients for n_max={n_max}, got {q.shape}"
            )
        if normalized:
            nrm = np.linalg.norm(q)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            q = q / nrm
        self.n_max = n_max
        self.q = q
        self.normalized = normalized
        self.tail_tol = tail_tol
        self.truncation_loss = truncation_loss

    def __repr__(self) -> str:
        return f"CircleState(n_max={self.n_max})"

    @property
    def n_range(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def coeff(self, N: int) -> complex:
        """q_N, zero outside the lattice."""
        if abs(N) > self.n_max:
            return 0j
        return complex(self.q[N + self.n_max])

    def norm(self) -> float:
        return float(np.linalg.norm(self.q))

    def overlap(self, other: "CircleState") -> complex:
        if other.n_max != self.n_max:
            raise DimensionMismatch("states with different n_max")
        return complex(np.vdot(self.q, other.q))

    def tail_mass(self) -> float:
        """|q_{+n_max}|^2 + |q_{-n_max}|^2, the edge-coefficient mass."""
        return float(abs(self.q[0]) ** 2 + abs(self.q[-1]) ** 2)

    def embedded(self, n_max: int) -> "CircleState":
        """The same state on a wider lattice (zero-padded)."""
        if n_max < self.n_max:
            raise ValueError(f"cannot embed n_max={self.n_max} into smaller {n_max}")
        pad = n_max - self.n_max
        q = np.pad(self.q, (pad, pad))
        return CircleState(
            n_max, q, normalized=False, tail_tol=self.tail_tol,
            truncation_loss=self.truncation_loss,
        )

    def wavefunction(self, x):
        """q(x) = sum_N q_N exp(i N x)."""
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, self.n_range)) @ self.q

    def to_json(self) -> str:
        return json.dumps(
            {"n_max": self.n_max, "q": [[float(c.real), float(c.imag)] for c in self.q]}
        )

    @classmethod
    def from_json(cls, text: str, normalized: bool = True) -> "CircleState":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"state file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or "n_max" not in data:
            raise ParseError("circle state JSON must be an object with an 'n_max' field")
        if "q" not in data:
            raise ParseError("circle state JSON must carry a 'q' field of [re, im] pairs")
        try:
            q = np.array([complex(re, im) for re, im in data["q"]], dtype=np.complex128)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"field 'q' must hold [re, im] pairs: {exc}") from exc
        return cls(int(data["n_max"]), q, normalized=normalized)


@dataclass(frozen=True)
class PhaseLabelCircle:
    """Phase-space point (a, K) on S x Z; a is stored reduced mod 4*pi."""

    a: float
    K: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", float(self.a) % (2 * TWO_PI))

    def canonical(self) -> tuple[float, int]:
        """(a mod 2*pi, sign) with the (-1)^K cocycle of the 2*pi reduction."""
        a = self.a % TWO_PI
        wraps = int(round((self.a - a) / TWO_PI))
        return a, (-1) ** (self.K * wraps)


class CircleFiducialKind(Enum):
    GAUSSIAN_MOMENTA = "gaussian_momenta"
    SEEDED_RANDOM = "seeded_random"
    USER = "user"


def _participation_ratio(q: np.ndarray) -> float:
    p = np.abs(q) ** 2
    p = p / p.sum()
    return float(1.0 / np.sum(p**2))


@dataclass(frozen=True)
class FiducialCircle:
    """Generic normalized fiducial: neither momentum-like nor position-delta-like."""

    state: CircleState
    kind: CircleFiducialKind = CircleFiducialKind.USER

    def __post_init__(self) -> None:
        pr = _participation_ratio(self.state.q)
        size = 2 * self.state.n_max + 1
        if pr <= 1.5:
            raise NonGenericFiducial(
                f"fiducial concentrates on a single momentum coefficient "
                f"(participation ratio {pr:.3f} <= 1.5)"
            )
        if pr >= 0.9 * size:
            raise NonGenericFiducial(
                f"fiducial is position-delta-like (participation ratio {pr:.3f} "
                f"of a possible {size})"
            )


def momentum_circle_state(n_max: int, N: int) -> CircleState:
    q = np.zeros(2 * n_max + 1, dtype=np.complex128)
    q[N + n_max] = 1.0
    return CircleState(n_max, q)


def gaussian_momenta_fiducial(n_max: int = 16) -> FiducialCircle:
    """r_N proportional to exp(-N^2/2): the natural weight of the strip picture."""
    N = np.arange(-n_max, n_max + 1)
    r = np.exp(-(N.astype(float) ** 2) / 2.0)
    return FiducialCircle(CircleState(n_max, r), CircleFiducialKind.GAUSSIAN_MOMENTA)


def seeded_random_fiducial_circle(
    n_max: int, seed: int, support: int | None = None
) -> FiducialCircle:
    """Random generic fiducial with Gaussian-tapered, optionally limited support."""
    rng = np.random.default_rng(seed)
    N = np.arange(-n_max, n_max + 1)
    for _ in range(64):
        q = (rng.normal(size=2 * n_max + 1) + 1j * rng.normal(size=2 * n_max + 1)) * np.exp(
            -(N.astype(float) ** 2) / 4.0
        )
        if support is not None:
            q[np.abs(N) > support] = 0.0
        try:
            return FiducialCircle(CircleState(n_max, q), CircleFiducialKind.SEEDED_RANDOM)
        except NonGenericFiducial:
            continue
    raise NonGenericFiducial(f"could not draw a generic circle fiducial from seed {seed}")


def stride_balanced_fiducial(n_max: int, stride: int = 2) -> FiducialCircle:
    """Fiducial whose coefficient mass splits equally over the stride sublattices.

    Each residue class sigma mod stride carries mass 1/stride, which upgrades
    the resolution of the identity to one per sublattice.
    """
    N = np.arange(-n_max, n_max + 1)
    r = np.exp(-(N.astype(float) ** 2) / 4.0)
    for sigma in range(stride):
        mask = np.mod(N, stride) == sigma
        r[mask] *= np.sqrt((1.0 / stride) / np.sum(r[mask] ** 2))
    return FiducialCircle(CircleState(n_max, r, normalized=False), CircleFiducialKind.USER)


def circle_displace(state: CircleState, p: PhaseLabelCircle) -> CircleState:
    """D(a,K): q'_M = q_{M-K} exp[-i a (M - K/2)] on the fixed lattice.

    Coefficients shifted past +-n_max are dropped; the dropped squared norm
    is recorded on the result and warned about when above ``tail_tol``.
    """
    n_max = state.n_max
    M = state.n_range
    out = np.zeros_like(state.q)
    src = M - p.K
    inside = np.abs(src) <= n_max
    out[inside] = state.q[src[inside] + n_max] * np.exp(-1j * p.a * (M[inside] - p.K / 2.0))
    lost = float(np.sum(np.abs(state.q) ** 2) - np.sum(np.abs(out) ** 2))
    lost = max(lost, 0.0)
    if lost > state.tail_tol:
        warnings.warn(
            TruncationLossWarning(
                f"displacement by K={p.K} dropped squared norm {lost:.3e} "
                f"past the n_max={n_max} lattice",
                lost,
            ),
            stacklevel=2,
        )
    return CircleState(
        n_max, out, normalized=False, tail_tol=state.tail_tol, truncation_loss=lost
    )


def circle_parity(state: CircleState) -> CircleState:
    """Parity: q'_M = q_{-M}; an involution."""
    return CircleState(
        state.n_max,
        state.q[::-1],
        normalized=False,
        tail_tol=state.tail_tol,
        truncation_loss=state.truncation_loss,
    )


def displaced_parity_circle(state: CircleState, p: PhaseLabelCircle) -> CircleState:
    """U(a,K) = D(a,K) U_0; squares to the identity on the untruncated lattice."""
    return circle_displace(circle_parity(state), p)


def position_samples(state: CircleState, n_x: int | None = None):
    """(x grid, q(x) values) on a uniform grid fine enough for exact trapezoids."""
    n_x = n_x or 4 * state.n_max + 9
    x = np.arange(n_x) * TWO_PI / n_x
    return x, state.wavefunction(x)


def coherent_overlap_circle(
    r: FiducialCircle,
    p1: PhaseLabelCircle,
    p2: PhaseLabelCircle,
    via: str = "coefficients",
) -> complex:
    """Overlap <b,M|a,K> of two coherent states, p1=(b,M), p2=(a,K).

    via="coefficients": <r|D(-b,-M) D(a,K)|r> contracted on the lattice.
    via="integral": the position-space form
        (1/2 pi) int r(x) r*(x+a-b) exp[i(K-M)x + i(K a/2 + M b/2 - M a)] dx
    on a uniform grid sized to the exact bandwidth.
    """
    b, M = p1.a, p1.K
    a, K = p2.a, p2.K
    if via == "coefficients":
        # widen the lattice so the intermediate displacement never clips
        wide = r.state.embedded(r.state.n_max + abs(K) + abs(M))
        moved = circle_displace(
            circle_displace(wide, PhaseLabelCircle(a, K)), PhaseLabelCircle(-b, -M)
        )
        return complex(np.vdot(wide.q, moved.q))
    if via != "integral":
        raise ValueError(f"via must be 'coefficients' or 'integral', got {via!r}")
    n_x = 4 * r.state.n_max + 2 * abs(K - M) + 9
    x = np.arange(n_x) * TWO_PI / n_x
    rx = r.state.wavefunction(x)
    rx_shift = r.state.wavefunction(x + a - b)
    phase = np.exp(1j * (K - M) * x) * np.exp(1j * (K * a / 2.0 + M * b / 2.0 - M * a))
    return complex(np.mean(rx * np.conj(rx_shift) * phase))


def displacement_matrix(n_max: int, a: float, K: int) -> np.ndarray:
    """Matrix of D(a,K) on the truncated lattice, columns indexed by N."""
    size = 2 * n_max + 1
    M = np.arange(-n_max, n_max + 1)
    out = np.zeros((size, size), dtype=np.complex128)
    src = M - K
    inside = np.abs(src) <= n_max
    out[M[inside] + n_max, src[inside] + n_max] = np.exp(-1j * a * (M[inside] - K / 2.0))
    return out


def displaced_parity_matrix(n_max: int, a: float, K: int) -> np.ndarray:
    size = 2 * n_max + 1
    return displacement_matrix(n_max, a, K) @ np.eye(size)[::-1]


def resolution_identity_circle(
    r: FiducialCircle,
    k_max: int,
    n_a: int,
    stride: int = 1,
    offset: int = 0,
) -> float:
    """Max matrix-element deviation of the coherent-state resolution of identity.

    Computes (stride/2 pi) sum_{|K| <= k_max, K = stride*j + offset}
    int_0^{2 pi} da |a,K><a,K| on the truncated momentum lattice, with the
    a-integral on an n_a-point uniform grid (exact for the trigonometric
    integrand once n_a exceeds the lattice bandwidth), and returns
    max_{M,N} |entry - delta_{MN}|.
    """
    state = r.state
    n_max = state.n_max
    if n_a <= 2 * n_max:
        raise ValueError(f"n_a={n_a} must exceed the lattice bandwidth {2 * n_max}")
    size = 2 * n_max + 1
    a = np.arange(n_a) * TWO_PI / n_a
    acc = np.zeros((size, size), dtype=np.complex128)
    Ns = state.n_range
    for K in range(-k_max, k_max + 1):
        if (K - offset) % stride != 0:
            continue
        src = Ns - K
        inside = np.abs(src) <= n_max
        if not inside.any():
            continue
        # V[j, M] = <M|D(a_j, K)|r>
        V = np.zeros((n_a, size), dtype=np.complex128)
        V[:, inside] = state.q[src[inside] + n_max] * np.exp(
            -1j * np.multiply.outer(a, Ns[inside] - K / 2.0)
        )
        acc += V.T @ V.conj()
    acc *= stride / n_a
    return float(np.abs(acc - np.eye(size)).max())
