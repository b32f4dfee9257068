"""Hilbert-space layer for Z(d): bases, Fourier, displacement and parity operators.

The dimension d is odd, so 2 is invertible mod d with 2^{-1} = (d+1)/2.
Operators are materialized as dense d x d matrices in the position basis;
at desk scale (d of order 100 at most) dense algebra makes every operator
identity a direct matrix check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError

__all__ = [
    "Dimension",
    "FiniteState",
    "FiniteOperator",
    "PhaseLabelFinite",
    "omega",
    "fourier_op",
    "clock_op",
    "shift_op",
    "displacement",
    "displaced_fourier",
    "displaced_parity",
    "momentum_coeffs",
    "position_state",
    "momentum_state",
    "random_state",
]

_UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class Dimension:
    """Odd Hilbert-space dimension with the precomputed inverse of 2 mod d."""

    d: int
    inv2: int = field(init=False)

    def __post_init__(self) -> None:
        if self.d % 2 == 0:
            raise ValueError(
                f"dimension must be odd (the formalism needs 2^-1 mod d); got d={self.d}"
            )
        if self.d < 3:
            raise ValueError(f"dimension must be >= 3, got d={self.d}")
        object.__setattr__(self, "inv2", (self.d + 1) // 2)

    @property
    def cell_side(self) -> float:
        """Side length L = sqrt(2*pi*d) of the torus cell."""
        return float(np.sqrt(2.0 * np.pi * self.d))


@dataclass(frozen=True)
class PhaseLabelFinite:
    """Phase-space point (alpha, beta) on the d x d toroidal lattice."""

    alpha: int
    beta: int

    def reduced(self, dim: Dimension) -> "PhaseLabelFinite":
        return PhaseLabelFinite(self.alpha % dim.d, self.beta % dim.d)


class FiniteState:
    """d complex amplitudes in the position basis.

    Construction normalizes unless ``normalized=False`` flags a raw vector.
    """

    def __init__(self, dim: Dimension, g, normalized: bool = True) -> None:
        g = np.asarray(g, dtype=np.complex128).copy()
        if g.shape != (dim.d,):
            raise DimensionMismatch(f"expected {dim.d} amplitudes, got shape {g.shape}")
        if normalized:
            nrm = np.linalg.norm(g)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            g = g / nrm
        self.dim = dim
        self.g = g
        self.normalized = normalized

    def __repr__(self) -> str:
        return f"FiniteState(d={self.dim.d}, normalized={self.normalized})"

    def norm(self) -> float:
        return float(np.linalg.norm(self.g))

    def overlap(self, other: "FiniteState") -> complex:
        """<self|other>."""
        if self.dim.d != other.dim.d:
            raise DimensionMismatch("states of different dimension")
        return complex(np.vdot(self.g, other.g))

    def to_json(self) -> str:
        return json.dumps([[float(c.real), float(c.imag)] for c in self.g])

    @classmethod
    def from_json(cls, text: str, dim: Dimension, normalized: bool = True) -> "FiniteState":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"state file is not valid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise ParseError("state file must be a JSON array of [re, im] pairs")
        try:
            g = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"state entries must be [re, im] pairs: {exc}") from exc
        return cls(dim, g, normalized=normalized)


class FiniteOperator:
    """Dense d x d operator in the position basis."""

    def __init__(self, dim: Dimension, entries, check_unitary: bool = False) -> None:
        entries = np.asarray(entries, dtype=np.complex128)
        if entries.shape != (dim.d, dim.d):
            raise DimensionMismatch(f"expected {dim.d}x{dim.d} matrix, got {entries.shape}")
        self.dim = dim
        self.entries = entries
        self.unitary = False
        if check_unitary:
            dev = np.abs(entries.conj().T @ entries - np.eye(dim.d)).max()
            if dev > _UNITARITY_TOL:
                raise ValueError(f"operator failed the unitarity check: deviation {dev:.3e}")
            self.unitary = True

    def __matmul__(self, other):
        if isinstance(other, FiniteOperator):
            return FiniteOperator(self.dim, self.entries @ other.entries)
        if isinstance(other, FiniteState):
            return FiniteState(self.dim, self.entries @ other.g, normalized=False)
        return NotImplemented

    def adjoint(self) -> "FiniteOperator":
        return FiniteOperator(self.dim, self.entries.conj().T)

    def apply(self, state: FiniteState) -> FiniteState:
        if state.dim.d != self.dim.d:
            raise DimensionMismatch("operator and state dimensions differ")
        return FiniteState(self.dim, self.entries @ state.g, normalized=False)


def omega(m, dim: Dimension):
    """Root-of-unity phase exp(i 2 pi m / d); m may be an integer array."""
    return np.exp(2j * np.pi * np.asarray(m) / dim.d)


def fourier_op(dim: Dimension) -> FiniteOperator:
    """Finite Fourier matrix F_mn = d^{-1/2} omega(mn); F^4 = 1."""
    m = np.arange(dim.d)
    return FiniteOperator(dim, omega(np.outer(m, m), dim) / np.sqrt(dim.d), check_unitary=True)


def clock_op(dim: Dimension) -> FiniteOperator:
    """Diagonal clock matrix Z|X;n> = omega(n)|X;n>."""
    return FiniteOperator(dim, np.diag(omega(np.arange(dim.d), dim)), check_unitary=True)


def shift_op(dim: Dimension) -> FiniteOperator:
    """Cyclic shift matrix X|X;n> = |X;n+1>."""
    d = dim.d
    X = np.zeros((d, d), dtype=np.complex128)
    X[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    return FiniteOperator(dim, X, check_unitary=True)


def displacement(dim: Dimension, p: PhaseLabelFinite) -> FiniteOperator:
    """Phase-space displacement D(alpha,beta) = Z^alpha X^beta omega(-2^{-1} alpha beta)."""
    d = dim.d
    p = p.reduced(dim)
    n = np.arange(d)
    entries = np.zeros((d, d), dtype=np.complex128)
    # Z^a X^b acts as |X;n> -> omega(a(n+b)) |X;n+b>
    entries[(n + p.beta) % d, n] = omega(p.alpha * (n + p.beta) - dim.inv2 * p.alpha * p.beta, dim)
    return FiniteOperator(dim, entries, check_unitary=True)


def displaced_fourier(dim: Dimension, p: PhaseLabelFinite) -> FiniteOperator:
    """F(alpha,beta) = D(alpha,beta) F D(-alpha,-beta)."""
    p = p.reduced(dim)
    D = displacement(dim, p)
    Dm = displacement(dim, PhaseLabelFinite(-p.alpha, -p.beta))
    return FiniteOperator(dim, D.entries @ fourier_op(dim).entries @ Dm.entries, check_unitary=True)


def displaced_parity(dim: Dimension, p: PhaseLabelFinite) -> FiniteOperator:
    """P(alpha,beta) = D(alpha,beta) F^2 D(-alpha,-beta); Hermitian and unitary."""
    p = p.reduced(dim)
    D = displacement(dim, p)
    Dm = displacement(dim, PhaseLabelFinite(-p.alpha, -p.beta))
    F = fourier_op(dim).entries
    return FiniteOperator(dim, D.entries @ F @ F @ Dm.entries, check_unitary=True)


def momentum_coeffs(state: FiniteState) -> FiniteState:
    """Momentum-basis coefficients g~_m = d^{-1/2} sum_n omega(-mn) g_n."""
    gt = np.fft.fft(state.g) / np.sqrt(state.dim.d)
    return FiniteState(state.dim, gt, normalized=False)


def position_state(dim: Dimension, m: int) -> FiniteState:
    g = np.zeros(dim.d, dtype=np.complex128)
    g[m % dim.d] = 1.0
    return FiniteState(dim, g)


def momentum_state(dim: Dimension, k: int) -> FiniteState:
    """|P;k> = F|X;k>, i.e. g_m = d^{-1/2} omega(k m)."""
    return FiniteState(dim, omega(k * np.arange(dim.d), dim) / np.sqrt(dim.d))


def random_state(dim: Dimension, rng: np.random.Generator) -> FiniteState:
    g = rng.normal(size=dim.d) + 1j * rng.normal(size=dim.d)
    return FiniteState(dim, g)
