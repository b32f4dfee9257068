"""Jacobi Theta_3 and its u-derivative for complex arguments.

Theta_3(u, tau) = sum_n exp(i*pi*tau*n^2 + 2i*n*u), convergent for
Im(tau) > 0.  Evaluation is by truncated summation with a rigorous tail
bound; arguments are first reduced by the exact period pi in Re(u), and
when Im(tau) is small the modular identity

    Theta_3(u, tau) = (-i*tau)^(-1/2) exp(u^2/(i*pi*tau)) Theta_3(u/tau, -1/tau)

is applied so the effective Im(tau) is large and the series is short.
All entry points accept scalar or array ``u`` (``tau`` is scalar).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import theta3_du_sum, theta3_sum
from .errors import NonconvergentTau, TruncationOverflow

__all__ = ["ThetaConfig", "theta3", "theta3_du", "jacobi_residual", "DEFAULT_THETA"]


@dataclass(frozen=True)
class ThetaConfig:
    """Evaluation policy: truncation tolerance, term cap, transform threshold.

    ``transform_threshold`` is the Im(tau) below which the modular identity
    is applied before summing.  Below 1.0 the direct series needs roughly
    sqrt(1/Im tau) terms; above it a handful suffice at eps = 1e-14.
    """

    eps: float = 1e-14
    max_terms: int = 10_000
    transform_threshold: float = 1.0

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")
        if not self.transform_threshold > 0:
            raise ValueError(
                f"transform_threshold must be positive, got {self.transform_threshold}"
            )


DEFAULT_THETA = ThetaConfig()


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise NonconvergentTau(f"theta series requires Im(tau) > 0, got tau={tau}")
    return tau


def _truncation_order(tau_im: float, u_im_max: float, cfg: ThetaConfig) -> int:
    # smallest n with pi*Im(tau)*n^2 - 2n*|Im u| > ln(2/eps) + ln(n+1):
    # the neglected tail is then geometrically dominated below eps.
    target = np.log(2.0 / cfg.eps)
    n = max(1, int((u_im_max + np.sqrt(u_im_max**2 + np.pi * tau_im * target)) / (np.pi * tau_im)))
    while np.pi * tau_im * n * n - 2.0 * n * u_im_max <= target + np.log(n + 1.0):
        n += 1
        if n > cfg.max_terms:
            break
    if n > cfg.max_terms:
        raise TruncationOverflow(
            f"theta series needs more than max_terms={cfg.max_terms} terms "
            f"(Im tau={tau_im:.3g}, max |Im u|={u_im_max:.3g})"
        )
    return n


def _reduce_re(u: np.ndarray) -> np.ndarray:
    # Theta_3 has exact period pi in u; centering Re(u) keeps the modular
    # prefactor exp(u^2/(i*pi*tau)) within double range.
    return u - np.pi * np.round(u.real / np.pi)


def _direct(u: np.ndarray, tau: complex, cfg: ThetaConfig, du: bool) -> np.ndarray:
    u_im = np.abs(u.imag).max() if u.size else 0.0
    n_max = _truncation_order(tau.imag, float(u_im), cfg)
    return (theta3_du_sum if du else theta3_sum)(u, tau, n_max)


def theta3(u, tau: complex, cfg: ThetaConfig = DEFAULT_THETA):
    """Theta_3(u, tau) with absolute tail below ``cfg.eps`` (relative for
    arguments where the value itself is exponentially large)."""
    tau = _check_tau(tau)
    u_arr = np.asarray(u, dtype=np.complex128)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(_reduce_re(u_arr))
    if tau.imag < cfg.transform_threshold:
        pref = (-1j * tau) ** -0.5 * np.exp(u_arr**2 / (1j * np.pi * tau))
        out = pref * _direct(u_arr / tau, -1.0 / tau, cfg, du=False)
    else:
        out = _direct(u_arr, tau, cfg, du=False)
    return out[0] if scalar else out.reshape(np.shape(u))


def theta3_du(u, tau: complex, cfg: ThetaConfig = DEFAULT_THETA):
    """d/du Theta_3(u, tau) = sum_n 2i*n exp(i*pi*tau*n^2 + 2i*n*u)."""
    tau = _check_tau(tau)
    u_arr = np.asarray(u, dtype=np.complex128)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(_reduce_re(u_arr))
    if tau.imag < cfg.transform_threshold:
        pref = (-1j * tau) ** -0.5 * np.exp(u_arr**2 / (1j * np.pi * tau))
        th = _direct(u_arr / tau, -1.0 / tau, cfg, du=False)
        th_du = _direct(u_arr / tau, -1.0 / tau, cfg, du=True)
        out = pref * (2.0 * u_arr / (1j * np.pi * tau) * th + th_du / tau)
    else:
        out = _direct(u_arr, tau, cfg, du=True)
    return out[0] if scalar else out.reshape(np.shape(u))


def jacobi_residual(u, tau: complex, cfg: ThetaConfig = DEFAULT_THETA):
    """Self-test of the modular identity, both sides summed directly.

    Returns |Theta_3(u,tau) - (-i*tau)^(-1/2) exp(u^2/(i*pi*tau))
    Theta_3(u/tau, -1/tau)| with no internal transform on either side.
    """
    tau = _check_tau(tau)
    u_arr = np.atleast_1d(np.asarray(u, dtype=np.complex128))
    scalar = np.ndim(u) == 0
    lhs = _direct(u_arr, tau, cfg, du=False)
    pref = (-1j * tau) ** -0.5 * np.exp(u_arr**2 / (1j * np.pi * tau))
    rhs = pref * _direct(_reduce_re(u_arr / tau), -1.0 / tau, cfg, du=False)
    out = np.abs(lhs - rhs)
    return float(out[0]) if scalar else out.reshape(np.shape(u))
