"""Hot numeric kernels: truncated theta series over point batches.

Every quadrature, zero search and kernel evaluation in the package reduces
to summing ``exp(i*pi*tau*n^2 + 2i*n*u)`` (or its u-derivative) over a
symmetric index range for a batch of points ``u``.  The kernels below do
that with a multiplicative term recurrence, so each point costs two complex
exponentials total instead of two per term.

A numba ``@njit`` build is used when available; a pure-numpy path is kept
as a fallback and for cross-checking.  Selection: environment variable
``THETA_PHASE_NUMBA=0`` forces the numpy path (any other value, or an
importable numba, picks the JIT path).  ``benchmarks/bench_theta.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["theta3_sum", "theta3_du_sum", "BACKEND"]


def _theta3_sum_numpy(u: np.ndarray, tau: complex, n_max: int) -> np.ndarray:
    out = np.ones(u.shape, dtype=np.complex128)
    e2u = np.exp(2j * u)
    g = np.exp(2j * np.pi * tau)
    m = np.exp(1j * np.pi * tau)
    tp = np.ones_like(out)
    tm = np.ones_like(out)
    for _ in range(n_max):
        tp = tp * (m * e2u)
        tm = tm * (m / e2u)
        out += tp + tm
        m = m * g
    return out


def _theta3_du_sum_numpy(u: np.ndarray, tau: complex, n_max: int) -> np.ndarray:
    out = np.zeros(u.shape, dtype=np.complex128)
    e2u = np.exp(2j * u)
    g = np.exp(2j * np.pi * tau)
    m = np.exp(1j * np.pi * tau)
    tp = np.ones_like(out)
    tm = np.ones_like(out)
    for n in range(1, n_max + 1):
        tp = tp * (m * e2u)
        tm = tm * (m / e2u)
        out += 2j * n * (tp - tm)
        m = m * g
    return out


def _theta3_sum_loop(u, tau, n_max):  # pragma: no cover - jitted
    out = np.empty(u.shape[0], dtype=np.complex128)
    g = np.exp(2j * np.pi * tau)
    m0 = np.exp(1j * np.pi * tau)
    for j in range(u.shape[0]):
        e2u = np.exp(2j * u[j])
        acc = 1.0 + 0.0j
        tp = 1.0 + 0.0j
        tm = 1.0 + 0.0j
        m = m0
        for _ in range(n_max):
            tp = tp * m * e2u
            tm = tm * m / e2u
            acc += tp + tm
            m = m * g
        out[j] = acc
    return out


def _theta3_du_sum_loop(u, tau, n_max):  # pragma: no cover - jitted
    out = np.empty(u.shape[0], dtype=np.complex128)
    g = np.exp(2j * np.pi * tau)
    m0 = np.exp(1j * np.pi * tau)
    for j in range(u.shape[0]):
        e2u = np.exp(2j * u[j])
        acc = 0.0 + 0.0j
        tp = 1.0 + 0.0j
        tm = 1.0 + 0.0j
        m = m0
        for n in range(1, n_max + 1):
            tp = tp * m * e2u
            tm = tm * m / e2u
            acc += 2j * n * (tp - tm)
            m = m * g
        out[j] = acc
    return out


def _pick_backend():
    if os.environ.get("THETA_PHASE_NUMBA", "1") == "0":
        return "numpy", _theta3_sum_numpy, _theta3_du_sum_numpy
    try:
        import numba
    except ImportError:
        return "numpy", _theta3_sum_numpy, _theta3_du_sum_numpy
    jit = numba.njit("complex128[:](complex128[:], complex128, int64)", cache=True)
    sum_jit = jit(_theta3_sum_loop)
    du_jit = jit(_theta3_du_sum_loop)

    def sum_wrap(u, tau, n_max):
        flat = np.ascontiguousarray(u.ravel(), dtype=np.complex128)
        return sum_jit(flat, complex(tau), n_max).reshape(u.shape)

    def du_wrap(u, tau, n_max):
        flat = np.ascontiguousarray(u.ravel(), dtype=np.complex128)
        return du_jit(flat, complex(tau), n_max).reshape(u.shape)

    return "numba", sum_wrap, du_wrap


BACKEND, theta3_sum, theta3_du_sum = _pick_backend()
