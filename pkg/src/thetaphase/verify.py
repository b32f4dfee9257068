"""Residual suites for every identity the package implements, plus reporting.

Each suite measures one family of identities as a numeric residual and
compares it to a tolerance.  Random inputs are drawn from per-suite
generators derived from a single seed, so a report is a deterministic
function of (config, seed); per-suite runtimes are measured but kept out
of the canonical serialization so reruns are byte-identical.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import circle as ci
from . import coherent as co
from . import phasespace as ps
from . import strip as st
from . import torus as to
from .errors import ConfigError
from .finite import (
    Dimension,
    PhaseLabelFinite,
    displacement,
    fourier_op,
    momentum_coeffs,
    momentum_state,
    omega,
    random_state,
)
from .theta import ThetaConfig, jacobi_residual, theta3, theta3_du

__all__ = ["RunConfig", "SuiteResult", "VerifyReport", "run_verify", "REGISTRY", "ALL_OPS"]


DEFAULT_TOLERANCES: dict[str, float] = {
    "theta.periodicity": 1e-13,
    "theta.quasiperiodicity": 1e-13,
    "theta.evenness": 1e-13,
    "theta.transform": 1e-11,
    "theta.derivative": 1e-7,
    "finite.clock-shift": 1e-11,
    "finite.displaced-fourier": 1e-11,
    "finite.parity-sum": 1e-11,
    "finite.displacement-complete": 1e-11,
    "finite.momentum-basis": 1e-12,
    "torus.orthogonality": 1e-7,
    "torus.scalar-product": 1e-7,
    "torus.coefficients": 1e-7,
    "torus.zero-count": 0.5,
    "torus.zero-sum": 1e-6,
    "torus.reconstruction": 1e-7,
    "coherent.fourier-pair": 1e-8,
    "coherent.shift-form": 1e-8,
    "coherent.zero-lattice": 1e-6,
    "coherent.kernel-resolution": 1e-8,
    "coherent.kernel-symmetry": 1e-10,
    "coherent.kernel-independence": 1e-8,
    "coherent.reproduce": 1e-6,
    "coherent.expansion": 1e-6,
    "coherent.marginals": 1e-8,
    "coherent.fourier-fiducial": 1e-8,
    "circle.displacement-group": 1e-8,
    "circle.cocycle": 1e-8,
    "circle.overlap": 1e-9,
    "circle.parity-average": 1e-9,
    "circle.parity-fourier": 1e-8,
    "circle.resolution": 1e-8,
    "circle.resolution-stride": 1e-8,
    "strip.fourier-pair": 1e-7,
    "strip.shift-form": 1e-9,
    "strip.zero-displacement": 1e-8,
    "strip.kernel-closed": 1e-9,
    "strip.kernel-resolution": 1e-7,
    "strip.reproduce": 1e-6,
    "strip.scalar-product": 1e-7,
    "strip.inversion": 1e-7,
    "strip.expansion": 1e-6,
    "strip.marginals": 1e-8,
    "phasespace.weyl-finite": 1e-10,
    "phasespace.wigner-finite": 1e-9,
    "phasespace.wigner-link": 1e-11,
    "phasespace.weyl-circle": 1e-6,
    "phasespace.wigner-circle": 1e-5,
    "phasespace.circle-link": 1e-6,
}


@dataclass(frozen=True)
class RunConfig:
    """Inputs that determine a verification run (and therefore its report)."""

    seed: int = 2026
    d_values: tuple[int, ...] = (3, 5, 7)
    zeros_d_values: tuple[int, ...] = (3, 5)
    zeros_states: int = 4
    n_max: int = 8
    k_max: int = 24
    n_a: int = 64
    quad: to.QuadratureSpec = field(default_factory=to.QuadratureSpec)
    strip_quad: st.StripQuadratureSpec = field(default_factory=st.StripQuadratureSpec)
    theta: ThetaConfig = field(default_factory=ThetaConfig)
    tolerances: dict[str, float] = field(default_factory=dict)
    output_format: str = "json"

    def __post_init__(self) -> None:
        for name, tol in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance key {name!r}")
            if not tol >= 0:
                raise ConfigError(f"tolerance {name!r} must be >= 0, got {tol}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"output_format must be 'json' or 'csv', got {self.output_format!r}")
        if self.zeros_states < 1:
            raise ConfigError("zeros_states must be >= 1")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


@dataclass
class SuiteResult:
    name: str
    check: str
    identity: str
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float = 0.0


@dataclass
class VerifyReport:
    seed: int
    entries: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> str:
        """Canonical serialization: excludes runtimes so reruns are byte-identical."""
        payload = {
            "seed": self.seed,
            "passed": self.passed,
            "entries": [
                {
                    "name": e.name,
                    "check": e.check,
                    "identity": e.identity,
                    "residual": float(e.residual),
                    "tolerance": float(e.tolerance),
                    "passed": e.passed,
                }
                for e in self.entries
            ],
        }
        return json.dumps(payload, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["name,check,identity,residual,tolerance,passed"]
        for e in self.entries:
            ident = e.identity.replace('"', "'")
            lines.append(
                f'{e.name},{e.check},"{ident}",{e.residual:.17g},{e.tolerance:.17g},{e.passed}'
            )
        return "\n".join(lines) + "\n"

    def summary_lines(self) -> list[str]:
        out = []
        for e in self.entries:
            mark = "pass" if e.passed else "FAIL"
            out.append(
                f"[{mark}] {e.name:<34} residual {e.residual:11.3e}  "
                f"tol {e.tolerance:9.1e}  {e.runtime_ms:8.1f} ms"
            )
        out.append(f"overall: {'pass' if self.passed else 'FAIL'} ({len(self.entries)} checks)")
        return out


def _rng(cfg: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _entry(cfg: RunConfig, name: str, check: str, identity: str, residual: float, t0: float,
           tol: float | None = None) -> SuiteResult:
    tol = cfg.tol(name) if tol is None else tol
    residual = float(residual)
    return SuiteResult(
        name=name,
        check=check,
        identity=identity,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
    )


# ---------------------------------------------------------------------------
# theta layer


def suite_theta(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 1)
    out = []
    taus = [1j / d for d in range(3, 33, 2)] + [1j, 2j]
    us = (rng.uniform(-3, 3, size=24) + 1j * rng.uniform(-3, 3, size=24)).reshape(-1)

    t0 = time.perf_counter()
    worst = 0.0
    for tau in taus:
        a = theta3(us, tau, cfg.theta)
        scale = np.maximum(np.abs(a), 1.0)
        worst = max(worst, (np.abs(theta3(us + np.pi, tau, cfg.theta) - a) / scale).max())
    out.append(_entry(cfg, "theta.periodicity", "theta",
                      "Theta_3(u + pi) = Theta_3(u)", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for tau in taus:
        a = theta3(us + np.pi * tau, tau, cfg.theta)
        b = np.exp(-1j * np.pi * tau - 2j * us) * theta3(us, tau, cfg.theta)
        scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)
        worst = max(worst, (np.abs(a - b) / scale).max())
    out.append(_entry(cfg, "theta.quasiperiodicity", "theta",
                      "Theta_3(u + pi tau) = exp(-i pi tau - 2iu) Theta_3(u)", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for tau in taus:
        a = theta3(us, tau, cfg.theta)
        scale = np.maximum(np.abs(a), 1.0)
        worst = max(worst, (np.abs(theta3(-us, tau, cfg.theta) - a) / scale).max())
    out.append(_entry(cfg, "theta.evenness", "theta",
                      "Theta_3(-u) = Theta_3(u)", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for tau in taus:
        direct = theta3(us, tau, replace(cfg.theta, transform_threshold=1e-30))
        # a cancelling sum is accurate relative to its largest term, not its
        # value: terms reach exp((Im u)^2 / (pi Im tau)) on this domain
        peak = np.exp(np.minimum(us.imag**2 / (np.pi * tau.imag), 700.0))
        scale = np.maximum(np.maximum(np.abs(direct), 1.0), peak)
        worst = max(worst, (np.abs(theta3(us, tau, cfg.theta) - direct) / scale).max())
        worst = max(worst, float(np.max(jacobi_residual(us, tau, cfg.theta) / scale)))
    out.append(_entry(cfg, "theta.transform", "theta",
                      "modular transform tau -> -1/tau agrees with direct summation",
                      worst, t0))

    t0 = time.perf_counter()
    h = 1e-6
    worst = 0.0
    for tau in (1j, 1j / 3):
        for u in (0.3, 0.3 + 0.2j):
            fd = (theta3(u + h, tau, cfg.theta) - theta3(u - h, tau, cfg.theta)) / (2 * h)
            worst = max(worst, abs(theta3_du(u, tau, cfg.theta) - fd) / abs(fd))
    out.append(_entry(cfg, "theta.derivative", "theta",
                      "termwise u-derivative matches central finite differences", worst, t0))
    return out


suite_theta.check = "theta"
suite_theta.ops = ("theta3", "theta3_du", "jacobi_residual")


# ---------------------------------------------------------------------------
# finite operator algebra


def suite_finite_ops(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 2)
    out = []

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        from .finite import clock_op, shift_op

        Z, X = clock_op(dim).entries, shift_op(dim).entries
        worst = max(worst, np.abs(np.linalg.matrix_power(X, d) - np.eye(d)).max())
        worst = max(worst, np.abs(np.linalg.matrix_power(Z, d) - np.eye(d)).max())
        for a, b in [(1, 2), (2, 1), (d - 1, d - 2)]:
            lhs = np.linalg.matrix_power(X, b) @ np.linalg.matrix_power(Z, a)
            rhs = np.linalg.matrix_power(Z, a) @ np.linalg.matrix_power(X, b) * omega(-a * b, dim)
            worst = max(worst, np.abs(lhs - rhs).max())
    out.append(_entry(cfg, "finite.clock-shift", "finite-op",
                      "clock/shift order d and braiding phase", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        F = fourier_op(dim).entries
        for a, b in [(1, 1), (2, 4 % d)]:
            from .finite import displaced_fourier

            lhs = displaced_fourier(dim, PhaseLabelFinite(a, b)).entries
            ph = omega(dim.inv2 * (a * a + b * b), dim)
            alt1 = ph * F @ displacement(dim, PhaseLabelFinite(-a - b, a - b)).entries
            alt2 = ph * displacement(dim, PhaseLabelFinite(a - b, a + b)).entries @ F
            worst = max(worst, np.abs(lhs - alt1).max(), np.abs(lhs - alt2).max())
    out.append(_entry(cfg, "finite.displaced-fourier", "finite-op",
                      "displaced Fourier operator product forms", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        from .finite import displaced_parity

        for g_, de in [(1, 2), (0, 0)]:
            P = displaced_parity(dim, PhaseLabelFinite(g_, de)).entries
            S = sum(
                omega(b * g_ - a * de, dim) * displacement(dim, PhaseLabelFinite(a, b)).entries
                for a in range(d)
                for b in range(d)
            ) / d
            worst = max(worst, np.abs(P - S).max())
            worst = max(worst, np.abs(P - P.conj().T).max())
            worst = max(worst, np.abs(P @ P - np.eye(d)).max())
    out.append(_entry(cfg, "finite.parity-sum", "finite-op",
                      "displaced parity as phased displacement average; Hermitian, involutive",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        f = random_state(dim, rng)
        acc = np.zeros((d, d), dtype=np.complex128)
        for a in range(d):
            for b in range(d):
                v = displacement(dim, PhaseLabelFinite(a, b)).entries @ f.g
                acc += np.outer(v, v.conj())
        worst = max(worst, np.abs(acc / d - np.eye(d)).max())
    out.append(_entry(cfg, "finite.displacement-complete", "finite-op",
                      "displaced fiducial projectors resolve the identity", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        g = random_state(dim, rng)
        gt = momentum_coeffs(g)
        worst = max(worst, abs(np.sum(np.abs(gt.g) ** 2) - 1.0))
        four = momentum_coeffs(momentum_coeffs(momentum_coeffs(gt)))
        worst = max(worst, np.abs(four.g - g.g).max())
    out.append(_entry(cfg, "finite.momentum-basis", "finite-op",
                      "momentum transform is unitary with fourth power one", worst, t0))
    return out


suite_finite_ops.check = "finite-op"
suite_finite_ops.ops = ("omega", "fourier_op", "displacement", "displaced_fourier",
                        "displaced_parity", "momentum_coeffs")


# ---------------------------------------------------------------------------
# torus representation


def suite_torus(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 3)
    out = []

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        z, w = to.cell_grid(dim, cfg.quad)
        scale = np.sqrt(np.pi / (2.0 * d))
        shifts = np.pi * np.arange(d) / d
        th = theta3(shifts.reshape(-1, 1, 1) - z[np.newaxis] * scale, 1j / d, cfg.theta)
        thc = theta3(shifts.reshape(-1, 1, 1) - np.conj(z)[np.newaxis] * scale, 1j / d, cfg.theta)
        gram = np.einsum("nij,mij,ij->nm", th, thc, w) * (2**-0.5 * np.pi**-1.0 * d**-1.5)
        worst = max(worst, np.abs(gram - np.eye(d)).max())
    out.append(_entry(cfg, "torus.orthogonality", "torus",
                      "theta-kernel Gram matrix on the cell is the identity", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        g1, g2 = random_state(dim, rng), random_state(dim, rng)
        sp = to.scalar_product_analytic(
            to.torus_rep(g1, cfg.theta), to.torus_rep(g2, cfg.theta), cfg.quad
        )
        worst = max(worst, abs(sp - np.sum(g1.g * g2.g)))
    out.append(_entry(cfg, "torus.scalar-product", "torus",
                      "cell integral reproduces the bilinear coefficient sum", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for d in cfg.d_values:
        dim = Dimension(d)
        g = random_state(dim, rng)
        rec = to.coefficients_from_torus(to.torus_rep(g, cfg.theta), cfg.quad)
        worst = max(worst, np.abs(rec.g - g.g).max())
        recm = to.coefficients_from_torus(to.torus_rep(g, cfg.theta), cfg.quad, momentum=True)
        worst = max(worst, np.abs(recm.g - momentum_coeffs(g).g).max())
    out.append(_entry(cfg, "torus.coefficients", "torus",
                      "cell integrals recover position and momentum coefficients", worst, t0))
    return out


suite_torus.check = "torus"
suite_torus.ops = ("torus_rep", "scalar_product_analytic", "coefficients_from_torus")


def suite_zeros(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 4)
    out = []
    count_bad = 0
    worst_sum = 0.0
    worst_fid = 0.0
    t0 = time.perf_counter()
    for d in cfg.zeros_d_values:
        dim = Dimension(d)
        states = [random_state(dim, rng) for _ in range(cfg.zeros_states)]
        states.append(momentum_state(dim, 1))
        for g in states:
            G = to.torus_rep(g, cfg.theta)
            zs = to.find_zeros(G)
            if len(zs.zeros) != d:
                count_bad += 1
                continue
            worst_sum = max(worst_sum, abs(zs.sum_residual))
            rec = to.state_from_zeros(zs, q=cfg.quad, theta_cfg=cfg.theta)
            worst_fid = max(worst_fid, 1.0 - abs(np.vdot(rec.state.g, g.g)))
    t_all = t0
    out.append(_entry(cfg, "torus.zero-count", "zeros",
                      "subdivision isolates exactly d zeros per cell", float(count_bad), t_all))
    out.append(_entry(cfg, "torus.zero-sum", "zeros",
                      "zero sum matches the lattice-constrained value", worst_sum, t_all))
    out.append(_entry(cfg, "torus.reconstruction", "zeros",
                      "state rebuilt from its zeros matches the original (1 - fidelity)",
                      worst_fid, t_all))
    return out


suite_zeros.check = "zeros"
suite_zeros.ops = ("find_zeros", "state_from_zeros")


# ---------------------------------------------------------------------------
# finite coherent states


def _fiducials(cfg: RunConfig, dim: Dimension) -> list[co.FiducialFinite]:
    return [
        co.discrete_gaussian_fiducial(dim),
        co.seeded_random_fiducial(dim, cfg.seed + 17 * dim.d),
    ]


def suite_coherent(cfg: RunConfig, fiducial_factory=None) -> list[SuiteResult]:
    rng = _rng(cfg, 5)
    out = []
    dims = [Dimension(d) for d in cfg.zeros_d_values]
    make_fiducials = fiducial_factory or (lambda dim: _fiducials(cfg, dim))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        for f in make_fiducials(dim):
            fam = co.CoherentFamilyFinite(f, cfg.theta)
            for _ in range(3):
                z = complex(rng.uniform(-1, 2), rng.uniform(-1, 2))
                p = PhaseLabelFinite(int(rng.integers(dim.d)), int(rng.integers(dim.d)))
                worst = max(worst, co.coherent_fourier_relation_residual(fam, z, p))
                worst = max(worst, co.parity_rep_fourier_residual(fam, z, p))
                worst = max(worst, co.parity_rep_reflection_residual(fam, z, p))
    out.append(_entry(cfg, "coherent.fourier-pair", "13c",
                      "coherent family closes under the 2D Fourier transform", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        for f in make_fiducials(dim):
            fam = co.CoherentFamilyFinite(f, cfg.theta)
            zsamp = rng.uniform(-1, 2, size=4) + 1j * rng.uniform(-1, 2, size=4)
            for p in fam.labels():
                worst = max(worst, float(np.abs(
                    co.coherent_eval(fam, zsamp, p, "matrix")
                    - co.coherent_eval(fam, zsamp, p, "shift")).max()))
    out.append(_entry(cfg, "coherent.shift-form", "13c",
                      "displaced representation equals the shifted fiducial form", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        f = co.discrete_gaussian_fiducial(dim)
        fam = co.CoherentFamilyFinite(f, cfg.theta)
        zs0 = to.find_zeros(fam._rep)
        s = np.sqrt(2.0 * np.pi / dim.d)
        L = dim.cell_side
        for p in [PhaseLabelFinite(1, 2), PhaseLabelFinite(2, 0)]:
            moved = to.find_zeros(fam.member_rep(p))
            expected = zs0.zeros - 1j * p.alpha * s + p.beta * s
            for e in expected:
                diffs = moved.zeros - e
                diffs = diffs - L * np.round(diffs.real / L) - 1j * L * np.round(diffs.imag / L)
                worst = max(worst, float(np.abs(diffs).min()))
    out.append(_entry(cfg, "coherent.zero-lattice", "13c",
                      "zeros of displaced states sit on the displaced zero lattice", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        for f in make_fiducials(dim):
            fam = co.CoherentFamilyFinite(f, cfg.theta)
            for _ in range(2):
                z = complex(rng.uniform(-1, 2), rng.uniform(-1, 2))
                w = complex(rng.uniform(-1, 2), rng.uniform(-1, 2))
                k1 = co.kernel_from_family(fam, z, w)
                worst = max(worst, abs(k1 - co.kernel(dim, z, w, cfg.theta)))
    out.append(_entry(cfg, "coherent.kernel-resolution", "21",
                      "family outer products resolve into the reproducing kernel", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        pts = rng.uniform(-2, 2, size=(6, 2)) @ np.array([[1, 0], [0, 1j]])
        for z, w in zip(pts[:3, 0] + pts[:3, 1], pts[3:, 0] + pts[3:, 1]):
            k = co.kernel_points(dim, z, w, cfg.theta)
            worst = max(worst, abs(k - co.kernel_points(dim, w, z, cfg.theta)))
            worst = max(worst, abs(k - co.kernel_points(dim, -z, -w, cfg.theta)))
    out.append(_entry(cfg, "coherent.kernel-symmetry", "21",
                      "kernel is slot-symmetric and even under joint negation", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        fids = list(make_fiducials(dim))
        if len(fids) < 2:
            fids.append(co.seeded_random_fiducial(dim, cfg.seed + 29 * dim.d))
        fam1 = co.CoherentFamilyFinite(fids[0], cfg.theta)
        fam2 = co.CoherentFamilyFinite(fids[1], cfg.theta)
        z, w = 0.4 + 0.3j, -0.2 + 0.6j
        worst = max(worst, abs(co.kernel_from_family(fam1, z, w) - co.kernel_from_family(fam2, z, w)))
    out.append(_entry(cfg, "coherent.kernel-independence", "21",
                      "kernel does not depend on the fiducial", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        g = random_state(dim, rng)
        G = to.torus_rep(g, cfg.theta)
        for _ in range(3):
            z = complex(rng.uniform(0, 2), rng.uniform(-1, 1))
            worst = max(worst, abs(co.reproduce(G, z, cfg.quad) - G.evaluate(z)))
    out.append(_entry(cfg, "coherent.reproduce", "23",
                      "kernel integral reproduces any representation value", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        g = random_state(dim, rng)
        G = to.torus_rep(g, cfg.theta)
        for f in make_fiducials(dim):
            fam = co.CoherentFamilyFinite(f, cfg.theta)
            cc = co.coherent_coeffs(g, f)
            pc = co.parity_coeffs(g, f)
            for _ in range(2):
                z = complex(rng.uniform(0, 2), rng.uniform(-1, 1))
                worst = max(worst, abs(co.synthesize(fam, cc, z) - G.evaluate(z)))
                worst = max(worst, abs(co.synthesize_from_parity(fam, pc, z) - G.evaluate(z)))
            worst = max(worst, np.abs(co.coherent_coeffs_by_quadrature(G, fam, cfg.quad) - cc).max())
            worst = max(worst, np.abs(co.parity_coeffs_by_quadrature(G, fam, cfg.quad) - pc).max())
            worst = max(worst, co.parity_fourier_link_residual(dim, cc, pc))
    out.append(_entry(cfg, "coherent.expansion", "23",
                      "coherent analysis/synthesis and its parity-family twin invert", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        for f in make_fiducials(dim):
            fam = co.CoherentFamilyFinite(f, cfg.theta)
            for label in range(dim.d):
                z = complex(rng.uniform(0, 2), rng.uniform(-0.5, 0.5))
                for which in ("alpha_sum", "beta_sum"):
                    worst = max(worst, abs(
                        co.marginals(fam, z, label, which)
                        - co.marginal_reference(fam, z, label, which)))
    out.append(_entry(cfg, "coherent.marginals", "marg",
                      "partial label averages collapse to single-coefficient forms", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        fam = co.CoherentFamilyFinite(co.discrete_gaussian_fiducial(dim), cfg.theta)
        z = complex(rng.uniform(0, 1), rng.uniform(-0.5, 0.5))
        for p in fam.labels():
            worst = max(worst, co.fourier_fiducial_residual(fam, z, p))
    out.append(_entry(cfg, "coherent.fourier-fiducial", "123",
                      "Fourier-conjugated fiducial family reindexes the same coherent set",
                      worst, t0))
    return out


suite_coherent.check = "13c"
suite_coherent.ops = ("coherent_eval", "coherent_fourier_relation_residual", "kernel",
                      "reproduce", "coherent_coeffs", "parity_coeffs", "marginals",
                      "fourier_fiducial_eval")


# ---------------------------------------------------------------------------
# circle layer


def suite_circle(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 6)
    out = []
    n_max = cfg.n_max
    q = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 1, support=n_max // 2).state
    r = ci.gaussian_momenta_fiducial(n_max)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(4):
        a, b = rng.uniform(0, 2 * np.pi, size=2)
        K, M = int(rng.integers(-2, 3)), int(rng.integers(-2, 3))
        lhs = ci.circle_displace(ci.circle_displace(q, ci.PhaseLabelCircle(b, M)),
                                 ci.PhaseLabelCircle(a, K))
        rhs = ci.circle_displace(q, ci.PhaseLabelCircle(a + b, K + M))
        worst = max(worst, float(np.abs(lhs.q - rhs.q * np.exp(0.5j * (K * b - M * a))).max()))
    dag = ci.displacement_matrix(n_max, 0.7, 2)
    worst = max(worst, float(np.abs(dag.conj().T - ci.displacement_matrix(n_max, -0.7, -2)).max()))
    out.append(_entry(cfg, "circle.displacement-group", "pa2",
                      "displacement composition law and adjoint", worst, t0))

    t0 = time.perf_counter()
    a = float(rng.uniform(0, 2 * np.pi))
    l1 = ci.circle_displace(q, ci.PhaseLabelCircle(a + 2 * np.pi, 3))
    l2 = ci.circle_displace(q, ci.PhaseLabelCircle(a, 3))
    worst = float(np.abs(l1.q + l2.q).max())
    U = ci.displaced_parity_circle(ci.displaced_parity_circle(q, ci.PhaseLabelCircle(1.2, 3)),
                                   ci.PhaseLabelCircle(1.2, 3))
    worst = max(worst, float(np.abs(U.q - q.q).max()))
    out.append(_entry(cfg, "circle.cocycle", "pa100",
                      "2 pi shift of the displacement flips sign for odd momentum; "
                      "displaced parity squares to one", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        p1 = ci.PhaseLabelCircle(float(rng.uniform(0, 2 * np.pi)), int(rng.integers(-3, 4)))
        p2 = ci.PhaseLabelCircle(float(rng.uniform(0, 2 * np.pi)), int(rng.integers(-3, 4)))
        o1 = ci.coherent_overlap_circle(r, p1, p2)
        o2 = ci.coherent_overlap_circle(r, p1, p2, via="integral")
        worst = max(worst, abs(o1 - o2))
    out.append(_entry(cfg, "circle.overlap", "pa2",
                      "coefficient and position-integral overlap paths agree", worst, t0))

    t0 = time.perf_counter()
    size = 2 * n_max + 1
    U0 = np.eye(size)[::-1]
    acc = np.zeros((size, size), dtype=np.complex128)
    agrid = np.arange(cfg.n_a) * 2 * np.pi / cfg.n_a
    for K in range(-cfg.k_max, cfg.k_max + 1):
        for aa in agrid:
            acc += ci.displacement_matrix(n_max, aa, 2 * K)
    worst = float(np.abs(acc / cfg.n_a - U0).max())
    out.append(_entry(cfg, "circle.parity-average", "u0",
                      "parity equals the even-momentum displacement average", worst, t0))

    t0 = time.perf_counter()
    K0, a0 = 1, float(rng.uniform(0, 2 * np.pi))
    acc = np.zeros((size, size), dtype=np.complex128)
    for M in range(-cfg.k_max, cfg.k_max + 1):
        for bb in agrid:
            acc += ci.displacement_matrix(n_max, bb, K0 + 2 * M) * np.exp(
                0.5j * (K0 * bb - a0 * K0 - 2 * M * a0))
    worst = float(np.abs(acc / cfg.n_a - ci.displaced_parity_matrix(n_max, a0, K0)).max())
    out.append(_entry(cfg, "circle.parity-fourier", "fou",
                      "displaced parity is the Fourier transform of displacements", worst, t0))

    t0 = time.perf_counter()
    worst = ci.resolution_identity_circle(r, cfg.k_max, cfg.n_a)
    r2 = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 2)
    worst = max(worst, ci.resolution_identity_circle(r2, cfg.k_max, cfg.n_a))
    out.append(_entry(cfg, "circle.resolution", "pa12",
                      "coherent states resolve the identity", worst, t0))

    t0 = time.perf_counter()
    rs = ci.stride_balanced_fiducial(n_max, 2)
    worst = max(
        ci.resolution_identity_circle(rs, 2 * cfg.k_max, cfg.n_a, stride=2, offset=0),
        ci.resolution_identity_circle(rs, 2 * cfg.k_max, cfg.n_a, stride=2, offset=1),
    )
    out.append(_entry(cfg, "circle.resolution-stride", "pa12",
                      "stride-balanced fiducials resolve the identity per sublattice",
                      worst, t0))
    return out


suite_circle.check = "pa12"
suite_circle.ops = ("circle_displace", "circle_parity", "displaced_parity_circle",
                    "coherent_overlap_circle", "resolution_identity_circle")


# ---------------------------------------------------------------------------
# strip layer


def suite_strip(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 7)
    out = []
    n_max = cfg.n_max
    r = ci.gaussian_momenta_fiducial(n_max)
    r2 = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 3)
    q = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 4).state
    Q = st.strip_rep(q, cfg.theta)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-2, 2))
        p = ci.PhaseLabelCircle(float(rng.uniform(0, 2 * np.pi)), int(rng.integers(-2, 3)))
        worst = max(worst, st.strip_coherent_fourier_residual(r, z, p, cfg.k_max,
                                                              2 * cfg.n_a))
    out.append(_entry(cfg, "strip.fourier-pair", "pa1",
                      "strip coherent family closes under the 2D Fourier transform", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    rsup = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 5, support=n_max - 3)
    for _ in range(4):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        p = ci.PhaseLabelCircle(float(rng.uniform(0, 2 * np.pi)), int(rng.integers(-3, 4)))
        worst = max(worst, st.strip_coherent_eval_residual(rsup, z, p))
        c1 = st.strip_coherent_eval(rsup, z, ci.PhaseLabelCircle(p.a + 2 * np.pi, 3))
        c2 = st.strip_coherent_eval(rsup, z, ci.PhaseLabelCircle(p.a, 3))
        worst = max(worst, abs(complex(c1) + complex(c2)))
    out.append(_entry(cfg, "strip.shift-form", "pa3",
                      "displaced representation equals the shifted fiducial form "
                      "with its sign cocycle", worst, t0))

    t0 = time.perf_counter()
    import warnings as _warnings

    from .errors import DegenerateLeadingCoefficientWarning
    with _warnings.catch_warnings():
        # the support-limited fiducial has vanishing edge coefficients by design
        _warnings.simplefilter("ignore", DegenerateLeadingCoefficientWarning)
        zs0 = st.strip_zeros(st.strip_rep(rsup.state, cfg.theta))
        p = ci.PhaseLabelCircle(0.9, 2)
        moved = ci.circle_displace(rsup.state, p)
        zs1 = st.strip_zeros(st.strip_rep(moved, cfg.theta))
    expected = zs0.zeros - 1j * p.K + p.a
    expected = np.mod(expected.real, 2 * np.pi) + 1j * expected.imag
    worst = float(np.abs(np.sort_complex(expected) - np.sort_complex(zs1.zeros)).max())
    out.append(_entry(cfg, "strip.zero-displacement", "pa3",
                      "zeros translate by a - iK under displacement", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        w = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        closed = st.kernel_c(z, w, cfg.theta)
        worst = max(worst, abs(st.kernel_c_quadrature(z, np.conj(w), 512, cfg.theta) - closed))
        worst = max(worst, abs(st.kernel_c_points(z, np.conj(w), cfg.theta)
                               - st.kernel_c_points(-z, -np.conj(w), cfg.theta)))
    out.append(_entry(cfg, "strip.kernel-closed", "pa20",
                      "closed-form kernel matches its defining integral and parity symmetry",
                      worst, t0))

    t0 = time.perf_counter()
    z, w = 0.8 + 0.4j, 2.1 - 0.3j
    worst = abs(st.kernel_c_from_family(r, z, w, cfg.k_max, cfg.n_a) - st.kernel_c(z, w, cfg.theta))
    worst = max(worst, abs(st.kernel_c_from_family(r2, z, w, cfg.k_max, cfg.n_a)
                           - st.kernel_c(z, w, cfg.theta)))
    out.append(_entry(cfg, "strip.kernel-resolution", "pa20",
                      "coherent family resolves into the kernel, fiducial independently",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(3):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1.5, 1.5))
        worst = max(worst, abs(st.strip_reproduce(Q, z, cfg.strip_quad) - complex(Q.evaluate(z))))
    out.append(_entry(cfg, "strip.reproduce", "rwe",
                      "kernel integral reproduces any strip value", worst, t0))

    t0 = time.perf_counter()
    q2 = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 6).state
    sp = st.strip_scalar_product(Q, st.strip_rep(q2, cfg.theta), cfg.strip_quad)
    worst = abs(sp - np.vdot(q2.q, q.q))
    out.append(_entry(cfg, "strip.scalar-product", "rwe",
                      "strip integral reproduces the coefficient scalar product", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for x in (0.0, np.pi / 3, 5.0):
        worst = max(worst, abs(st.strip_invert(Q, x, cfg.strip_quad)
                               - complex(q.wavefunction(np.array(x)))))
    out.append(_entry(cfg, "strip.inversion", "rwe",
                      "strip integral transforms back to the wavefunction", worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    exp = st.strip_coherent_coeffs(q, r, cfg.n_a, cfg.k_max)
    for _ in range(3):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        qz = complex(Q.evaluate(z))
        worst = max(worst, abs(exp.synthesize(z) - qz))
        worst = max(worst, abs(exp.synthesize_parity(z) - qz))
    a0, K0 = 0.9, 2
    worst = max(worst, abs(exp.coeff_by_quadrature(a0, K0, cfg.strip_quad)
                           - complex(exp.coeff(np.array(a0), K0))))
    worst = max(worst, abs(exp.parity_coeff_by_quadrature(a0, K0, cfg.strip_quad)
                           - complex(exp.parity_coeff(np.array(a0), K0))))
    worst = max(worst, exp.parity_link_residual(a0, K0))
    worst = max(worst, exp.cocycle_residual(0.3, 3))
    out.append(_entry(cfg, "strip.expansion", "z-all",
                      "coherent analysis/synthesis on the strip and its parity twin invert",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(2):
        z = complex(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        a = float(rng.uniform(0, 2 * np.pi))
        worst = max(worst, abs(st.strip_marginals(r, z, "sum_over_K", a, cfg.k_max)
                               - st.strip_marginal_reference(r, z, "sum_over_K", a, cfg.theta)))
        K = int(rng.integers(-2, 3))
        worst = max(worst, abs(
            st.strip_marginals(r, z, "integral_over_a", K, cfg.k_max, 2 * cfg.n_a)
            - st.strip_marginal_reference(r, z, "integral_over_a", K, cfg.theta)))
    out.append(_entry(cfg, "strip.marginals", "790",
                      "momentum sums and angle integrals collapse to single components",
                      worst, t0))
    return out


suite_strip.check = "pa3"
suite_strip.ops = ("strip_rep", "strip_scalar_product", "strip_invert", "strip_coherent_eval",
                   "strip_coherent_fourier_residual", "strip_zeros", "kernel_c",
                   "strip_reproduce", "strip_coherent_coeffs", "strip_marginals")


# ---------------------------------------------------------------------------
# phase space


def suite_phasespace(cfg: RunConfig) -> list[SuiteResult]:
    rng = _rng(cfg, 8)
    out = []
    dims = [Dimension(d) for d in cfg.zeros_d_values]

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        g = random_state(dim, rng)
        wt = ps.weyl_finite(g)
        for f in _fiducials(cfg, dim):
            worst = max(worst, float(np.abs(
                ps.weyl_finite_from_coherent(g, f).values - wt.values).max()))
    out.append(_entry(cfg, "phasespace.weyl-finite", "W1",
                      "coefficient form of the Weyl table matches the operator sandwich",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        g = random_state(dim, rng)
        wg = ps.wigner_finite(g)
        worst = max(worst, wg.max_imag())
        for f in _fiducials(cfg, dim):
            worst = max(worst, float(np.abs(
                ps.wigner_finite_from_coherent(g, f).values - wg.values).max()))
    out.append(_entry(cfg, "phasespace.wigner-finite", "W2",
                      "coefficient form of the Wigner table matches the operator sandwich",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    for dim in dims:
        worst = max(worst, ps.wigner_weyl_link_residual(random_state(dim, rng)))
    out.append(_entry(cfg, "phasespace.wigner-link", "W2",
                      "Wigner table is the exact 2D Fourier transform of the Weyl table",
                      worst, t0))

    n_max = min(cfg.n_max, 8)
    q = ci.seeded_random_fiducial_circle(n_max, cfg.seed + 7).state
    r = ci.gaussian_momenta_fiducial(n_max)
    k_max = 2 * n_max + 8
    n_b = max(48, 2 * (2 * n_max + k_max) + 9)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(2):
        p = ci.PhaseLabelCircle(float(rng.uniform(0, 2 * np.pi)), int(rng.integers(-2, 3)))
        worst = max(worst, abs(ps.weyl_circle_from_coeffs(q, r, p, k_max, n_b)
                               - ps.weyl_circle(q, p)))
    out.append(_entry(cfg, "phasespace.weyl-circle", "KOKK",
                      "coefficient form of the circle Weyl function matches the sandwich",
                      worst, t0))

    t0 = time.perf_counter()
    worst = 0.0
    p = ci.PhaseLabelCircle(1.0, 1)
    worst = max(worst, abs(ps.wigner_circle_from_coeffs(q, r, p, k_max, n_b)
                           - ps.wigner_circle(q, p)))
    out.append(_entry(cfg, "phasespace.wigner-circle", "23456",
                      "coefficient form of the circle Wigner function matches the sandwich",
                      worst, t0))

    t0 = time.perf_counter()
    worst = ps.wigner_circle_link_residual(q, ci.PhaseLabelCircle(0.9, 1), k_max, n_b)
    out.append(_entry(cfg, "phasespace.circle-link", "23456",
                      "circle Wigner/Weyl Fourier link holds under truncation", worst, t0))
    return out


suite_phasespace.check = "W1"
suite_phasespace.ops = ("weyl_finite", "wigner_finite", "weyl_finite_from_coherent",
                        "wigner_finite_from_coherent", "weyl_circle", "wigner_circle",
                        "weyl_circle_from_coeffs", "wigner_circle_from_coeffs")


REGISTRY = [
    suite_theta,
    suite_finite_ops,
    suite_torus,
    suite_zeros,
    suite_coherent,
    suite_circle,
    suite_strip,
    suite_phasespace,
]

ALL_OPS = (
    "theta3", "theta3_du", "jacobi_residual",
    "omega", "fourier_op", "displacement", "displaced_fourier", "displaced_parity",
    "momentum_coeffs",
    "torus_rep", "scalar_product_analytic", "coefficients_from_torus", "find_zeros",
    "state_from_zeros",
    "coherent_eval", "coherent_fourier_relation_residual", "kernel", "reproduce",
    "coherent_coeffs", "parity_coeffs", "marginals", "fourier_fiducial_eval",
    "circle_displace", "circle_parity", "displaced_parity_circle", "coherent_overlap_circle",
    "resolution_identity_circle",
    "strip_rep", "strip_scalar_product", "strip_invert", "strip_coherent_eval",
    "strip_coherent_fourier_residual", "strip_zeros", "kernel_c", "strip_reproduce",
    "strip_coherent_coeffs", "strip_marginals",
    "weyl_finite", "wigner_finite", "weyl_finite_from_coherent", "wigner_finite_from_coherent",
    "weyl_circle", "wigner_circle", "weyl_circle_from_coeffs", "wigner_circle_from_coeffs",
)


def run_verify(cfg: RunConfig, parallel: bool = False) -> VerifyReport:
    """Run every residual suite and collect a report.

    Suites draw their random inputs from per-suite generators seeded by
    (cfg.seed, suite index), so the report content is independent of
    execution order and of ``parallel``.
    """
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=4) as pool:
            chunks = list(pool.map(lambda s: s(cfg), REGISTRY))
    else:
        chunks = [suite(cfg) for suite in REGISTRY]
    entries = [e for chunk in chunks for e in chunk]
    return VerifyReport(seed=cfg.seed, entries=entries)
