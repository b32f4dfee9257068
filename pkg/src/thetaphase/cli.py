"""Command-line front end: state I/O, grid exports, zero extraction, verify runner.

Layout:
    thetaphase theta eval ...
    thetaphase finite {rep|zeros|coherent|wigner|op} ...
    thetaphase circle {rep|zeros|check|wigner|op} ...
    thetaphase verify ...

Exit code of ``verify`` is 0 iff every residual suite passed.  A TOML config
(path in $THETA_PHASE_CONFIG or --config) provides defaults; flags override.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import circle as ci
from . import coherent as cohmod
from . import phasespace as ps
from . import strip as st
from . import torus as to
from . import verify as vf
from .errors import ConfigError, IoError, ParseError, ThetaPhaseError
from .finite import Dimension, FiniteState, PhaseLabelFinite, fourier_op, displacement, \
    displaced_parity, displaced_fourier
from .theta import ThetaConfig, theta3, theta3_du, jacobi_residual

CONFIG_ENV = "THETA_PHASE_CONFIG"
_F = "{:.17g}"


def _fmt(x: float) -> str:
    return _F.format(float(x))


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _load_config(path: str | None) -> vf.RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return vf.RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    kwargs = {}
    params = data.get("params", {})
    for key in ("seed", "n_max", "k_max", "n_a", "zeros_states"):
        if key in params:
            kwargs[key] = int(params[key])
    if "d_values" in params:
        kwargs["d_values"] = tuple(int(v) for v in params["d_values"])
    if "zeros_d_values" in params:
        kwargs["zeros_d_values"] = tuple(int(v) for v in params["zeros_d_values"])
    quad = data.get("quadrature", {})
    if quad:
        kwargs["quad"] = to.QuadratureSpec(
            n_real=int(quad.get("n_real", 96)), n_imag=int(quad.get("n_imag", 96))
        )
        kwargs["strip_quad"] = st.StripQuadratureSpec(
            n_real=int(quad.get("strip_n_real", 128)),
            n_imag=int(quad.get("strip_n_imag", 160)),
        )
    th = data.get("theta", {})
    if th:
        kwargs["theta"] = ThetaConfig(
            eps=float(th.get("eps", 1e-14)),
            max_terms=int(th.get("max_terms", 10_000)),
            transform_threshold=float(th.get("transform_threshold", 1.0)),
        )
    tolerances = data.get("tolerances", {})
    if tolerances:
        kwargs["tolerances"] = {str(k): float(v) for k, v in tolerances.items()}
    if "output_format" in data:
        kwargs["output_format"] = str(data["output_format"])
    try:
        return vf.RunConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParseError(f"cannot parse complex number from {text!r}") from exc


def _load_finite_state(path: str, d: int) -> FiniteState:
    return FiniteState.from_json(_read_text(path), Dimension(d))


def _load_circle_state(path: str) -> ci.CircleState:
    return ci.CircleState.from_json(_read_text(path))


def _load_fiducial(dim: Dimension, choice: str) -> cohmod.FiducialFinite:
    if choice == "gauss":
        return cohmod.discrete_gaussian_fiducial(dim)
    if choice.startswith("random:"):
        return cohmod.seeded_random_fiducial(dim, int(choice.split(":", 1)[1]))
    return cohmod.FiducialFinite(_load_finite_state(choice, dim.d))


def export_grid(kind: str, state_file: str, grid_spec: str, out_file: str,
                d: int | None = None) -> int:
    """Evaluate a representation on a grid and write CSV rows (imaginary-major).

    ``grid_spec`` is "N" (square) or "NRxNI".  Header: z_re,z_im,G_re,G_im,G_abs.
    Returns the number of data rows.
    """
    if "x" in grid_spec:
        nr, ni = (int(v) for v in grid_spec.lower().split("x"))
    else:
        nr = ni = int(grid_spec)
    if kind == "torus":
        if d is None:
            raise ConfigError("torus export needs the dimension d")
        state = _load_finite_state(state_file, d)
        G = to.torus_rep(state)
        L = state.dim.cell_side
        xs = np.arange(nr) * L / nr
        ys = np.arange(ni) * L / ni
    elif kind == "strip":
        cstate = _load_circle_state(state_file)
        G = st.strip_rep(cstate)
        y_max = G.y_max
        xs = np.arange(nr) * 2 * np.pi / nr
        ys = np.linspace(-y_max, y_max, ni)
    else:
        raise ConfigError(f"unknown export kind {kind!r}")
    lines = ["z_re,z_im,G_re,G_im,G_abs"]
    for y in ys:  # imaginary-major raster
        vals = G.evaluate(xs + 1j * y)
        for x, v in zip(xs, vals):
            lines.append(",".join(_fmt(t) for t in (x, y, v.real, v.imag, abs(v))))
    _write_text(out_file, "\n".join(lines) + "\n")
    return (len(lines) - 1)


@click.group()
def main() -> None:
    """Theta-function analytic representations on the torus and the strip."""


@main.group()
def theta() -> None:
    """Theta-kernel evaluation."""


@theta.command("eval")
@click.option("--u", "u_text", required=True, help="complex argument, e.g. '0.3+0.2j'")
@click.option("--tau", "tau_text", required=True, help="nome parameter with Im > 0, e.g. '0.2j'")
@click.option("--derivative", is_flag=True, help="also print the u-derivative")
@click.option("--residual", is_flag=True, help="also print the modular-identity residual")
def theta_eval(u_text: str, tau_text: str, derivative: bool, residual: bool) -> None:
    """Evaluate the theta kernel at one point."""
    u = _parse_complex(u_text)
    tau = _parse_complex(tau_text)
    v = theta3(u, tau)
    click.echo(f"theta3 = {_fmt(v.real)} {'+' if v.imag >= 0 else '-'} {_fmt(abs(v.imag))}j")
    if derivative:
        dv = theta3_du(u, tau)
        click.echo(f"theta3_du = {_fmt(dv.real)} {'+' if dv.imag >= 0 else '-'} {_fmt(abs(dv.imag))}j")
    if residual:
        click.echo(f"modular residual = {_fmt(jacobi_residual(u, tau))}")


@main.group()
def finite() -> None:
    """Finite-system commands."""


@finite.command("rep")
@click.option("--d", type=int, required=True)
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--grid", default="64")
@click.option("--out", "out_file", required=True, type=click.Path())
def finite_rep(d: int, state_file: str, grid: str, out_file: str) -> None:
    """Export the torus representation of a state on a grid as CSV."""
    rows = export_grid("torus", state_file, grid, out_file, d=d)
    click.echo(f"wrote {rows} rows to {out_file}")


@finite.command("zeros")
@click.option("--d", type=int, required=True)
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--out", "out_file", required=True, type=click.Path())
def finite_zeros(d: int, state_file: str, out_file: str) -> None:
    """Locate the cell zeros of a state's representation; write them as JSON."""
    state = _load_finite_state(state_file, d)
    zs = to.find_zeros(to.torus_rep(state))
    payload = {
        "d": d,
        "cell": list(zs.cell),
        "zeros": [[z.real, z.imag] for z in zs.zeros],
        "sum_residual": [zs.sum_residual.real, zs.sum_residual.imag],
        "constraint_target": [zs.target.real, zs.target.imag],
        "newton_residuals": [float(r) for r in zs.newton_residuals],
        "window_offset": zs.window_offset,
    }
    _write_text(out_file, json.dumps(payload, indent=2) + "\n")
    click.echo(f"found {len(zs.zeros)} zeros; |sum residual| = {_fmt(abs(zs.sum_residual))}")


_FINITE_CHECKS = {
    "13c": ("coherent.fourier-pair", "coherent.shift-form", "coherent.zero-lattice"),
    "21": ("coherent.kernel-resolution", "coherent.kernel-symmetry",
           "coherent.kernel-independence"),
    "23": ("coherent.reproduce", "coherent.expansion"),
    "marg": ("coherent.marginals",),
    "123": ("coherent.fourier-fiducial",),
}


@finite.command("coherent")
@click.option("--d", type=int, required=True)
@click.option("--fiducial", "fiducial_text", default="gauss",
              help="gauss | random:SEED | path to a state file")
@click.option("--check", "check_name",
              type=click.Choice([*_FINITE_CHECKS, "all"]), default="all")
@click.option("--tol", type=float, default=None, help="override every tolerance")
@click.option("--seed", type=int, default=None)
def finite_coherent(d: int, fiducial_text: str, check_name: str, tol: float | None,
                    seed: int | None) -> None:
    """Run the coherent-state residual checks; print a residual CSV table."""
    cfg = vf.RunConfig(
        zeros_d_values=(d,),
        seed=seed if seed is not None else vf.RunConfig().seed,
    )
    chosen = _load_fiducial(Dimension(d), fiducial_text)

    def factory(dim: Dimension):
        fids = [chosen if dim.d == d else cohmod.discrete_gaussian_fiducial(dim)]
        if fiducial_text != "gauss":
            fids.append(cohmod.discrete_gaussian_fiducial(dim))
        return fids

    wanted = set()
    names = _FINITE_CHECKS if check_name == "all" else {check_name: _FINITE_CHECKS[check_name]}
    for group in names.values():
        wanted.update(group)
    entries = [e for e in vf.suite_coherent(cfg, fiducial_factory=factory) if e.name in wanted]
    _echo_entry_csv(entries, tol)
    if any(not _passes(e, tol) for e in entries):
        raise SystemExit(1)


def _passes(e: vf.SuiteResult, tol: float | None) -> bool:
    return e.residual <= (tol if tol is not None else e.tolerance)


def _echo_entry_csv(entries, tol: float | None = None) -> None:
    click.echo("name,check,residual,tolerance,passed")
    for e in entries:
        t = tol if tol is not None else e.tolerance
        click.echo(f"{e.name},{e.check},{_fmt(e.residual)},{_fmt(t)},{_passes(e, tol)}")


@finite.command("wigner")
@click.option("--d", type=int, required=True)
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["direct", "coherent"]), default="direct")
@click.option("--out", "out_file", required=True, type=click.Path())
def finite_wigner(d: int, state_file: str, method: str, out_file: str) -> None:
    """Export the Wigner table of a state as CSV (alpha, beta, value)."""
    g = _load_finite_state(state_file, d)
    if method == "direct":
        table = ps.wigner_finite(g)
    else:
        table = ps.wigner_finite_from_coherent(
            g, cohmod.discrete_gaussian_fiducial(g.dim))
    lines = ["alpha,beta,value_re,value_im"]
    for a in range(d):
        for b in range(d):
            v = table.values[a, b]
            lines.append(f"{a},{b},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(out_file, "\n".join(lines) + "\n")
    click.echo(f"wrote {d * d} rows to {out_file}")


@finite.command("op")
@click.option("--d", type=int, required=True)
@click.option("--which", type=click.Choice(["fourier", "clock", "shift", "displacement",
                                            "parity", "displaced-fourier"]), default="fourier")
@click.option("--alpha", type=int, default=0)
@click.option("--beta", type=int, default=0)
@click.option("--out", "out_file", required=True, type=click.Path())
def finite_op(d: int, which: str, alpha: int, beta: int, out_file: str) -> None:
    """Dump an operator matrix as CSV (row, col, re, im)."""
    from .finite import clock_op, shift_op

    dim = Dimension(d)
    p = PhaseLabelFinite(alpha, beta)
    op = {
        "fourier": lambda: fourier_op(dim),
        "clock": lambda: clock_op(dim),
        "shift": lambda: shift_op(dim),
        "displacement": lambda: displacement(dim, p),
        "parity": lambda: displaced_parity(dim, p),
        "displaced-fourier": lambda: displaced_fourier(dim, p),
    }[which]()
    lines = ["row,col,re,im"]
    for m in range(d):
        for n in range(d):
            v = op.entries[m, n]
            lines.append(f"{m},{n},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(out_file, "\n".join(lines) + "\n")
    click.echo(f"wrote {d * d} entries to {out_file}")


@main.group()
def circle() -> None:
    """Circle-system commands."""


@circle.command("rep")
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--grid", default="128x160")
@click.option("--out", "out_file", required=True, type=click.Path())
def circle_rep(state_file: str, grid: str, out_file: str) -> None:
    """Export the strip representation of a state on a grid as CSV."""
    rows = export_grid("strip", state_file, grid, out_file)
    click.echo(f"wrote {rows} rows to {out_file}")


@circle.command("zeros")
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--out", "out_file", required=True, type=click.Path())
def circle_zeros(state_file: str, out_file: str) -> None:
    """Locate the strip zeros of a state's representation; write them as JSON."""
    state = _load_circle_state(state_file)
    zs = st.strip_zeros(st.strip_rep(state))
    payload = {
        "n_max": state.n_max,
        "order_low": zs.n_low,
        "order_high": zs.n_high,
        "degree": zs.degree,
        "zeros": [[z.real, z.imag] for z in zs.zeros],
        "backward_errors": [float(v) for v in zs.backward_errors],
    }
    _write_text(out_file, json.dumps(payload, indent=2) + "\n")
    click.echo(f"found {zs.degree} zeros")


_CIRCLE_CHECKS = {
    "pa1": ("strip.fourier-pair",),
    "pa3": ("strip.shift-form", "strip.zero-displacement"),
    "pa20": ("strip.kernel-closed", "strip.kernel-resolution"),
    "rwe": ("strip.reproduce", "strip.scalar-product", "strip.inversion"),
    "z-all": ("strip.expansion",),
    "790": ("strip.marginals",),
}

_CIRCLE_OPS = {
    "pa2": ("circle.displacement-group", "circle.overlap"),
    "pa100": ("circle.cocycle",),
    "u0": ("circle.parity-average",),
    "fou": ("circle.parity-fourier",),
    "pa12": ("circle.resolution", "circle.resolution-stride"),
}


@circle.command("check")
@click.argument("check_name", type=click.Choice([*_CIRCLE_CHECKS, "all"]))
@click.option("--tol", type=float, default=None, help="override every tolerance")
@click.option("--nmax", type=int, default=8)
@click.option("--seed", type=int, default=None)
def circle_check(check_name: str, tol: float | None, nmax: int, seed: int | None) -> None:
    """Run strip-representation residual checks; print residual CSV."""
    cfg = vf.RunConfig(
        n_max=nmax, seed=seed if seed is not None else vf.RunConfig().seed)
    wanted = set()
    names = _CIRCLE_CHECKS if check_name == "all" else {check_name: _CIRCLE_CHECKS[check_name]}
    for group in names.values():
        wanted.update(group)
    entries = [e for e in vf.suite_strip(cfg) if e.name in wanted]
    _echo_entry_csv(entries, tol)
    if any(not _passes(e, tol) for e in entries):
        raise SystemExit(1)


@circle.command("op")
@click.option("--check", "check_name", type=click.Choice([*_CIRCLE_OPS, "all"]),
              default="all")
@click.option("--nmax", type=int, default=8)
@click.option("--tol", type=float, default=None)
@click.option("--seed", type=int, default=None)
def circle_op(check_name: str, nmax: int, tol: float | None, seed: int | None) -> None:
    """Run circle operator-algebra residual checks; print residual CSV."""
    cfg = vf.RunConfig(
        n_max=nmax, seed=seed if seed is not None else vf.RunConfig().seed)
    wanted = set()
    names = _CIRCLE_OPS if check_name == "all" else {check_name: _CIRCLE_OPS[check_name]}
    for group in names.values():
        wanted.update(group)
    entries = [e for e in vf.suite_circle(cfg) if e.name in wanted]
    _echo_entry_csv(entries, tol)
    if any(not _passes(e, tol) for e in entries):
        raise SystemExit(1)


@circle.command("wigner")
@click.option("--state", "state_file", required=True, type=click.Path())
@click.option("--a-grid", "n_a", type=int, default=32)
@click.option("--kmax", type=int, default=8)
@click.option("--function", type=click.Choice(["wigner", "weyl"]), default="wigner")
@click.option("--out", "out_file", required=True, type=click.Path())
def circle_wigner(state_file: str, n_a: int, kmax: int, function: str, out_file: str) -> None:
    """Export the circle Wigner (or Weyl) function on an (a, K) lattice as CSV."""
    state = _load_circle_state(state_file)
    fn = ps.wigner_circle if function == "wigner" else ps.weyl_circle
    a_grid = np.arange(n_a) * 2 * np.pi / n_a
    k_range = np.arange(-kmax, kmax + 1)
    values = np.empty((n_a, len(k_range)), dtype=np.complex128)
    for j, K in enumerate(k_range):
        for i, a in enumerate(a_grid):
            values[i, j] = fn(state, ci.PhaseLabelCircle(a, int(K)))
    pmap = ps.PhaseMapCircle(a_grid, k_range, values)
    lines = ["a,K,value_re,value_im"]
    for j, K in enumerate(k_range):
        for i, a in enumerate(a_grid):
            v = pmap.value_at(i, int(K))
            lines.append(f"{_fmt(a)},{K},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(out_file, "\n".join(lines) + "\n")
    click.echo(f"wrote {n_a * (2 * kmax + 1)} rows to {out_file}")


@main.command("verify")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help=f"TOML config (default: ${CONFIG_ENV})")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_file", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
@click.option("--parallel", is_flag=True, help="run independent suites concurrently")
@click.option("--quiet", is_flag=True, help="suppress the per-suite summary")
def verify_cmd(config_path: str | None, seed: int | None, out_file: str | None,
               fmt: str | None, parallel: bool, quiet: bool) -> None:
    """Run every identity suite; exit 0 iff all pass."""
    cfg = _load_config(config_path)
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    report = vf.run_verify(cfg, parallel=parallel)
    if not quiet:
        for line in report.summary_lines():
            click.echo(line, err=True)
    text = report.to_csv() if (fmt or cfg.output_format) == "csv" else report.to_json()
    if out_file:
        _write_text(out_file, text)
    else:
        click.echo(text, nl=False)
    raise SystemExit(0 if report.passed else 1)


def entry() -> None:  # console-script shim with uniform error reporting
    try:
        main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except ThetaPhaseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entry()
