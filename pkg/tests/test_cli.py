"""CLI surface: exports, zero extraction, check runners, verify determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from thetaphase import cli
from thetaphase.circle import CircleState, momentum_circle_state
from thetaphase.errors import ConfigError, ParseError
from thetaphase.finite import Dimension, momentum_state
from thetaphase.verify import ALL_OPS, REGISTRY, RunConfig


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def p0_file(tmp_path):
    path = tmp_path / "p0.json"
    path.write_text(momentum_state(Dimension(3), 0).to_json())
    return str(path)


@pytest.fixture
def n0_file(tmp_path):
    path = tmp_path / "n0.json"
    path.write_text(momentum_circle_state(8, 0).to_json())
    return str(path)


class TestExportGrid:
    def test_torus_row_count(self, p0_file, tmp_path):
        out = tmp_path / "rep.csv"
        rows = cli.export_grid("torus", p0_file, "64", str(out), d=3)
        assert rows == 4096
        lines = out.read_text().splitlines()
        assert lines[0] == "z_re,z_im,G_re,G_im,G_abs"
        assert len(lines) == 4097

    def test_imaginary_major_raster(self, p0_file, tmp_path):
        out = tmp_path / "rep.csv"
        cli.export_grid("torus", p0_file, "8", str(out), d=3)
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        z_im = [float(r[1]) for r in rows]
        # the imaginary coordinate is the slow index
        assert z_im[:8] == [z_im[0]] * 8
        assert z_im[8] > z_im[0]

    def test_strip_constant_state(self, n0_file, tmp_path):
        out = tmp_path / "srep.csv"
        rows = cli.export_grid("strip", n0_file, "16x10", str(out))
        assert rows == 160
        data = [line.split(",") for line in out.read_text().splitlines()[1:]]
        mags = np.array([float(r[4]) for r in data])
        np.testing.assert_allclose(mags, 2 * np.pi, atol=1e-12)

    def test_malformed_state_raises(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"q": "nope"}')
        with pytest.raises(ParseError):
            cli.export_grid("strip", str(bad), "8x8", str(tmp_path / "x.csv"))

    def test_round_trip_precision(self, tmp_path, p0_file):
        # 17 significant digits survive a parse round trip bit-exactly
        out = tmp_path / "rep.csv"
        cli.export_grid("torus", p0_file, "8", str(out), d=3)
        from thetaphase.torus import torus_rep

        G = torus_rep(momentum_state(Dimension(3), 0))
        row = out.read_text().splitlines()[1].split(",")
        z = complex(float(row[0]), float(row[1]))
        assert complex(float(row[2]), float(row[3])) == complex(G.evaluate(z))


class TestCommands:
    def test_theta_eval(self, runner):
        res = runner.invoke(cli.main, ["theta", "eval", "--u", "0", "--tau", "1j"])
        assert res.exit_code == 0
        assert "1.0864348112133082" in res.output

    def test_finite_zeros_payload(self, runner, p0_file, tmp_path):
        out = tmp_path / "zeros.json"
        res = runner.invoke(cli.main, ["finite", "zeros", "--d", "3",
                                       "--state", p0_file, "--out", str(out)])
        assert res.exit_code == 0
        payload = json.loads(out.read_text())
        assert len(payload["zeros"]) == 3
        assert abs(complex(*payload["sum_residual"])) < 1e-6
        target = complex(*payload["constraint_target"])
        zsum = sum(complex(re, im) for re, im in payload["zeros"])
        assert abs(zsum - target) < 1e-6

    def test_circle_zeros(self, runner, tmp_path):
        state = tmp_path / "q.json"
        rng = np.random.default_rng(12)
        N = np.arange(-4, 5)
        q = (rng.normal(size=9) + 1j * rng.normal(size=9)) * np.exp(-N**2 / 6.0)
        state.write_text(CircleState(4, q).to_json())
        out = tmp_path / "zeros.json"
        res = runner.invoke(cli.main, ["circle", "zeros", "--state", str(state),
                                       "--out", str(out)])
        assert res.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["degree"] == 8

    def test_finite_coherent_check(self, runner):
        res = runner.invoke(cli.main, ["finite", "coherent", "--d", "3", "--check", "123"])
        assert res.exit_code == 0
        assert "coherent.fourier-fiducial" in res.output
        assert "True" in res.output

    def test_finite_coherent_random_fiducial(self, runner):
        res = runner.invoke(cli.main, ["finite", "coherent", "--d", "3",
                                       "--fiducial", "random:7", "--check", "marg"])
        assert res.exit_code == 0

    def test_circle_check(self, runner):
        res = runner.invoke(cli.main, ["circle", "check", "790"])
        assert res.exit_code == 0
        assert "strip.marginals" in res.output

    def test_circle_op(self, runner):
        res = runner.invoke(cli.main, ["circle", "op", "--check", "pa100"])
        assert res.exit_code == 0
        assert "circle.cocycle" in res.output

    def test_zero_tolerance_forces_failure(self, runner):
        res = runner.invoke(cli.main, ["circle", "op", "--check", "pa100", "--tol", "0"])
        assert res.exit_code == 1

    def test_finite_op_dump(self, runner, tmp_path):
        out = tmp_path / "op.csv"
        res = runner.invoke(cli.main, ["finite", "op", "--d", "3", "--which", "fourier",
                                       "--out", str(out)])
        assert res.exit_code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 10
        first = lines[1].split(",")
        assert float(first[2]) == pytest.approx(3**-0.5)

    def test_finite_wigner_export(self, runner, p0_file, tmp_path):
        out = tmp_path / "w.csv"
        res = runner.invoke(cli.main, ["finite", "wigner", "--d", "3", "--state", p0_file,
                                       "--out", str(out)])
        assert res.exit_code == 0
        assert len(out.read_text().splitlines()) == 10

    def test_circle_wigner_export(self, runner, n0_file, tmp_path):
        out = tmp_path / "w.csv"
        res = runner.invoke(cli.main, ["circle", "wigner", "--state", n0_file,
                                       "--a-grid", "8", "--kmax", "2", "--out", str(out)])
        assert res.exit_code == 0
        assert len(out.read_text().splitlines()) == 1 + 8 * 5


@pytest.fixture(scope="module")
def small_cfg_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "cfg.toml"
    path.write_text(
        "\n".join(
            [
                "[params]",
                "seed = 11",
                "d_values = [3]",
                "zeros_d_values = [3]",
                "zeros_states = 1",
                "n_max = 6",
                "k_max = 20",
                "n_a = 48",
                "[quadrature]",
                "n_real = 64",
                "n_imag = 64",
                "strip_n_real = 64",
                "strip_n_imag = 96",
            ]
        )
    )
    return str(path)


class TestVerify:
    def test_verify_passes_and_is_deterministic(self, runner, small_cfg_file, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            res = runner.invoke(cli.main, ["verify", "--config", small_cfg_file,
                                           "--quiet", "--out", str(out)])
            assert res.exit_code == 0, res.output
        assert out1.read_bytes() == out2.read_bytes()
        payload = json.loads(out1.read_text())
        assert payload["passed"] is True
        assert payload["seed"] == 11

    def test_env_var_config(self, runner, small_cfg_file, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.CONFIG_ENV, small_cfg_file)
        out = tmp_path / "r.json"
        res = runner.invoke(cli.main, ["verify", "--quiet", "--out", str(out)])
        assert res.exit_code == 0
        assert json.loads(out.read_text())["seed"] == 11

    def test_csv_format(self, runner, small_cfg_file, tmp_path):
        out = tmp_path / "r.csv"
        res = runner.invoke(cli.main, ["verify", "--config", small_cfg_file, "--quiet",
                                       "--format", "csv", "--out", str(out)])
        assert res.exit_code == 0
        assert out.read_text().startswith("name,check,identity,residual")

    def test_bad_config_rejected(self, runner, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[tolerances]\n'no.such.suite' = 1e-3\n")
        with pytest.raises(ConfigError):
            cli._load_config(str(bad))

    def test_zero_tolerances_fail_everything(self):
        from thetaphase.verify import DEFAULT_TOLERANCES, suite_theta

        cfg = RunConfig(tolerances={k: 0.0 for k in DEFAULT_TOLERANCES if k.startswith("theta")})
        entries = suite_theta(cfg)
        assert all(not e.passed for e in entries if e.residual > 0)
        assert any(not e.passed for e in entries)

    def test_parallel_matches_sequential(self, small_cfg_file):
        from thetaphase.verify import run_verify

        cfg = cli._load_config(small_cfg_file)
        a = run_verify(cfg)
        b = run_verify(cfg, parallel=True)
        assert a.to_json() == b.to_json()


def test_verify_covers_every_operation():
    covered = set()
    for suite in REGISTRY:
        covered.update(suite.ops)
    assert covered == set(ALL_OPS)


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "thetaphase.cli", "theta", "eval", "--u", "0", "--tau", "1j"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert "1.0864348112133082" in res.stdout
