import os
import subprocess
import sys

import pytest

from kdgmm.configfile import (
    apply_env_overrides,
    apply_set_overrides,
    build_spec,
    dump_resolved,
    load_config,
)

SPEC_TOML = """
out = "out.csv"
modes = ["replica-teacher", "simulate"]
n_seeds = 3
n_dim = 250
seed = 9
n_test = 5000

[base]
alpha = 2.0
delta = 1.0
rho = 0.2
eta = 0.5
lambda_t = 0.1
lambda_s = 1e-5
chi = 1.0

[axes]
alpha = [2.0, 3.0]

[solver]
tol = 1e-10
quad_order = 40
"""


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "spec.toml"
    path.write_text(SPEC_TOML)
    return path


def test_load_and_build(config_file):
    spec = build_spec(load_config(config_file))
    assert spec.base.rho == 0.2
    assert spec.axes == (("alpha", (2.0, 3.0)),)
    assert spec.modes == ("replica-teacher", "simulate")
    assert spec.solver.quad_order == 40
    assert spec.out == "out.csv"


def test_unknown_keys_rejected(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("bogus_key = 1\n")
    with pytest.raises(ValueError, match="bogus_key"):
        load_config(bad)


def test_env_overrides(config_file):
    cfg = load_config(config_file)
    env = {
        "KDGMM_N_DIM": "100",
        "KDGMM_BASE__RHO": "0.3",
        "KDGMM_AXES__ALPHA": "[1.0, 4.0]",
        "KDGMM_SOLVER__QUAD_ORDER": "25",
        "IGNORED": "x",
    }
    apply_env_overrides(cfg, env)
    spec = build_spec(cfg)
    assert spec.n_dim == 100
    assert spec.base.rho == 0.3
    assert spec.axes == (("alpha", (1.0, 4.0)),)
    assert spec.solver.quad_order == 25


def test_set_overrides_and_precedence(config_file):
    cfg = load_config(config_file)
    apply_env_overrides(cfg, {"KDGMM_N_SEEDS": "7"})
    apply_set_overrides(cfg, ["n_seeds=2", "base.chi=0.5"])
    spec = build_spec(cfg)
    assert spec.n_seeds == 2  # command line beats environment
    assert spec.base.chi == 0.5


def test_resolved_sidecar_roundtrip(config_file, tmp_path):
    spec = build_spec(load_config(config_file))
    sidecar = tmp_path / "resolved.toml"
    dump_resolved(spec, sidecar)
    spec2 = build_spec(load_config(sidecar))
    assert spec2 == spec


def _run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "kdgmm.cli", *args],
        capture_output=True, text=True,
        env={**os.environ, "OPENBLAS_NUM_THREADS": "1"},
    )


def test_cli_solve_teacher_json():
    import json

    proc = _run_cli(
        "solve-teacher", "--alpha", "3", "--delta", "1", "--rho", "0.2",
        "--lambda-t", "0.1", "--json",
    )
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["gen_error"] == pytest.approx(0.150266, abs=1e-4)


def test_cli_sweep_compare_roundtrip(config_file, tmp_path):
    out = tmp_path / "table.csv"
    proc = _run_cli(
        "sweep", "--config", str(config_file), "--out", str(out),
        "--set", "modes=['replica-teacher','simulate']",
        "--set", "n_dim=200", "--set", "n_test=4000",
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert out.with_suffix(".csv.resolved.toml").exists()
    cmp_proc = _run_cli(
        "compare", "--replica", str(out), "--empirical", str(out), "--sigma", "4",
    )
    assert cmp_proc.returncode in (0, 2)
    assert "tested comparisons" in cmp_proc.stdout


def test_cli_error_exit_code():
    proc = _run_cli("solve-teacher", "--alpha", "-1", "--delta", "1",
                    "--rho", "0.2")
    assert proc.returncode == 1
    assert "error" in proc.stderr.lower()
