"""Command line interface: artifacts, exit codes, determinism."""

import json
import os
from importlib import resources
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from hexpot.cli import bundled_config_path, main
from hexpot.errors import DomainError

BASE = {
    "coefficients": {"a0": [0.0, 2.0], "a1": [2.0, -3.0], "a2": [-3.0, 1.0]},
    "curve": {"kind": "circle", "params": {"radius": 1.2}},
    "lam": 9.0,
    "n_nodes": 48,
    "oversample": 4,
    "method": "direct",
    "data": {"kind": "trig", "modes": [[[1, 1.0, 0.0]], [[0, 0.5, 0.0]], [[2, 0.0, 0.0, 0.3, 0.0]]]},
    "eval_grid": {"points": [[0.2, 0.1], [-0.3, 0.2], [0.0, -0.25]]},
}


def _write_cfg(tmp_path: Path, cfg: dict, name: str = "cfg.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return str(path)


def test_solve_writes_artifacts(tmp_path):
    cfg = _write_cfg(tmp_path, BASE)
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
    for name in ("solution.csv", "densities.csv", "diagnostics.json", "timings.json"):
        assert (out / name).is_file()
    sol_lines = (out / "solution.csv").read_text().splitlines()
    assert sol_lines[0] == "x1,x2,re_u,im_u"
    assert len(sol_lines) == 1 + 3  # header plus the three requested points
    dens_lines = (out / "densities.csv").read_text().splitlines()
    assert dens_lines[0] == "t,node_index,re_mu1,im_mu1,re_mu2,im_mu2,re_mu3,im_mu3"
    assert len(dens_lines) == 1 + 48

    diag = json.loads((out / "diagnostics.json").read_text())
    schema = json.loads(
        resources.files("hexpot").joinpath("diagnostics_schema.json").read_text()
    )
    Draft202012Validator(schema).validate(diag)
    assert diag["n_eval_points"] == 3
    # quality numbers are present (their tightness is covered at realistic
    # resolutions by the solver and acceptance suites, not by this smoke run)
    assert diag["boundary_trace_error"] > 0
    assert diag["max_pde_residual"] <= 1e-8


def test_solve_is_deterministic(tmp_path):
    cfg = _write_cfg(tmp_path, BASE)
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
        outs.append(out)
    for name in ("solution.csv", "densities.csv", "diagnostics.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_invalid_config_is_exit_2(tmp_path, capsys):
    bad = dict(BASE)
    del bad["lam"]
    cfg = _write_cfg(tmp_path, bad)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "schema" in capsys.readouterr().err
    assert main(["solve", "--config", str(tmp_path / "missing.json")]) == 2


def test_sector_violation_is_exit_3(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, {**BASE, "lam": 0.5})
    assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 3
    assert "precondition" in capsys.readouterr().err


def test_numerical_failure_is_exit_4(tmp_path, capsys):
    # the plain iteration (no low-mode completion) diverges here
    cfg = _write_cfg(tmp_path, {**BASE, "method": "neumann", "lowmode_cutoff": 0})
    assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 4
    assert "numerical failure" in capsys.readouterr().err


def test_verify_kernels_suite(tmp_path):
    cfg = _write_cfg(tmp_path, BASE)
    out = tmp_path / "v"
    assert main(["verify", "--suite", "kernels", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "verify_kernels.json").read_text())
    assert report["passed"] is True
    assert report["max_residual"] <= 1e-10


def test_verify_decay_suite(tmp_path):
    cfg = _write_cfg(tmp_path, BASE)
    out = tmp_path / "v"
    assert main(["verify", "--suite", "decay", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "verify_decay.json").read_text())
    assert report["passed"] is True
    assert len(report["fits"]) == 15


def test_sweep_records_every_lambda(tmp_path):
    cfg = _write_cfg(tmp_path, {**BASE, "lambda_sweep": [9.0, 12.0]})
    out = tmp_path / "s"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads((out / "sweep.json").read_text())
    assert [r["converged"] for r in payload["records"]] == [True, True]


def test_sweep_reports_failures_with_exit_4(tmp_path):
    # with data above the low-mode cutoff, lam = 9 needs nine iterations and
    # lam = 2.5 only five; a budget of six must report exactly one failure
    high_modes = {
        "kind": "trig",
        "modes": [[[9, 1.0, 0.0]], [[0, 0.5, 0.0]], [[8, 0.0, 0.0, 0.3, 0.0]]],
    }
    cfg = _write_cfg(
        tmp_path,
        {
            **BASE,
            "method": "neumann",
            "max_iter": 6,
            "data": high_modes,
            "lambda_sweep": [9.0, 2.5],
        },
    )
    out = tmp_path / "s"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 4
    records = json.loads((out / "sweep.json").read_text())["records"]
    assert records[0]["converged"] is False
    assert records[0]["error"] == "MaxIterExceeded"
    assert records[1]["converged"] is True


def test_sweep_requires_lambda_list(tmp_path):
    cfg = _write_cfg(tmp_path, BASE)
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 2


def test_thread_env_var(tmp_path, monkeypatch):
    cfg = _write_cfg(tmp_path, BASE)
    monkeypatch.setenv("HEXPOT_NUM_THREADS", "1")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "t")]) == 0
    monkeypatch.setenv("HEXPOT_NUM_THREADS", "many")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "t2")]) == 2


def test_bundled_config():
    path = bundled_config_path("manufactured")
    assert os.path.isfile(path)
    cfg = json.loads(Path(path).read_text())
    assert cfg["data"]["kind"] == "manufactured"
    with pytest.raises(DomainError):
        bundled_config_path("no-such-problem")


def test_published_schemas_match_packaged():
    repo_docs = Path(__file__).resolve().parents[1] / "docs"
    pairs = (
        ("config.schema.json", "config_schema.json"),
        ("diagnostics.schema.json", "diagnostics_schema.json"),
    )
    for doc_name, pkg_name in pairs:
        doc = (repo_docs / doc_name).read_bytes()
        pkg = resources.files("hexpot").joinpath(pkg_name).read_bytes()
        assert doc == pkg
