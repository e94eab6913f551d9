import json

import numpy as np
import pytest

from holonomic.cli import THRESHOLDS, main


def _run(tmp_path, command, doc=None, *extra):
    argv = [command, "--output", str(tmp_path / "out")]
    if doc is not None:
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps(doc))
        argv += ["--config", str(cfg)]
    return main(argv + list(extra))


def _write_path(tmp_path, t, alpha, beta):
    rows = "".join(f"{a:.17g},{b:.17g},{c:.17g}\n" for a, b, c in zip(t, alpha, beta))
    (tmp_path / "path.csv").write_text("t,alpha,beta\n" + rows)
    return "path.csv"


def test_gate_hadamard(tmp_path):
    assert _run(tmp_path, "gate", None, "--steps", "2000") == 0
    report = json.loads((tmp_path / "out" / "gate_report.json").read_text())
    assert report["fidelity_vs_analytic"] >= 0.999999
    assert report["leakage"] < 1e-6
    assert report["holonomy"]["commutation_residual"] < 1e-12


def test_bad_durations_exit_2(tmp_path, capsys):
    assert _run(tmp_path, "gate", {"path": {"tau1": 0.8, "tau2": 0.5}}) == 2
    assert "tau1" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_singular_family_exit_3(tmp_path, capsys):
    doc = {"path": {"kind": "fig1", "alpha0": 1e-4}, "model": {"family": "k22_negbeta"}}
    assert _run(tmp_path, "gate", doc) == 3
    assert "singular" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_robustness_rows(tmp_path):
    assert _run(tmp_path, "robustness", {"error": {"epsilon_list": [0.0]}}, "--steps", "1000") == 0
    lines = (tmp_path / "out" / "robustness.csv").read_text().splitlines()
    assert lines[0] == "epsilon,fidelity" and len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-9)


def test_robustness_deterministic_bytes(tmp_path):
    doc = {"error": {"epsilon_list": [0.1, 0.1]}}
    assert _run(tmp_path, "robustness", doc, "--steps", "500") == 0
    first = (tmp_path / "out" / "robustness.csv").read_bytes()
    assert _run(tmp_path, "robustness", doc, "--steps", "500") == 0
    assert (tmp_path / "out" / "robustness.csv").read_bytes() == first
    a, b = first.decode().splitlines()[1:]
    assert a == b


def test_robustness_needs_hadamard_path(tmp_path):
    assert _run(tmp_path, "robustness", {"path": {"kind": "fig1", "alpha0": 1.0}}) == 2


def test_pulse_area_table(tmp_path):
    assert _run(tmp_path, "pulse-area") == 0
    lines = (tmp_path / "out" / "pulse_area.csv").read_text().splitlines()
    assert lines[0] == "alpha,area_k22zero,area_k22negbeta,phi_tau"
    assert len(lines) == 51


def test_population_and_json_format(tmp_path):
    assert _run(tmp_path, "population", None, "--steps", "500", "--samples", "11",
                "--format", "json") == 0
    rows = json.loads((tmp_path / "out" / "population.json").read_text())
    assert len(rows) == 11 and set(rows[0]) == {"t_over_tau", "population"}
    assert rows[-1]["population"] == pytest.approx(1.0, abs=1e-6)


def test_two_qubit(tmp_path):
    doc = {"path": {"kind": "fig1", "alpha0": 1.3}, "gate": {"theta": 1.0, "phi": 0.5}}
    assert _run(tmp_path, "two-qubit", doc, "--steps", "500") == 0
    rep = json.loads((tmp_path / "out" / "two_qubit_report.json").read_text())
    assert rep["off_block_norm"] < 1e-8
    assert rep["fidelity_vs_analytic"] > 1 - 1e-6


def test_export_pulse(tmp_path):
    assert _run(tmp_path, "export-pulse", None, "--samples", "21") == 0
    lines = (tmp_path / "out" / "pulse.csv").read_text().splitlines()
    assert lines[0] == "t,delta,omega,kappa" and len(lines) == 22
    meta = json.loads((tmp_path / "out" / "pulse_meta.json").read_text())
    assert {"theta", "phi", "k22_choice", "tau", "breakpoints"} <= set(meta)
    assert meta["breakpoints"] == [0.25, 0.75]


def test_verify_default_passes(tmp_path):
    assert _run(tmp_path, "verify") == 0
    rep = json.loads((tmp_path / "out" / "verify_report.json").read_text())
    assert rep["all_pass"] and set(rep["checks"]) == set(THRESHOLDS)


def test_verify_open_path_fails_cyclicity(tmp_path):
    t = np.linspace(0, 1, 201)
    alpha = 0.3 * np.sin(np.pi * t / 2) ** 2  # ends at 0.3
    src = _write_path(tmp_path, t, alpha, 2 * np.pi * t)
    doc = {"path": {"kind": "custom", "csv_source": src}}
    assert _run(tmp_path, "verify", doc, "--steps", "500") == 3
    rep = json.loads((tmp_path / "out" / "verify_report.json").read_text())
    assert not rep["checks"]["path_cyclicity"]["pass"]
    assert rep["checks"]["path_cyclicity"]["value"] == pytest.approx(0.3)


def test_verify_open_beta_fails_cancellation(tmp_path):
    # beta climbs from 0 to 3 while away from the poles, so the family stays regular
    t = np.linspace(0, 1, 201)
    alpha = 1.2 * np.sin(np.pi * t) ** 2
    beta = 3.0 * np.clip((t - 0.2) / 0.6, 0, 1)
    src = _write_path(tmp_path, t, alpha, beta)
    doc = {"path": {"kind": "custom", "csv_source": src}, "model": {"family": "k22_negbeta"}}
    assert _run(tmp_path, "verify", doc, "--steps", "500") == 3
    checks = json.loads((tmp_path / "out" / "verify_report.json").read_text())["checks"]
    assert not checks["k22_cancellation"]["pass"]
    assert checks["k22_cancellation"]["value"] == pytest.approx(3.0, abs=1e-6)
    assert checks["path_cyclicity"]["pass"]


def test_random_gates(tmp_path):
    doc = {"verification": {"trials": 1, "seed": 3}}
    assert _run(tmp_path, "random-gates", doc, "--steps", "500") == 0
    rep = json.loads((tmp_path / "out" / "gate_verification.json").read_text())
    assert rep["count"] == 2


def test_flag_validation(tmp_path):
    assert _run(tmp_path, "gate", None, "--steps", "3") == 2
    assert _run(tmp_path, "population", None, "--samples", "1") == 2
    assert main(["gate", "--config", str(tmp_path / "missing.json")]) == 2
