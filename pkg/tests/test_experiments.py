import numpy as np
import pytest

from holonomic.experiments import (HADAMARD_EPSILONS, build_model, find_crossover, hadamard_setup,
                                   population_trace, random_configurations,
                                   run_gate_verification, run_hadamard_robustness,
                                   run_pulse_area_scan, run_two_qubit_demo)
from holonomic.hamiltonian import pulse_area_closed_forms
from holonomic.propagator import PropagatorConfig

FAST = PropagatorConfig(steps_per_segment=1000)


def test_area_scan_flags_singular_rows():
    rows = run_pulse_area_scan([1e-4, 0.5, 2.0])
    assert rows[0].flagged and np.isnan(rows[0].area_k22_negbeta)
    assert not rows[1].flagged
    assert rows[2].area_k22_zero == pytest.approx(pulse_area_closed_forms(2.0)[0], abs=1e-8)


def test_crossover_at_equator():
    rows = run_pulse_area_scan(np.linspace(0.2, np.pi, 50))
    (c,) = find_crossover(rows)
    assert abs(c - np.pi / 2) < 0.01


def test_robustness_at_zero_error_is_perfect():
    (row,) = run_hadamard_robustness([0.0], config=FAST)
    assert row.fidelity == pytest.approx(1.0, abs=1e-9)


def test_robustness_is_deterministic_and_monotone():
    rows = run_hadamard_robustness([0.1, 0.1, 0.2], config=FAST)
    assert rows[0] == rows[1]
    assert rows[2].fidelity < rows[0].fidelity


def test_hadamard_population_trace_ends_at_one():
    _, m, f, g = hadamard_setup()
    t, pop = population_trace(m, f, g, np.array([1, 0, 0], dtype=complex), 51, FAST)
    assert t[0] == 0 and t[-1] == 1
    assert pop[-1] == pytest.approx(1.0, abs=1e-9)
    assert pop.min() < 0.9


def test_random_configurations_seeded():
    a = random_configurations(5, 7)
    assert a == random_configurations(5, 7)
    assert a != random_configurations(5, 8)
    th, ph, al = np.array(a).T
    assert np.all((th > 0.1) & (th < np.pi - 0.1)) and np.all((al >= 0.2) & (al <= np.pi - 0.2))


def test_gate_verification_small():
    s = run_gate_verification(trials=2, seed=1, config=FAST, grid_size=16)
    assert len(s.trials) == 4 and len(s.by_family("k22_negbeta")) == 2
    assert s.min_fidelity > 1 - 1e-6
    assert s.to_dict()["count"] == 4


def test_two_qubit_demo_block_structure():
    r = run_two_qubit_demo(1.0, 0.5, 1.2, config=FAST)
    assert r.off_block_norm < 1e-12
    assert r.passthrough_residual < 1e-12
    assert r.block_residual < 1e-12


def test_unknown_family():
    with pytest.raises(ValueError):
        build_model("k22_other", 0, 0, None)


def test_default_epsilons():
    assert HADAMARD_EPSILONS == (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
