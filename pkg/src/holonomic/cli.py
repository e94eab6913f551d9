"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 numerical-contract
violation (singular model, non-cyclic path, unitarity drift, failed checks).
"""
import argparse
import os
import sys

import numpy as np

from . import __version__
from .config import ConfigError, load_config, resolve_path
from .errors import ContractViolation
from .experiments import (build_model, find_crossover, population_trace,
                          run_gate_verification, run_hadamard_robustness, run_pulse_area_scan,
                          run_two_qubit_demo)
from .frame import computational_projector, one_qubit_frame, orthonormality_residual
from .hamiltonian import apply_error, assemble, pulse_schedule, pulse_sidecar
from .holonomy import holonomy_report
from .io import csv_text, json_text, write_all
from .linalg import dag, max_norm
from .path import TWO_PI, GateSpec, wrap_angle
from .propagator import PropagatorConfig, evolve_operator, extract_gate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

# pass thresholds of the verify command
THRESHOLDS = {
    "path_cyclicity": 1e-12,
    "path_continuity": 1e-10,
    "frame_orthonormality": 1e-12,
    "frame_cyclicity": 1e-10,
    "hamiltonian_hermiticity": 1e-14,
    "a_closed_form": 1e-10,
    "k_pattern": 1e-10,
    "commutation": 1e-12,
    "k22_cancellation": 1e-8,
    "solid_angle_vs_geometric": 1e-8,
    "gate_infidelity": 1e-6,
    "leakage": 1e-6,
    "unitarity": 1e-10,
}


def _propagator(cfg, args):
    steps = args.steps if args.steps is not None else cfg.propagator.steps_per_segment
    return PropagatorConfig(steps_per_segment=steps)


def _out(cfg, args, name):
    directory = args.output if args.output is not None else cfg.output.directory
    return os.path.join(directory, name)


def _fmt(cfg, args):
    return args.format if args.format is not None else cfg.output.format


def _table(cfg, args, stem, header, rows):
    if _fmt(cfg, args) == "json":
        records = [dict(zip(header, r)) for r in rows]
        return {_out(cfg, args, stem + ".json"): json_text(records)}
    return {_out(cfg, args, stem + ".csv"): csv_text(header, rows)}


def _setup(cfg, base_dir, validate=True):
    r = resolve_path(cfg, base_dir, validate=validate)
    f = one_qubit_frame(r.theta, r.phi, r.path)
    m = build_model(cfg.model.family, r.theta, r.phi, r.path)
    g = GateSpec.for_path(r.theta, r.phi, r.path)
    return r, f, m, g


def cmd_gate(cfg, base_dir, args):
    eps = cfg.single_epsilon("gate")
    r, f, m, g = _setup(cfg, base_dir)
    prop = _propagator(cfg, args)
    u = evolve_operator(apply_error(m, eps), config=prop)
    report = extract_gate(u, f, g, prop)
    hol = holonomy_report(f, m, g, steps=prop.steps_per_segment)
    doc = {
        "family": cfg.model.family,
        "path_kind": cfg.path.kind,
        "theta": r.theta,
        "phi": r.phi,
        "phi_tau": g.phi_tau,
        "epsilon": eps,
        "steps_per_segment": prop.steps_per_segment,
        **report.to_dict(),
        "holonomy": hol.to_dict(),
    }
    return {_out(cfg, args, "gate_report.json"): json_text(doc)}


def cmd_robustness(cfg, base_dir, args):
    p = cfg.path
    if p.kind != "hadamard":
        raise ConfigError("robustness runs the Hadamard benchmark; set path.kind to 'hadamard'")
    rows = run_hadamard_robustness(cfg.epsilon_list(), family=cfg.model.family,
                                   config=_propagator(cfg, args),
                                   durations=(p.tau1, p.tau2, p.tau))
    return _table(cfg, args, "robustness", ["epsilon", "fidelity"],
                  [(row.epsilon, row.fidelity) for row in rows])


def cmd_pulse_area(cfg, base_dir, args):
    p = cfg.path
    if p.kind == "custom":
        raise ConfigError("pulse-area scans the three-segment loop; path.kind cannot be 'custom'")
    rows = run_pulse_area_scan(cfg.scan.grid(), p.tau1, p.tau2, p.tau)
    crossings = find_crossover(rows)
    if crossings:
        print("area crossover at alpha0 = " + ", ".join(f"{c:.6f}" for c in crossings),
              file=sys.stderr)
    return _table(cfg, args, "pulse_area", ["alpha", "area_k22zero", "area_k22negbeta", "phi_tau"],
                  [(row.alpha0, row.area_k22_zero, row.area_k22_negbeta, row.phi_tau)
                   for row in rows])


def cmd_population(cfg, base_dir, args):
    eps = cfg.single_epsilon("population")
    _, f, m, g = _setup(cfg, base_dir)
    psi0 = np.array([1, 0, 0], dtype=np.complex128)
    samples = args.samples if args.samples is not None else 201
    t, pop = population_trace(apply_error(m, eps), f, g, psi0, samples, _propagator(cfg, args))
    return _table(cfg, args, "population", ["t_over_tau", "population"], list(zip(t, pop)))


def cmd_two_qubit(cfg, base_dir, args):
    r = resolve_path(cfg, base_dir)
    if r.alpha0 is None and cfg.path.kind == "custom":
        rep = run_two_qubit_demo(r.theta, r.phi, None, cfg.model.family,
                                 _propagator(cfg, args), path=r.path)
    else:
        pc = cfg.path
        rep = run_two_qubit_demo(r.theta, r.phi, r.alpha0, cfg.model.family,
                                 _propagator(cfg, args), durations=(pc.tau1, pc.tau2, pc.tau))
    doc = {"family": cfg.model.family, "theta": r.theta, "phi": r.phi, **rep.to_dict()}
    return {_out(cfg, args, "two_qubit_report.json"): json_text(doc)}


def cmd_export_pulse(cfg, base_dir, args):
    eps = cfg.single_epsilon("export-pulse")
    _, _, m, _ = _setup(cfg, base_dir)
    m = apply_error(m, eps)
    samples = args.samples if args.samples is not None else 1001
    sched = pulse_schedule(m, samples)
    cols = ["t", "delta", "omega", "kappa"]
    files = _table(cfg, args, "pulse", cols, list(zip(*(sched[c] for c in cols))))
    side = pulse_sidecar(m)
    side["k22_choice"] = cfg.model.family
    side["samples"] = samples
    files[_out(cfg, args, "pulse_meta.json")] = json_text(side)
    return files


def cmd_random_gates(cfg, base_dir, args):
    v = cfg.verification
    summary = run_gate_verification(v.trials, v.seed, _propagator(cfg, args))
    return {_out(cfg, args, "gate_verification.json"): json_text(summary.to_dict())}


def _check(results, name, fn):
    limit = THRESHOLDS[name]
    try:
        value = float(fn())
    except ContractViolation as exc:
        results[name] = {"value": None, "threshold": limit, "pass": False, "error": str(exc)}
        return
    ok = bool(np.isfinite(value) and value < limit)
    results[name] = {"value": value, "threshold": limit, "pass": ok}


def run_checks(cfg, base_dir, prop):
    r, f, m, g = _setup(cfg, base_dir, validate=False)
    path = r.path
    inv = path.invariant_residuals()
    times = np.linspace(0.0, path.tau, 1000)
    out = {}
    _check(out, "path_cyclicity", lambda: max(inv["alpha_start"], inv["alpha_end"]))
    _check(out, "path_continuity", lambda: max(inv["alpha_jump"], inv["beta_jump"]))
    _check(out, "frame_orthonormality", lambda: orthonormality_residual(f, times))
    _check(out, "frame_cyclicity", lambda: max_norm(
        computational_projector(f, path.tau) - computational_projector(f, 0.0)))

    def hermiticity():
        h = assemble(m, times)
        return max_norm(h - dag(h))

    _check(out, "hamiltonian_hermiticity", hermiticity)
    state = {}

    def report():
        if "hol" not in state:
            state["hol"] = holonomy_report(f, m, g, steps=prop.steps_per_segment)
        return state["hol"]

    _check(out, "a_closed_form", lambda: report().a_closed_form_residual)
    _check(out, "k_pattern", lambda: report().k_pattern_residual)
    _check(out, "commutation", lambda: report().commutation_residual)
    _check(out, "k22_cancellation", lambda: abs(report().k22_phase))
    _check(out, "solid_angle_vs_geometric", lambda: abs(wrap_angle(
        report().geometric_angle - np.mod(report().solid_angle, TWO_PI))))

    def gate():
        if "gate" not in state:
            state["gate"] = extract_gate(evolve_operator(m, config=prop), f, g, prop)
        return state["gate"]

    _check(out, "gate_infidelity", lambda: 1.0 - gate().fidelity_vs_analytic)
    _check(out, "leakage", lambda: gate().leakage)
    _check(out, "unitarity", lambda: gate().unitarity_residual)
    return out


def cmd_verify(cfg, base_dir, args):
    checks = run_checks(cfg, base_dir, _propagator(cfg, args))
    ok = all(c["pass"] for c in checks.values())
    for name, c in checks.items():
        value = "error" if c["value"] is None else f"{c['value']:.3e}"
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {name:<26} {value:>10}  (< {c['threshold']:.0e})",
              file=sys.stderr)
    doc = {"all_pass": ok, "family": cfg.model.family, "path_kind": cfg.path.kind,
           "checks": checks}
    return {_out(cfg, args, "verify_report.json"): json_text(doc)}, ok


COMMANDS = {
    "gate": cmd_gate,
    "robustness": cmd_robustness,
    "pulse-area": cmd_pulse_area,
    "population": cmd_population,
    "two-qubit": cmd_two_qubit,
    "verify": cmd_verify,
    "export-pulse": cmd_export_pulse,
    "random-gates": cmd_random_gates,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="holonomic",
        description="Holonomic gate design, propagation and verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--output", metavar="DIR", help="output directory (overrides config)")
        p.add_argument("--steps", type=int, metavar="N", help="steps per path segment")
        p.add_argument("--format", choices=("csv", "json"), help="format of tabular outputs")
        p.add_argument("--samples", type=int, metavar="N",
                       help="grid size for population and export-pulse")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.steps is not None and args.steps < 16:
            raise ConfigError("--steps must be >= 16")
        if args.samples is not None and args.samples < 2:
            raise ConfigError("--samples must be >= 2")
        cfg, base_dir = load_config(args.config)
        result = COMMANDS[args.command](cfg, base_dir, args)
        ok = True
        if isinstance(result, tuple):
            result, ok = result
        write_all(result)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ContractViolation as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in result:
        print(path)
    return EXIT_OK if ok else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
