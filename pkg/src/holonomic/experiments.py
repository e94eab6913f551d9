"""Packaged reproductions: pulse-area comparison, Hadamard robustness sweep,
random-gate verification and the two-qubit block check."""
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import SingularityError
from .frame import one_qubit_frame, two_qubit_frame
from .hamiltonian import apply_error, model_k22_negbeta, model_k22_zero, pulse_area
from .holonomy import commutation_residual, k22_cancellation, target_gate
from .linalg import max_norm, state_fidelity
from .path import GateSpec, make_cap_loop, make_hadamard_path
from .propagator import PropagatorConfig, evolve_operator, evolve_state, extract_gate

HADAMARD_EPSILONS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
HADAMARD_FIDELITIES = (0.9999, 0.9991, 0.9956, 0.9874, 0.9727, 0.9509)

HADAMARD_THETA = np.pi / 4
HADAMARD_PHI = 0.0

FAMILIES = {"k22_zero": model_k22_zero, "k22_negbeta": model_k22_negbeta}


def build_model(family, theta, phi, path, register="one"):
    try:
        factory = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return factory(theta, phi, path, register=register)


@dataclass(frozen=True)
class AreaRow:
    alpha0: float
    area_k22_zero: float
    area_k22_negbeta: float
    phi_tau: float
    flagged: bool = False


@dataclass(frozen=True)
class RobustnessRow:
    epsilon: float
    fidelity: float


def run_pulse_area_scan(alpha_grid, tau1=0.25, tau2=0.75, tau=1.0):
    """Integrated pulse areas of both families on the three-segment loop.

    Rows where the ``K22 = -dbeta`` family is singular carry ``nan`` for its
    area and ``flagged=True``.
    """
    rows = []
    for a0 in alpha_grid:
        p = make_cap_loop(float(a0), tau1, tau2, tau)
        area_zero = pulse_area(model_k22_zero(0.0, 0.0, p))
        try:
            area_neg, flagged = pulse_area(model_k22_negbeta(0.0, 0.0, p)), False
        except SingularityError:
            area_neg, flagged = float("nan"), True
        rows.append(AreaRow(float(a0), area_zero, area_neg,
                            float(np.pi * (1 - np.cos(a0))), flagged))
    return rows


def find_crossover(rows):
    """Colatitudes where ``A_zero - A_negbeta`` changes sign, linearly interpolated."""
    usable = [r for r in rows if not r.flagged]
    out = []
    for left, right in zip(usable, usable[1:]):
        d0 = left.area_k22_zero - left.area_k22_negbeta
        d1 = right.area_k22_zero - right.area_k22_negbeta
        if d0 == 0:
            out.append(left.alpha0)
        elif d0 * d1 < 0:
            out.append(left.alpha0 + (right.alpha0 - left.alpha0) * d0 / (d0 - d1))
    if usable and usable[-1].area_k22_zero == usable[-1].area_k22_negbeta and len(usable) > 1:
        out.append(usable[-1].alpha0)
    return sorted(set(out))


def hadamard_setup(family="k22_zero", tau1=0.25, tau2=0.75, tau=1.0):
    """Path, model, frame and gate of the Hadamard benchmark (theta = pi/4, phi = 0)."""
    p = make_hadamard_path(tau1, tau2, tau)
    m = build_model(family, HADAMARD_THETA, HADAMARD_PHI, p)
    f = one_qubit_frame(HADAMARD_THETA, HADAMARD_PHI, p)
    return p, m, f, GateSpec.for_path(HADAMARD_THETA, HADAMARD_PHI, p)


def desired_output(f, g, psi0):
    """Analytic gate applied to the computational part of ``psi0``, padded to
    the full level space."""
    L = f.computational_dim
    out = np.zeros(f.dimension, dtype=np.complex128)
    out[:L] = target_gate(f, g) @ np.asarray(psi0)[:L]
    return out


def run_hadamard_robustness(eps_list=HADAMARD_EPSILONS, family="k22_zero",
                            config=PropagatorConfig(), durations=(0.25, 0.75, 1.0)):
    """State fidelity ``|<phi_d|phi_r>|^2`` from input ``|0>`` under a common
    scale error on detuning and envelope.

    ``family="k22_zero"`` is the reference benchmark; ``"k22_negbeta"`` is an
    extra curve with no reference values.
    """
    _, m, f, g = hadamard_setup(family, *durations)
    psi0 = np.array([1, 0, 0], dtype=np.complex128)
    target = desired_output(f, g, psi0)
    rows = []
    for eps in eps_list:
        u = evolve_operator(apply_error(m, float(eps)), config=config)
        rows.append(RobustnessRow(float(eps), state_fidelity(target, u @ psi0)))
    return rows


def population_trace(m, f, g, psi0, samples=201, config=PropagatorConfig()):
    """``(t / tau, P(t))`` with ``P(t) = |<phi_d|psi(t)>|^2``."""
    traj = evolve_state(m, psi0, samples, config)
    p = traj.populations(desired_output(f, g, psi0))
    return traj.times / m.path.tau, np.minimum(p, 1.0)


@dataclass
class VerificationSummary:
    trials: list = field(default_factory=list)
    seed: int = 0

    def by_family(self, family):
        return [t for t in self.trials if t["family"] == family]

    @property
    def min_fidelity(self):
        return min(t["fidelity"] for t in self.trials)

    @property
    def max_leakage(self):
        return max(t["leakage"] for t in self.trials)

    @property
    def max_commutation_residual(self):
        return max(t["commutation_residual"] for t in self.trials)

    @property
    def max_k22_phase(self):
        return max(abs(t["k22_phase"]) for t in self.trials)

    @property
    def max_unitarity_residual(self):
        return max(t["unitarity_residual"] for t in self.trials)

    def to_dict(self):
        return {
            "seed": self.seed,
            "count": len(self.trials),
            "min_fidelity": self.min_fidelity,
            "max_leakage": self.max_leakage,
            "max_commutation_residual": self.max_commutation_residual,
            "max_abs_k22_phase": self.max_k22_phase,
            "max_unitarity_residual": self.max_unitarity_residual,
            "trials": self.trials,
        }


def random_configurations(trials, seed):
    """Seeded ``(theta, phi, alpha0)`` draws away from the singular edges."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.1, np.pi - 0.1, trials)
    phi = rng.uniform(0.0, 2 * np.pi, trials)
    alpha0 = rng.uniform(0.2, np.pi - 0.2, trials)
    return list(zip(theta.tolist(), phi.tolist(), alpha0.tolist()))


def run_gate_verification(trials=20, seed=2024, config=PropagatorConfig(), grid_size=48,
                          families=("k22_zero", "k22_negbeta")):
    """Propagate random holonomic gates for both families and compare with the
    closed-form rotation; also records the commutation and cancellation checks."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    summary = VerificationSummary(seed=seed)
    for i, (theta, phi, a0) in enumerate(random_configurations(trials, seed)):
        p = make_cap_loop(a0)
        f = one_qubit_frame(theta, phi, p)
        g = GateSpec.for_path(theta, phi, p)
        for family in families:
            m = build_model(family, theta, phi, p)
            report = extract_gate(evolve_operator(m, config=config), f, g)
            summary.trials.append({
                "index": i,
                "family": family,
                "theta": theta,
                "phi": phi,
                "alpha0": a0,
                "phi_tau": g.phi_tau,
                "fidelity": report.fidelity_vs_analytic,
                "leakage": report.leakage,
                "unitarity_residual": report.unitarity_residual,
                "commutation_residual": commutation_residual(f, m, grid_size),
                "k22_phase": k22_cancellation(f, m),
            })
    return summary


@dataclass(frozen=True)
class TwoQubitReport:
    gate: object  # GateReport on the four computational levels
    one_qubit_gate: np.ndarray
    off_block_norm: float
    passthrough_residual: float
    block_residual: float

    def to_dict(self):
        out = self.gate.to_dict()
        u1 = self.one_qubit_gate
        out.update({
            "one_qubit_gate": {"real": np.real(u1).tolist(), "imag": np.imag(u1).tolist()},
            "off_block_norm": self.off_block_norm,
            "passthrough_residual": self.passthrough_residual,
            "block_residual": self.block_residual,
        })
        return out


def run_two_qubit_demo(theta, phi, alpha0, family="k22_zero", config=PropagatorConfig(),
                       durations=(0.25, 0.75, 1.0), path=None):
    """Five-level evolution with ``|00>``, ``|01>`` decoupled; the ``{|10>, |11>}``
    block is checked against a one-qubit run on the same path and family."""
    p = make_cap_loop(alpha0, *durations) if path is None else path
    g = GateSpec.for_path(theta, phi, p)
    f2 = two_qubit_frame(theta, phi, p)
    m2 = build_model(family, theta, phi, p, register="two")
    report = extract_gate(evolve_operator(m2, config=config), f2, g)

    m1 = build_model(family, theta, phi, p)
    u1 = evolve_operator(m1, config=config)[:2, :2]
    block = report.realized_gate
    off = max(max_norm(block[:2, 2:]), max_norm(block[2:, :2]))
    passthrough = max_norm(block[:2, :2] - np.eye(2))
    return TwoQubitReport(report, u1, off, passthrough, max_norm(block[2:, 2:] - u1))


def rows_as_dicts(rows):
    return [asdict(r) for r in rows]


__all__ = [
    "AreaRow", "RobustnessRow", "VerificationSummary", "TwoQubitReport",
    "HADAMARD_EPSILONS", "HADAMARD_FIDELITIES", "run_pulse_area_scan", "find_crossover",
    "run_hadamard_robustness", "population_trace", "run_gate_verification",
    "run_two_qubit_demo", "hadamard_setup",
]
