"""Time-ordered propagation with the exponential midpoint rule.

Each segment of the model carries a fixed uniform grid of
``steps_per_segment`` steps; every step contributes ``exp(-i H(t_mid) dt)``
and later steps multiply from the left. Windows that start or stop between
grid nodes get a shortened step there, so evolutions over sub-windows compose
exactly with the full-period evolution whenever the cut lies on a node.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import UnitarityError
from .holonomy import target_gate
from .linalg import expm_hermitian_stack, gate_fidelity, max_norm, unitarity_residual


@dataclass(frozen=True)
class PropagatorConfig:
    steps_per_segment: int = 4000
    unitarity_tolerance: float = 1e-10
    convergence_check: bool = False
    convergence_tolerance: float = 1e-6

    def __post_init__(self):
        if self.steps_per_segment < 16:
            raise ValueError("steps_per_segment must be >= 16")


@dataclass(frozen=True)
class PiecewiseHamiltonian:
    """Arbitrary piecewise Hamiltonian: ``funcs[k](t)`` returns an ``(n, d, d)``
    stack on ``intervals[k]``. Lets the propagator run things that are not
    Lambda-system models (benchmarks, time-dilated copies)."""

    intervals: Sequence
    funcs: Sequence[Callable]
    dimension: int

    def hamiltonian_on(self, k, t):
        return self.funcs[k](np.atleast_1d(np.asarray(t, dtype=float)))


def time_dilated(m, factor):
    """``H'(s) = H(s / factor)`` on the stretched window ``[0, factor * tau]``.

    Propagating this copy equals propagating ``factor * H`` over the original
    window (substitute ``s = factor t``).
    """
    intervals = [(factor * a, factor * b) for a, b in m.intervals]
    funcs = [(lambda s, k=k: m.hamiltonian_on(k, s / factor)) for k in range(len(intervals))]
    return PiecewiseHamiltonian(intervals, funcs, m.dimension)


def _segment_steps(a, b, steps, lo, hi):
    """Midpoints and widths of the grid steps of ``[a, b]`` clipped to ``[lo, hi]``."""
    u, v = max(a, lo), min(b, hi)
    if v <= u:
        return np.empty(0), np.empty(0)
    h = (b - a) / steps
    snap = 1e-9 * h
    nodes = a + h * np.arange(steps + 1)
    nodes[-1] = b
    inner = nodes[(nodes > u + snap) & (nodes < v - snap)]
    edges = np.concatenate(([u], inner, [v]))
    return 0.5 * (edges[1:] + edges[:-1]), np.diff(edges)


def step_plan(m, t0, t1, steps):
    """``[(segment_index, midpoints, widths), ...]`` covering ``[t0, t1]``."""
    plan = []
    for k, (a, b) in enumerate(m.intervals):
        mids, dts = _segment_steps(a, b, steps, t0, t1)
        if mids.size:
            plan.append((k, mids, dts))
    return plan


def _step_unitaries(m, plan):
    blocks = [expm_hermitian_stack(m.hamiltonian_on(k, mids), dts) for k, mids, dts in plan]
    if not blocks:
        return np.zeros((0, m.dimension, m.dimension), dtype=np.complex128)
    return np.concatenate(blocks)


def _window(m, t0, t1):
    start, stop = m.intervals[0][0], m.intervals[-1][1]
    t0 = start if t0 is None else float(t0)
    t1 = stop if t1 is None else float(t1)
    if not start - 1e-12 <= t0 <= t1 <= stop + 1e-12:
        raise ValueError(f"window [{t0}, {t1}] outside [{start}, {stop}]")
    return t0, t1


def _evolve(m, t0, t1, steps, tol):
    u = kernels.ordered_product(_step_unitaries(m, step_plan(m, t0, t1, steps)))
    drift = unitarity_residual(u)
    if drift > tol:
        raise UnitarityError(
            f"unitarity residual {drift:.3g} exceeds {tol:.3g}; increase steps_per_segment")
    return u


def evolve_operator(m, t0=None, t1=None, config=PropagatorConfig()):
    """``T exp(-i integral_{t0}^{t1} H dt)`` over the model's level basis.

    Raises
    ------
    SingularityError
        If the Hamiltonian diverges at a step midpoint.
    UnitarityError
        On unitarity drift, or when ``convergence_check`` is set and doubling
        the step count moves the result by more than ``convergence_tolerance``.
    """
    t0, t1 = _window(m, t0, t1)
    n = config.steps_per_segment
    u = _evolve(m, t0, t1, n, config.unitarity_tolerance)
    if config.convergence_check:
        fine = _evolve(m, t0, t1, 2 * n, config.unitarity_tolerance)
        change = max_norm(fine - u)
        if change > config.convergence_tolerance:
            raise UnitarityError(
                f"not converged: doubling steps changes U by {change:.3g}; "
                "increase steps_per_segment")
    return u


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (samples, d)

    def populations(self, target):
        """``|<target|psi(t)>|^2`` along the trajectory."""
        return np.abs(self.states @ np.conj(target)) ** 2

    def norms(self):
        return np.linalg.norm(self.states, axis=1)


def evolve_state(m, psi0, sample_count=201, config=PropagatorConfig()):
    """Propagate ``psi0`` over the whole period, sampled at ``sample_count``
    uniform times. Samples between grid nodes finish with one shortened
    midpoint step from the preceding node."""
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if abs(np.linalg.norm(psi0) - 1) > 1e-12:
        raise ValueError("initial state must be normalized")
    if sample_count < 2:
        raise ValueError("sample_count must be >= 2")
    t0, t1 = _window(m, None, None)
    plan = step_plan(m, t0, t1, config.steps_per_segment)
    unitaries = _step_unitaries(m, plan)
    states = kernels.propagate_states(unitaries, psi0)
    seg_of_step = np.concatenate([np.full(mids.size, k) for k, mids, _ in plan])
    starts = np.concatenate([mids - dts / 2 for _, mids, dts in plan])
    nodes = np.append(starts, t1)

    times = np.linspace(t0, t1, sample_count)
    out = np.empty((sample_count, m.dimension), dtype=np.complex128)
    snap = 1e-9 * np.min(np.diff(nodes))
    for i, s in enumerate(times):
        j = int(np.searchsorted(nodes, s + snap, side="right") - 1)
        j = min(j, len(nodes) - 1)
        if abs(nodes[j] - s) <= snap:
            out[i] = states[j]
            continue
        dt = s - nodes[j]
        h = m.hamiltonian_on(int(seg_of_step[j]), np.array([nodes[j] + dt / 2]))
        out[i] = expm_hermitian_stack(h, dt)[0] @ states[j]
    drift = float(np.max(np.abs(np.linalg.norm(out, axis=1) - 1)))
    if drift > config.unitarity_tolerance:
        raise UnitarityError(f"norm drift {drift:.3g} exceeds {config.unitarity_tolerance:.3g}")
    return Trajectory(times, out)


@dataclass(frozen=True)
class GateReport:
    realized_gate: np.ndarray
    leakage: float
    fidelity_vs_analytic: float
    unitarity_residual: float
    target_gate: np.ndarray = field(repr=False)
    population_trace: Optional[tuple] = field(default=None, repr=False)

    def to_dict(self):
        g = self.realized_gate
        out = {
            "realized_gate": {"real": np.real(g).tolist(), "imag": np.imag(g).tolist()},
            "target_gate": {"real": np.real(self.target_gate).tolist(),
                            "imag": np.imag(self.target_gate).tolist()},
            "leakage": self.leakage,
            "fidelity_vs_analytic": self.fidelity_vs_analytic,
            "unitarity_residual": self.unitarity_residual,
        }
        if self.population_trace is not None:
            t, p = self.population_trace
            out["population_trace"] = {"t": list(map(float, t)), "population": list(map(float, p))}
        return out


def extract_gate(u, f, g, config=PropagatorConfig(), target=None):
    """Restrict a full evolution operator to S(0) and compare with the analytic gate.

    Leakage is worst case over computational inputs: one minus the smallest
    squared singular value of the computational block.
    """
    idx = list(f.computational_levels)
    block = np.asarray(u)[np.ix_(idx, idx)]
    smin = np.linalg.svd(block, compute_uv=False).min()
    goal = target_gate(f, g) if target is None else target
    return GateReport(
        realized_gate=block,
        leakage=float(max(0.0, 1.0 - smin ** 2)),
        fidelity_vs_analytic=gate_fidelity(block, goal),
        unitarity_residual=unitarity_residual(u),
        target_gate=goal,
    )
