"""Connection and dynamical matrices on the computational frame, the
commutation check, dynamical-phase cancellation and the closed-form gates.

With ``A_lk = i <nu_l|d nu_k/dt>`` and ``K_lk = <nu_l|H|nu_k>`` the frame
coefficients obey ``dC/dt = i (A - K) C``; when ``[A(t), K(t')] = 0`` the
period map factorizes into a geometric and a dynamical factor, and the gate is
purely holonomic once the dynamical factor is the identity.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .hamiltonian import assemble
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, dag, expm_hermitian_stack, max_norm
from .path import TWO_PI, segment_integral, solid_angle, wrap_angle


def connection_matrix(f, t):
    """``A(t)``, shape ``(L, L)`` (or stacked for array ``t``)."""
    v, dv = f.basis_and_derivative(t)
    L = f.computational_dim
    vl, dvl = v[..., :, :L], dv[..., :, :L]
    return 1j * dag(vl) @ dvl


def dynamical_matrix(f, m, t):
    """``K(t)`` from direct matrix elements of the assembled Hamiltonian."""
    v = f.basis_at(t)
    L = f.computational_dim
    vl = v[..., :, :L]
    return dag(vl) @ assemble(m, t) @ vl


def a_closed_form(f, t):
    """Expected connection: zero except ``A[moving] = -dbeta (1 - cos alpha) / 2``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a, _, _, db = f.path.sample(t)
    L = f.computational_dim
    out = np.zeros((t.shape[0], L, L), dtype=np.complex128)
    out[:, f.moving_index, f.moving_index] = -0.5 * db * (1 - np.cos(a))
    return out


def commutator_grid_residual(a_stack, k_stack):
    """``max_{i,j} ||[A_i, K_j]||_max`` over every pair from two stacks."""
    ak = np.einsum("iab,jbc->ijac", a_stack, k_stack)
    ka = np.einsum("jab,ibc->ijac", k_stack, a_stack)
    return max_norm(ak - ka)


def _regular_samples(fn, times):
    """Evaluate ``fn`` per time, dropping the ones that raise a singularity."""
    from .errors import SingularityError

    kept = []
    for s in times:
        try:
            kept.append(fn(np.atleast_1d(s))[0])
        except SingularityError:
            continue
    return np.array(kept)


def commutation_residual(f, m, grid_size=64):
    """Max over a ``grid_size x grid_size`` grid of ``||[A(t), K(t')]||_max``.

    Grid times are uniform on ``[0, tau]``; singular model times are skipped.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    times = np.linspace(0.0, f.path.tau, grid_size)
    a_stack = connection_matrix(f, times)
    k_stack = _regular_samples(lambda s: dynamical_matrix(f, m, s), times)
    if k_stack.size == 0:
        return 0.0
    return commutator_grid_residual(a_stack, k_stack)


def _k22(f, m, s):
    v = f.basis_at(np.atleast_1d(s))[:, :, f.moving_index]
    h = assemble(m, np.atleast_1d(s))
    return np.real(np.einsum("ni,nij,nj->n", np.conj(v), h, v))


def k22_integral(f, m):
    """Raw ``integral_0^tau K22 dt`` by adaptive quadrature per segment."""
    total = 0.0
    for seg in f.path.segments:
        total += segment_integral(seg, lambda s: float(_k22(f, m, s)[0]))
    return total


def k22_cancellation(f, m):
    """Dynamical phase ``integral K22 dt`` reduced to (-pi, pi].

    Only ``exp(-i integral K22 dt)`` enters the gate, so the integral has to
    vanish modulo 2 pi; for the ``K22 = -dbeta`` family on a loop that winds
    once in beta the raw integral is ``-2 pi``.
    """
    return wrap_angle(k22_integral(f, m))


def _step_grid(seg, steps):
    dt = seg.duration / steps
    return seg.t_start + (np.arange(steps) + 0.5) * dt, dt


def coefficient_propagator(f, m, steps, part="full"):
    """Ordered product of ``exp(i (A - K) dt)`` at step midpoints, ``steps`` per segment.

    ``part`` selects ``"full"`` (A - K), ``"geometric"`` (A only) or
    ``"dynamical"`` (-K only); the latter two are the factors of the
    commuting factorization.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    factors = []
    for seg in f.path.segments:
        mids, dt = _step_grid(seg, steps)
        gen = np.zeros((steps, f.computational_dim, f.computational_dim), dtype=np.complex128)
        if part in ("full", "geometric"):
            gen -= connection_matrix(f, mids)
        if part in ("full", "dynamical"):
            gen += dynamical_matrix(f, m, mids)
        if part not in ("full", "geometric", "dynamical"):
            raise ValueError(f"unknown part {part!r}")
        # exp(i (A - K) dt) = exp(-i (K - A) dt)
        factors.append(expm_hermitian_stack((gen + dag(gen)) / 2, dt))
    return kernels.ordered_product(np.concatenate(factors))


def geometric_angle(f, steps=4000):
    """Rotation angle read off the geometric factor, in [0, 2 pi)."""
    c = coefficient_propagator(f, None, steps, part="geometric")
    k = f.moving_index
    angle = float(np.mod(-np.angle(c[k, k]), TWO_PI))
    return 0.0 if TWO_PI - angle < 1e-12 else angle


def analytic_gate(g):
    """``exp(i phi_tau n.sigma / 2) = cos(phi_tau/2) I + i sin(phi_tau/2) n.sigma``."""
    nx, ny, nz = g.axis
    ns = nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z
    return np.cos(g.phi_tau / 2) * np.eye(2) + 1j * np.sin(g.phi_tau / 2) * ns


def holonomy_gate(g):
    """``|nu_1><nu_1| + e^{-i phi_tau} |nu_2><nu_2|``: the analytic gate with its
    global phase fixed as it is realized on S(0)."""
    c, s = np.cos(g.theta / 2), np.sin(g.theta / 2)
    dark = np.array([c, s * np.exp(1j * g.phi)])
    bright = np.array([s * np.exp(-1j * g.phi), -c])
    return np.outer(dark, dark.conj()) + np.exp(-1j * g.phi_tau) * np.outer(bright, bright.conj())


def target_gate(f, g):
    """Computational-subspace target for a frame: the rotation for one qubit,
    ``diag(1, 1, U)`` for the two-qubit register."""
    if f.kind == "one_qubit":
        return analytic_gate(g)
    out = np.eye(4, dtype=np.complex128)
    out[2:, 2:] = holonomy_gate(g)
    return out


@dataclass(frozen=True)
class HolonomyReport:
    a_closed_form_residual: float
    commutation_residual: float
    k22_integral: float
    k22_phase: float
    k_pattern_residual: float
    geometric_angle: float
    solid_angle: float
    analytic_gate: np.ndarray = field(repr=False)

    def to_dict(self):
        g = self.analytic_gate
        return {
            "a_closed_form_residual": self.a_closed_form_residual,
            "commutation_residual": self.commutation_residual,
            "k22_integral": self.k22_integral,
            "k22_phase": self.k22_phase,
            "k_pattern_residual": self.k_pattern_residual,
            "geometric_angle": self.geometric_angle,
            "solid_angle": self.solid_angle,
            "analytic_gate": {"real": np.real(g).tolist(), "imag": np.imag(g).tolist()},
        }


def k_pattern_residual(f, m, t):
    """Largest entry of K(t) outside the moving diagonal element."""
    k = np.array(dynamical_matrix(f, m, t))
    i = f.moving_index
    k[..., i, i] = 0.0
    return max_norm(k)


def holonomy_report(f, m, g, samples=500, grid_size=64, steps=4000):
    times = np.linspace(0.0, f.path.tau, samples)
    a_res = max_norm(connection_matrix(f, times) - a_closed_form(f, times))
    raw = k22_integral(f, m)
    return HolonomyReport(
        a_closed_form_residual=a_res,
        commutation_residual=commutation_residual(f, m, grid_size),
        k22_integral=raw,
        k22_phase=wrap_angle(raw),
        k_pattern_residual=k_pattern_residual(f, m, times),
        geometric_angle=geometric_angle(f, steps),
        solid_angle=solid_angle(f.path),
        analytic_gate=target_gate(f, g),
    )
