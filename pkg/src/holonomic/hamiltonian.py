"""Lambda-system Hamiltonians that keep the computational frame cyclic and
commuting.

Every model has the form ``H = Delta |e><e| + (W |e><b| + h.c.)`` with the
complex envelope ``W = Omega e^{i kappa}``. Matching it to the frame leaves one
free real function, ``q = dalpha * cot(kappa - beta)``, in terms of which

    Delta = -q cot(alpha) - dbeta
    W     = (i dalpha + q) e^{i beta} / 2
    K22   = (q / 2) tan(alpha / 2) - dbeta sin^2(alpha / 2)

The two explicit families fix ``K22 = 0`` (``q = dbeta sin(alpha)``) and
``K22 = -dbeta`` (``q = -2 dbeta cot(alpha/2) cos^2(alpha/2)``) and are
evaluated from their regular closed forms. Custom ``K22(t)`` targets and
prescribed drive phases ``kappa(t)`` go through ``q``.
"""
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ContractViolation, SingularityError
from .frame import lambda_states
from .path import segment_integral, wrap_angle

# below this colatitude the K22 = -dbeta family is refused wherever dbeta != 0
SINGULAR_ALPHA = 1e-3

K22_CHOICES = ("zero", "neg_beta_dot", "custom")
REGISTERS = ("one", "two")


@dataclass(frozen=True)
class ErrorModel:
    """Common multiplicative miscalibration ``Delta, W -> (1 + epsilon) Delta, W``."""

    epsilon: float

    def __post_init__(self):
        if not abs(self.epsilon) < 1:
            raise ValueError(f"|epsilon| must be < 1, got {self.epsilon}")


def _first_bad(t, mask):
    return float(np.atleast_1d(t)[np.argmax(mask)])


def _coefficients_k22_zero(a, b, da, db):
    delta = -db * (1 + np.cos(a))
    drive = 0.5 * (1j * da + db * np.sin(a)) * np.exp(1j * b)
    gamma = db * (1 + np.cos(a / 2) ** 2)
    return delta, drive, gamma


def _coefficients_k22_negbeta(a, b, da, db, t, alpha_min):
    moving = db != 0
    bad = moving & ((a < alpha_min) | ~np.isfinite(a))
    if np.any(bad):
        tb = _first_bad(t, bad)
        raise SingularityError(
            f"K22 = -dbeta family is singular at t = {tb:.17g}: cot(alpha/2) diverges "
            f"(alpha < {alpha_min:g} while dbeta != 0)", time=tb)
    cot_half = np.zeros_like(a)
    np.divide(1.0, np.tan(a / 2), out=cot_half, where=moving)
    c2 = np.cos(a / 2) ** 2
    delta = db * np.cos(a) * cot_half ** 2 - db
    drive = 0.5 * (1j * da - 2 * db * cot_half * c2) * np.exp(1j * b)
    gamma = db * (1 - cot_half ** 2 * c2)
    return delta, drive, gamma


def _coefficients_from_q(a, b, da, db, q, t):
    active = q != 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        delta = np.where(active, -q / np.tan(a), 0.0) - db
        gamma = db + np.where(active, 0.5 * q / np.tan(a / 2), 0.0)
        drive = 0.5 * (1j * da + q) * np.exp(1j * b)
    bad = active & (np.abs(np.sin(a)) < 1e-12) | ~np.isfinite(delta) | ~np.isfinite(drive)
    if np.any(bad):
        tb = _first_bad(t, bad)
        raise SingularityError(
            f"cot(alpha) diverges with nonzero coefficient at t = {tb:.17g}", time=tb)
    return delta, drive, gamma


@dataclass(frozen=True)
class LambdaModel:
    """Driving-Hamiltonian description tied to a path and a bright-state axis.

    ``scale`` is the systematic error factor ``1 + epsilon``; ``register``
    selects the 3-level one-qubit space or the 5-level two-qubit space.
    """

    path: object
    theta: float
    phi: float
    k22_choice: str = "zero"
    scale: float = 1.0
    register: str = "one"
    k22_target: Optional[Callable] = None
    kappa_fn: Optional[Callable] = None
    singular_alpha: float = SINGULAR_ALPHA

    def __post_init__(self):
        if self.k22_choice not in K22_CHOICES:
            raise ValueError(f"k22_choice must be one of {K22_CHOICES}")
        if self.register not in REGISTERS:
            raise ValueError(f"register must be one of {REGISTERS}")
        if self.k22_choice == "custom" and (self.k22_target is None) == (self.kappa_fn is None):
            raise ValueError("custom models need exactly one of k22_target or kappa_fn")

    # -- geometry of the register ------------------------------------------
    @property
    def dimension(self):
        return 3 if self.register == "one" else 5

    @property
    def breakpoints(self):
        return self.path.breakpoints

    @property
    def intervals(self):
        return [(s.t_start, s.t_end) for s in self.path.segments]

    def bright_state(self):
        _, bright, _ = lambda_states(self.theta, self.phi)
        if self.register == "one":
            return bright
        out = np.zeros(5, dtype=np.complex128)
        out[2:4] = bright[:2]
        return out

    @property
    def excited_index(self):
        return self.dimension - 1

    # -- coefficients --------------------------------------------------------
    def _q(self, a, b, da, db, t):
        if self.k22_target is not None:
            num = np.asarray(self.k22_target(t), dtype=float) + db * np.sin(a / 2) ** 2
            active = num != 0
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(active, 2 * num / np.tan(a / 2), 0.0)
        kappa = np.asarray(self.kappa_fn(t), dtype=float)
        s = np.sin(kappa - b)
        c = np.cos(kappa - b)
        indeterminate = (np.abs(s) < 1e-12) & (np.abs(da) < 1e-14)
        if np.any(indeterminate):
            tb = _first_bad(t, indeterminate)
            raise SingularityError(
                f"indeterminate dalpha * cot(kappa - beta) at t = {tb:.17g}; "
                "use the explicit K22 families for this path", time=tb)
        cot = np.where(np.abs(c) < 1e-12, 0.0, c / np.where(s == 0, 1.0, s))
        return np.where(da == 0, 0.0, da * cot)

    def coefficients_from_samples(self, a, b, da, db, t):
        """``(Delta, W, dgamma/dt)`` from path samples; ``W`` is complex."""
        a, b, da, db = (np.asarray(x, dtype=float) for x in (a, b, da, db))
        if self.k22_choice == "zero":
            delta, drive, gamma = _coefficients_k22_zero(a, b, da, db)
        elif self.k22_choice == "neg_beta_dot":
            delta, drive, gamma = _coefficients_k22_negbeta(a, b, da, db, t, self.singular_alpha)
        else:
            q = self._q(a, b, da, db, t)
            delta, drive, gamma = _coefficients_from_q(a, b, da, db, q, t)
        return self.scale * delta, self.scale * drive, gamma

    def coefficients(self, t):
        t = np.asarray(t, dtype=float)
        return self.coefficients_from_samples(*self.path.sample(t), t)

    def segment_coefficients(self, k, t):
        t = np.asarray(t, dtype=float)
        return self.coefficients_from_samples(*self.path.segments[k].evaluate(t), t)

    def delta(self, t):
        return self.coefficients(t)[0]

    def drive(self, t):
        """Complex envelope ``Omega e^{i kappa}``."""
        return self.coefficients(t)[1]

    def omega(self, t):
        return np.abs(self.drive(t))

    def kappa(self, t):
        return np.angle(self.drive(t))

    def gamma_rate(self, t):
        """Rate of the auxiliary-level phase; bookkeeping only, never enters the gate."""
        return self.coefficients(t)[2]

    def rabi_frequencies(self, t):
        """The two physical drives on ``|e><0|`` and ``|e><1|``."""
        w = self.drive(t)
        return (w * np.sin(self.theta / 2) * np.exp(1j * self.phi),
                -w * np.cos(self.theta / 2))

    # -- operators -----------------------------------------------------------
    def _operator(self, delta, drive):
        n = np.shape(delta)[0]
        d = self.dimension
        e = self.excited_index
        bright = self.bright_state()
        h = np.zeros((n, d, d), dtype=np.complex128)
        # |e><b| has row e equal to conj(b)
        h[:, e, :] = drive[:, None] * np.conj(bright)[None, :]
        h[:, :, e] = np.conj(h[:, e, :])
        h[:, e, e] = delta
        return h

    def hamiltonian_on(self, k, t):
        """Stack of H at times ``t`` evaluated with segment ``k``'s formulas."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        delta, drive, _ = self.segment_coefficients(k, t)
        return self._operator(delta, drive)


def model_k22_zero(theta, phi, path, register="one"):
    """Family with vanishing dynamical matrix, ``Delta = -dbeta (1 + cos alpha)``."""
    return LambdaModel(path, float(theta), float(phi), "zero", register=register)


def model_k22_negbeta(theta, phi, path, register="one"):
    """Family with ``K22 = -dbeta``; its dynamical phase is ``beta(tau) - beta(0)``,
    which vanishes modulo 2 pi on closed loops."""
    return LambdaModel(path, float(theta), float(phi), "neg_beta_dot", register=register)


def model_custom_k22(theta, phi, path, k22, register="one", check=True):
    """Model realizing a prescribed ``K22(t)``.

    With ``check`` the target must be finite and integrate to zero modulo
    2 pi over the period, otherwise :class:`ContractViolation` is raised.
    """
    m = LambdaModel(path, float(theta), float(phi), "custom", register=register, k22_target=k22)
    if check:
        total = 0.0
        for seg in path.segments:
            grid = np.linspace(seg.t_start, seg.t_end, 257)
            if not np.all(np.isfinite(k22(grid))):
                raise ContractViolation("custom K22 target is not finite")
            total += segment_integral(seg, lambda s: float(k22(np.asarray(s))))
        if abs(wrap_angle(total)) > 1e-8:
            raise ContractViolation(
                f"custom K22 target does not cancel: integral = {total:.6g}")
        m.coefficients(np.linspace(0.0, path.tau, 513))
    return m


def solve_parameters(path, kappa, theta=0.0, phi=0.0, register="one"):
    """Detuning and envelope for a prescribed drive phase ``kappa(t)``.

    Returns a model whose ``delta``, ``omega``, ``kappa`` and ``gamma_rate``
    follow from the frame-matching relations. ``omega`` is stored non-negative,
    so ``kappa`` may come back shifted by pi where ``sin(kappa - beta) < 0``.

    Raises
    ------
    SingularityError
        On evaluation, where ``dalpha = 0`` and ``kappa = beta`` simultaneously
        (indeterminate) or where ``cot(alpha)`` diverges with nonzero coefficient.
    """
    return LambdaModel(path, float(theta), float(phi), "custom", register=register,
                       kappa_fn=kappa)


def assemble(m, t):
    """Hermitian ``H(t)`` over the model's level basis (``(N, N)`` or ``(n, N, N)``)."""
    t = np.asarray(t, dtype=float)
    delta, drive, _ = m.coefficients(np.atleast_1d(t))
    h = m._operator(delta, drive)
    return h[0] if t.ndim == 0 else h


def apply_error(m, e):
    """Scale both detuning and envelope by ``1 + epsilon``; kappa is unchanged."""
    if not isinstance(e, ErrorModel):
        e = ErrorModel(float(e))
    return replace(m, scale=m.scale * (1 + e.epsilon))


def pulse_area(m):
    """``integral of Omega(t) dt`` over the period, segment by segment."""
    total = 0.0
    for k, seg in enumerate(m.path.segments):
        def integrand(s, k=k):
            return float(np.abs(m.segment_coefficients(k, np.atleast_1d(s))[1][0]))

        total += segment_integral(seg, integrand)
    return total


def pulse_area_closed_forms(alpha0):
    """Closed-form areas of the two families on the three-segment loop."""
    a1 = np.pi * np.sin(alpha0) + alpha0
    a2 = 2 * np.pi * np.cos(alpha0 / 2) ** 2 / np.tan(alpha0 / 2) + alpha0
    return float(a1), float(a2)


def pulse_schedule(m, samples):
    """Uniformly sampled ``t, delta, omega, kappa`` columns (``samples`` >= 2)."""
    if samples < 2:
        raise ValueError("need at least two samples")
    t = np.linspace(0.0, m.path.tau, samples)
    delta, drive, _ = m.coefficients(t)
    return {"t": t, "delta": delta, "omega": np.abs(drive), "kappa": np.angle(drive)}


def pulse_sidecar(m):
    return {
        "theta": m.theta,
        "phi": m.phi,
        "k22_choice": m.k22_choice,
        "tau": m.path.tau,
        "breakpoints": list(m.path.breakpoints),
        "scale": m.scale,
        "register": m.register,
    }
