"""Dense complex linear algebra for the 2-9 level systems used here.

States are 1-D ``complex128`` arrays and operators are square 2-D arrays over
a fixed, ordered level basis (see :data:`ONE_QUBIT_LEVELS` and
:data:`TWO_QUBIT_LEVELS`); units are chosen with hbar = 1.
"""
import numpy as np

from .errors import ContractViolation

ONE_QUBIT_LEVELS = ("0", "1", "e")
TWO_QUBIT_LEVELS = ("00", "01", "10", "11", "ee")

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

HERMITICITY_TOL = 1e-12


def ket(index, dim):
    """Basis vector ``|index>`` in a ``dim``-level space."""
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def dag(a):
    return np.conj(np.swapaxes(a, -1, -2))


def max_norm(a):
    """Largest absolute entry; the default residual norm."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def commutator(a, b):
    return a @ b - b @ a


def unitarity_residual(u):
    u = np.asarray(u)
    return max_norm(dag(u) @ u - np.eye(u.shape[-1]))


def _require_square(g, name="operator"):
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim < 2 or g.shape[-1] != g.shape[-2]:
        raise ContractViolation(f"{name} must be square, got shape {g.shape}")
    return g


def _require_hermitian(g, name="generator"):
    g = _require_square(g, name)
    scale = max(1.0, max_norm(g))
    if max_norm(g - dag(g)) > HERMITICITY_TOL * scale:
        raise ContractViolation(f"{name} is not Hermitian")
    return g


def expm_generator(g, s):
    """Return ``exp(-i s G)`` for Hermitian ``G`` via its eigendecomposition.

    Raises
    ------
    ContractViolation
        If ``G`` is not square or not Hermitian (relative tolerance 1e-12).
    """
    g = _require_hermitian(g)
    w, v = np.linalg.eigh(g)
    return (v * np.exp(-1j * s * w)) @ dag(v)


def expm_hermitian_stack(h, dt):
    """Batched ``exp(-i H[k] dt[k])`` for a ``(n, d, d)`` Hermitian stack.

    ``dt`` is a scalar or an array of length ``n``. Hermiticity is assumed; the
    builders in :mod:`holonomic.hamiltonian` construct the stack symmetrically.
    """
    h = _require_square(h, "hamiltonian stack")
    w, v = np.linalg.eigh(h)
    dt = np.asarray(dt, dtype=float)
    phase = np.exp(-1j * w * (dt[..., None] if dt.ndim else dt))
    return (v * phase[..., None, :]) @ dag(v)


def gate_fidelity(u, v):
    """Global-phase-insensitive gate overlap ``|Tr(U^dagger V)| / d``."""
    u = _require_square(u, "U")
    v = _require_square(v, "V")
    if u.shape != v.shape:
        raise ContractViolation(f"dimension mismatch: {u.shape} vs {v.shape}")
    d = u.shape[-1]
    return float(min(1.0, abs(np.trace(dag(u) @ v)) / d))


def state_fidelity(a, b):
    """``|<a|b>|^2`` for normalized states of equal dimension."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def random_hermitian(dim, rng):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + dag(x)) / 2


def random_unitary(dim, rng):
    """Haar-random unitary via QR with phase-fixed R diagonal."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
