"""Auxiliary orthonormal frames for the one- and two-qubit schemes.

A frame stores the columns ``nu_1 .. nu_N`` as an ``(N, N)`` matrix (column
``k`` is ``nu_{k+1}``) together with their analytic time derivatives. The
first ``L`` columns span the computational subspace S(t); the last column is
the auxiliary direction carrying the excited-state population.
"""
from dataclasses import dataclass

import numpy as np

from .linalg import ONE_QUBIT_LEVELS, TWO_QUBIT_LEVELS, dag


def lambda_states(theta, phi):
    """Dark state ``nu_1``, bright state ``|b>`` and excited state of the Lambda system,
    as 3-vectors over ``(|0>, |1>, |e>)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    dark = np.array([c, s * np.exp(1j * phi), 0.0], dtype=np.complex128)
    bright = np.array([s * np.exp(-1j * phi), -c, 0.0], dtype=np.complex128)
    excited = np.array([0.0, 0.0, 1.0], dtype=np.complex128)
    return dark, bright, excited


def _lambda_frame(theta, phi, alpha, beta, dalpha, dbeta):
    """Frame (n, 3, 3) and derivative over (|0>, |1>, |e>) for arrays of path samples.

    ``nu_2`` carries the ``sin(alpha/2) e^{i beta} |e>`` component that makes the
    triple orthonormal.
    """
    dark, bright, excited = lambda_states(theta, phi)
    ca, sa = np.cos(alpha / 2), np.sin(alpha / 2)
    ep = np.exp(1j * beta)
    n = alpha.shape[0]
    basis = np.empty((n, 3, 3), dtype=np.complex128)
    deriv = np.zeros((n, 3, 3), dtype=np.complex128)
    basis[:, :, 0] = dark
    basis[:, :, 1] = ca[:, None] * bright + (sa * ep)[:, None] * excited
    basis[:, :, 2] = (sa / ep)[:, None] * bright - ca[:, None] * excited
    half = dalpha / 2
    deriv[:, :, 1] = ((-half * sa)[:, None] * bright
                      + ((half * ca + 1j * dbeta * sa) * ep)[:, None] * excited)
    deriv[:, :, 2] = (((half * ca - 1j * dbeta * sa) / ep)[:, None] * bright
                      + (half * sa)[:, None] * excited)
    return basis, deriv


@dataclass(frozen=True)
class Frame:
    theta: float
    phi: float
    path: object
    kind: str  # "one_qubit" | "two_qubit"

    @property
    def dimension(self):
        return 3 if self.kind == "one_qubit" else 5

    @property
    def computational_dim(self):
        return self.dimension - 1

    @property
    def levels(self):
        return ONE_QUBIT_LEVELS if self.kind == "one_qubit" else TWO_QUBIT_LEVELS

    @property
    def computational_levels(self):
        """Indices of the computational basis levels, which span S(0)."""
        return tuple(range(self.computational_dim))

    @property
    def moving_index(self):
        """Column of the computational vector that follows the path (nu_2 or nu_4)."""
        return self.computational_dim - 1

    def _evaluate(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        a, b, da, db = self.path.sample(np.atleast_1d(t))
        basis, deriv = _lambda_frame(self.theta, self.phi, a, b, da, db)
        if self.kind == "two_qubit":
            basis, deriv = _embed_two_qubit(basis), _embed_two_qubit(deriv, derivative=True)
        if scalar:
            return basis[0], deriv[0]
        return basis, deriv

    def basis_at(self, t):
        """Frame matrix at ``t``; shape ``(N, N)`` or ``(n, N, N)`` for arrays."""
        return self._evaluate(t)[0]

    def derivative_at(self, t):
        return self._evaluate(t)[1]

    def basis_and_derivative(self, t):
        return self._evaluate(t)


def _embed_two_qubit(m, derivative=False):
    """Place a Lambda-system frame on (|10>, |11>, |ee>) and add the static
    ``|00>``, ``|01>`` columns in front."""
    n = m.shape[0]
    out = np.zeros((n, 5, 5), dtype=np.complex128)
    if not derivative:
        out[:, 0, 0] = 1.0
        out[:, 1, 1] = 1.0
    out[:, 2:, 2:] = m
    return out


def one_qubit_frame(theta, phi, path):
    return Frame(float(theta), float(phi), path, "one_qubit")


def two_qubit_frame(theta, phi, path):
    """Five-level frame: ``|00>``, ``|01>`` static, and the one-qubit frame
    acting on ``(|10>, |11>, |ee>)``."""
    return Frame(float(theta), float(phi), path, "two_qubit")


def computational_projector(f, t):
    """Projector onto S(t) = span of the first L frame vectors."""
    v = f.basis_at(t)[..., :, : f.computational_dim]
    return v @ dag(v)


def orthonormality_residual(f, t):
    v = f.basis_at(np.atleast_1d(t))
    gram = dag(v) @ v
    return float(np.max(np.abs(gram - np.eye(f.dimension))))
