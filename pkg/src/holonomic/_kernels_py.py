"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def ordered_product(steps):
    """Return ``steps[n-1] @ ... @ steps[0]``."""
    steps = np.asarray(steps, dtype=np.complex128)
    acc = np.eye(steps.shape[1], dtype=np.complex128)
    for step in steps:
        acc = step @ acc
    return acc


def propagate_states(steps, psi0):
    """Apply the steps in order to ``psi0``; row ``k`` is the state after ``k`` steps."""
    steps = np.asarray(steps, dtype=np.complex128)
    out = np.empty((steps.shape[0] + 1, steps.shape[1]), dtype=np.complex128)
    out[0] = psi0
    for k, step in enumerate(steps):
        out[k + 1] = step @ out[k]
    return out
