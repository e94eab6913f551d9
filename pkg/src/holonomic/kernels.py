"""Backend selection for the hot propagation loops.

The compiled Cython extension is used when it was built; otherwise the numpy
fallback in :mod:`holonomic._kernels_py` is used. :func:`use_backend` switches
explicitly, which the benchmark and the equivalence tests rely on.
"""
import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = ["BACKEND", "available_backends", "use_backend", "ordered_product",
           "propagate_states"]

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"
_active = _BACKENDS[BACKEND]


def available_backends():
    return tuple(_BACKENDS)


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous backend name."""
    global BACKEND, _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    previous = BACKEND
    BACKEND, _active = name, _BACKENDS[name]
    return previous


def ordered_product(steps):
    """Time-ordered product of a ``(n, d, d)`` stack, later steps on the left."""
    steps = np.ascontiguousarray(steps, dtype=np.complex128)
    if steps.shape[0] == 0:
        return np.eye(steps.shape[1], dtype=np.complex128)
    return _active.ordered_product(steps)


def propagate_states(steps, psi0):
    """States after 0..n steps, shape ``(n + 1, d)``."""
    steps = np.ascontiguousarray(steps, dtype=np.complex128)
    psi0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    return _active.propagate_states(steps, psi0)
