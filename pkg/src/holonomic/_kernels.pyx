# cython: language_level=3
"""Compiled inner loops for time-ordered products of small dense unitaries.

Both routines take a C-contiguous ``complex128`` stack of shape ``(n, d, d)``
whose entry ``k`` is the propagator of step ``k``; later steps multiply from
the left.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline void _left_multiply(const cplx[:, ::1] step, cplx[:, ::1] acc,
                                cplx[:, ::1] tmp, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef cplx s
    for i in range(d):
        for j in range(d):
            s = 0
            for k in range(d):
                s = s + step[i, k] * acc[k, j]
            tmp[i, j] = s
    for i in range(d):
        for j in range(d):
            acc[i, j] = tmp[i, j]


def ordered_product(cplx[:, :, ::1] steps):
    """Return ``steps[n-1] @ ... @ steps[0]``."""
    cdef Py_ssize_t n = steps.shape[0]
    cdef Py_ssize_t d = steps.shape[1]
    cdef Py_ssize_t k, i
    out = np.eye(d, dtype=np.complex128)
    tmp = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] acc = out
    cdef cplx[:, ::1] work = tmp
    with nogil:
        for k in range(n):
            _left_multiply(steps[k], acc, work, d)
    return out


def propagate_states(cplx[:, :, ::1] steps, const cplx[::1] psi0):
    """Apply the steps in order to ``psi0``; row ``k`` of the result is the
    state after ``k`` steps."""
    cdef Py_ssize_t n = steps.shape[0]
    cdef Py_ssize_t d = steps.shape[1]
    cdef Py_ssize_t k, i, j
    cdef cplx s
    out = np.empty((n + 1, d), dtype=np.complex128)
    cdef cplx[:, ::1] psi = out
    for i in range(d):
        psi[0, i] = psi0[i]
    with nogil:
        for k in range(n):
            for i in range(d):
                s = 0
                for j in range(d):
                    s = s + steps[k, i, j] * psi[k, j]
                psi[k + 1, i] = s
    return out
