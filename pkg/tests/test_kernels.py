import subprocess
import sys

import numpy as np
import pytest

from holonomic import kernels
from holonomic.linalg import random_unitary

BACKENDS = kernels.available_backends()


def _stack(rng, n=50, d=3):
    return np.stack([random_unitary(d, rng) for _ in range(n)])


def _reference_product(steps):
    out = np.eye(steps.shape[1], dtype=complex)
    for u in steps:
        out = u @ out
    return out


@pytest.mark.parametrize("backend", BACKENDS)
def test_ordered_product_later_steps_on_the_left(rng, backend):
    steps = _stack(rng)
    prev = kernels.use_backend(backend)
    try:
        assert np.allclose(kernels.ordered_product(steps), _reference_product(steps), atol=1e-12)
    finally:
        kernels.use_backend(prev)


@pytest.mark.parametrize("backend", BACKENDS)
def test_propagate_states_matches_products(rng, backend):
    steps = _stack(rng, 20, 5)
    psi0 = np.zeros(5, dtype=complex)
    psi0[0] = 1
    prev = kernels.use_backend(backend)
    try:
        states = kernels.propagate_states(steps, psi0)
    finally:
        kernels.use_backend(prev)
    assert states.shape == (21, 5)
    assert np.allclose(states[0], psi0)
    assert np.allclose(states[-1], _reference_product(steps) @ psi0, atol=1e-12)


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    steps = _stack(rng, 200)
    results = []
    for name in BACKENDS:
        prev = kernels.use_backend(name)
        results.append(kernels.ordered_product(steps))
        kernels.use_backend(prev)
    assert np.allclose(results[0], results[1], atol=1e-12)


def test_empty_stack_is_identity():
    out = kernels.ordered_product(np.zeros((0, 3, 3), dtype=complex))
    assert np.array_equal(out, np.eye(3))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_fallback_selected_when_extension_missing():
    # block the compiled module in a fresh interpreter
    code = (
        "import sys; sys.modules['holonomic._kernels'] = None\n"
        "from holonomic import kernels, evolve_operator, make_hadamard_path, model_k22_zero\n"
        "import numpy as np\n"
        "assert kernels.BACKEND == 'python', kernels.BACKEND\n"
        "u = evolve_operator(model_k22_zero(np.pi / 4, 0.0, make_hadamard_path()))\n"
        "print(abs(abs(np.trace(u[:2, :2])) / 2))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert float(out.stdout) == pytest.approx(0.0, abs=1e-6)  # i*H is traceless
