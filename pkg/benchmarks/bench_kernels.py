"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the ordered product of step unitaries, state propagation, and one
full gate evolution at the default step count, and checks that both backends
return the same numbers.
"""
import argparse
import timeit

import numpy as np

from holonomic import kernels
from holonomic.hamiltonian import model_k22_zero
from holonomic.linalg import random_unitary
from holonomic.path import make_hadamard_path
from holonomic.propagator import evolve_operator


def _cases(rng):
    steps3 = np.stack([random_unitary(3, rng) for _ in range(12000)])
    steps5 = np.stack([random_unitary(5, rng) for _ in range(12000)])
    psi = np.zeros(3, dtype=complex)
    psi[0] = 1
    model = model_k22_zero(np.pi / 4, 0.0, make_hadamard_path())
    return {
        "ordered_product 12000 x 3x3": lambda: kernels.ordered_product(steps3),
        "ordered_product 12000 x 5x5": lambda: kernels.ordered_product(steps5),
        "propagate_states 12000 x 3": lambda: kernels.propagate_states(steps3, psi),
        "evolve_operator (hadamard, 3 x 4000 steps)": lambda: evolve_operator(model),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is timed")
    rng = np.random.default_rng(0)
    cases = _cases(rng)
    results = {}
    for name in backends:
        prev = kernels.use_backend(name)
        try:
            for case, fn in cases.items():
                best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                results[case, name] = (best, fn())
        finally:
            kernels.use_backend(prev)

    print(f"{'case':<46}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for case in cases:
        times = [results[case, b][0] for b in backends]
        row = f"{case:<46}" + "".join(f"{1e3 * t:>10.2f}ms" for t in times)
        if len(backends) == 2:
            ref, fast = results[case, "python"], results[case, "compiled"]
            diff = np.max(np.abs(ref[1] - fast[1]))
            row += f"   x{ref[0] / fast[0]:.1f}  (max diff {diff:.1e})"
        print(row)


if __name__ == "__main__":
    main()
