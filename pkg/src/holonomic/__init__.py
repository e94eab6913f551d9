"""Nonadiabatic holonomic single-qubit gates in a three-level Lambda system.

The gate is designed from a closed loop on the two-sphere; the detuning and
coupling envelopes follow from the loop so that the dynamical part of the
evolution on the computational subspace vanishes and only the holonomy
``exp(i phi_tau n.sigma / 2)`` remains.
"""
__version__ = "0.1.0"

from .errors import (ConfigError, ContractViolation, HolonomicError, PathError,
                     SingularityError, UnitarityError)
from .frame import Frame, one_qubit_frame, two_qubit_frame
from .hamiltonian import (ErrorModel, LambdaModel, apply_error, assemble, model_custom_k22,
                          model_k22_negbeta, model_k22_zero, pulse_area, solve_parameters)
from .holonomy import (analytic_gate, commutation_residual, geometric_angle, holonomy_report,
                       k22_cancellation, target_gate)
from .kernels import BACKEND, available_backends, use_backend
from .path import (GateSpec, PathSpec, Segment, eval_path, load_path_csv, make_cap_loop,
                   make_hadamard_path, path_from_samples, solid_angle)
from .propagator import PropagatorConfig, evolve_operator, evolve_state, extract_gate

__all__ = [
    "ConfigError", "ContractViolation", "HolonomicError", "PathError", "SingularityError",
    "UnitarityError", "Frame", "one_qubit_frame", "two_qubit_frame", "ErrorModel",
    "LambdaModel", "apply_error", "assemble", "model_custom_k22", "model_k22_negbeta",
    "model_k22_zero", "pulse_area", "solve_parameters", "analytic_gate",
    "commutation_residual", "geometric_angle", "holonomy_report", "k22_cancellation",
    "target_gate", "BACKEND", "available_backends", "use_backend", "GateSpec", "PathSpec",
    "Segment", "eval_path", "load_path_csv", "make_cap_loop", "make_hadamard_path",
    "path_from_samples", "solid_angle", "PropagatorConfig", "evolve_operator",
    "evolve_state", "extract_gate",
]
