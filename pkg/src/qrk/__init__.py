"""Quantum research kernels on an embedded noisy state-vector simulator."""
from .backend import StatevectorBackend
from .circuit import Circuit, Gate, GateKind, append_gate, emit_qasm, inverse
from .core import IMPLEMENTATION
from .errors import (CapabilityError, ConfigurationError, ExecutionError, QRKError,
                     ValidationError)
from .simulator import (Counts, NoiseModel, StateVector, apply_gate, exact_fidelity,
                        expectation_pauli, run_exact, run_trajectory, sample_counts)

__version__ = "0.1.0"
