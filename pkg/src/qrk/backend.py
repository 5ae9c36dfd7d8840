"""Backend contract and the bundled state-vector backend.

A hardware adapter needs only :class:`SamplingBackend`; the exact witness and
exact Encode verification additionally require :class:`StateBackend`.
"""
from __future__ import annotations

from typing import List, Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from .circuit import Circuit, Gate
from .errors import CapabilityError, ConfigurationError, ValidationError
from .rng import derive_seed, make_rng
from .simulator import (NOISELESS, Counts, NoiseModel, Registers, StateVector,
                        counts_from_indices, run_exact, run_trajectories,
                        sample_indices)

METHODS = ("exact", "trajectory")


@runtime_checkable
class SamplingBackend(Protocol):
    name: str
    width: int

    def sample(self, circuit: Circuit, shots: int, seed: int,
               noise: Optional[NoiseModel] = None, registers: Registers = None,
               basis: Sequence[Gate] = ()) -> Counts:
        """Run ``circuit`` then the one-qubit ``basis`` change and measure every qubit.

        ``basis`` models an ideal readout-basis rotation; it is not part of the
        workload and must not be subject to gate noise.
        """


@runtime_checkable
class StateBackend(SamplingBackend, Protocol):
    method: str

    def states(self, circuit: Circuit, seed: int, noise: Optional[NoiseModel] = None,
               trajectories: int = 1, registers: Registers = None) -> List[StateVector]: ...


class StatevectorBackend:
    """Dense simulator, either noiseless (``exact``) or Monte-Carlo (``trajectory``).

    In trajectory mode with gate noise, ``sample`` spreads the shots over
    ``min(shots, trajectories)`` independent trajectories.
    """

    name = "statevector"

    def __init__(self, method: str = "trajectory", width: int = 16, trajectories: int = 200):
        if method not in METHODS:
            raise ConfigurationError(f"unknown method {method!r}; expected one of {METHODS}")
        if width < 1 or trajectories < 1:
            raise ValidationError("width and trajectories must be positive")
        self.method = method
        self.width = int(width)
        self.trajectories = int(trajectories)

    def __repr__(self):
        return f"StatevectorBackend(method={self.method!r}, width={self.width})"

    def _check(self, circuit: Circuit, noise: Optional[NoiseModel]) -> NoiseModel:
        if circuit.n_qubits > self.width:
            raise CapabilityError(
                f"{circuit.n_qubits}-qubit circuit exceeds backend width {self.width}")
        noise = noise or NOISELESS
        if self.method == "exact" and not noise.noiseless:
            raise ConfigurationError("the exact backend is noiseless; use 'trajectory'")
        return noise

    def states(self, circuit, seed, noise=None, trajectories=1, registers=None, ideal_tail=0):
        noise = self._check(circuit, noise)
        if self.method == "exact" or noise.gate_noiseless:
            return [run_exact(circuit)]
        seeds = [derive_seed(seed, "trajectory", t) for t in range(trajectories)]
        return run_trajectories(circuit, noise, seeds, registers, ideal_tail)

    def sample(self, circuit, shots, seed, noise=None, registers=None, basis=()):
        if any(g.kind.arity != 1 for g in basis):
            raise ValidationError("basis changes must be one-qubit gates")
        if basis:
            circuit = circuit.extend(basis)
        noise = self._check(circuit, noise)
        if shots < 1:
            raise ValidationError(f"shots must be >= 1, got {shots}")
        n_traj = 1 if noise.gate_noiseless else min(shots, self.trajectories)
        states = self.states(circuit, seed, noise, n_traj, registers, len(basis))
        per, extra = divmod(shots, len(states))
        chunks = []
        for t, state in enumerate(states):
            k = per + (1 if t < extra else 0)
            rng = make_rng(derive_seed(seed, "sample", t))
            chunks.append(sample_indices(state, k, noise.readout, rng))
        return counts_from_indices(circuit.n_qubits, np.concatenate(chunks))
