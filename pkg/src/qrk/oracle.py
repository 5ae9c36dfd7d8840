"""Exact density-matrix evolution for small circuits (test-time oracle).

Operators are assembled as full ``2^n x 2^n`` Kronecker products, so this
path shares nothing with the in-place state-vector kernels it cross-checks.
"""
from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .circuit import Circuit
from .errors import CapabilityError
from .simulator import PAULI_MATRICES, NoiseModel, Registers

MAX_QUBITS = 4
_I2 = np.eye(2, dtype=complex)


def _embed(ops: dict, n: int) -> np.ndarray:
    # kron order: qubit n-1 first so qubit 0 is the least significant bit
    return reduce(np.kron, [ops.get(q, _I2) for q in range(n - 1, -1, -1)])


def _embed_pair(u: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    full = np.zeros((1 << n, 1 << n), dtype=complex)
    for r in range(4):
        for c in range(4):
            if u[r, c] == 0:
                continue
            ea = np.zeros((2, 2), dtype=complex)
            eb = np.zeros((2, 2), dtype=complex)
            ea[r & 1, c & 1] = 1
            eb[r >> 1, c >> 1] = 1
            full += u[r, c] * _embed({a: ea, b: eb}, n)
    return full


def _depolarize1(rho, q, p, n):
    if p == 0:
        return rho
    acc = sum(_embed({q: PAULI_MATRICES[k]}, n) @ rho @ _embed({q: PAULI_MATRICES[k]}, n)
              for k in (1, 2, 3))
    return (1 - p) * rho + (p / 3) * acc


def _depolarize2(rho, a, b, p, n):
    if p == 0:
        return rho
    acc = np.zeros_like(rho)
    for c in range(1, 16):
        op = _embed({a: PAULI_MATRICES[c % 4], b: PAULI_MATRICES[c // 4]}, n)
        acc += op @ rho @ op
    return (1 - p) * rho + (p / 15) * acc


def density_matrix_reference(circuit: Circuit, noise: NoiseModel,
                             registers: Registers = None) -> np.ndarray:
    """Density matrix of ``circuit`` from ``|0...0>`` under the depolarizing model.

    Each gate is followed by the depolarizing channel on its targets; with
    ``registers`` given, two-qubit gates also depolarize every qubit of the
    other registers at the crosstalk rate. Readout error is not a channel and
    is ignored here.
    """
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise CapabilityError(f"density-matrix oracle supports at most {MAX_QUBITS} qubits")
    owner = {q: r for r, reg in enumerate(registers or ()) for q in reg}
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    rho[0, 0] = 1
    for gate in circuit.gates:
        if gate.kind.arity == 1:
            u = _embed({gate.targets[0]: gate.matrix()}, n)
            rho = _depolarize1(u @ rho @ u.conj().T, gate.targets[0], noise.p1, n)
            continue
        a, b = gate.targets
        u = _embed_pair(gate.matrix(), a, b, n)
        rho = _depolarize2(u @ rho @ u.conj().T, a, b, noise.p2, n)
        if registers and noise.crosstalk > 0:
            for q in sorted(owner):
                if owner[q] != owner.get(a):
                    rho = _depolarize1(rho, q, noise.crosstalk, n)
    return rho


def fidelity_to_pure(rho: np.ndarray, amplitudes: Sequence[complex]) -> float:
    psi = np.asarray(amplitudes, dtype=complex)
    return float(np.real(psi.conj() @ rho @ psi))


def pauli_expectation_dm(rho: np.ndarray, pauli: str) -> float:
    n = len(pauli)
    op = _embed({n - 1 - pos: PAULI_MATRICES["IXYZ".index(ch)] for pos, ch in enumerate(pauli)}, n)
    return float(np.real(np.trace(op @ rho)))
