"""Dense state-vector simulation with Pauli-trajectory noise.

Conventions: qubit ``i`` is bit ``i`` of the amplitude index (qubit 0 is the
least significant bit). Measured bitstrings print the binary form of that
index, so qubit 0 is the *rightmost* character. Pauli strings follow the same
layout: the rightmost character acts on qubit 0.

A trajectory inserts, after every gate and on that gate's targets only, a
uniformly random non-identity Pauli with probability ``p1`` (one-qubit gates,
3 choices) or ``p2`` (two-qubit gates, 15 choices). Two-qubit Pauli index
``c`` in 1..15 applies Pauli ``c % 4`` to ``targets[0]`` and ``c // 4`` to
``targets[1]`` with 0..3 = I, X, Y, Z. When registers (streams) are given,
each two-qubit gate additionally exposes every qubit of the *other*
registers to a one-qubit depolarizing event at rate ``crosstalk``.

Per trajectory, the generator first draws one uniform double per potential
event (program order; own-gate event before crosstalk events, crosstalk in
ascending qubit order), then one integer per triggered event.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import core
from .circuit import Circuit, Gate, GateKind
from .errors import ValidationError
from .rng import check_seed, make_rng

PAULI_LABELS = "IXYZ"
PAULI_MATRICES = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

Registers = Optional[Sequence[Sequence[int]]]


@dataclass(eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValidationError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}")

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        if n_qubits < 1:
            raise ValidationError("n_qubits must be positive")
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities().sum()))

    def probabilities(self) -> np.ndarray:
        return core.probabilities(self.amplitudes)


def ghz_state(n: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(n, amps)


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 0.0
    p2: float = 0.0
    readout: float = 0.0
    crosstalk: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "readout", "crosstalk"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    @property
    def gate_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.crosstalk == 0.0

    @property
    def noiseless(self) -> bool:
        return self.gate_noiseless and self.readout == 0.0

    def to_dict(self) -> Dict[str, float]:
        return {"p1": self.p1, "p2": self.p2, "readout": self.readout,
                "crosstalk": self.crosstalk}


NOISELESS = NoiseModel()


@dataclass
class Counts:
    n_qubits: int
    histogram: Dict[str, int]
    shots: int = field(default=0)

    def __post_init__(self):
        total = sum(self.histogram.values())
        if not self.shots:
            self.shots = total
        if total != self.shots:
            raise ValidationError(f"counts sum to {total}, expected {self.shots}")
        for key in self.histogram:
            if len(key) != self.n_qubits:
                raise ValidationError(f"bitstring {key!r} is not {self.n_qubits} bits")

    def __add__(self, other: "Counts") -> "Counts":
        merged = dict(self.histogram)
        for k, v in other.histogram.items():
            merged[k] = merged.get(k, 0) + v
        return Counts(self.n_qubits, merged, self.shots + other.shots)

    def ones(self, qubit: int) -> int:
        """Number of shots in which ``qubit`` read 1."""
        pos = self.n_qubits - 1 - qubit
        return sum(v for k, v in self.histogram.items() if k[pos] == "1")

    def parity(self, qubits: Iterable[int]) -> float:
        """Empirical expectation of the Z-parity over ``qubits``."""
        pos = [self.n_qubits - 1 - q for q in qubits]
        acc = 0
        for k, v in self.histogram.items():
            acc += -v if sum(k[p] == "1" for p in pos) % 2 else v
        return acc / self.shots

    def probability(self, predicate) -> float:
        return sum(v for k, v in self.histogram.items() if predicate(k)) / self.shots


# -- compilation ------------------------------------------------------------

_N_PAULI = 4  # matrix slots 0..3 hold I, X, Y, Z


@dataclass(frozen=True)
class _Program:
    ops: np.ndarray
    q0: np.ndarray
    q1: np.ndarray
    midx: np.ndarray
    mats: np.ndarray


def _compile(circuit: Circuit) -> _Program:
    cached = circuit._program
    if cached is not None:
        return cached
    g = circuit.gate_count
    ops = np.zeros(g, dtype=np.int8)
    q0 = np.zeros(g, dtype=np.int32)
    q1 = np.zeros(g, dtype=np.int32)
    midx = np.zeros(g, dtype=np.int32)
    mats = [m for m in PAULI_MATRICES]
    for k, gate in enumerate(circuit.gates):
        q0[k] = gate.targets[0]
        if gate.kind is GateKind.CX:
            ops[k], q1[k] = core.OP_CX, gate.targets[1]
        elif gate.kind is GateKind.CZ:
            ops[k], q1[k] = core.OP_CZ, gate.targets[1]
        else:
            ops[k] = core.OP_MATRIX
            midx[k] = len(mats)
            mats.append(gate.matrix())
    prog = _Program(ops, q0, q1, midx, np.ascontiguousarray(np.array(mats)))
    object.__setattr__(circuit, "_program", prog)
    return prog


@dataclass(frozen=True)
class _Events:
    after: np.ndarray   # program position the event follows
    q0: np.ndarray
    q1: np.ndarray      # -1 for one-qubit events
    prob: np.ndarray
    choices: np.ndarray  # 3 or 15


def _events(circuit: Circuit, noise: NoiseModel, registers: Registers,
            ideal_tail: int = 0) -> _Events:
    owner = {}
    if registers:
        for r, reg in enumerate(registers):
            for q in reg:
                owner[q] = r
    rows = []
    for k, gate in enumerate(circuit.gates[:circuit.gate_count - ideal_tail]):
        if gate.kind.arity == 1:
            if noise.p1 > 0:
                rows.append((k, gate.targets[0], -1, noise.p1, 3))
            continue
        if noise.p2 > 0:
            rows.append((k, gate.targets[0], gate.targets[1], noise.p2, 15))
        if noise.crosstalk > 0 and registers:
            home = owner.get(gate.targets[0])
            for q in sorted(owner):
                if owner[q] != home:
                    rows.append((k, q, -1, noise.crosstalk, 3))
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return _Events(empty, empty, empty, np.zeros(0), empty)
    a = np.array(rows, dtype=float)
    return _Events(a[:, 0].astype(np.int64), a[:, 1].astype(np.int32),
                   a[:, 2].astype(np.int32), a[:, 3], a[:, 4].astype(np.int64))


def _noisy_program(prog: _Program, ev: _Events, rng: np.random.Generator) -> _Program:
    if ev.prob.size == 0:
        return prog
    hit = np.flatnonzero(rng.random(ev.prob.size) < ev.prob)
    if hit.size == 0:
        return prog
    choice = rng.integers(1, ev.choices[hit] + 1)
    pos, qs, paulis = [], [], []
    for e, c in zip(hit, choice):
        at = ev.after[e] + 1
        if ev.q1[e] < 0:
            pos.append(at); qs.append(ev.q0[e]); paulis.append(c)
            continue
        for q, p in ((ev.q0[e], c % 4), (ev.q1[e], c // 4)):
            if p:
                pos.append(at); qs.append(q); paulis.append(p)
    zeros = np.zeros(len(pos), dtype=np.int32)
    return _Program(
        np.insert(prog.ops, pos, core.OP_MATRIX),
        np.insert(prog.q0, pos, np.asarray(qs, dtype=np.int32)),
        np.insert(prog.q1, pos, zeros),
        np.insert(prog.midx, pos, np.asarray(paulis, dtype=np.int32)),
        prog.mats,
    )


def _execute(prog: _Program, n_qubits: int) -> StateVector:
    state = StateVector.zero(n_qubits)
    core.run_program(state.amplitudes, prog.ops, prog.q0, prog.q1, prog.midx, prog.mats)
    return state


# -- public operations ------------------------------------------------------

def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    for t in gate.targets:
        if t >= state.n_qubits:
            raise IndexError(f"qubit {t} out of range for {state.n_qubits}-qubit state")
    out = state.copy()
    amps = out.amplitudes
    if gate.kind is GateKind.CX:
        core.apply_cx(amps, *gate.targets)
    elif gate.kind is GateKind.CZ:
        core.apply_cz(amps, *gate.targets)
    else:
        core.apply_matrix(amps, gate.targets[0], gate.matrix())
    return out


def run_exact(circuit: Circuit) -> StateVector:
    return _execute(_compile(circuit), circuit.n_qubits)


def run_trajectory(circuit: Circuit, noise: NoiseModel, seed: int,
                   registers: Registers = None) -> StateVector:
    return run_trajectories(circuit, noise, [seed], registers)[0]


def run_trajectories(circuit: Circuit, noise: NoiseModel, seeds: Sequence[int],
                     registers: Registers = None, ideal_tail: int = 0) -> List[StateVector]:
    """One trajectory per seed, in seed order.

    The last ``ideal_tail`` gates (e.g. a measurement-basis change) get no noise.
    """
    prog = _compile(circuit)
    ev = _events(circuit, noise, registers, ideal_tail)
    out = []
    for seed in seeds:
        if ev.prob.size == 0:
            check_seed(seed)
            out.append(_execute(prog, circuit.n_qubits))
        else:
            out.append(_execute(_noisy_program(prog, ev, make_rng(seed)), circuit.n_qubits))
    return out


def sample_indices(state: StateVector, shots: int, readout: float,
                   rng: np.random.Generator) -> np.ndarray:
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    cdf = np.cumsum(state.probabilities())
    idx = np.searchsorted(cdf, rng.random(shots) * cdf[-1], side="right")
    idx = np.minimum(idx, cdf.size - 1)
    if readout > 0:
        flips = rng.random((shots, state.n_qubits)) < readout
        idx = idx ^ (flips.astype(np.int64) << np.arange(state.n_qubits)).sum(axis=1)
    return idx


def counts_from_indices(n_qubits: int, idx: np.ndarray) -> Counts:
    values, counts = np.unique(idx, return_counts=True)
    hist = {format(int(v), f"0{n_qubits}b"): int(c) for v, c in zip(values, counts)}
    return Counts(n_qubits, hist, int(idx.size))


def sample_counts(state: StateVector, shots: int, readout: float, seed: int) -> Counts:
    if not 0.0 <= readout <= 1.0:
        raise ValidationError(f"readout must lie in [0, 1], got {readout}")
    idx = sample_indices(state, shots, readout, make_rng(seed))
    return counts_from_indices(state.n_qubits, idx)


def exact_fidelity(state: StateVector, reference: StateVector) -> float:
    if state.n_qubits != reference.n_qubits:
        raise ValidationError(
            f"dimension mismatch: {state.n_qubits} vs {reference.n_qubits} qubits")
    overlap = np.vdot(reference.amplitudes, state.amplitudes)
    return float(min(1.0, overlap.real ** 2 + overlap.imag ** 2))


def _check_pauli(pauli: str, n_qubits: int) -> None:
    if len(pauli) != n_qubits:
        raise ValidationError(f"Pauli string {pauli!r} must have length {n_qubits}")
    bad = set(pauli) - set(PAULI_LABELS)
    if bad:
        raise ValidationError(f"invalid Pauli characters {sorted(bad)} in {pauli!r}")


def expectation_pauli(state: StateVector, pauli: str) -> float:
    _check_pauli(pauli, state.n_qubits)
    applied = state.amplitudes.copy()
    for pos, ch in enumerate(pauli):
        if ch != "I":
            q = state.n_qubits - 1 - pos
            core.apply_matrix(applied, q, PAULI_MATRICES[PAULI_LABELS.index(ch)])
    return float(np.vdot(state.amplitudes, applied).real)
