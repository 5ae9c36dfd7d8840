"""Gate set, immutable circuits and OpenQASM 3 emission.

Qubit ``i`` is bit ``i`` of a basis-state index (little-endian). Every gate,
whatever its arity, counts as one operation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import ValidationError


class GateKind(str, enum.Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    H = "h"
    X = "x"
    CX = "cx"
    CZ = "cz"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CX, GateKind.CZ) else 1

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(targets) != kind.arity:
            raise ValidationError(
                f"{kind.value} acts on {kind.arity} qubit(s), got targets {targets}")
        if len(set(targets)) != len(targets):
            raise ValidationError(f"duplicate targets {targets} on {kind.value}")
        if any(t < 0 for t in targets):
            raise IndexError(f"negative qubit index in {targets}")
        if kind.is_rotation:
            if self.angle is None:
                raise ValidationError(f"{kind.value} requires an angle")
            angle = float(self.angle)
            if not math.isfinite(angle):
                raise ValidationError(f"angle must be finite, got {angle}")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise ValidationError(f"{kind.value} takes no angle")

    def adjoint(self) -> "Gate":
        if self.kind.is_rotation:
            return Gate(self.kind, self.targets, -self.angle)
        return self

    def matrix(self) -> np.ndarray:
        """Unitary as a 2x2 (one qubit) or 4x4 matrix.

        Two-qubit matrices use the basis ``|t1 t0>`` with ``targets[0]`` as the
        least significant bit, matching the global index convention.
        """
        return gate_matrix(self)


def _rotation(kind: GateKind, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex)


_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    # basis index = b0 + 2*b1 with b0 the control / first target
    GateKind.CX: np.array([[1, 0, 0, 0], [0, 0, 0, 1],
                           [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
}


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.kind.is_rotation:
        return _rotation(gate.kind, gate.angle)
    return _FIXED[gate.kind].copy()


def rx(q: int, theta: float) -> Gate:
    return Gate(GateKind.RX, (q,), theta)


def ry(q: int, theta: float) -> Gate:
    return Gate(GateKind.RY, (q,), theta)


def rz(q: int, theta: float) -> Gate:
    return Gate(GateKind.RZ, (q,), theta)


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CX, (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


@dataclass(frozen=True)
class Circuit:
    """An immutable ordered gate list over ``n_qubits`` qubits."""

    n_qubits: int
    gates: Tuple[Gate, ...] = ()
    _program: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_qubits) < 1:
            raise ValidationError(f"n_qubits must be positive, got {self.n_qubits}")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        gates = tuple(self.gates)
        for g in gates:
            _check_range(g, self.n_qubits)
        object.__setattr__(self, "gates", gates)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def append(self, gate: Gate) -> "Circuit":
        return append_gate(self, gate)

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gates))

    def compose(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValidationError("cannot compose circuits of different width")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def inverse(self) -> "Circuit":
        return inverse(self)

    def to_qasm(self) -> str:
        return emit_qasm(self)


def _check_range(gate: Gate, n_qubits: int) -> None:
    for t in gate.targets:
        if t >= n_qubits:
            raise IndexError(f"qubit {t} out of range for {n_qubits}-qubit circuit")


def append_gate(circuit: Circuit, gate: Gate) -> Circuit:
    _check_range(gate, circuit.n_qubits)
    return Circuit(circuit.n_qubits, circuit.gates + (gate,))


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(circuit.n_qubits, tuple(g.adjoint() for g in reversed(circuit.gates)))


def emit_qasm(circuit: Circuit) -> str:
    """Render ``circuit`` as an OpenQASM 3 program with terminal measurement."""
    n = circuit.n_qubits
    lines = ["OPENQASM 3;", 'include "stdgates.inc";', f"qubit[{n}] q;", f"bit[{n}] c;"]
    for g in circuit.gates:
        args = ", ".join(f"q[{t}]" for t in g.targets)
        if g.kind.is_rotation:
            lines.append(f"{g.kind.value}({g.angle:.17g}) {args};")
        else:
            lines.append(f"{g.kind.value} {args};")
    lines.append("c = measure q;")
    return "\n".join(lines) + "\n"


def tensor(circuits: Sequence[Circuit]) -> Tuple[Circuit, Tuple[Tuple[int, ...], ...]]:
    """Place circuits on disjoint contiguous registers, interleaving gates.

    Gates are taken round-robin, one from each register in turn, so that the
    registers advance together. Returns the combined circuit and the qubit
    indices of each register.
    """
    offsets, registers, total = [], [], 0
    for c in circuits:
        offsets.append(total)
        registers.append(tuple(range(total, total + c.n_qubits)))
        total += c.n_qubits
    gates = []
    depth = max((c.gate_count for c in circuits), default=0)
    for j in range(depth):
        for c, off in zip(circuits, offsets):
            if j < c.gate_count:
                g = c.gates[j]
                gates.append(Gate(g.kind, tuple(t + off for t in g.targets), g.angle))
    return Circuit(total, tuple(gates)), tuple(registers)
