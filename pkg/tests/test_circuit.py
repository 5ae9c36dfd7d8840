import math
import re

import pytest
from hypothesis import given, settings

from qrk.circuit import (Circuit, Gate, GateKind, append_gate, cx, cz, emit_qasm, h,
                         inverse, ry, rz, tensor)
from qrk.errors import ValidationError
from qrk.kernels import build_ghz_circuit

from conftest import circuits


def test_append_single_rotation():
    c = append_gate(Circuit(1), ry(0, math.pi / 6))
    assert c.gate_count == 1


def test_append_preserves_order():
    c = Circuit(2)
    first, second = cx(0, 1), cx(0, 1)
    c = append_gate(append_gate(c, first), second)
    assert c.gate_count == 2
    assert c.gates == (first, second)


def test_append_rejects_duplicate_targets():
    with pytest.raises(ValidationError):
        append_gate(Circuit(2), cz(1, 1))


def test_append_rejects_out_of_range():
    with pytest.raises(IndexError):
        append_gate(Circuit(2), cx(0, 2))


def test_append_leaves_original_untouched():
    c = Circuit(1)
    append_gate(c, h(0))
    assert c.gate_count == 0


@pytest.mark.parametrize("bad", [
    lambda: Gate(GateKind.RY, (0,)),
    lambda: Gate(GateKind.H, (0,), 1.0),
    lambda: Gate(GateKind.RX, (0,), float("nan")),
    lambda: Gate(GateKind.RZ, (0,), float("inf")),
    lambda: Gate(GateKind.CX, (0,)),
    lambda: Gate(GateKind.X, (0, 1)),
])
def test_gate_invariants(bad):
    with pytest.raises(ValidationError):
        bad()


def test_angle_stored_unreduced():
    assert ry(0, 4 * math.pi).angle == 4 * math.pi


def test_inverse_rotation():
    theta = 0.37
    assert inverse(Circuit(1, (ry(0, theta),))).gates == (ry(0, -theta),)


def test_inverse_self_inverse_gates_reversed():
    assert inverse(Circuit(2, (h(0), cx(0, 1)))).gates == (cx(0, 1), h(0))


@given(circuits(max_gates=60))
def test_inverse_preserves_count_and_is_involution(c):
    assert inverse(c).gate_count == c.gate_count
    assert inverse(inverse(c)) == c


def _body(text):
    return [l for l in text.splitlines()
            if l and not l.startswith(("OPENQASM", "include", "qubit", "bit", "c = measure"))]


def test_qasm_single_ry_literal():
    angle = 0.5235987755982988
    text = emit_qasm(Circuit(1, (ry(0, angle),)))
    stmts = [l for l in text.splitlines() if l.startswith("ry")]
    assert len(stmts) == 1
    literal = re.match(r"ry\((.*)\) q\[0\];", stmts[0]).group(1)
    assert float(literal) == angle
    assert len(literal.replace("0.", "", 1).lstrip("0")) == 17


def test_qasm_ghz3_statement_counts():
    body = _body(emit_qasm(build_ghz_circuit(3)))
    assert sum(l.startswith("h ") for l in body) == 1
    assert sum(l.startswith("cx ") for l in body) == 2


def test_qasm_empty_circuit():
    text = emit_qasm(Circuit(2))
    assert text.splitlines() == ["OPENQASM 3;", 'include "stdgates.inc";', "qubit[2] q;",
                                 "bit[2] c;", "c = measure q;"]


@settings(max_examples=60)
@given(circuits(max_qubits=5, max_gates=200))
def test_qasm_statement_count_matches(c):
    text = emit_qasm(c)
    assert f"qubit[{c.n_qubits}] q;" in text
    assert len(_body(text)) == c.gate_count


@given(circuits(max_gates=40))
def test_qasm_angles_round_trip(c):
    rotations = [g for g in c.gates if g.kind.is_rotation]
    literals = re.findall(r"^r[xyz]\(([^)]*)\)", emit_qasm(c), flags=re.M)
    assert [float(s) for s in literals] == [g.angle for g in rotations]


def test_tensor_offsets_registers():
    a = Circuit(2, (h(0), cx(0, 1)))
    b = Circuit(1, (rz(0, 0.1),))
    combined, regs = tensor([a, b])
    assert combined.n_qubits == 3
    assert regs == ((0, 1), (2,))
    assert combined.gates == (h(0), rz(2, 0.1), cx(0, 1))
