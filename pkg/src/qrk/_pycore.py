"""Pure numpy implementation of the state-vector kernels.

Used when the compiled ``_core`` extension is unavailable or when
``QRK_PURE_PYTHON`` is set. Signatures match ``_core`` exactly.
"""
import numpy as np

OP_MATRIX = 0
OP_CX = 1
OP_CZ = 2


def _n_qubits(state):
    return state.shape[0].bit_length() - 1


def apply_matrix(state, q, m):
    v = state.reshape(-1, 2, 1 << q)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a + m[0, 1] * b
    v[:, 1, :] = m[1, 0] * a + m[1, 1] * b


def _pair_index(n, a, va, b, vb):
    idx = [slice(None)] * n
    idx[n - 1 - a] = va
    idx[n - 1 - b] = vb
    return tuple(idx)


def apply_cx(state, control, target):
    n = _n_qubits(state)
    s = state.reshape((2,) * n)
    i10 = _pair_index(n, control, 1, target, 0)
    i11 = _pair_index(n, control, 1, target, 1)
    tmp = s[i10].copy()
    s[i10] = s[i11]
    s[i11] = tmp


def apply_cz(state, a, b):
    n = _n_qubits(state)
    s = state.reshape((2,) * n)
    s[_pair_index(n, a, 1, b, 1)] *= -1


def run_program(state, ops, q0, q1, midx, mats):
    for k in range(ops.shape[0]):
        op = ops[k]
        if op == OP_MATRIX:
            apply_matrix(state, q0[k], mats[midx[k]])
        elif op == OP_CX:
            apply_cx(state, q0[k], q1[k])
        else:
            apply_cz(state, q0[k], q1[k])


def probabilities(state):
    return state.real ** 2 + state.imag ** 2
