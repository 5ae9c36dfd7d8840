# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled state-vector kernels.

The state is handled as interleaved (re, im) doubles; complex products are
spelled out in the same operation order numpy uses.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    OP_MATRIX = 0
    OP_CX = 1
    OP_CZ = 2


cdef void _matrix(double* s, Py_ssize_t dim, int q, const double* m) noexcept nogil:
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << q
    cdef Py_ssize_t base = 0, i, j
    cdef double ar, ai, br, bi
    while base < dim:
        i = base
        while i < base + stride:
            j = i + stride
            ar = s[2 * i]; ai = s[2 * i + 1]
            br = s[2 * j]; bi = s[2 * j + 1]
            s[2 * i] = (m[0] * ar - m[1] * ai) + (m[2] * br - m[3] * bi)
            s[2 * i + 1] = (m[0] * ai + m[1] * ar) + (m[2] * bi + m[3] * br)
            s[2 * j] = (m[4] * ar - m[5] * ai) + (m[6] * br - m[7] * bi)
            s[2 * j + 1] = (m[4] * ai + m[5] * ar) + (m[6] * bi + m[7] * br)
            i += 1
        base += 2 * stride


cdef void _cx(double* s, Py_ssize_t dim, int c, int t) noexcept nogil:
    cdef Py_ssize_t cm = (<Py_ssize_t>1) << c, tm = (<Py_ssize_t>1) << t
    cdef Py_ssize_t i, j
    cdef double r, im
    for i in range(dim):
        if (i & cm) and not (i & tm):
            j = i | tm
            r = s[2 * i]; im = s[2 * i + 1]
            s[2 * i] = s[2 * j]; s[2 * i + 1] = s[2 * j + 1]
            s[2 * j] = r; s[2 * j + 1] = im


cdef void _cz(double* s, Py_ssize_t dim, int a, int b) noexcept nogil:
    cdef Py_ssize_t mask = ((<Py_ssize_t>1) << a) | ((<Py_ssize_t>1) << b)
    cdef Py_ssize_t i
    for i in range(dim):
        if (i & mask) == mask:
            s[2 * i] = -s[2 * i]
            s[2 * i + 1] = -s[2 * i + 1]


cdef double* _state_ptr(object state, Py_ssize_t* dim) except NULL:
    cdef cnp.ndarray arr = state
    if arr.dtype != np.complex128 or not arr.flags.c_contiguous or not arr.flags.writeable:
        raise TypeError("state must be a writeable C-contiguous complex128 array")
    dim[0] = arr.shape[0]
    return <double*> cnp.PyArray_DATA(arr)


def apply_matrix(state, int q, m):
    cdef Py_ssize_t dim
    cdef double* s = _state_ptr(state, &dim)
    cdef double[::1] mv = np.ascontiguousarray(m, dtype=np.complex128).view(np.float64).reshape(8)
    with nogil:
        _matrix(s, dim, q, &mv[0])


def apply_cx(state, int control, int target):
    cdef Py_ssize_t dim
    cdef double* s = _state_ptr(state, &dim)
    with nogil:
        _cx(s, dim, control, target)


def apply_cz(state, int a, int b):
    cdef Py_ssize_t dim
    cdef double* s = _state_ptr(state, &dim)
    with nogil:
        _cz(s, dim, a, b)


def run_program(state, const signed char[::1] ops, const int[::1] q0,
                const int[::1] q1, const int[::1] midx, mats):
    cdef Py_ssize_t dim
    cdef double* s = _state_ptr(state, &dim)
    cdef double[:, ::1] mv = np.ascontiguousarray(mats, dtype=np.complex128).view(np.float64).reshape(-1, 8)
    cdef Py_ssize_t k, n = ops.shape[0]
    with nogil:
        for k in range(n):
            if ops[k] == OP_MATRIX:
                _matrix(s, dim, q0[k], &mv[midx[k], 0])
            elif ops[k] == OP_CX:
                _cx(s, dim, q0[k], q1[k])
            else:
                _cz(s, dim, q0[k], q1[k])


def probabilities(state):
    cdef Py_ssize_t dim
    cdef double* s = _state_ptr(state, &dim)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(dim, dtype=np.float64)
    cdef double* o = <double*> cnp.PyArray_DATA(out)
    cdef Py_ssize_t i
    with nogil:
        for i in range(dim):
            o[i] = s[2 * i] * s[2 * i] + s[2 * i + 1] * s[2 * i + 1]
    return out
