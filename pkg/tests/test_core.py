"""Compiled kernels against the numpy fallback."""
import os
import subprocess
import sys

import numpy as np
import pytest

from qrk import _pycore, core
from qrk.simulator import _compile

from conftest import random_circuit


def _random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def _dense_1q(m, q, n):
    ops = [np.eye(2)] * n
    ops[n - 1 - q] = m
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


@pytest.mark.parametrize("n,q", [(1, 0), (3, 0), (3, 2), (5, 3)])
def test_apply_matrix_matches_dense(impl, n, q):
    rng = np.random.default_rng(n * 10 + q)
    m = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    s = _random_state(rng, n)
    expected = _dense_1q(m, q, n) @ s
    impl.apply_matrix(s, q, m)
    np.testing.assert_allclose(s, expected, atol=1e-13)


def test_cx_and_cz_permutations(impl):
    n = 4
    s = np.arange(1 << n, dtype=complex)
    impl.apply_cx(s, 1, 3)
    for i in range(1 << n):
        src = i ^ 0b1000 if i & 0b10 else i
        assert s[i] == src
    s = np.ones(1 << n, dtype=complex)
    impl.apply_cz(s, 0, 2)
    for i in range(1 << n):
        assert s[i] == (-1 if (i & 1 and i & 4) else 1)


@pytest.mark.skipif(core.IMPLEMENTATION != "cython", reason="extension not built")
def test_program_parity_between_implementations():
    from qrk import _core
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 9))
        prog = _compile(random_circuit(rng, n, 80))
        a = np.zeros(1 << n, dtype=complex); a[0] = 1
        b = a.copy()
        _core.run_program(a, prog.ops, prog.q0, prog.q1, prog.midx, prog.mats)
        _pycore.run_program(b, prog.ops, prog.q0, prog.q1, prog.midx, prog.mats)
        np.testing.assert_allclose(a, b, atol=1e-12)
        np.testing.assert_allclose(_core.probabilities(a), _pycore.probabilities(a), atol=1e-15)


def test_compiled_core_is_selected_when_built():
    try:
        from qrk import _core  # noqa: F401
    except ImportError:
        pytest.skip("extension not built")
    assert core.IMPLEMENTATION == "cython"


def test_env_var_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "import qrk.core as c; print(c.IMPLEMENTATION)"],
        env={**os.environ, "QRK_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_compiled_rejects_wrong_dtype():
    try:
        from qrk import _core
    except ImportError:
        pytest.skip("extension not built")
    with pytest.raises(TypeError):
        _core.apply_cz(np.zeros(4, dtype=np.complex64), 0, 1)
