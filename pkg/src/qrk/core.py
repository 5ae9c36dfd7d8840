"""Kernel selection: compiled ``_core`` when importable, numpy fallback otherwise.

Set ``QRK_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pycore

IMPLEMENTATION = "python"
_impl = _pycore
if not os.environ.get("QRK_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
        IMPLEMENTATION = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pycore

OP_MATRIX = _pycore.OP_MATRIX
OP_CX = _pycore.OP_CX
OP_CZ = _pycore.OP_CZ

apply_matrix = _impl.apply_matrix
apply_cx = _impl.apply_cx
apply_cz = _impl.apply_cz
run_program = _impl.run_program
probabilities = _impl.probabilities
