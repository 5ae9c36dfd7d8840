import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qrk import _pycore
from qrk.circuit import Circuit, Gate, GateKind

try:
    from qrk import _core
except ImportError:  # pragma: no cover
    _core = None

IMPLEMENTATIONS = [pytest.param(_pycore, id="python")]
if _core is not None:
    IMPLEMENTATIONS.append(pytest.param(_core, id="cython"))


@pytest.fixture(params=IMPLEMENTATIONS)
def impl(request):
    return request.param


def random_gate(rng: np.random.Generator, n: int) -> Gate:
    kinds = list(GateKind) if n >= 2 else [k for k in GateKind if k.arity == 1]
    kind = kinds[rng.integers(len(kinds))]
    if kind.arity == 2:
        a, b = rng.choice(n, size=2, replace=False)
        return Gate(kind, (int(a), int(b)))
    q = int(rng.integers(n))
    if kind.is_rotation:
        return Gate(kind, (q,), float(rng.uniform(-4 * math.pi, 4 * math.pi)))
    return Gate(kind, (q,))


def random_circuit(rng: np.random.Generator, n: int, n_gates: int) -> Circuit:
    return Circuit(n, tuple(random_gate(rng, n) for _ in range(n_gates)))


@st.composite
def circuits(draw, max_qubits=6, max_gates=50):
    n = draw(st.integers(1, max_qubits))
    count = draw(st.integers(0, max_gates))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_circuit(np.random.default_rng(seed), n, count)
