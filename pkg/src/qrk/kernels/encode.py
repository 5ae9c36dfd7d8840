"""Encode kernel: angle-encode a generated ramp, rotate by a fixed offset, read back."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..backend import SamplingBackend, StateBackend
from ..circuit import Circuit, ry
from ..errors import CapabilityError, ExecutionError, ValidationError
from ..rng import check_seed, derive_seed
from ..simulator import NoiseModel, StateVector
from ..stats import bonferroni, binomial_ztest
from .base import CircuitSink, KernelResult, Stopwatch, default_backend, jsonable

OFFSET = math.pi / 6


@dataclass(frozen=True)
class EncodeParams:
    N: int = 64
    shots: int = 4096
    alpha: float = 0.01
    seed: int = 0
    offset: float = OFFSET
    # added to the applied rotation but not to the ideal: calibration-fault injection
    fault_offset: float = 0.0
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError(f"N must be >= 1, got {self.N}")
        if self.shots < 1:
            raise ValidationError(f"shots must be >= 1, got {self.shots}")
        if not 0 < self.alpha < 1:
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        check_seed(self.seed)


def encode_values(N: int) -> List[float]:
    """The ramp ``4*i*pi/N`` for ``i = 0..N`` inclusive."""
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    return [4 * i * math.pi / N for i in range(N + 1)]


def build_encode_circuit(angles: Sequence[float], offset: float = OFFSET) -> Circuit:
    if len(angles) == 0:
        raise ValidationError("angles must be non-empty")
    gates = []
    for q, theta in enumerate(angles):
        gates += [ry(q, theta), ry(q, offset)]
    return Circuit(len(angles), tuple(gates))


def ideal_one_probability(theta: float, offset: float = OFFSET) -> float:
    return math.sin((theta + offset) / 2) ** 2


def _reduced(state: StateVector, q: int) -> np.ndarray:
    v = state.amplitudes.reshape(-1, 2, 1 << q)
    return np.einsum("aib,ajb->ij", v, v.conj())


def run_encode(params: EncodeParams, noise: Optional[NoiseModel] = None,
               backend: Optional[SamplingBackend] = None,
               sink: Optional[CircuitSink] = None) -> KernelResult:
    """Run Encode and verify every qubit against ``sin^2((theta_i + offset) / 2)``.

    Against an ``exact`` state backend the reduced one-qubit density matrices
    are compared with the ideal pure states (tolerance ``params.tolerance``).
    Otherwise each qubit's empirical P(1) is z-tested at ``alpha / (N + 1)``.
    Values are processed in registers of at most ``backend.width`` qubits.
    """
    backend = backend or default_backend(noise)
    angles = encode_values(params.N)
    m = len(angles)
    exact = isinstance(backend, StateBackend) and backend.method == "exact"
    per_alpha = bonferroni(params.alpha, m)
    width = backend.width
    checks = []
    watch = Stopwatch()
    error = None
    with watch.running():
        try:
            for b, start in enumerate(range(0, m, width)):
                chunk = angles[start:start + width]
                circuit = build_encode_circuit(chunk, params.offset + params.fault_offset)
                if sink:
                    sink("encode", {"N": params.N, "batch": b, "offset": params.offset,
                                    "fault_offset": params.fault_offset}, circuit)
                seed_b = derive_seed(params.seed, "encode/batch", b)
                if exact:
                    checks += _check_exact(backend, circuit, chunk, start, params, seed_b)
                else:
                    counts = backend.sample(circuit, params.shots, seed_b, noise)
                    for q, theta in enumerate(chunk):
                        expected = ideal_one_probability(theta, params.offset)
                        t = binomial_ztest(counts.ones(q), params.shots, expected, per_alpha)
                        checks.append({"i": start + q, "deviation": abs(t.observed - expected),
                                       **t.to_dict()})
        except (ExecutionError, CapabilityError) as exc:
            error = f"{type(exc).__name__}: {exc}"
    passed = error is None and all(c["pass"] for c in checks)
    metric = max((c["deviation"] for c in checks), default=1.0)
    details = {"mode": "exact" if exact else "shots", "values": m,
               "batches": -(-m // width), "per_test_alpha": per_alpha,
               "failed": [c["i"] for c in checks if not c["pass"]],
               "checks": checks}
    if error:
        details["error"] = error
    return KernelResult("encode", jsonable(asdict(params)), passed, float(metric),
                        params.seed, watch.ms, jsonable(details))


def _check_exact(backend, circuit, chunk, start, params, seed):
    states = backend.states(circuit, seed)
    if len(states) != 1:
        raise CapabilityError("exact verification needs a single noiseless state")
    state = states[0]
    out = []
    for q, theta in enumerate(chunk):
        half = (theta + params.offset) / 2
        psi = np.array([math.cos(half), math.sin(half)])
        rho = _reduced(state, q)
        dev = float(np.abs(rho - np.outer(psi, psi)).max())
        expected = math.sin(half) ** 2
        observed = float(rho[1, 1].real)
        dev = max(dev, abs(observed - expected))
        out.append({"i": start + q, "observed": observed, "expected": expected,
                    "deviation": dev, "pass": dev <= params.tolerance})
    return out
