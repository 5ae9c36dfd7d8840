"""Computational Area: GHZ preparation, mirror load, and entanglement witnesses.

The area of a grid point ``(n, L)`` is ``n`` times the gate count of the GHZ
preparation plus a depth-``2L`` mirror load, counted on the constructed
circuit. A point passes when the one-sided lower confidence bound of its GHZ
fidelity estimate, at ``alpha`` Bonferroni-split over the grid, reaches the
witness threshold.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..backend import SamplingBackend, StateBackend
from ..circuit import Circuit, cx, cz, h, inverse, ry, rz
from ..errors import CapabilityError, ExecutionError, ValidationError
from ..oracle import fidelity_to_pure
from ..rng import check_seed, derive_seed, make_rng
from ..simulator import NoiseModel, Registers, StateVector, exact_fidelity, ghz_state
from ..stats import bonferroni, z_critical
from .base import (CircuitSink, KernelResult, Stopwatch, default_backend, jsonable,
                   mean_stderr)

WITNESS_MODES = ("exact", "shots")


def build_ghz_circuit(n: int) -> Circuit:
    if n < 2:
        raise ValidationError(f"GHZ preparation needs n >= 2, got {n}")
    return Circuit(n, (h(0),) + tuple(cx(q, q + 1) for q in range(n - 1)))


def mirror_layers(n: int, L: int, seed: int) -> list:
    """Gates of the ``L`` forward layers; the first ``l`` layers do not depend on ``L``."""
    angles = make_rng(seed).random((L, n)) * (2 * math.pi)
    gates = []
    for layer in range(L):
        gates += [ry(q, angles[layer, q]) for q in range(n)]
        gates += [cz(q, q + 1) for q in range(layer % 2, n - 1, 2)]
    return gates


def build_mirror_load(n: int, L: int, seed: int) -> Circuit:
    """``L`` random RY + CZ-brickwork layers followed by their exact inverse."""
    if n < 2 or L < 1:
        raise ValidationError(f"mirror load needs n >= 2 and L >= 1, got n={n}, L={L}")
    forward = Circuit(n, tuple(mirror_layers(n, L, seed)))
    return forward.compose(inverse(forward))


def ghz_witness_exact(states: Sequence[StateVector], n: int) -> float:
    if len(states) == 0:
        raise ValidationError("no trajectory states given")
    ref = ghz_state(n)
    for s in states:
        if s.n_qubits != n:
            raise ValidationError(f"state has {s.n_qubits} qubits, expected {n}")
    return float(np.mean([exact_fidelity(s, ref) for s in states]))


def ghz_witness_density(rho: np.ndarray, n: int) -> float:
    return fidelity_to_pure(rho, ghz_state(n).amplitudes)


def register_ghz_fidelity(state: StateVector, register: Sequence[int]) -> float:
    """GHZ fidelity of the reduced state on a contiguous ``register``."""
    lo, n = register[0], len(register)
    if tuple(register) != tuple(range(lo, lo + n)):
        raise ValidationError("register must be contiguous")
    v = state.amplitudes.reshape(-1, 1 << n, 1 << lo)
    proj = (v[:, 0, :] + v[:, -1, :]) / math.sqrt(2)
    return float(np.sum(proj.real ** 2 + proj.imag ** 2))


def parity_phases(n: int) -> List[float]:
    # phases k*pi/n over a full period cancel every coherence except |0..0><1..1|
    return [k * math.pi / n for k in range(2 * n)]


def _shot_witness(backend: SamplingBackend, circuit: Circuit, registers: Sequence[Sequence[int]],
                  shots: int, seed: int, noise: Optional[NoiseModel],
                  layout: Registers = None) -> List[Tuple[float, float]]:
    n = len(registers[0])
    if shots < (n + 2) * 100:
        raise ValidationError(f"need at least {(n + 2) * 100} shots, got {shots}")
    phases = parity_phases(n)
    per = shots // (len(phases) + 1)
    qubits = [q for reg in registers for q in reg]

    counts = backend.sample(circuit, per, derive_seed(seed, "witness/setting", 0), noise, layout)
    all0, all1 = "0" * n, "1" * n
    pops = []
    for reg in registers:
        pos = [circuit.n_qubits - 1 - q for q in reg]
        pops.append(counts.probability(lambda k: "".join(k[p] for p in pos) in (all0, all1)))

    parities = [[] for _ in registers]
    for s, phi in enumerate(phases, start=1):
        basis = [rz(q, phi) for q in qubits] + [h(q) for q in qubits]
        c = backend.sample(circuit, per, derive_seed(seed, "witness/setting", s), noise, layout,
                           basis)
        for r, reg in enumerate(registers):
            parities[r].append(c.parity(reg))

    out = []
    for pop, par in zip(pops, parities):
        signs = [(-1) ** k for k in range(len(par))]
        coherence = sum(sg * p for sg, p in zip(signs, par)) / len(par)
        var = pop * (1 - pop) / per + sum((1 - p * p) / per for p in par) / len(par) ** 2
        out.append(((pop + coherence) / 2, math.sqrt(max(var, 0.0)) / 2))
    return out


def ghz_witness_shots(backend: SamplingBackend, circuit: Circuit, n: int, shots: int,
                      seed: int, noise: Optional[NoiseModel] = None) -> float:
    """Shot-based GHZ fidelity ``(P + C) / 2`` (raw, unclamped).

    ``P`` is the all-zeros plus all-ones population. ``C`` is the alternating
    mean of the parity after ``RZ(k*pi/n)`` and ``H`` on every qubit, k = 0..2n-1.
    The budget is split evenly over the ``2n + 1`` settings.
    """
    if circuit.n_qubits != n:
        raise ValidationError(f"circuit has {circuit.n_qubits} qubits, expected {n}")
    return _shot_witness(backend, circuit, [tuple(range(n))], shots, seed, noise)[0][0]


@dataclass(frozen=True)
class CAParams:
    n_max: int = 6
    L_max: int = 8
    witness_threshold: float = 0.5
    trajectories: int = 200
    shots: int = 4096
    alpha: float = 0.01
    seed: int = 0
    witness_mode: str = "exact"
    audit_grid: bool = True

    def __post_init__(self):
        if self.n_max < 2:
            raise ValidationError(f"n_max must be >= 2, got {self.n_max}")
        if self.L_max < 1:
            raise ValidationError(f"L_max must be >= 1, got {self.L_max}")
        if not 0 < self.witness_threshold < 1:
            raise ValidationError("witness_threshold must lie in (0, 1)")
        if self.trajectories < 1 or self.shots < 1:
            raise ValidationError("trajectories and shots must be positive")
        if self.witness_mode not in WITNESS_MODES:
            raise ValidationError(f"witness_mode must be one of {WITNESS_MODES}")
        check_seed(self.seed)


@dataclass
class CAResult:
    best_n: int
    best_depth: int
    ops: int
    area: int
    pass_map: Dict[Tuple[int, int], bool] = field(default_factory=dict)


def ca_circuit(n: int, L: int, seed: int) -> Circuit:
    """GHZ preparation followed by the mirror load for grid point ``(n, L)``."""
    return build_ghz_circuit(n).compose(build_mirror_load(n, L, derive_seed(seed, "ca/mirror", n)))


class _Witness:
    """Evaluates GHZ-fidelity estimates with a shared one-sided critical value."""

    def __init__(self, mode, backend, noise, trajectories, shots, z):
        if mode == "exact" and not isinstance(backend, StateBackend):
            raise CapabilityError("exact witness needs a backend exposing states()")
        self.mode, self.backend, self.noise = mode, backend, noise
        self.trajectories, self.shots, self.z = trajectories, shots, z

    def __call__(self, circuit: Circuit, registers: Sequence[Sequence[int]], seed: int,
                 layout: Registers = None) -> List[Tuple[float, float]]:
        if self.mode == "shots":
            return _shot_witness(self.backend, circuit, registers, self.shots, seed,
                                 self.noise, layout)
        states = self.backend.states(circuit, seed, self.noise, self.trajectories, layout)
        return [mean_stderr([register_ghz_fidelity(s, reg) for s in states])
                for reg in registers]

    def verdict(self, value: float, stderr: float, threshold: float) -> bool:
        return value - self.z * stderr >= threshold


def run_computational_area(params: CAParams, noise: Optional[NoiseModel] = None,
                           backend: Optional[SamplingBackend] = None,
                           sink: Optional[CircuitSink] = None) -> KernelResult:
    """Sweep ``n = 2..n_max``, binary-searching the deepest passing ``L`` for each.

    With ``audit_grid`` every remaining grid point is evaluated too, so the
    recorded pass map is complete and depth non-monotonicity is reported.
    The kernel passes when at least one point certifies entanglement.
    """
    backend = backend or default_backend(noise, max(16, params.n_max))
    grid = (params.n_max - 1) * params.L_max
    per_alpha = bonferroni(params.alpha, grid)
    watch = Stopwatch()
    points: Dict[Tuple[int, int], dict] = {}
    search: Dict[int, int] = {}
    error = None

    def evaluate(n, L):
        if (n, L) not in points:
            circuit = ca_circuit(n, L, params.seed)
            if sink:
                sink("ca", {"n": n, "L": L, "seed": params.seed}, circuit)
            value, se = witness(circuit, [tuple(range(n))],
                                derive_seed(params.seed, f"ca/witness/n={n}/L={L}"))[0]
            points[n, L] = {"n": n, "L": L, "ops": circuit.gate_count, "witness": value,
                            "stderr": se,
                            "pass": witness.verdict(value, se, params.witness_threshold)}
        return points[n, L]["pass"]

    with watch.running():
        try:
            witness = _Witness(params.witness_mode, backend, noise, params.trajectories,
                               params.shots, z_critical(per_alpha, two_sided=False))
            for n in range(2, params.n_max + 1):
                lo, hi = 0, params.L_max
                while lo < hi:
                    mid = (lo + hi + 1) // 2
                    if evaluate(n, mid):
                        lo = mid
                    else:
                        hi = mid - 1
                search[n] = lo
                if params.audit_grid:
                    for L in range(1, params.L_max + 1):
                        evaluate(n, L)
        except (ExecutionError, CapabilityError) as exc:
            error = f"{type(exc).__name__}: {exc}"

    passing = [p for p in points.values() if p["pass"]]
    best = max(passing, key=lambda p: (p["n"] * p["ops"], p["n"]), default=None)
    outcome = CAResult(
        best_n=best["n"] if best else 0,
        best_depth=best["L"] if best else 0,
        ops=best["ops"] if best else 0,
        area=best["n"] * best["ops"] if best else 0,
        pass_map={k: v["pass"] for k, v in sorted(points.items())},
    )
    violations = [
        [n, L] for (n, L), p in sorted(points.items())
        if p["pass"] and L > search.get(n, params.L_max)
    ]
    max_ops = ca_circuit(params.n_max, params.L_max, params.seed).gate_count
    details = {
        "best_n": outcome.best_n, "best_depth": outcome.best_depth, "ops": outcome.ops,
        "area": outcome.area, "max_area": params.n_max * max_ops,
        "per_test_alpha": per_alpha, "search_depth": search,
        "monotone_violations": violations,
        "pass_map": [points[k] for k in sorted(points)],
    }
    if error:
        details["error"] = error
    result = KernelResult("ca", jsonable(asdict(params)), error is None and outcome.area > 0,
                          float(outcome.area), params.seed, watch.ms, jsonable(details))
    result.outcome = outcome
    return result
