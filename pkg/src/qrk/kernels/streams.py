"""Parallel Streams: k concurrent Computational-Area workloads on disjoint registers."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import List, Optional

from ..backend import SamplingBackend
from ..circuit import Circuit, tensor
from ..errors import CapabilityError, ExecutionError, ValidationError
from ..rng import check_seed, derive_seed
from ..simulator import NoiseModel
from ..stats import bonferroni, z_critical
from .area import WITNESS_MODES, _Witness, build_ghz_circuit, build_mirror_load
from .base import CircuitSink, KernelResult, Stopwatch, default_backend, jsonable


@dataclass(frozen=True)
class StreamsParams:
    k_max: int = 4
    n_per_stream: int = 3
    L: int = 8
    witness_threshold: float = 0.5
    trajectories: int = 200
    shots: int = 4096
    alpha: float = 0.01
    seed: int = 0
    witness_mode: str = "exact"

    def __post_init__(self):
        if self.k_max < 1:
            raise ValidationError(f"k_max must be >= 1, got {self.k_max}")
        if self.n_per_stream < 2 or self.L < 1:
            raise ValidationError("each stream needs n_per_stream >= 2 and L >= 1")
        if not 0 < self.witness_threshold < 1:
            raise ValidationError("witness_threshold must lie in (0, 1)")
        if self.witness_mode not in WITNESS_MODES:
            raise ValidationError(f"witness_mode must be one of {WITNESS_MODES}")
        check_seed(self.seed)


@dataclass
class StreamsResult:
    k_achieved: int
    per_stream_area: int
    score: int


def stream_circuit(n: int, L: int, seed: int, stream: int) -> Circuit:
    mirror_seed = derive_seed(seed, "streams/mirror", stream)
    return build_ghz_circuit(n).compose(build_mirror_load(n, L, mirror_seed))


def stream_circuits(params: StreamsParams) -> List[Circuit]:
    return [stream_circuit(params.n_per_stream, params.L, params.seed, s)
            for s in range(params.k_max)]


def run_parallel_streams(params: StreamsParams, noise: Optional[NoiseModel] = None,
                         backend: Optional[SamplingBackend] = None,
                         sink: Optional[CircuitSink] = None) -> KernelResult:
    """For k = 1..k_max run k streams side by side and witness each one.

    ``k_achieved`` is the largest k for which every stream certifies; the
    significance level is split over all ``k_max (k_max + 1) / 2`` stream tests.
    """
    backend = backend or default_backend(noise, max(16, params.k_max * params.n_per_stream))
    need = params.k_max * params.n_per_stream
    if need > backend.width:
        raise CapabilityError(f"{params.k_max} streams of {params.n_per_stream} qubits "
                              f"need width {need}, backend has {backend.width}")
    tests = params.k_max * (params.k_max + 1) // 2
    per_alpha = bonferroni(params.alpha, tests)
    circuits = stream_circuits(params)
    ops = circuits[0].gate_count
    per_stream_area = params.n_per_stream * ops
    rows, error = [], None
    watch = Stopwatch()
    with watch.running():
        try:
            witness = _Witness(params.witness_mode, backend, noise, params.trajectories,
                               params.shots, z_critical(per_alpha, two_sided=False))
            for k in range(1, params.k_max + 1):
                combined, registers = tensor(circuits[:k])
                if sink:
                    sink("streams", {"k": k, "n": params.n_per_stream, "L": params.L,
                                     "seed": params.seed}, combined)
                estimates = witness(combined, registers,
                                    derive_seed(params.seed, "streams/witness", k), registers)
                streams = [{"stream": s, "witness": v, "stderr": se,
                            "pass": witness.verdict(v, se, params.witness_threshold)}
                           for s, (v, se) in enumerate(estimates)]
                rows.append({"k": k, "pass": all(s["pass"] for s in streams),
                             "streams": streams})
        except (ExecutionError, CapabilityError) as exc:
            error = f"{type(exc).__name__}: {exc}"
    k_achieved = max((r["k"] for r in rows if r["pass"]), default=0)
    outcome = StreamsResult(k_achieved, per_stream_area, k_achieved * per_stream_area)
    details = {"k_achieved": k_achieved, "per_stream_area": per_stream_area,
               "score": outcome.score, "max_score": params.k_max * per_stream_area,
               "ops_per_stream": ops, "per_test_alpha": per_alpha, "sweep": rows}
    if error:
        details["error"] = error
    result = KernelResult("streams", jsonable(asdict(params)),
                          error is None and k_achieved >= 1, float(outcome.score),
                          params.seed, watch.ms, jsonable(details))
    result.outcome = outcome
    return result
