"""Suite orchestration, composite scoring and the JSON report."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from .backend import METHODS, StatevectorBackend
from .circuit import Circuit, emit_qasm
from .errors import ConfigurationError, ValidationError
from .kernels import (CAParams, EncodeParams, KernelResult, StreamsParams,
                      run_computational_area, run_encode, run_parallel_streams)
from .kernels.area import WITNESS_MODES
from .rng import check_seed
from .simulator import NoiseModel

REPORT_VERSION = "qrk-report/1"
REPORT_KEYS = ("version", "timestamp", "config", "results", "composite")
KERNELS = ("encode", "ca", "streams")
CONVENTIONS = {
    "operation_counting": "uniform: every gate counts as one operation",
    "noise_mechanism": "depolarizing Pauli insertion after each gate on its targets; "
                       "crosstalk depolarizes other-register qubits per two-qubit gate",
    "normalizers": "v1: encode 1-max_deviation clipped; ca area/max_area; "
                   "streams score/max_score",
}


@dataclass
class RunConfig:
    kernels: List[str] = field(default_factory=lambda: list(KERNELS))
    n: int = 64
    n_max: int = 6
    depth_max: int = 8
    streams: int = 4
    n_per_stream: int = 3
    shots: int = 4096
    trajectories: int = 200
    alpha: float = 0.01
    threshold: float = 0.5
    noise: Dict[str, float] = field(default_factory=lambda: NoiseModel().to_dict())
    backend: Optional[str] = None
    witness: str = "exact"
    width: Optional[int] = None
    seed: int = 0
    report: Optional[str] = "qrk-report.json"
    emit_qasm: Optional[str] = None
    weights: Optional[Dict[str, float]] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        data = {k: v for k, v in data.items() if k != "conventions"}
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data).validated()

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def noise_model(self) -> NoiseModel:
        try:
            return NoiseModel(**self.noise)
        except (TypeError, ValidationError) as exc:
            raise ConfigurationError(f"bad noise model {self.noise}: {exc}") from exc

    @property
    def method(self) -> str:
        if self.backend:
            return self.backend
        return "exact" if self.noise_model().noiseless else "trajectory"

    def validated(self) -> "RunConfig":
        kernels = []
        for k in self.kernels:
            if k == "all":
                kernels += [x for x in KERNELS if x not in kernels]
            elif k in KERNELS:
                if k not in kernels:
                    kernels.append(k)
            else:
                raise ConfigurationError(f"unknown kernel {k!r}; choose from {KERNELS + ('all',)}")
        if not kernels:
            raise ConfigurationError("no kernel selected")
        self.kernels = [k for k in KERNELS if k in kernels]
        self.noise = self.noise_model().to_dict()
        if self.backend is not None and self.backend not in METHODS:
            raise ConfigurationError(f"unknown backend {self.backend!r}; choose from {METHODS}")
        if self.method == "exact" and not self.noise_model().noiseless:
            raise ConfigurationError("the exact backend is noiseless; drop --noise or use "
                                     "--backend trajectory")
        if self.witness not in WITNESS_MODES:
            raise ConfigurationError(f"unknown witness mode {self.witness!r}")
        if self.weights is not None:
            if set(self.weights) != set(self.kernels):
                raise ConfigurationError(
                    f"weights must cover exactly {self.kernels}, got {sorted(self.weights)}")
            for k, w in self.weights.items():
                if not (isinstance(w, (int, float)) and math.isfinite(w) and w >= 0):
                    raise ConfigurationError(f"weight for {k} must be a non-negative number")
        try:
            check_seed(self.seed)
            # construct once so bad values surface as configuration errors
            self.encode_params(), self.ca_params(), self.streams_params()
        except ValidationError as exc:
            raise ConfigurationError(str(exc)) from exc
        if self.width is not None and self.width < 1:
            raise ConfigurationError("width must be positive")
        return self

    def encode_params(self) -> EncodeParams:
        return EncodeParams(N=self.n, shots=self.shots, alpha=self.alpha, seed=self.seed)

    def ca_params(self) -> CAParams:
        return CAParams(n_max=self.n_max, L_max=self.depth_max,
                        witness_threshold=self.threshold, trajectories=self.trajectories,
                        shots=self.shots, alpha=self.alpha, seed=self.seed,
                        witness_mode=self.witness)

    def streams_params(self) -> StreamsParams:
        return StreamsParams(k_max=self.streams, n_per_stream=self.n_per_stream,
                             L=self.depth_max, witness_threshold=self.threshold,
                             trajectories=self.trajectories, shots=self.shots,
                             alpha=self.alpha, seed=self.seed, witness_mode=self.witness)

    def make_backend(self) -> StatevectorBackend:
        width = self.width or max(16, self.n_max, self.streams * self.n_per_stream)
        return StatevectorBackend(self.method, width=width, trajectories=self.trajectories)

    def effective_weights(self) -> Dict[str, float]:
        if self.weights is not None:
            return dict(self.weights)
        return {k: 1 / len(self.kernels) for k in self.kernels}


def normalized_metric(result: KernelResult) -> float:
    """Map a kernel metric onto [0, 1] (normalizers v1)."""
    if result.kernel == "encode":
        return min(1.0, max(0.0, 1.0 - result.metric))
    if result.kernel == "ca":
        top = result.details.get("max_area") or 0
        return result.metric / top if top else 0.0
    if result.kernel == "streams":
        top = result.details.get("max_score") or 0
        return result.metric / top if top else 0.0
    raise ConfigurationError(f"no normalizer for kernel {result.kernel!r}")


def composite_score(results: List[KernelResult], weights: Dict[str, float]) -> float:
    """Weighted sum of normalized kernel metrics."""
    by_kernel = {r.kernel: r for r in results}
    total = 0.0
    for kernel, w in weights.items():
        if w < 0:
            raise ConfigurationError(f"negative weight for {kernel}")
        r = by_kernel.get(kernel)
        if r is None:
            raise ConfigurationError(f"no result for weighted kernel {kernel!r}")
        if r.metric is None or not math.isfinite(r.metric):
            raise ConfigurationError(f"metric for {kernel!r} is not finite")
        total += w * normalized_metric(r)
    return total


@dataclass
class Report:
    version: str
    timestamp: str
    config: Dict[str, Any]
    results: List[KernelResult]
    composite: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"version": self.version, "timestamp": self.timestamp, "config": self.config,
                "results": [r.to_dict() for r in self.results], "composite": self.composite}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False,
                          allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        unknown = set(data) - set(REPORT_KEYS)
        missing = set(REPORT_KEYS) - set(data)
        if unknown or missing:
            raise ValidationError(
                f"bad report: unknown keys {sorted(unknown)}, missing {sorted(missing)}")
        results = [KernelResult.from_dict(r) for r in data["results"]]
        return cls(data["version"], data["timestamp"], data["config"], results,
                   data["composite"])

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


class QasmWriter:
    """Circuit sink writing ``<kernel>_<params-hash>.qasm`` files."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def __call__(self, kernel: str, params: Dict[str, Any], circuit: Circuit) -> None:
        key = json.dumps(params, sort_keys=True).encode()
        digest = hashlib.blake2b(key, digest_size=6).hexdigest()
        path = self.directory / f"{kernel}_{digest}.qasm"
        path.write_text(emit_qasm(circuit), encoding="utf-8")
        self.written.append(path)


def run_suite(config: RunConfig) -> Report:
    config.validated()
    noise = config.noise_model()
    backend = config.make_backend()
    sink = QasmWriter(config.emit_qasm) if config.emit_qasm else None
    runners = {
        "encode": lambda: run_encode(config.encode_params(), noise, backend, sink),
        "ca": lambda: run_computational_area(config.ca_params(), noise, backend, sink),
        "streams": lambda: run_parallel_streams(config.streams_params(), noise, backend, sink),
    }
    results = [runners[k]() for k in config.kernels]
    snapshot = config.to_dict()
    snapshot["backend"] = config.method
    snapshot["weights"] = config.effective_weights()
    snapshot["conventions"] = CONVENTIONS
    composite = composite_score(results, config.effective_weights())
    timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Report(REPORT_VERSION, timestamp, snapshot, results, composite)
