from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np

from ..backend import StatevectorBackend
from ..circuit import Circuit
from ..errors import ValidationError
from ..simulator import NOISELESS, NoiseModel

RESULT_KEYS = ("kernel", "params", "pass", "metric", "seed", "wall_ms", "details")

# called as sink(kernel_name, construction_params, circuit) for every circuit built
CircuitSink = Callable[[str, Dict[str, Any], Circuit], None]


@dataclass
class KernelResult:
    kernel: str
    params: Dict[str, Any]
    passed: bool
    metric: float
    seed: int
    wall_ms: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)
    outcome: Any = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"kernel": self.kernel, "params": self.params, "pass": self.passed,
                "metric": self.metric, "seed": self.seed, "wall_ms": self.wall_ms,
                "details": self.details}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KernelResult":
        unknown = set(data) - set(RESULT_KEYS)
        missing = set(RESULT_KEYS) - set(data)
        if unknown or missing:
            raise ValidationError(
                f"bad result object: unknown {sorted(unknown)}, missing {sorted(missing)}")
        return cls(data["kernel"], data["params"], bool(data["pass"]), data["metric"],
                   data["seed"], data["wall_ms"], data["details"])


class Stopwatch:
    def __init__(self):
        self.ms = 0.0

    @contextmanager
    def running(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.ms = (time.perf_counter() - t0) * 1e3


def default_backend(noise: Optional[NoiseModel], width: int = 16) -> StatevectorBackend:
    method = "exact" if (noise or NOISELESS).noiseless else "trajectory"
    return StatevectorBackend(method, width=width)


def mean_stderr(values: Sequence[float]) -> tuple:
    if len(values) == 0:
        raise ValidationError("empty sample")
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def jsonable(value):
    """Plain-JSON copy of ``value``: numpy scalars unwrapped, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value
