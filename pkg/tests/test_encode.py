import math

import numpy as np
import pytest

from qrk.backend import StatevectorBackend
from qrk.circuit import GateKind
from qrk.errors import ExecutionError, ValidationError
from qrk.kernels import (EncodeParams, build_encode_circuit, encode_values,
                         ideal_one_probability, run_encode)
from qrk.simulator import NoiseModel, run_exact
from qrk.stats import z_critical


def test_values_n4():
    assert encode_values(4) == [0, math.pi, 2 * math.pi, 3 * math.pi, 4 * math.pi]


def test_values_n1_and_n8():
    assert encode_values(1) == [0, 4 * math.pi]
    assert encode_values(8)[2] == math.pi


def test_values_spacing():
    v = encode_values(37)
    assert len(v) == 38
    assert np.allclose(np.diff(v), 4 * math.pi / 37, rtol=0, atol=1e-14)
    assert all(b > a for a, b in zip(v, v[1:]))


def test_values_zero():
    with pytest.raises(ValidationError):
        encode_values(0)


def test_circuit_shape():
    c = build_encode_circuit([0.1, 0.2, 0.3, 0.4, 0.5])
    assert (c.n_qubits, c.gate_count) == (5, 10)
    assert all(g.kind is GateKind.RY for g in c.gates)


def test_circuit_zero_angle_state():
    amps = run_exact(build_encode_circuit([0.0])).amplitudes
    np.testing.assert_allclose(amps, [math.cos(math.pi / 12), math.sin(math.pi / 12)],
                               atol=1e-15)


def test_circuit_total_rotation_pi():
    amps = run_exact(build_encode_circuit([5 * math.pi / 6])).amplitudes
    assert abs(amps[1]) ** 2 == pytest.approx(1, abs=1e-15)


def test_ideal_probability_half_angle():
    assert ideal_one_probability(0.0) == pytest.approx((1 - math.cos(math.pi / 6)) / 2)
    assert ideal_one_probability(0.0) == pytest.approx(0.0669873, abs=1e-7)


@pytest.mark.parametrize("N", [1, 8, 64, 256])
def test_exact_mode_passes(N):
    r = run_encode(EncodeParams(N=N), backend=StatevectorBackend("exact"))
    assert r.passed and r.metric <= 1e-10
    assert r.details["mode"] == "exact"
    assert len(r.details["checks"]) == N + 1


def test_batching_is_transparent():
    narrow = run_encode(EncodeParams(N=20), backend=StatevectorBackend("exact", width=3))
    wide = run_encode(EncodeParams(N=20), backend=StatevectorBackend("exact", width=21))
    assert narrow.details["batches"] == 7 and wide.details["batches"] == 1
    obs_n = [c["observed"] for c in narrow.details["checks"]]
    obs_w = [c["observed"] for c in wide.details["checks"]]
    np.testing.assert_allclose(obs_n, obs_w, atol=1e-14)


def test_fault_detection_gap_is_far_above_detection_limit():
    # oracle for the injected-fault example: worst P(1) gap over the N=16 grid
    # against the Bonferroni z-test resolution at 10,000 shots
    shots, alpha, N = 10_000, 0.01, 16
    gaps = [abs(math.sin((t + math.pi / 6 + 0.2) / 2) ** 2 - math.sin((t + math.pi / 6) / 2) ** 2)
            for t in encode_values(N)]
    limit = z_critical(alpha / (N + 1)) * math.sqrt(0.25 / shots)
    assert max(gaps) > 5 * limit


def test_fault_is_flagged():
    r = run_encode(EncodeParams(N=16, shots=10_000, alpha=0.01, fault_offset=0.2),
                   backend=StatevectorBackend("trajectory"))
    assert not r.passed and r.details["failed"]


def test_exact_mode_flags_fault():
    r = run_encode(EncodeParams(N=4, fault_offset=1e-6), backend=StatevectorBackend("exact"))
    assert not r.passed


def test_shot_mode_noiseless_passes():
    r = run_encode(EncodeParams(N=16, shots=4096, seed=3),
                   backend=StatevectorBackend("trajectory"))
    assert r.passed and r.details["mode"] == "shots"
    assert r.metric < 0.05


def test_heavy_noise_fails():
    r = run_encode(EncodeParams(N=8, shots=4096), NoiseModel(p1=0.3),
                   StatevectorBackend("trajectory"))
    assert not r.passed


def test_deterministic():
    b = StatevectorBackend("trajectory", trajectories=50)
    noise = NoiseModel(p1=0.01, readout=0.01)
    a = run_encode(EncodeParams(N=8, seed=5), noise, b)
    c = run_encode(EncodeParams(N=8, seed=5), noise, b)
    assert (a.passed, a.metric, a.details) == (c.passed, c.metric, c.details)


class BrokenBackend:
    name, width, method = "broken", 8, "trajectory"

    def sample(self, *a, **k):
        raise ExecutionError("device offline")


def test_backend_failure_recorded():
    r = run_encode(EncodeParams(N=4), backend=BrokenBackend())
    assert not r.passed
    assert "device offline" in r.details["error"]


def test_circuit_sink_sees_every_batch():
    seen = []
    run_encode(EncodeParams(N=9), backend=StatevectorBackend("exact", width=4),
               sink=lambda k, p, c: seen.append((k, p["batch"], c.n_qubits)))
    assert seen == [("encode", 0, 4), ("encode", 1, 4), ("encode", 2, 2)]
