import math

import numpy as np
import pytest

from qrk.backend import StatevectorBackend
from qrk.circuit import Circuit, GateKind, cx, h, x
from qrk.errors import CapabilityError, ValidationError
from qrk.kernels import (CAParams, build_ghz_circuit, build_mirror_load, ca_circuit,
                         ghz_witness_density, ghz_witness_exact, ghz_witness_shots,
                         run_computational_area)
from qrk.oracle import density_matrix_reference
from qrk.simulator import NoiseModel, StateVector, exact_fidelity, ghz_state, run_exact

EXACT = StatevectorBackend("exact")


def expected_ops(n, L):
    """Independent recount: prep + 2 * sum of (n rotations + brickwork pairs) per layer."""
    pairs = lambda layer: len([q for q in range(layer % 2, n - 1, 2)])
    return n + 2 * sum(n + pairs(layer) for layer in range(L))


def test_ghz_prep():
    assert [g.kind for g in build_ghz_circuit(2).gates] == [GateKind.H, GateKind.CX]
    assert build_ghz_circuit(3).gate_count == 3
    assert build_ghz_circuit(5).gate_count == 5
    with pytest.raises(ValidationError):
        build_ghz_circuit(1)


def test_ghz_prep_states():
    np.testing.assert_allclose(run_exact(build_ghz_circuit(2)).amplitudes,
                               [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)], atol=1e-15)


def test_mirror_gate_count_n4_l8():
    c = ca_circuit(4, 8, seed=1)
    assert c.gate_count == 4 + 8 * 6 + 8 * 5 == 92
    assert c.gate_count == expected_ops(4, 8)


@pytest.mark.parametrize("n,L", [(2, 1), (3, 5), (5, 3), (7, 16)])
def test_mirror_gate_count_formula(n, L):
    assert build_mirror_load(n, L, 0).gate_count + n == expected_ops(n, L)


def test_mirror_structure():
    c = build_mirror_load(5, 2, 9)
    fwd = c.gates[: c.gate_count // 2]
    assert [g.kind for g in fwd[:5]] == [GateKind.RY] * 5
    assert [g.targets for g in fwd[5:7]] == [(0, 1), (2, 3)]
    assert [g.targets for g in fwd[12:14]] == [(1, 2), (3, 4)]
    assert all(0 <= g.angle < 2 * math.pi for g in fwd if g.kind is GateKind.RY)


def test_mirror_deterministic_and_prefix_stable():
    assert build_mirror_load(4, 6, 3) == build_mirror_load(4, 6, 3)
    short = build_mirror_load(4, 2, 3).gates
    long = build_mirror_load(4, 5, 3).gates
    assert long[:len(short) // 2] == short[:len(short) // 2]


@pytest.mark.parametrize("n", [2, 5, 10])
@pytest.mark.parametrize("L", [1, 7, 16])
def test_mirror_identity(n, L):
    c = build_ghz_circuit(n).compose(build_mirror_load(n, L, seed=n * L))
    assert exact_fidelity(run_exact(c), ghz_state(n)) >= 1 - 1e-9


def test_witness_exact_examples():
    assert ghz_witness_exact([ghz_state(3)] * 4, 3) == pytest.approx(1, abs=1e-9)
    orth = StateVector(3, np.array([1, 0, 0, 0, 0, 0, 0, -1]) / math.sqrt(2))
    assert ghz_witness_exact([ghz_state(3), orth], 3) == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        ghz_witness_exact([], 3)


def test_witness_maximally_mixed_oracle():
    assert ghz_witness_density(np.eye(4) / 4, 2) == pytest.approx(0.25)


def test_witness_shots_noiseless_bell():
    b = StatevectorBackend("trajectory")
    f = ghz_witness_shots(b, build_ghz_circuit(2), 2, 40_000, seed=1)
    # 5 settings of 8000 shots; at F = 1 the population term is exact and parities are +-1
    assert f == pytest.approx(1.0, abs=3 * math.sqrt(1 / 8000))


def test_witness_shots_product_state():
    f = ghz_witness_shots(StatevectorBackend("trajectory"), Circuit(3), 3, 50_000, seed=2)
    per = 50_000 // 7
    sigma = math.sqrt(6 / per) / 6 / 2
    assert f == pytest.approx(0.5, abs=3 * sigma + 1e-12)


def test_witness_shots_budget():
    with pytest.raises(ValidationError):
        ghz_witness_shots(StatevectorBackend(), build_ghz_circuit(3), 3, 499, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_witness_shots_agree_with_oracle(n):
    noise = NoiseModel(p1=0.02, p2=0.02)
    c = ca_circuit(n, 2, seed=4)
    exact = ghz_witness_density(density_matrix_reference(c, noise), n)
    shots = 60_000
    f = ghz_witness_shots(StatevectorBackend("trajectory", trajectories=2000), c, n, shots,
                          seed=10 + n, noise=noise)
    per = shots // (2 * n + 1)
    sigma = math.sqrt(0.25 / per + (2 * n) / per / (2 * n) ** 2) / 2
    assert abs(f - exact) <= 3 * sigma


def test_ca_noiseless_area():
    r = run_computational_area(CAParams(n_max=4, L_max=8), backend=EXACT)
    out = r.outcome
    assert r.passed and all(out.pass_map.values()) and len(out.pass_map) == 24
    recount = ca_circuit(out.best_n, out.best_depth, 0).gate_count
    assert (out.best_n, out.best_depth) == (4, 8)
    assert out.area == 4 * recount == 368
    assert r.details["max_area"] == 368


def test_ca_full_depolarizing_has_no_area():
    r = run_computational_area(CAParams(n_max=4, L_max=4, trajectories=100, seed=7),
                               NoiseModel(p2=1.0), StatevectorBackend("trajectory"))
    assert not r.passed and r.outcome.area == 0 and r.outcome.best_n == 0
    assert not any(r.outcome.pass_map.values())


def test_ca_full_depolarizing_oracle_below_threshold():
    for L in (1, 2, 4):
        rho = density_matrix_reference(ca_circuit(2, L, 0), NoiseModel(p2=1.0))
        assert ghz_witness_density(rho, 2) <= 0.5


def test_ca_oracle_monotone_in_p2():
    c = ca_circuit(2, 4, 0)
    f = [ghz_witness_density(density_matrix_reference(c, NoiseModel(p2=p)), 2)
         for p in (0, 0.001, 0.01, 0.05, 0.2)]
    assert all(b < a for a, b in zip(f, f[1:])), f


def test_ca_trajectory_witness_tracks_oracle():
    noise = NoiseModel(p1=0.01, p2=0.05)
    r = run_computational_area(CAParams(n_max=3, L_max=3, trajectories=2000, seed=3), noise,
                               StatevectorBackend("trajectory"))
    for point in r.details["pass_map"]:
        c = ca_circuit(point["n"], point["L"], 3)
        exact = ghz_witness_density(density_matrix_reference(c, noise), point["n"])
        assert abs(point["witness"] - exact) <= 3 * point["stderr"] + 1e-12


def test_ca_area_bookkeeping_under_noise():
    r = run_computational_area(CAParams(n_max=5, L_max=6, trajectories=100, seed=11),
                               NoiseModel(p1=0.002, p2=0.02), StatevectorBackend("trajectory"))
    out = r.outcome
    assert out.area > 0
    assert out.area == out.best_n * ca_circuit(out.best_n, out.best_depth, 11).gate_count
    passing = [(n, L) for (n, L), ok in out.pass_map.items() if ok]
    assert out.area == max(n * ca_circuit(n, L, 11).gate_count for n, L in passing)


def test_ca_binary_search_without_audit():
    r = run_computational_area(CAParams(n_max=3, L_max=8, audit_grid=False), backend=EXACT)
    # all points pass, so the search probes 8 once per width after 4 and 6 (or fewer)
    assert len(r.outcome.pass_map) < 16
    assert r.details["search_depth"] == {"2": 8, "3": 8}


def test_ca_deterministic():
    args = (CAParams(n_max=3, L_max=4, trajectories=50, seed=5), NoiseModel(p2=0.05),
            StatevectorBackend("trajectory"))
    a, b = run_computational_area(*args), run_computational_area(*args)
    assert a.details == b.details and a.metric == b.metric


def test_ca_shots_mode_noiseless():
    r = run_computational_area(CAParams(n_max=3, L_max=2, witness_mode="shots", shots=2000),
                               backend=StatevectorBackend("trajectory"))
    assert r.passed and all(r.outcome.pass_map.values())


def test_ca_exact_witness_needs_states():
    class SamplingOnly:
        name, width = "sampler", 8

        def sample(self, *a, **k):
            raise AssertionError("not reached")

    r = run_computational_area(CAParams(n_max=2, L_max=1), backend=SamplingOnly())
    assert not r.passed and "CapabilityError" in r.details["error"]


def test_ca_params_validation():
    with pytest.raises(ValidationError):
        CAParams(n_max=1)
    with pytest.raises(ValidationError):
        CAParams(witness_threshold=1.0)


def test_basis_change_is_noise_free():
    backend = StatevectorBackend("trajectory", trajectories=50)
    noise = NoiseModel(p1=1.0)
    flipped = backend.sample(Circuit(1, ()), 500, seed=1, noise=noise, basis=[x(0)])
    assert flipped.histogram == {"1": 500}
    # the same gate inside the workload is depolarized
    noisy = backend.sample(Circuit(1, (x(0),)), 500, seed=1, noise=noise)
    assert noisy.histogram.get("0", 0) > 0
    with pytest.raises(ValidationError):
        backend.sample(Circuit(2, ()), 10, seed=1, basis=[cx(0, 1)])
