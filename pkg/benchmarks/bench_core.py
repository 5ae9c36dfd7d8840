"""Compare the compiled and numpy state-vector cores.

    python benchmarks/bench_core.py [--qubits 10 14 18] [--gates 200] [--repeat 5]

Times a full program run on each core, then noisy-trajectory throughput
through the public simulator with the selected core.
"""
import argparse
import statistics
import sys
import time

import numpy as np

from qrk import _pycore, core
from qrk.circuit import Circuit, cx, cz, h, rx, ry, rz
from qrk.kernels import ca_circuit
from qrk.simulator import NoiseModel, _compile, run_trajectories

try:
    from qrk import _core
except ImportError:
    _core = None


def random_circuit(rng, n, n_gates):
    one = (h, rx, ry, rz)
    gates = []
    for _ in range(n_gates):
        if rng.random() < 0.4:
            a, b = (int(q) for q in rng.choice(n, 2, replace=False))
            gates.append((cx, cz)[rng.integers(2)](a, b))
        else:
            f = one[rng.integers(len(one))]
            q = int(rng.integers(n))
            gates.append(f(q) if f is h else f(q, float(rng.uniform(0, 6.3))))
    return Circuit(n, tuple(gates))


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_program(qubits, n_gates, repeat):
    impls = [("numpy", _pycore)] + ([("cython", _core)] if _core else [])
    print(f"{'qubits':>6} {'gates':>6} " + " ".join(f"{name:>12}" for name, _ in impls)
          + (f" {'speedup':>8}" if _core else ""))
    rng = np.random.default_rng(0)
    for n in qubits:
        prog = _compile(random_circuit(rng, n, n_gates))
        times = []
        for _, impl in impls:
            def run(impl=impl):
                state = np.zeros(1 << n, dtype=np.complex128)
                state[0] = 1
                impl.run_program(state, prog.ops, prog.q0, prog.q1, prog.midx, prog.mats)
            run()
            times.append(_time(run, repeat))
        row = f"{n:>6} {n_gates:>6} " + " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if _core:
            row += f" {times[0] / times[1]:>7.1f}x"
        print(row)


def bench_trajectories(n, L, count):
    circuit = ca_circuit(n, L, seed=0)
    noise = NoiseModel(p1=0.001, p2=0.01)
    t0 = time.perf_counter()
    run_trajectories(circuit, noise, range(count))
    dt = time.perf_counter() - t0
    print(f"trajectories ({core.IMPLEMENTATION}): n={n} L={L} gates={circuit.gate_count} "
          f"{count} runs in {dt:.3f} s, {count / dt:,.0f}/s")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18])
    p.add_argument("--gates", type=int, default=200)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--trajectories", type=int, default=2000)
    args = p.parse_args()
    if _core is None:
        print("compiled core not built; timing the numpy core only")
    bench_program(args.qubits, args.gates, args.repeat)
    bench_trajectories(6, 8, args.trajectories)
    bench_trajectories(12, 8, max(1, args.trajectories // 10))
    return 0


if __name__ == "__main__":
    sys.exit(main())
