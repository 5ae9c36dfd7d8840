"""``qrk`` command line.

Exit codes: 0 every selected kernel passed, 1 at least one verification
failure (report still written), 2 configuration or usage error (no report).
Precedence: flags, then ``--config`` file, then built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .errors import CapabilityError, ConfigurationError, QRKError
from .harness import RunConfig, run_suite

_NOISE_KEYS = {"p1": "p1", "p2": "p2", "ro": "readout", "readout": "readout",
               "xt": "crosstalk", "crosstalk": "crosstalk"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _pairs(text: str) -> Dict[str, float]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"{key}: {value!r} is not a number") from None
    return out


def parse_noise(text: str) -> Dict[str, float]:
    noise = {}
    for key, value in _pairs(text).items():
        if key not in _NOISE_KEYS:
            raise ConfigurationError(f"unknown noise parameter {key!r}; use p1, p2, ro, xt")
        noise[_NOISE_KEYS[key]] = value
    return noise


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrk", description="Run the quantum research kernels.")
    p.add_argument("--kernel", action="append", metavar="NAME",
                   help="encode, ca, streams or all (repeatable, comma-separated)")
    p.add_argument("--n", type=int, help="Encode ramp upper index N")
    p.add_argument("--n-max", type=int, help="largest GHZ width in the CA sweep")
    p.add_argument("--depth-max", type=int, help="largest mirror half-depth L")
    p.add_argument("--streams", type=int, help="maximum number of parallel streams")
    p.add_argument("--n-per-stream", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--trajectories", type=int)
    p.add_argument("--noise", help="p1=..,p2=..,ro=..,xt=..")
    p.add_argument("--alpha", type=float)
    p.add_argument("--threshold", type=float, help="GHZ witness threshold")
    p.add_argument("--backend", choices=["exact", "trajectory"])
    p.add_argument("--witness", choices=["exact", "shots"])
    p.add_argument("--width", type=int, help="backend register width")
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="JSON file mirroring the run configuration")
    p.add_argument("--report", help="report path (default qrk-report.json)")
    p.add_argument("--emit-qasm", metavar="DIR")
    p.add_argument("--weights", help="kernel=weight,... for the composite score")
    return p


def _config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")
    if args.kernel:
        data["kernels"] = [k.strip() for item in args.kernel for k in item.split(",") if k.strip()]
    flags = {"n": args.n, "n_max": args.n_max, "depth_max": args.depth_max,
             "streams": args.streams, "n_per_stream": args.n_per_stream, "shots": args.shots,
             "trajectories": args.trajectories, "alpha": args.alpha,
             "threshold": args.threshold, "backend": args.backend, "witness": args.witness,
             "width": args.width, "seed": args.seed, "report": args.report,
             "emit_qasm": args.emit_qasm}
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.noise is not None:
        data["noise"] = {**data.get("noise", {}), **parse_noise(args.noise)}
    if args.weights is not None:
        data["weights"] = _pairs(args.weights)
    try:
        return RunConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def run_cli(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = _config_from_args(args)
        report = run_suite(config)
    except (_UsageError, ConfigurationError, CapabilityError) as exc:
        print(f"qrk: error: {exc}", file=sys.stderr)
        return 2
    except QRKError as exc:
        print(f"qrk: error: {exc}", file=sys.stderr)
        return 2

    for r in report.results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{r.kernel:8s} {verdict}  metric={r.metric:.6g}  ({r.wall_ms:.0f} ms)")
    print(f"composite {report.composite:.6f}")
    if config.report:
        Path(config.report).write_text(report.to_json(), encoding="utf-8")
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run_cli())
