"""The three research kernels: Encode, Computational Area and Parallel Streams."""
from .area import (CAParams, CAResult, build_ghz_circuit, build_mirror_load, ca_circuit,
                   ghz_witness_density, ghz_witness_exact, ghz_witness_shots,
                   register_ghz_fidelity, run_computational_area)
from .base import KernelResult
from .encode import (EncodeParams, build_encode_circuit, encode_values,
                     ideal_one_probability, run_encode)
from .streams import StreamsParams, StreamsResult, run_parallel_streams, stream_circuits

__all__ = [
    "CAParams", "CAResult", "EncodeParams", "KernelResult", "StreamsParams", "StreamsResult",
    "build_encode_circuit", "build_ghz_circuit", "build_mirror_load", "ca_circuit",
    "encode_values", "ghz_witness_density", "ghz_witness_exact", "ghz_witness_shots",
    "ideal_one_probability", "register_ghz_fidelity", "run_computational_area", "run_encode",
    "run_parallel_streams", "stream_circuits",
]
