"""Shortest-path engine for rail networks with direction-specific transfer times."""

from ._core import (
    AtenError,
    ExpandedNetwork,
    Network,
    brute_force,
    build_aten,
    build_method3,
    fixture_greedy_trap,
    fixture_through_leak,
    generate,
    parse_network,
    predict_expansion_size,
    query,
    read_network,
    run_bench,
    sample_ods,
    validate,
    write_network,
)

__all__ = [
    "AtenError",
    "ExpandedNetwork",
    "Network",
    "brute_force",
    "build_aten",
    "build_method3",
    "fixture_greedy_trap",
    "fixture_through_leak",
    "generate",
    "parse_network",
    "predict_expansion_size",
    "query",
    "read_network",
    "run_bench",
    "sample_ods",
    "validate",
    "write_network",
]
