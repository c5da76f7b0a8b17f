"""Hermite-Birkhoff interpolation on parametric surfaces."""

import json

from ._core import (
    EmptyStencil,
    Error,
    InvalidConfig,
    OutOfChart,
    UnknownFunction,
    distance,
    eval_points,
    geodesic_bvp,
    interpolate,
    nodes,
    run_table_json,
    test_function,
    to_surface,
)


def run_table(config):
    """Run an error table from a config dict and return the report as a dict."""
    return json.loads(run_table_json(json.dumps(config)))


__all__ = [
    "EmptyStencil",
    "Error",
    "InvalidConfig",
    "OutOfChart",
    "UnknownFunction",
    "distance",
    "eval_points",
    "geodesic_bvp",
    "interpolate",
    "nodes",
    "run_table",
    "run_table_json",
    "test_function",
    "to_surface",
]
