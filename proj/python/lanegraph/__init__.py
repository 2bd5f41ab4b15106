"""Successor lane graph toolkit: decomposition, path representations,
set matching, aggregation and graph metrics."""

from ._lanegraph import (
    LaneGraph,
    LaneGraphError,
    aggregate,
    bernstein,
    bezier_eval,
    bezier_sample,
    brute_force_assignment,
    count_paths,
    decompose,
    evaluate,
    fit_bezier,
    generate_synthetic,
    geometrically_equal,
    hungarian,
    resample_polyline,
    run_cli,
    set_loss,
    split_nodes,
)

__all__ = [
    "LaneGraph",
    "LaneGraphError",
    "aggregate",
    "bernstein",
    "bezier_eval",
    "bezier_sample",
    "brute_force_assignment",
    "count_paths",
    "decompose",
    "evaluate",
    "fit_bezier",
    "generate_synthetic",
    "geometrically_equal",
    "hungarian",
    "resample_polyline",
    "run_cli",
    "set_loss",
    "split_nodes",
]
