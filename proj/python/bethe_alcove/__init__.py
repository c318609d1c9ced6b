"""Bethe ansatz eigenfunctions of the Laplacian on Weyl alcoves."""

import json

from ._core import (
    BaeSolution,
    BetheFunction,
    Coupling,
    RootSystem,
    SolverOptions,
    WeylGroup,
    __version__,
    alcove_vertices,
    build_root_system,
    c_fun,
    dominant_weights,
    master_grad,
    master_hessian,
    master_value,
    solve_bae,
    volume,
    weyl_group,
)
from ._core import run_config as _run_config


def run(command, config_text):
    """Run a harness command on config text; returns (passed, header, cases)."""
    passed, lines = _run_config(command, config_text)
    records = [json.loads(line) for line in lines.splitlines() if line]
    return passed, records[0], records[1:]


__all__ = [
    "BaeSolution",
    "BetheFunction",
    "Coupling",
    "RootSystem",
    "SolverOptions",
    "WeylGroup",
    "__version__",
    "alcove_vertices",
    "build_root_system",
    "c_fun",
    "dominant_weights",
    "master_grad",
    "master_hessian",
    "master_value",
    "run",
    "solve_bae",
    "volume",
    "weyl_group",
]
