"""Multi-drone urban trajectory planning by sequential convex optimisation."""

import json

from . import _trsco
from ._trsco import AllocationError, FormatError, GenerationError, PlanningError

__all__ = [
    "AllocationError",
    "FormatError",
    "GenerationError",
    "PlanningError",
    "coverage_area",
    "generate_city",
    "make_scenario",
    "path_length",
    "plan",
    "render_svg",
    "run",
    "smoothness",
    "solve_conic",
    "update_radius",
]


def _dump(doc):
    return json.dumps(doc if doc is not None else {})


def generate_city(params=None):
    """City document (raw and smoothed height rasters, buildings) for CityParams fields."""
    return json.loads(_trsco.generate_city(_dump(params)))


def make_scenario(config=None):
    """Preset waypoints (CSV text) and the initial reference trajectories for a run config."""
    return json.loads(_trsco.make_scenario(_dump(config)))


def plan(config=None, variant="enhanced"):
    """Plans one variant; returns the result document plus its violation and metrics."""
    return json.loads(_trsco.plan(_dump(config), variant))


def run(config, max_threads=1):
    """Batch run writing output files; returns (exit_code, log_text)."""
    return _trsco.run(_dump(config), max_threads)


def solve_conic(program, settings=None):
    return json.loads(_trsco.solve_conic(_dump(program), _dump(settings)))


def update_radius(delta, violation, settings=None):
    return _trsco.update_radius(delta, violation, _dump(settings))


def path_length(trajectories):
    return _trsco.path_length(_dump(trajectories))


def smoothness(trajectories):
    return _trsco.smoothness(_dump(trajectories))


def coverage_area(trajectories, city, fov=None):
    return _trsco.coverage_area(_dump(trajectories), _dump(city), _dump(fov))


def render_svg(city, trajectories, fov=None):
    return _trsco.render_svg(_dump(city), _dump(trajectories), _dump(fov))
