"""JSON file formats: loop/1, traj/1, sphere/1 (profile/1 lives in topology).

All writers emit UTF-8 with sorted keys and a trailing newline so repeated
runs are byte-identical.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .dynamics import FlowTrajectory
from .errors import MaslovLabError
from .geometry import FRAME_TOL
from .maslov import LagrangianLoop
from .stein import SphereSample, to_real6


class SchemaError(MaslovLabError, ValueError):
    pass


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def write_json(doc, path):
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def _expect_schema(doc, name):
    if not isinstance(doc, dict) or doc.get("schema") != name:
        raise SchemaError(f"expected a {name!r} document")


# -- loop/1 -----------------------------------------------------------------

def loop_to_doc(loop: LagrangianLoop) -> dict:
    return {"schema": "loop/1", "samples": loop.samples.tolist()}


def loop_from_doc(doc, tol=FRAME_TOL) -> LagrangianLoop:
    _expect_schema(doc, "loop/1")
    samples = doc.get("samples")
    if not isinstance(samples, list):
        raise SchemaError("loop/1: 'samples' must be a list of [u, v] pairs")
    try:
        arr = np.array(samples, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"loop/1: malformed samples ({exc})") from exc
    if arr.ndim != 3 or arr.shape[1:] != (2, 4):
        raise SchemaError(f"loop/1: samples must have shape (N, 2, 4), got {arr.shape}")
    try:
        return LagrangianLoop(arr, tol=tol)
    except ValueError as exc:
        raise SchemaError(f"loop/1: {exc}") from exc


def read_loop(path, tol=FRAME_TOL) -> LagrangianLoop:
    return loop_from_doc(read_json(path), tol)


def write_loop(loop, path):
    write_json(loop_to_doc(loop), path)


def bundled_loop_path(name) -> Path:
    return Path(str(resources.files("maslov_lab") / "data" / name))


# -- traj/1 -----------------------------------------------------------------

def trajectory_to_doc(traj: FlowTrajectory) -> dict:
    return {
        "schema": "traj/1",
        "field": traj.field_kind,
        "dt": traj.step_size,
        "divergent": traj.divergent,
        "states": traj.states.tolist(),
    }


def trajectory_from_doc(doc) -> FlowTrajectory:
    _expect_schema(doc, "traj/1")
    states = np.array(doc["states"], dtype=float)
    if states.ndim != 2 or states.shape[1] not in (4, 6):
        raise SchemaError("traj/1: states must be rows of 4 or 6 reals")
    dt = float(doc["dt"])
    return FlowTrajectory(dt * np.arange(len(states)), states, doc["field"], dt,
                          bool(doc.get("divergent", False)))


# -- sphere/1 ---------------------------------------------------------------

def sphere_to_doc(sample: SphereSample) -> dict:
    return {
        "schema": "sphere/1",
        "n": sample.n,
        "k": sample.k,
        "resolution": sample.resolution,
        "points": to_real6(sample.points.reshape(-1, 3)).tolist(),
    }


def sphere_points_from_doc(doc):
    """Return (n, k, resolution, complex points of shape (R, R, 3))."""
    _expect_schema(doc, "sphere/1")
    res = int(doc["resolution"])
    pts = np.array(doc["points"], dtype=float)
    if pts.shape != (res * res, 6):
        raise SchemaError(f"sphere/1: expected {res * res} points of 6 reals")
    z = (pts[:, :3] + 1j * pts[:, 3:]).reshape(res, res, 3)
    return int(doc["n"]), int(doc["k"]), res, z
