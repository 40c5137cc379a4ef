"""Command-line entry point ``maslov-lab``.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 numeric
non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics, io, maslov, stein, topology, verify
from .errors import (
    Inconclusive,
    InvalidIndex,
    InvalidProfile,
    MaslovLabError,
    NoConvergence,
    PhaseStepTooLarge,
)
from .geometry import FRAME_TOL

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = range(5)


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    fmt: str = "text"
    out: Path | None = None
    dt: float = 1e-3
    tol: float = FRAME_TOL
    resolution: int = 32
    n_max: int = maslov.N_MAX
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.dt <= 0.1:
            raise ValueError("--dt must lie in (0, 0.1]")
        if not 0 < self.tol < 1e-3:
            raise ValueError("--tol must lie in (0, 1e-3)")
        if self.resolution < 8:
            raise ValueError("--resolution must be at least 8")
        if not maslov.N_START <= self.n_max <= 2**24:
            raise ValueError(f"--n-max must lie in [{maslov.N_START}, 2^24]")


def _emit(doc, text, cfg: RunConfig):
    if cfg.fmt == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def _resolve_loop_path(name):
    path = Path(name)
    if path.exists():
        return path
    bundled = io.bundled_loop_path(path.name)
    return bundled if bundled.exists() else path


def cmd_maslov(cfg: RunConfig) -> int:
    path = _resolve_loop_path(cfg.extra["loop_file"])
    try:
        loop = io.read_loop(path, cfg.tol)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (io.SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        res = maslov.maslov_index(loop, n_max=cfg.n_max)
    except PhaseStepTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = {"index": res.index, "samples_used": res.samples_used, "max_phase_step": res.max_phase_step}
    text = f"index: {res.index}\nsamples_used: {res.samples_used}\nmax_phase_step: {res.max_phase_step:.6g}"
    _emit(doc, text, cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    reports = verify.run_suite(cfg.extra["suite"], seed=cfg.seed)
    doc = {"schema": "report/1", "seed": cfg.seed,
           "status": "pass" if all(r.passed for r in reports) else "fail",
           "suites": [r.to_doc() for r in reports]}
    if cfg.out is not None:
        try:
            io.write_json(doc, cfg.out)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    _emit(doc, "\n".join(r.summary() for r in reports), cfg)
    return EXIT_OK if doc["status"] == "pass" else EXIT_FAIL


def cmd_sample(cfg: RunConfig) -> int:
    n, k = cfg.extra["n"], cfg.extra["k"]
    try:
        sample = stein.sample_sphere(n, k, cfg.resolution)
    except (InvalidIndex, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = io.sphere_to_doc(sample)
    if cfg.out is None:
        print(io.dumps(doc), end="")
        return EXIT_OK
    try:
        io.write_json(doc, cfg.out)
    except OSError as exc:
        print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    res = np.max(np.abs(stein.wn_residual(sample.points, n)))
    if cfg.fmt == "text":
        print(f"wrote {cfg.out}: {sample.points.shape[0] * sample.points.shape[1]} points, "
              f"max residual {res:.3g}")
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    try:
        p = topology.SpaceProfile(cfg.extra["n"], cfg.extra["g"], cfg.extra["b"])
    except InvalidProfile as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = topology.profile_report(p)
    if cfg.out is not None:
        try:
            io.write_json(doc, cfg.out)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    h = doc["handles"]
    text = (f"profile n={p.n} g={p.g} b={p.b}\n"
            f"handles: {h['zero']} zero, {h['one']} one, {h['two']} two (framings {sorted(set(h['framings']))})\n"
            f"homology ranks: {doc['homology']}\neuler: {doc['euler']}\n"
            f"stein_framing_ok: {doc['stein_framing_ok']}")
    _emit(doc, text, cfg)
    return EXIT_OK


def cmd_flow(cfg: RunConfig) -> int:
    p0 = np.array(cfg.extra["p0"], dtype=float)
    try:
        traj = dynamics.integrate_flow(cfg.extra["field"], p0, cfg.extra["T"], cfg.dt)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = io.trajectory_to_doc(traj)
    if cfg.out is None:
        print(io.dumps(doc), end="")
    else:
        try:
            io.write_json(doc, cfg.out)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        if cfg.fmt == "text":
            print(f"wrote {cfg.out}: {len(traj.states)} states, final {traj.states[-1]}")
    return EXIT_NUMERIC if traj.divergent else EXIT_OK


COMMANDS = {"maslov": cmd_maslov, "verify": cmd_verify, "sample": cmd_sample,
            "profile": cmd_profile, "flow": cmd_flow}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dt", type=float, default=1e-3, help="integrator step")
    common.add_argument("--tol", type=float, default=FRAME_TOL, help="Lagrangian frame tolerance")
    common.add_argument("--resolution", type=int, default=32, help="mesh points per axis")
    common.add_argument("--n-max", type=int, default=maslov.N_MAX, help="max loop samples when refining")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=("json", "text"), default="text")

    parser = argparse.ArgumentParser(prog="maslov-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maslov", parents=[common], help="Maslov index of a loop/1 file")
    p.add_argument("loop_file", help="path, or the name of a bundled loop (central_loop.json, ...)")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=verify.SUITES + ("all",))

    p = sub.add_parser("sample", parents=[common], help="write a sphere/1 mesh of S_k in W_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("profile", parents=[common], help="profile/1 report for (n, g, b)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--b", type=int, default=1)

    p = sub.add_parser("flow", parents=[common], help="write a traj/1 RK4 trajectory")
    p.add_argument("--field", choices=("X", "grad"), default="grad")
    p.add_argument("--p0", type=float, nargs="+", required=True, help="4 or 6 reals")
    p.add_argument("--T", type=float, default=5.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    extra = {k: v for k, v in vars(args).items()
             if k not in ("command", "seed", "format", "out", "dt", "tol", "resolution", "n_max")}
    try:
        cfg = RunConfig(args.command, args.seed, args.format, args.out, args.dt, args.tol,
                        args.resolution, args.n_max, extra)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](cfg)
    except (NoConvergence, Inconclusive, PhaseStepTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MaslovLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
