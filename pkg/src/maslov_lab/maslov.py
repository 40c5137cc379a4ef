"""Loops of Lagrangian planes in C^2 and their Maslov index.

The index is the degree of t -> det(U(t))^2 in the unit circle, where U(t)
is a unitary representative of the plane at parameter t. It is computed by
unwrapping the phase of det^2 along the sampled loop. Loops that carry a
generator (a vectorised map from [0, 1] to frames) are refined dyadically
until every phase step is below pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import dynamics
from .errors import (
    DegenerateFrame,
    FixedPointOrbit,
    LoopError,
    NotLagrangian,
    PhaseStepTooLarge,
)
from .geometry import (
    COND_MAX,
    DX2,
    FRAME_TOL,
    check_independent,
    det2,
    frame_from_unitary,
    lagrangian_defect,
    omega,
    plane_projector,
    to_complex,
    to_real,
    unitaries_from_frames,
)

N_START = 64
N_MAX = 2**20
MIN_SAMPLES = 8

FrameFn = Callable[[np.ndarray], np.ndarray]


# -- phase unwrapping kernel (shared with topology.framing_winding) ---------

def phase_steps(values):
    """Principal-branch phase increments between consecutive complex samples."""
    values = np.asarray(values, dtype=complex)
    return np.angle(values[1:] * np.conj(values[:-1]))


def winding_from_samples(values):
    """Return (total unwrapped phase, max |step|) for a closed sampled curve.

    ``values`` must repeat its first sample at the end.
    """
    steps = phase_steps(values)
    return float(np.sum(steps)), float(np.max(np.abs(steps))) if steps.size else 0.0


def adaptive_winding(fn, n_start=N_START, n_max=N_MAX, target=np.pi / 2):
    """Winding of t -> fn(t) on [0, 1] with dyadic refinement.

    ``fn`` maps an array of parameters to complex values and must be
    periodic. Sampling is doubled until two consecutive levels both have
    every phase step below ``target`` and agree on the total phase; a single
    level cannot tell a large step from its alias. Returns (total phase,
    max step, samples used).
    """
    n = n_start
    prev = None
    while True:
        t = np.linspace(0.0, 1.0, n + 1)
        total, worst = winding_from_samples(fn(t))
        ok = worst < target
        if ok and prev is not None and prev[1] < target and abs(prev[0] - total) < 1e-6:
            break
        if n >= n_max:
            break
        prev = (total, worst)
        n *= 2
    if worst >= np.pi:
        raise PhaseStepTooLarge(f"phase step {worst:.3f} >= pi with {n} samples")
    return total, worst, n


def _round_winding(total, tol=1e-6):
    w = total / (2 * np.pi)
    k = int(round(w))
    if abs(w - k) > tol:
        raise LoopError(f"unwrapped phase / 2pi = {w:.9f} is not an integer; loop not closed")
    return k


# -- loops ------------------------------------------------------------------

def _check_frames(frames, tol=FRAME_TOL, cond_max=COND_MAX):
    check_independent(frames, cond_max)
    bad = lagrangian_defect(frames)
    if np.any(bad > tol):
        raise NotLagrangian(f"sample {int(np.argmax(bad))} has omega_0 defect {np.max(bad):.3g}")


@dataclass(frozen=True)
class LagrangianLoop:
    """Closed loop of Lagrangian frames sampled at t = 0, 1/N, ..., 1.

    ``samples`` has shape (N + 1, 2, 4) and the last sample spans the same
    plane as the first. ``generator``, when present, evaluates frames at
    arbitrary parameters in [0, 1] and enables refinement.
    """

    samples: np.ndarray
    generator: Optional[FrameFn] = field(default=None, compare=False)
    closed: bool = True
    tol: float = field(default=FRAME_TOL, compare=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 3 or s.shape[1:] != (2, 4):
            raise LoopError(f"samples must have shape (N, 2, 4), got {s.shape}")
        if len(s) < MIN_SAMPLES:
            raise LoopError(f"a loop needs at least {MIN_SAMPLES} samples, got {len(s)}")
        if not np.all(np.isfinite(s)):
            raise LoopError("samples must be finite")
        _check_frames(s, self.tol)
        if not self.closed:
            raise LoopError("only closed loops are supported")
        gap = np.max(np.abs(plane_projector(s[0]) - plane_projector(s[-1])))
        if gap > self.tol:
            raise LoopError(f"first and last samples span different planes (gap {gap:.3g})")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_generator(cls, fn: FrameFn, n=N_START):
        return cls(fn(np.linspace(0.0, 1.0, n + 1)), generator=fn)

    def __len__(self):
        return len(self.samples)

    def frames_at(self, t):
        if self.generator is None:
            raise LoopError("loop has no generator")
        return self.generator(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class MaslovResult:
    index: int
    samples_used: int
    max_phase_step: float
    total_phase: float = 0.0

    @property
    def winding(self):
        return self.total_phase / (2 * np.pi)


def _det2_of_frames(frames):
    return det2(unitaries_from_frames(frames))


def _orientable(res: MaslovResult) -> MaslovResult:
    # an odd degree of det^2 means the loop does not lift to oriented planes
    if res.index % 2:
        raise LoopError(f"non-orientable loop (odd degree {res.index}); not supported")
    return res


def maslov_index(loop: LagrangianLoop, n_max=N_MAX) -> MaslovResult:
    """Maslov index of a closed Lagrangian loop as the degree of det^2.

    Loops whose plane orientation flips once around (odd degree) raise
    LoopError.
    """
    if loop.generator is not None:
        gen = loop.generator

        def values(t):
            frames = gen(t)
            _check_frames(frames)
            return _det2_of_frames(frames)

        total, worst, n = adaptive_winding(values, n_start=max(N_START, len(loop) - 1), n_max=n_max)
        return _orientable(MaslovResult(_round_winding(total), n, worst, total))
    total, worst = winding_from_samples(_det2_of_frames(loop.samples))
    # without a generator there is no refinement, so hold stored samples to
    # the post-refinement bound: a wrapped step near pi is indistinguishable
    # from its alias
    if worst >= np.pi / 2:
        raise PhaseStepTooLarge(
            f"phase step {worst:.3f} >= pi/2 between samples; resample the loop more finely")
    return _orientable(MaslovResult(_round_winding(total), len(loop) - 1, worst, total))


# -- constructors -----------------------------------------------------------

def loop_from_unitary(Ufn, n=N_START):
    """Loop whose frames are the real forms of the columns of ``Ufn(t)``."""
    return LagrangianLoop.from_generator(lambda t: frame_from_unitary(Ufn(t)), n)


def _diag(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.broadcast_to(np.asarray(b, dtype=complex), a.shape)
    out = np.zeros(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 1, 1] = b
    return out


def constant_loop(frame=None, n=N_START):
    """Constant loop at ``frame`` (default the real plane dx1 ^ dx2)."""
    base = np.eye(4)[:2] if frame is None else np.asarray(frame, dtype=float)
    return LagrangianLoop.from_generator(
        lambda t: np.broadcast_to(base, np.shape(t) + (2, 4)).copy(), n)


def central_loop(sign=1, n=N_START):
    """U(t) = diag(e^{i s 2pi t}, e^{i s 2pi t}), the orbit of the centre of U(2)."""
    return loop_from_unitary(
        lambda t: _diag(np.exp(2j * np.pi * sign * t), np.exp(2j * np.pi * sign * t)), n)


def diagonal_power_loop(k, n=N_START):
    """U(t) = diag(e^{i k 2pi t}, 1)."""
    return loop_from_unitary(lambda t: _diag(np.exp(2j * np.pi * k * t), 1.0), n)


def orbit_lagrangian_loop(p, v, weight=1, n=N_START, tol=FRAME_TOL):
    """Lagrangian loop along the group orbit of ``p`` generated by X(p) ^ v.

    The plane at group parameter theta is spanned by dG_theta X(p) and
    dG_theta v; the loop runs once around the orbit, theta in
    [0, 2pi/|weight|], oriented by increasing theta.
    """
    if weight == 0:
        raise ValueError("weight must be nonzero")
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    Xp = dynamics.hamiltonian_field(p, weight)
    if np.linalg.norm(Xp) < tol:
        raise FixedPointOrbit("X vanishes at p; its orbit is a point")
    if abs(omega(Xp, v)) > tol * max(1.0, np.linalg.norm(Xp) * np.linalg.norm(v)):
        raise NotLagrangian(f"omega_0(X(p), v) = {omega(Xp, v):.3g} is not zero")
    check_independent(np.stack([Xp, v]))
    period = 2 * np.pi / abs(weight)

    def gen(t):
        theta = period * np.asarray(t, dtype=float)
        return np.stack([dynamics.act(theta, Xp, weight),
                         dynamics.act(theta, v, weight)], axis=-2)

    return LagrangianLoop.from_generator(gen, n)


def ruled_fiber_loop(direction=1, n=N_START):
    """Loop X ^ dx2 along the unit circle in the z1-line, X = -y1 dx1 + x1 dy1.

    ``direction = -1`` runs the circle backwards with tangent -X.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")

    def gen(t):
        phi = direction * 2 * np.pi * np.asarray(t, dtype=float)
        tangent = np.zeros(np.shape(t) + (4,))
        tangent[..., 0] = -np.sin(phi) * direction
        tangent[..., 2] = np.cos(phi) * direction
        return np.stack([tangent, np.broadcast_to(DX2, tangent.shape)], axis=-2)

    return LagrangianLoop.from_generator(gen, n)


# -- loop operations --------------------------------------------------------

def reverse(loop: LagrangianLoop) -> LagrangianLoop:
    if loop.generator is not None:
        g = loop.generator
        return LagrangianLoop(loop.samples[::-1].copy(), generator=lambda t: g(1.0 - np.asarray(t)))
    return LagrangianLoop(loop.samples[::-1].copy())


def concatenate(a: LagrangianLoop, b: LagrangianLoop) -> LagrangianLoop:
    """Run ``a`` on [0, 1/2] then ``b`` on [1/2, 1]; both must start on the same plane."""
    gap = np.max(np.abs(plane_projector(a.samples[0]) - plane_projector(b.samples[0])))
    if gap > FRAME_TOL:
        raise LoopError("loops do not share a base plane")
    samples = np.concatenate([a.samples, b.samples[1:]])
    if a.generator is None or b.generator is None:
        return LagrangianLoop(samples)
    ga, gb = a.generator, b.generator

    def gen(t):
        t = np.asarray(t, dtype=float)
        first = t <= 0.5
        out = np.empty(t.shape + (2, 4))
        if np.any(first):
            out[first] = ga(2 * t[first])
        if np.any(~first):
            out[~first] = gb(2 * t[~first] - 1)
        return out

    return LagrangianLoop(samples, generator=gen)


def reparametrize(loop: LagrangianLoop, phi: Callable[[np.ndarray], np.ndarray]) -> LagrangianLoop:
    """Compose with a strictly increasing ``phi`` of [0, 1] with phi(0)=0, phi(1)=1."""
    if loop.generator is None:
        raise LoopError("reparametrisation needs a generator")
    g = loop.generator
    return LagrangianLoop.from_generator(lambda t: g(phi(np.asarray(t, dtype=float))), len(loop) - 1)


def central_twist(loop: LagrangianLoop, turns=1) -> LagrangianLoop:
    """Multiply the unitary at parameter t by e^{2 pi i turns t}."""
    if loop.generator is None:
        raise LoopError("central twist needs a generator")
    g = loop.generator

    def gen(t):
        t = np.asarray(t, dtype=float)
        f = g(t)
        phase = np.exp(2j * np.pi * turns * t)[..., None]
        return np.stack([to_real(to_complex(f[..., 0, :]) * phase),
                         to_real(to_complex(f[..., 1, :]) * phase)], axis=-2)

    return LagrangianLoop.from_generator(gen, len(loop) - 1)


def regauge(loop: LagrangianLoop, mats: Callable[[np.ndarray], np.ndarray]) -> LagrangianLoop:
    """Replace each frame F(t) by M(t) F(t) for invertible real 2x2 ``mats(t)``.

    The spanned planes are unchanged; only the chosen basis moves.
    """
    if loop.generator is None:
        raise LoopError("regauge needs a generator")
    g = loop.generator
    return LagrangianLoop.from_generator(lambda t: mats(np.asarray(t, dtype=float)) @ g(t), len(loop) - 1)


def resample(loop: LagrangianLoop, n) -> LagrangianLoop:
    if loop.generator is None:
        raise LoopError("resampling needs a generator")
    return LagrangianLoop.from_generator(loop.generator, n)


def frozen(loop: LagrangianLoop) -> LagrangianLoop:
    """Drop the generator, keeping only the stored samples."""
    return replace(loop, generator=None)
