"""The model circle action on C^2: moment map, Hamiltonian and gradient
fields, Morse data at the origin, RK4 flows and stable/unstable tests.

The closed-form fields are stored as term tables so that each sign can be
inspected (and mutated in tests) individually. A term ``(c, src, dst)``
contributes ``c * p[src]`` to component ``dst``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Inconclusive
from .geometry import omega

X1, X2, Y1, Y2 = range(4)

# X = -x2 dx1 + x1 dx2 - y2 dy1 + y1 dy2
HAMILTONIAN_TERMS = ((-1.0, X2, X1), (1.0, X1, X2), (-1.0, Y2, Y1), (1.0, Y1, Y2))
# grad h = -y2 dx1 + x2 dy1 + y1 dx2 - x1 dy2
GRADIENT_TERMS = ((-1.0, Y2, X1), (1.0, X2, Y1), (1.0, Y1, X2), (-1.0, X1, Y2))
# rotation [[cos, -sin], [sin, cos]] as sign table (cos-sign, sin-sign) per entry
ROTATION_SIGNS = ((1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0))

FIELD_KINDS = ("h", "X", "grad", "lambda")

HESSIAN_AT_ORIGIN = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])


def _linear_field(terms, weight=1):
    A = np.zeros((4, 4))
    for c, src, dst in terms:
        A[dst, src] += c
    return weight * A


def hamiltonian_matrix(weight=1):
    return _linear_field(HAMILTONIAN_TERMS, weight)


def gradient_matrix(weight=1):
    return _linear_field(GRADIENT_TERMS, weight)


def rotation(theta):
    """Real 2x2 matrix of the group element at angle ``theta`` (stacks for arrays)."""
    c, s = np.cos(theta), np.sin(theta)
    (a1, a2), (b1, b2), (c1, c2), (d1, d2) = ROTATION_SIGNS
    top = np.stack([a1 * c + a2 * s, b1 * c + b2 * s], axis=-1)
    bottom = np.stack([c1 * c + c2 * s, d1 * c + d2 * s], axis=-1)
    return np.stack([top, bottom], axis=-2)


def act(theta, p, weight=1):
    """Apply the weight-``weight`` group element at ``theta`` to points of R^4.

    The rotation is complex-linear in (z1, z2), so it acts by the same 2x2
    matrix on the x- and y-blocks. ``theta`` and ``p`` broadcast.
    """
    R = rotation(weight * np.asarray(theta, dtype=float))
    p = np.asarray(p, dtype=float)
    xs = (R @ p[..., :2, None])[..., 0]
    ys = (R @ p[..., 2:, None])[..., 0]
    return np.concatenate([xs, ys], axis=-1)


def moment_map(p, weight=1):
    """h = Im(z1 conj(z2)) = x2 y1 - x1 y2, scaled by the weight."""
    p = np.asarray(p, dtype=float)
    return weight * (p[..., X2] * p[..., Y1] - p[..., X1] * p[..., Y2])


def hamiltonian_field(p, weight=1):
    return np.asarray(p, dtype=float) @ hamiltonian_matrix(weight).T


def gradient_field(p, weight=1):
    return np.asarray(p, dtype=float) @ gradient_matrix(weight).T


def liouville_form(p):
    """Coefficients of lambda_0 = 1/2 sum(x_j dy_j - y_j dx_j) in the dx/dy basis."""
    p = np.asarray(p, dtype=float)
    return 0.5 * np.stack([-p[..., Y1], -p[..., Y2], p[..., X1], p[..., X2]], axis=-1)


def eval_field(kind, p, weight=1):
    if kind == "h":
        return moment_map(p, weight)
    if kind == "X":
        return hamiltonian_field(p, weight)
    if kind == "grad":
        return gradient_field(p, weight)
    if kind == "lambda":
        return liouville_form(p)
    raise ValueError(f"unknown field kind {kind!r}; expected one of {FIELD_KINDS}")


def moment_identity_residual(p, fd_step=1e-4, weight=1):
    """max_e |omega_0(X(p), e) + D_e h(p)| over coordinate directions e.

    D_e h is taken by central differences of the moment map, so this checks
    the closed-form X against the closed-form h independently.
    """
    if not 1e-8 < fd_step < 1e-2:
        raise ValueError("fd_step must lie in (1e-8, 1e-2)")
    p = np.asarray(p, dtype=float)
    Xp = hamiltonian_field(p, weight)
    worst = 0.0
    for e in np.eye(4):
        dh = (moment_map(p + fd_step * e, weight) - moment_map(p - fd_step * e, weight)) / (2 * fd_step)
        worst = max(worst, abs(float(omega(Xp, e)) + float(dh)))
    return worst


def gradient_identity_residual(p, fd_step=1e-4, weight=1):
    """max-norm of grad h(p) minus the finite-difference gradient of h."""
    p = np.asarray(p, dtype=float)
    fd = np.array([
        (moment_map(p + fd_step * e, weight) - moment_map(p - fd_step * e, weight)) / (2 * fd_step)
        for e in np.eye(4)
    ])
    return float(np.max(np.abs(gradient_field(p, weight) - fd)))


def liouville_identity_residual(p, weight=1):
    """|lambda_0(X(p)) - h(p)|."""
    p = np.asarray(p, dtype=float)
    lam = liouville_form(p)
    return float(abs(lam @ hamiltonian_field(p, weight) - moment_map(p, weight)))


def generator_residual(p, step=1e-5, weight=1):
    """Distance between X(p) and d/dtheta of the group action at theta = 0."""
    p = np.asarray(p, dtype=float)
    fd = (act(step, p, weight) - act(-step, p, weight)) / (2 * step)
    return float(np.max(np.abs(fd - hamiltonian_field(p, weight))))


@dataclass
class HessianReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    morse_index: int
    neg_eigenspace: np.ndarray  # (2, 4) orthonormal frame
    pos_eigenspace: np.ndarray


def hessian_at_origin(weight=1):
    """Analytic Hessian of the weight-``weight`` moment map at 0 and its eigendata."""
    if weight == 0:
        raise ValueError("weight must be nonzero")
    H = weight * HESSIAN_AT_ORIGIN
    vals, vecs = np.linalg.eigh(H)
    neg = vecs[:, vals < 0].T
    pos = vecs[:, vals > 0].T
    return HessianReport(H, vals, int(np.sum(vals < 0)), neg, pos)


def fd_hessian(func, p, step=1e-3):
    """Central-difference Hessian of a scalar function on R^4."""
    p = np.asarray(p, dtype=float)
    E = np.eye(len(p)) * step
    H = np.empty((len(p), len(p)))
    for i in range(len(p)):
        for j in range(len(p)):
            H[i, j] = (func(p + E[i] + E[j]) - func(p + E[i] - E[j])
                       - func(p - E[i] + E[j]) + func(p - E[i] - E[j])) / (4 * step * step)
    return H


@dataclass
class FlowTrajectory:
    times: np.ndarray
    states: np.ndarray
    field_kind: str
    step_size: float
    divergent: bool = False
    meta: dict = field(default_factory=dict)


OVERFLOW_NORM = 1e6


def _planar(state):
    """Split a 4- or 6-real state into its C^2 part and the passive z3 part.

    Six-real states are ordered (x1, x2, x3, y1, y2, y3).
    """
    if state.shape[-1] == 4:
        return state, None
    if state.shape[-1] == 6:
        return state[..., [0, 1, 3, 4]], state[..., [2, 5]]
    raise ValueError("states must have 4 or 6 real components")


def _join(planar, passive):
    if passive is None:
        return planar
    out = np.empty(planar.shape[:-1] + (6,))
    out[..., [0, 1, 3, 4]] = planar
    out[..., [2, 5]] = passive
    return out


def rk4_matrix(A, dt):
    """One RK4 step for the linear field y' = A y, as a matrix.

    For linear autonomous fields the four RK4 stages collapse to the degree-4
    Taylor polynomial of exp(dt A); applying it is the same step as rk4_step.
    """
    hA = dt * A
    I = np.eye(len(A))
    return I + hA @ (I + hA @ (I / 2 + hA @ (I / 6 + hA / 24)))


def rk4_step(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_flow(kind, p0, T, dt=1e-3, weight=1):
    """Fixed-step RK4 trajectory of the Hamiltonian (``"X"``) or gradient
    (``"grad"``) field starting at ``p0``.

    Negative ``T`` integrates backwards. If the state norm exceeds 1e6 the
    trajectory is truncated there and flagged ``divergent``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = int(round(abs(T) / dt))
    if steps > 10**7:
        raise ValueError("T/dt exceeds 1e7 steps")
    if kind == "X":
        A = hamiltonian_matrix(weight)
    elif kind == "grad":
        A = gradient_matrix(weight)
    else:
        raise ValueError(f"cannot integrate field kind {kind!r}")
    h = dt if T >= 0 else -dt
    MT = rk4_matrix(A, h).T

    planar, passive = _planar(np.asarray(p0, dtype=float))
    states = np.empty((steps + 1, 4))
    states[0] = planar
    y = planar
    divergent = False
    last = steps
    for i in range(1, steps + 1):
        y = y @ MT
        states[i] = y
        if not np.all(np.isfinite(y)) or np.linalg.norm(y) > OVERFLOW_NORM:
            divergent = True
            last = i
            break
    states = states[: last + 1]
    if passive is not None:
        states = _join(states, np.broadcast_to(passive, (len(states), 2)))
    times = h * np.arange(len(states))
    return FlowTrajectory(times, states, kind, dt, divergent)


STABLE_RADIUS = 1e-6
UNSTABLE_RADIUS = 10.0
CLASSIFY_HORIZON = 30.0


def classify_points(points, T=CLASSIFY_HORIZON, dt=1e-3, strict=True):
    """Batch version of :func:`stable_manifold_test`.

    Each point is flowed forward along grad h until its norm drops below
    1e-6 ("stable") or exceeds 10 ("unstable"). Points meeting neither
    threshold by time ``T`` raise :class:`Inconclusive` when ``strict``,
    otherwise they are labelled ``"mixed"``.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    norms = np.linalg.norm(P, axis=1)
    if np.any((norms < 1e-3) | (norms > 10)):
        raise ValueError("initial norms must lie in [1e-3, 10]")
    MT = rk4_matrix(gradient_matrix(), dt).T
    labels = np.full(len(P), "", dtype=object)
    active = np.ones(len(P), dtype=bool)
    y = P.copy()
    for _ in range(int(round(T / dt))):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        y[idx] = y[idx] @ MT
        n = np.linalg.norm(y[idx], axis=1)
        labels[idx[n < STABLE_RADIUS]] = "stable"
        labels[idx[n > UNSTABLE_RADIUS]] = "unstable"
        active[idx[(n < STABLE_RADIUS) | (n > UNSTABLE_RADIUS)]] = False
    if np.any(active):
        if strict:
            raise Inconclusive(f"{int(active.sum())} point(s) met neither threshold by T={T}")
        labels[active] = "mixed"
    return list(labels)


def stable_manifold_test(p0, T=CLASSIFY_HORIZON, dt=1e-3, strict=True):
    return classify_points([p0], T=T, dt=dt, strict=strict)[0]


def stable_plane_point(w):
    """Point of E_{-1} = {z1 + i z2 = 0} with z1 = w."""
    return np.array([w.real, (1j * w).real, w.imag, (1j * w).imag])


def unstable_plane_point(w):
    """Point of E_1 = {z1 - i z2 = 0} with z1 = w."""
    return np.array([w.real, (-1j * w).real, w.imag, (-1j * w).imag])
