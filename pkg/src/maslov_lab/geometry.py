"""Linear symplectic algebra on (R^4, omega_0) identified with C^2.

Real vectors are stored as ``(x1, x2, y1, y2)`` and complexified as
``z_j = x_j + i y_j``. A frame is an array of shape ``(2, 4)`` holding the
two spanning vectors as rows; stacks of frames have shape ``(N, 2, 4)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrame, NotLagrangian

FRAME_TOL = 1e-9
UNITARY_TOL = 1e-9
COND_MAX = 1e8

# standard basis, named by coordinate
DX1, DX2, DY1, DY2 = np.eye(4)


def omega(u, v):
    """Evaluate omega_0 = sum_j dx_j ^ dy_j on the last axis of ``u`` and ``v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (u[..., 0] * v[..., 2] - u[..., 2] * v[..., 0]
            + u[..., 1] * v[..., 3] - u[..., 3] * v[..., 1])


def to_complex(v):
    """(x1, x2, y1, y2) -> (z1, z2)."""
    v = np.asarray(v, dtype=float)
    return v[..., :2] + 1j * v[..., 2:]


def to_real(z):
    """(z1, z2) -> (x1, x2, y1, y2)."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def frame_condition(frames):
    """Condition number of each 2x4 frame matrix, from its 2x2 Gram matrix."""
    frames = np.asarray(frames, dtype=float)
    u, v = frames[..., 0, :], frames[..., 1, :]
    a = np.einsum("...i,...i", u, u)
    c = np.einsum("...i,...i", v, v)
    b = np.einsum("...i,...i", u, v)
    mean = 0.5 * (a + c)
    disc = np.sqrt(np.maximum(mean**2 - (a * c - b * b), 0.0))
    lo = mean - disc
    hi = mean + disc
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.sqrt(hi / lo)
    return np.where((lo > 0) & np.isfinite(cond), cond, np.inf)


def check_independent(frames, cond_max=COND_MAX):
    cond = frame_condition(frames)
    if np.any(cond > cond_max):
        raise DegenerateFrame(f"frame condition number {np.max(cond):.3g} exceeds {cond_max:g}")


def lagrangian_defect(frames):
    """|omega_0(u, v)| / (|u| |v|), i.e. the Lagrangian test made scale-free."""
    frames = np.asarray(frames, dtype=float)
    u, v = frames[..., 0, :], frames[..., 1, :]
    scale = np.linalg.norm(u, axis=-1) * np.linalg.norm(v, axis=-1)
    return np.abs(omega(u, v)) / scale


def is_lagrangian(frame, tol=FRAME_TOL, cond_max=COND_MAX) -> bool:
    frame = np.asarray(frame, dtype=float)
    check_independent(frame, cond_max)
    return bool(lagrangian_defect(frame) <= tol)


def unitaries_from_frames(frames):
    """Vectorised Gram-Schmidt: stack of frames -> stack of 2x2 unitaries.

    The first vector is normalised first. For a Lagrangian plane the Euclidean
    orthonormal pair is also Hermitian-orthonormal after complexification, so
    the complexified columns form a unitary matrix.
    """
    frames = np.asarray(frames, dtype=float)
    u, v = frames[..., 0, :], frames[..., 1, :]
    e1 = u / np.linalg.norm(u, axis=-1, keepdims=True)
    w = v - np.einsum("...i,...i", v, e1)[..., None] * e1
    e2 = w / np.linalg.norm(w, axis=-1, keepdims=True)
    return np.stack([to_complex(e1), to_complex(e2)], axis=-1)


def unitary_from_frame(frame, tol=FRAME_TOL, cond_max=COND_MAX):
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (2, 4):
        raise ValueError(f"expected a (2, 4) frame, got shape {frame.shape}")
    check_independent(frame, cond_max)
    if lagrangian_defect(frame) > tol:
        raise NotLagrangian(f"omega_0(u, v) defect {lagrangian_defect(frame):.3g} exceeds {tol:g}")
    return unitaries_from_frames(frame)


def frame_from_unitary(U):
    """Real frame whose complexified columns are the columns of ``U``."""
    U = np.asarray(U, dtype=complex)
    return np.stack([to_real(U[..., :, 0]), to_real(U[..., :, 1])], axis=-2)


def det2(U):
    d = np.linalg.det(np.asarray(U, dtype=complex))
    return d * d


def plane_projector(frames):
    """Orthogonal projector onto the span of each frame; equal iff same plane."""
    frames = np.asarray(frames, dtype=float)
    q, _ = np.linalg.qr(np.swapaxes(frames, -1, -2))
    return q @ np.swapaxes(q, -1, -2)


@dataclass(frozen=True)
class LagrangianFrame:
    """Ordered pair of vectors spanning a Lagrangian plane of (R^4, omega_0)."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(4)
        v = np.asarray(self.v, dtype=float).reshape(4)
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise ValueError("frame vectors must be finite")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if not is_lagrangian(self.array()):
            raise NotLagrangian("frame does not span a Lagrangian plane")

    def array(self):
        return np.stack([self.u, self.v])

    def unitary(self):
        return unitary_from_frame(self.array())
