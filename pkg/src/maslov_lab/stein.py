"""The affine surfaces W_n = {z1^2 + z2^2 + z3^(n+1) = 1} in C^3.

Points are complex triples. The circle acts by rotating (z1, z2) and fixing
z3; reduction is the projection to z3. The Lagrangian spheres S_k lie over
the unit-circle arcs between consecutive (n+1)-th roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .errors import InvalidIndex, NoConvergence, SingularGradient

SURFACE_TOL = 1e-10
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50


def wn_residual(z, n):
    """z1^2 + z2^2 + z3^(n+1) - 1 (vectorised over leading axes)."""
    z = np.asarray(z, dtype=complex)
    return z[..., 0] ** 2 + z[..., 1] ** 2 + z[..., 2] ** (n + 1) - 1


def wn_gradient(z, n):
    """Holomorphic gradient (2 z1, 2 z2, (n+1) z3^n)."""
    z = np.asarray(z, dtype=complex)
    return np.stack([2 * z[..., 0], 2 * z[..., 1], (n + 1) * z[..., 2] ** n], axis=-1)


@dataclass(frozen=True)
class WnPoint:
    z: np.ndarray
    n: int

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex).reshape(3)
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        r = abs(wn_residual(z, self.n))
        if not r <= SURFACE_TOL:
            raise ValueError(f"point is off W_{self.n}: |residual| = {r:.3g}")
        object.__setattr__(self, "z", z)


def project_to_wn(z, n, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER) -> WnPoint:
    """Newton projection onto W_n along the conjugate gradient direction.

    Each step is the minimum-norm solution of the linearised constraint,
    z <- z - f(z) conj(g) / |g|^2.
    """
    z = np.asarray(z, dtype=complex).reshape(3).copy()
    for _ in range(max_iter + 1):
        f = wn_residual(z, n)
        if abs(f) < tol:
            return WnPoint(z, n)
        g = wn_gradient(z, n)
        gg = float(np.vdot(g, g).real)
        if gg < 1e-16:
            raise SingularGradient(f"constraint gradient vanishes at {z}")
        z = z - f * np.conj(g) / gg
    raise NoConvergence(f"Newton projection did not reach |residual| < {tol:g} in {max_iter} steps")


def group_action(theta, p):
    """Rotate (z1, z2) by ``theta``; z3 is fixed. Accepts WnPoint or raw triples."""
    if isinstance(p, WnPoint):
        return WnPoint(group_action(theta, p.z), p.n)
    z = np.asarray(z_of(p), dtype=complex)
    R = dynamics.rotation(np.asarray(theta, dtype=float))
    out = np.empty(np.broadcast_shapes(z.shape, R.shape[:-2] + (3,)), dtype=complex)
    out[..., :2] = (R @ z[..., :2, None])[..., 0]
    out[..., 2] = z[..., 2]
    return out


def z_of(p):
    return p.z if isinstance(p, WnPoint) else p


def moment_map(z):
    """Im(z1 conj(z2)) on C^3."""
    z = np.asarray(z_of(z), dtype=complex)
    return np.imag(z[..., 0] * np.conj(z[..., 1]))


def reduction_map(p):
    """Orbit-space projection: (z1, z2, z3) -> z3."""
    return np.asarray(z_of(p), dtype=complex)[..., 2]


def root_of_unity(n, k):
    return np.exp(2j * np.pi * k / (n + 1))


def fixed_points(n):
    """The n+1 fixed points (0, 0, xi^k) of the circle action on W_n."""
    return [WnPoint(np.array([0, 0, root_of_unity(n, k)]), n) for k in range(n + 1)]


def to_real6(z):
    """(z1, z2, z3) -> (x1, x2, x3, y1, y2, y3)."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def from_real6(r):
    r = np.asarray(r, dtype=float)
    return r[..., :3] + 1j * r[..., 3:]


def omega_c3(u, v):
    """Standard symplectic form on C^3: Im(sum conj(u_j) v_j)."""
    return np.imag(np.sum(np.conj(u) * v, axis=-1))


# -- Lagrangian spheres -----------------------------------------------------

def arc_bounds(n, k):
    return 2 * (k - 1) * np.pi / (n + 1), 2 * k * np.pi / (n + 1)


def sphere_point(n, k, phi, s):
    """Parametrisation (a cos s, a sin s, e^{i phi}), a = sqrt(1 - e^{i(n+1)phi}).

    Uses the principal square root; at the arc endpoints a is set to 0 and
    z3 to the exact root of unity so the collapse is exact.
    """
    phi, s = np.broadcast_arrays(np.asarray(phi, dtype=float), np.asarray(s, dtype=float))
    lo, hi = arc_bounds(n, k)
    z3 = np.exp(1j * phi)
    a = np.sqrt(1 - z3 ** (n + 1))
    at_lo = np.isclose(phi, lo, rtol=0, atol=1e-14)
    at_hi = np.isclose(phi, hi, rtol=0, atol=1e-14)
    a = np.where(at_lo | at_hi, 0, a)
    z3 = np.where(at_lo, root_of_unity(n, k - 1), np.where(at_hi, root_of_unity(n, k), z3))
    return np.stack([a * np.cos(s), a * np.sin(s), z3], axis=-1)


@dataclass
class SphereSample:
    n: int
    k: int
    phi: np.ndarray  # arc parameter, endpoints included
    s: np.ndarray  # circle parameter in [0, 2pi)
    points: np.ndarray  # complex, shape (len(phi), len(s), 3)

    @property
    def resolution(self):
        return len(self.phi)


def sample_sphere(n, k, resolution=32) -> SphereSample:
    if not 1 <= k <= n:
        raise InvalidIndex(f"sphere index k={k} outside 1..{n}")
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    lo, hi = arc_bounds(n, k)
    phi = np.linspace(lo, hi, resolution)
    phi[0], phi[-1] = lo, hi
    s = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    P, S = np.meshgrid(phi, s, indexing="ij")
    return SphereSample(n, k, phi, s, sphere_point(n, k, P, S))


def check_lagrangian_sphere(sample: SphereSample) -> float:
    """max |omega(d_phi, d_s)| over central-difference tangents of the mesh.

    One mesh row next to each collapsing pole is excluded.
    """
    if sample.resolution < 16:
        raise ValueError("resolution must be at least 16")
    pts = sample.points
    dphi = (pts[2:, :] - pts[:-2, :])[1:-1] / (2 * (sample.phi[1] - sample.phi[0]))
    ds_all = (np.roll(pts, -1, axis=1) - np.roll(pts, 1, axis=1)) / (2 * (sample.s[1] - sample.s[0]))
    ds = ds_all[2:-2]
    return float(np.max(np.abs(omega_c3(dphi, ds))))


def sphere_invariance_defect(sample: SphereSample, theta) -> float:
    """max distance between G_theta(P(phi, s)) and P(phi, s + theta)."""
    P, S = np.meshgrid(sample.phi, sample.s, indexing="ij")
    moved = group_action(theta, sample.points)
    target = sphere_point(sample.n, sample.k, P, S + theta)
    return float(np.max(np.abs(moved - target)))


def mesh_keys(points, digits=9):
    """Hashable rounded coordinates, for set-wise comparison of meshes."""
    r = np.round(to_real6(points.reshape(-1, 3)), digits) + 0.0
    return {tuple(row) for row in r}


def riemann_surface_profile(n):
    """(genus, boundary components) of the reduced surface over the disc."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g = n // 2
    return g, (n + 1) - 2 * g


def restricted_hessian_index(n, k, step=1e-3):
    """Morse index of h at p_k computed from finite differences in the
    tangent directions C^2_{z1 z2} (z3 frozen)."""
    p = fixed_points(n)[k].z

    def h_local(x):
        z = p + np.array([x[0] + 1j * x[2], x[1] + 1j * x[3], 0])
        return float(moment_map(z))

    H = dynamics.fd_hessian(h_local, np.zeros(4), step)
    return int(np.sum(np.linalg.eigvalsh(0.5 * (H + H.T)) < 0))
