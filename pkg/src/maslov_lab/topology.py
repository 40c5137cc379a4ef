"""Handle counts, homology ranks and 2-handle framings for the spaces
classified by a profile (n, g, b): n+1 fixed points over a reduced surface
of genus g with b boundary circles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import dynamics
from .errors import InvalidProfile, VanishingField
from .maslov import adaptive_winding


@dataclass(frozen=True)
class SpaceProfile:
    n: int
    g: int = 0
    b: int = 1

    def __post_init__(self):
        for name in ("n", "g", "b"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise InvalidProfile(f"{name} must be an integer")
        if self.n < 0 or self.g < 0 or self.b < 1:
            raise InvalidProfile(f"need n >= 0, g >= 0, b >= 1; got {self}")
        if (self.g, self.b) != (0, 1) and self.g + self.b < 2:
            raise InvalidProfile(f"g + b must be at least 2 unless (g, b) = (0, 1); got {self}")

    @property
    def fixed_points(self):
        return self.n + 1

    @property
    def surface_h1_rank(self):
        return 2 * self.g + self.b - 1

    @property
    def simply_connected(self):
        return (self.g, self.b) == (0, 1)


@dataclass(frozen=True)
class Handle:
    index: int
    label: str
    framing: int | None = None


@dataclass
class HandleInventory:
    handles: list[Handle] = field(default_factory=list)

    def count(self, index):
        return sum(1 for h in self.handles if h.index == index)

    @property
    def zero_handles(self):
        return self.count(0)

    @property
    def one_handles(self):
        return self.count(1)

    @property
    def two_handles(self):
        return self.count(2)

    @property
    def two_handle_framings(self):
        return [h.framing for h in self.handles if h.index == 2]

    @property
    def euler(self):
        return self.zero_handles - self.one_handles + self.two_handles

    @property
    def stein_framing_ok(self):
        return all(f == -1 for f in self.two_handle_framings)


# -- framings ---------------------------------------------------------------

def framing_winding(field_fn: Callable[[np.ndarray], np.ndarray], reference=(1.0, 0.0),
                    reverse=False, min_norm=1e-8) -> int:
    """Winding number of a normal field relative to a constant reference.

    ``field_fn`` maps angles in [0, 2pi] to 2-vectors in the (dy1, dy2)
    normal plane. Uses the same unwrapping kernel as the Maslov index.
    """
    r = complex(*reference)
    if abs(r) == 0:
        raise VanishingField("reference vector is zero")

    def values(t):
        theta = 2 * np.pi * (1.0 - t if reverse else t)
        f = np.asarray(field_fn(theta), dtype=float)
        w = f[..., 0] + 1j * f[..., 1]
        if np.min(np.abs(w)) < min_norm:
            raise VanishingField("field vanishes along the boundary circle")
        return w * np.conj(r)

    total, _, _ = adaptive_winding(values)
    return int(round(total / (2 * np.pi)))


def contact_framing_case1(theta):
    """grad h on the boundary of the core disc V at (x1, x2) = (cos, sin):
    -x1 dy2 + x2 dy1, written in the (dy1, dy2) basis."""
    theta = np.asarray(theta, dtype=float)
    on_circle = np.stack([np.cos(theta), np.sin(theta), 0 * theta, 0 * theta], axis=-1)
    return dynamics.gradient_field(on_circle)[..., 2:]


def contact_framing_case2(theta, epsilon=0.5):
    """cos dy2 - sin dy1 along the smoothed boundary circle of U.

    ``epsilon`` is the width of the removed strip; after smoothing the
    corners the framing along the circle does not depend on it.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return np.stack([-np.sin(theta), np.cos(theta)], axis=-1)


CANONICAL_FRAMING = (1.0, 0.0)  # dy1


def framing_winding_2handle(epsilon=0.5, reverse=False, reference=CANONICAL_FRAMING) -> int:
    return framing_winding(lambda th: contact_framing_case2(th, epsilon), reference, reverse)


@lru_cache(maxsize=None)
def stein_framing(case) -> int:
    """Framing of the canonical dy1 framing relative to the contact framing.

    The contact framing turning once positively against dy1 means dy1 is the
    contact framing with one left twist added, i.e. framing -1.
    """
    if case == 1:
        return -framing_winding(contact_framing_case1)
    if case == 2:
        return -framing_winding_2handle()
    raise ValueError("case must be 1 or 2")


# -- decomposition and homology --------------------------------------------

def handle_decomposition(p: SpaceProfile) -> HandleInventory:
    """One 0-handle, n Lagrangian 2-handles over the fixed points, and one
    (1-handle, 2-handle) pair per generator of H_1 of the reduced surface."""
    if not isinstance(p, SpaceProfile):
        raise InvalidProfile("expected a SpaceProfile")
    f1, f2 = stein_framing(1), stein_framing(2)
    handles = [Handle(0, "H0")]
    handles += [Handle(2, f"H_V{i}", f1) for i in range(1, p.n + 1)]
    for j in range(1, p.surface_h1_rank + 1):
        handles.append(Handle(1, f"H_gamma{j}"))
        handles.append(Handle(2, f"H_U{j}", f2))
    return HandleInventory(handles)


@dataclass(frozen=True)
class HomologyProfile:
    ranks: tuple[int, int, int, int, int]

    def __getitem__(self, m):
        return self.ranks[m]

    @property
    def euler(self):
        return sum((-1) ** m * r for m, r in enumerate(self.ranks))


def homology(p: SpaceProfile) -> HomologyProfile:
    if not isinstance(p, SpaceProfile):
        raise InvalidProfile("expected a SpaceProfile")
    r1 = p.surface_h1_rank
    return HomologyProfile((1, r1, r1 + p.n, 0, 0))


def euler_characteristic(p: SpaceProfile) -> int:
    return homology(p).euler


def profile_report(p: SpaceProfile) -> dict:
    inv = handle_decomposition(p)
    return {
        "schema": "profile/1",
        "n": p.n,
        "g": p.g,
        "b": p.b,
        "handles": {
            "zero": inv.zero_handles,
            "one": inv.one_handles,
            "two": inv.two_handles,
            "framings": inv.two_handle_framings,
        },
        "homology": list(homology(p).ranks),
        "euler": euler_characteristic(p),
        "stein_framing_ok": inv.stein_framing_ok,
    }
