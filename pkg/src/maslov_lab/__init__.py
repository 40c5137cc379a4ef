"""Numerical and combinatorial checks for special Hamiltonian circle actions
on symplectic 4-manifolds: Maslov indices, the model action on C^2, the
surfaces W_n and their Lagrangian sphere strings, and handle/homology data."""

from .errors import (
    DegenerateFrame,
    FixedPointOrbit,
    Inconclusive,
    InvalidIndex,
    InvalidProfile,
    LoopError,
    MaslovLabError,
    NoConvergence,
    NotLagrangian,
    PhaseStepTooLarge,
    SingularGradient,
    VanishingField,
)

__version__ = "0.1.0"
