"""Exception hierarchy. Every error raised on purpose derives from MaslovLabError."""


class MaslovLabError(Exception):
    pass


class DegenerateFrame(MaslovLabError, ValueError):
    """The two frame vectors are (numerically) linearly dependent."""


class NotLagrangian(MaslovLabError, ValueError):
    pass


class LoopError(MaslovLabError, ValueError):
    """A sampled loop violates its structural invariants (length, closure)."""


class PhaseStepTooLarge(MaslovLabError, ArithmeticError):
    """The sampled phase jumps by at least pi between consecutive samples,
    so the winding number cannot be recovered reliably."""


class FixedPointOrbit(MaslovLabError, ValueError):
    pass


class Inconclusive(MaslovLabError, ArithmeticError):
    pass


class NoConvergence(MaslovLabError, ArithmeticError):
    pass


class SingularGradient(MaslovLabError, ArithmeticError):
    pass


class InvalidIndex(MaslovLabError, ValueError):
    pass


class InvalidProfile(MaslovLabError, ValueError):
    pass


class VanishingField(MaslovLabError, ValueError):
    pass
