"""Exception types shared across the library.

Every mathematically meaningful failure gets its own class so callers (and
the CLI exit-code logic) can tell a precondition violation apart from a bug.
"""


class PadicError(Exception):
    """Base class for all mathematical errors raised by this library."""


class ContextMismatchError(PadicError):
    """Two operands belong to different coefficient rings."""


class DivisionPrecisionError(PadicError):
    """Division x / y with v_p(y) > v_p(x): the quotient is not representable
    at the working precision."""


class NotInvertibleError(PadicError):
    """A matrix (or ring element) that was required to be a unit is not."""


class NonUnitInversionError(PadicError):
    """Jacobian arithmetic over a p-adic ring hit an inversion of a non-unit
    (a non-generic configuration; callers usually re-randomize)."""


class RepeatedRootError(PadicError):
    """A polynomial that must be squarefree modulo p is not."""


class WeierstrassError(PadicError):
    """A divisor's support touches a Weierstrass point (y = 0)."""


class DegreeError(PadicError):
    """A divisor or polynomial does not have the required degree."""


class ReconstructionError(PadicError):
    """Rational (Pade) reconstruction failed: degree bounds too small,
    series precision too low, or the input is not a rational function."""


class GenericityError(PadicError):
    """The pipeline exhausted its retry budget without finding a generic
    configuration (distinct, affine, non-Weierstrass support)."""
