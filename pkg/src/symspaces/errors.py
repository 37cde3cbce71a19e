"""Exception types shared across the package."""


class SymspacesError(Exception):
    """Base class for all package-specific errors."""


class SpecMismatch(SymspacesError):
    """Operands live over different algebra specifications."""


class ShapeMismatch(SymspacesError):
    """Coefficient array has the wrong shape for its specification."""


class UnknownUnit(SymspacesError):
    """A named unit does not belong to the element's scalar tower."""


class Singular(SymspacesError):
    """Element is not invertible (to working precision)."""


class NotHermitianPair(SymspacesError):
    """Positivity was requested for a pair (algebra, involution) that does
    not embed with the involution acting as conjugate transpose."""


class NotPositive(SymspacesError):
    """A square root was requested for an element that is not positive."""


class NotInGroup(SymspacesError):
    """Matrix fails the defining conditions of the requested group."""


class NotInLieAlgebra(SymspacesError):
    """Matrix fails the defining conditions of the requested Lie algebra."""


class NotInModel(SymspacesError):
    """Point fails the membership conditions of the requested model."""


class NotTangent(SymspacesError):
    """Vector fails the tangency conditions at the given model point."""


class NotRegular(SymspacesError):
    """Pair of algebra elements does not span a line (no basis completion)."""


class NonTransverse(SymspacesError):
    """Line is not transverse to the chart's line at infinity."""


class SingularDenominator(SymspacesError):
    """Moebius denominator c*z + d is not invertible."""


class KernelRankMismatch(SymspacesError):
    """Eigenline extraction failed to produce a regular representative."""


class StepTooLarge(SymspacesError):
    """Finite-difference step left the model even after retraction."""


class Unsupported(SymspacesError):
    """Requested operation is not defined for this family/kind combination."""


class NotPattern(SymspacesError):
    """Element fails the symmetry pattern required for a Higgs datum."""
