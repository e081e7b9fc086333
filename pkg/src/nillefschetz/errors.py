"""Exception hierarchy shared by every module of the package."""


class LefschetzError(Exception):
    """Base class for all domain errors raised by this package."""


class NonSquareError(LefschetzError, ValueError):
    pass


class FieldMismatch(LefschetzError, ValueError):
    pass


class NotNilpotent(LefschetzError):
    pass


class NotHomomorphism(LefschetzError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EigenvalueOne(LefschetzError):
    pass


class NotClosedUnderBracket(LefschetzError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvariant(LefschetzError):
    pass


class UnsupportedScalarTower(LefschetzError):
    pass


class JordanOnCircle(LefschetzError):
    pass


class ClassTooHigh(LefschetzError):
    pass


class NonIntegerCoefficients(LefschetzError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonIntegerLattice(LefschetzError):
    pass


class NonTriangularMap(LefschetzError):
    pass


class DegenerateLayer(LefschetzError):
    pass


class TraceIdentityError(LefschetzError, AssertionError):
    """An identity that must hold exactly was found to fail."""


class SpecError(LefschetzError, ValueError):
    """A problem specification could not be parsed or is inconsistent."""
