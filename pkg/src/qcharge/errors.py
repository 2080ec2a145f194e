"""Exception types raised across the package."""


class QchargeError(Exception):
    """Base class for all package errors."""


class InvalidMatrix(QchargeError):
    """Matrix has non-finite entries or a malformed shape."""


class InvalidDimension(QchargeError):
    """Dimension argument is out of range for the operation."""


class NotUnitary(QchargeError):
    """Unitarity check failed beyond tolerance."""


class NotHermitian(QchargeError):
    """Hermiticity check failed beyond tolerance."""


class NotPSD(QchargeError):
    """A supposedly positive semidefinite matrix has a significantly negative eigenvalue."""


class NotDensityMatrix(QchargeError):
    """Trace or positivity check failed for a density matrix."""


class DegeneracyAmbiguous(QchargeError):
    """Eigenvalue clustering is ambiguous at the requested grouping tolerance.

    A chain of eigenvalues with consecutive gaps each below the tolerance
    spans at least the tolerance in total, so no grouping is defensible.
    """

    def __init__(self, message, gaps=None):
        super().__init__(message)
        self.gaps = tuple(gaps) if gaps is not None else ()


class SpectraMismatch(QchargeError):
    """The two states do not share an eigenspectrum at the given tolerance."""


class InvalidSpectrum(QchargeError):
    """Requested spectrum is not a probability vector."""


class NoEvolutionNeeded(QchargeError):
    """The two states are already equal; there is no optimal drive."""


class WrongMethod(QchargeError):
    """The chosen solver does not apply to this degeneracy pattern."""


class DegeneratePower(QchargeError):
    """Power ratio is undefined because the two states coincide."""


class InvalidProtocol(QchargeError):
    """Drive protocol is empty or has zero total drive norm."""


class DegenerateSpeed(QchargeError):
    """Every segment drive commutes with the instantaneous state; the state never moves."""


class Unsupported(QchargeError):
    """Requested configuration is outside the implemented scope."""


class StateFileError(QchargeError):
    """A state/operator/protocol file failed to parse or validate."""
