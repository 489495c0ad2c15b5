"""Exception types raised across the package."""

import numpy as np


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class NormalizationError(ValueError):
    """A state that must be unit-norm is not."""


class PriorsError(ValueError):
    """Prior probabilities are negative or do not sum to one."""


class NotHermitianError(ValueError):
    """An operator expected to be Hermitian is not."""


class InvalidPovmError(ValueError):
    """A set of operators fails positivity or completeness.

    Attributes
    ----------
    defect : ndarray or None
        ``sum(elements) - I`` when the set is incomplete.
    min_eigenvalues : list of float
        Smallest eigenvalue of each element, when computed.
    """

    def __init__(self, message, defect=None, min_eigenvalues=None):
        super().__init__(message)
        self.defect = None if defect is None else np.asarray(defect)
        self.min_eigenvalues = list(min_eigenvalues or [])


class IncompletePovmError(InvalidPovmError):
    """Operators are positive but their sum is not the identity."""


class EntangledStateError(ValueError):
    """A product-state routine received an entangled two-qubit state."""


class ProtocolError(ValueError):
    """A local-measurement protocol tree is malformed."""
