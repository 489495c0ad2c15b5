"""Small-dimension complex linear algebra.

States are 1-D ``complex128`` arrays and operators are square 2-D arrays.
Two-qubit objects use the basis ordering ``|00>, |01>, |10>, |11>``, so that
``(a ⊗ b)[2*i + j] = a[i] * b[j]``.
"""

import numpy as np

from .errors import DimensionError, NormalizationError, NotHermitianError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
POSITIVITY_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)


def ket(*amplitudes):
    """Build a state vector from its amplitudes."""
    v = np.array(amplitudes, dtype=complex)
    if v.ndim != 1 or v.size not in (2, 4):
        raise DimensionError(f"state must have dimension 2 or 4, got shape {v.shape}")
    v.flags.writeable = False
    return v


def basis(dim, index):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    v.flags.writeable = False
    return v


def _frozen(x):
    x = np.asarray(x, dtype=complex)
    x.flags.writeable = False
    return x


def _require_dim(x, dim, what):
    if x.shape[0] != dim:
        raise DimensionError(f"{what} must have dimension {dim}, got {x.shape[0]}")


def norm(v):
    return float(np.sqrt(np.sum(np.abs(v) ** 2)))


def is_normalized(v, tol=NORM_TOL):
    return abs(np.sum(np.abs(np.asarray(v)) ** 2) - 1.0) <= tol


def normalize(v):
    n = norm(v)
    if n == 0:
        raise NormalizationError("cannot normalize the zero vector")
    return _frozen(np.asarray(v) / n)


def tensor(a, b):
    """Tensor product of two single-qubit states."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionError("tensor expects 1-D state vectors")
    _require_dim(a, 2, "first factor")
    _require_dim(b, 2, "second factor")
    return _frozen(np.kron(a, b))


def tensor_op(a, b):
    """Kronecker product of two single-qubit operators."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError(f"tensor_op expects 2x2 operators, got {a.shape} and {b.shape}")
    return _frozen(np.kron(a, b))


def inner(a, b):
    """``<a|b>``, conjugate-linear in the first argument."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"inner product of shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def projector(v):
    """Rank-one projector ``|v><v|`` onto a normalized state."""
    v = np.asarray(v, dtype=complex)
    if not is_normalized(v):
        raise NormalizationError(f"projector needs a unit vector, norm^2 = {norm(v) ** 2!r}")
    return _frozen(np.outer(v, v.conj()))


def conjugate(v):
    """Entrywise complex conjugate in the standard basis."""
    return _frozen(np.conj(v))


def dagger(a):
    return _frozen(np.conj(np.asarray(a)).T)


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T)) <= tol


def hermitian_eigh(a, tol=1e-10):
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.

    Raises
    ------
    NotHermitianError
        If ``a`` differs from its adjoint by more than ``tol`` in any entry.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, tol):
        raise NotHermitianError("operator is not Hermitian")
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh((a + a.conj().T) / 2)


def hermitian_eigenvalues(a, tol=1e-10):
    """Sorted real eigenvalues of a Hermitian operator."""
    return [float(x) for x in hermitian_eigh(a, tol)[0]]


def is_positive(a, tol=POSITIVITY_TOL):
    return hermitian_eigenvalues(a)[0] >= -tol


def inv_sqrt_psd(s):
    """``S^{-1/2}`` and ``S^{-1}`` for a positive definite Hermitian ``S``."""
    w, v = np.linalg.eigh(s)
    return (v / np.sqrt(w)) @ v.conj().T, (v / w) @ v.conj().T


def sqrt_psd(a):
    """Positive square root of a positive semidefinite operator."""
    w, v = hermitian_eigh(a)
    w = np.clip(w, 0.0, None)
    return _frozen((v * np.sqrt(w)) @ v.conj().T)


def random_state(rng, dim, real=False):
    v = rng.normal(size=dim) + (0 if real else 1j * rng.normal(size=dim))
    return normalize(v)
