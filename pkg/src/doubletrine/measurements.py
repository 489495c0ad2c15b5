"""Measurements for the double-trine problem and tools to inspect them.

Covers the entangled orthonormal basis ``{A_0, A_1, A_2, S}``, the
single-qubit trine POVM and its nine-outcome product, the six-outcome
product-state POVM built from rotated trine states, concurrence, and the
two independent routes to the weights of the singlet superpositions.
"""

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .ensembles import trine_states
from .errors import DimensionError, IncompletePovmError, InvalidPovmError, NormalizationError
from .linalg import (
    SIGMA_YY,
    hermitian_eigh,
    is_hermitian,
    ket,
    normalize,
    projector,
    tensor,
    tensor_op,
)

COMPLETENESS_TOL = 1e-10
POSITIVITY_TOL = 1e-10
RANK_TOL = 1e-9
ENTANGLEMENT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered positive operators summing to the identity, one per outcome."""

    elements: tuple
    labels: tuple

    @property
    def dim(self):
        return self.elements[0].shape[0]

    @property
    def M(self):
        return len(self.elements)

    def total(self):
        return np.sum(self.elements, axis=0)


class PovmClass(str, enum.Enum):
    UNENTANGLED = "unentangled"
    ENTANGLED = "entangled"
    INDETERMINATE = "indeterminate"


class ComplexConcurrenceWarning(UserWarning):
    """``<v̄|σy⊗σy|v>`` had a non-negligible imaginary part."""


@dataclass(frozen=True, eq=False)
class PovmReport:
    """Outcome of :func:`check_povm`; ``valid`` is True only if every check passed."""

    valid: bool
    hermitian: bool
    min_eigenvalues: tuple
    defect: np.ndarray
    defect_norm: float
    problems: tuple


def check_povm(elements, tol=COMPLETENESS_TOL):
    """Inspect a candidate operator set without raising."""
    elements = [np.asarray(e, dtype=complex) for e in elements]
    problems = []
    if not elements:
        return PovmReport(False, True, (), np.zeros((0, 0)), float("nan"), ("empty element list",))
    shapes = {e.shape for e in elements}
    if len(shapes) != 1 or elements[0].ndim != 2 or elements[0].shape[0] != elements[0].shape[1]:
        return PovmReport(
            False, False, (), np.zeros((0, 0)), float("nan"), (f"element shapes {sorted(shapes)}",)
        )
    herm = all(is_hermitian(e, 1e-10) for e in elements)
    mins = []
    if herm:
        mins = [float(hermitian_eigh(e)[0][0]) for e in elements]
        bad = [k for k, m in enumerate(mins) if m < -POSITIVITY_TOL]
        if bad:
            problems.append(f"positivity violated by elements {bad} (min eigenvalue {min(mins):.3e})")
    else:
        problems.append("element not Hermitian")
    defect = np.sum(elements, axis=0) - np.eye(elements[0].shape[0])
    dnorm = float(np.linalg.norm(defect))
    if dnorm > tol:
        problems.append(f"completeness violated: ||sum - I||_F = {dnorm:.3e}")
    return PovmReport(not problems, herm, tuple(mins), defect, dnorm, tuple(problems))


def make_povm(elements, labels=None, tol=COMPLETENESS_TOL):
    """Validate operators and wrap them in a :class:`Povm`.

    Raises
    ------
    IncompletePovmError
        Elements are positive but do not sum to the identity; carries the defect.
    InvalidPovmError
        Any other failure (empty, non-Hermitian, non-positive).
    """
    elements = [np.asarray(e, dtype=complex) for e in elements]
    labels = [str(k) for k in range(len(elements))] if labels is None else [str(s) for s in labels]
    if len(labels) != len(elements):
        raise InvalidPovmError(f"{len(elements)} elements but {len(labels)} labels")
    rep = check_povm(elements, tol)
    if not rep.valid:
        only_completeness = rep.hermitian and all(m >= -POSITIVITY_TOL for m in rep.min_eigenvalues)
        cls = IncompletePovmError if only_completeness and rep.min_eigenvalues else InvalidPovmError
        raise cls("; ".join(rep.problems), defect=rep.defect, min_eigenvalues=rep.min_eigenvalues)
    frozen = []
    for e in elements:
        e = e.copy()
        e.flags.writeable = False
        frozen.append(e)
    return Povm(tuple(frozen), tuple(labels))


def _perp(v):
    return ket(-np.conj(v[1]), np.conj(v[0]))


def singlet():
    s = 1 / np.sqrt(2)
    return ket(0.0, s, -s, 0.0)


def entangled_basis_states():
    """``[A_0, A_1, A_2, S]``.

    ``A_j`` is the symmetric orthonormal triple closest to the double-trine
    states, ``(1/(3√3)) [(4+√2) a_j - (2-√2)(a_{j+1} + a_{j+2})]``.
    """
    psi = trine_states()
    a = [tensor(p, p) for p in psi]
    r2 = np.sqrt(2)
    out = []
    for j in range(3):
        v = ((4 + r2) * a[j] - (2 - r2) * (a[(j + 1) % 3] + a[(j + 2) % 3])) / (3 * np.sqrt(3))
        out.append(ket(*v))
    return out + [singlet()]


def entangled_basis_povm():
    states = entangled_basis_states()
    return make_povm([projector(v) for v in states], ["A0", "A1", "A2", "S"])


def single_qubit_trine_povm():
    """``Π_k = (2/3)|ψ_k^⊥><ψ_k^⊥|``; outcome ``k`` rules out trine state ``k``."""
    elems = [(2 / 3) * projector(_perp(p)) for p in trine_states()]
    return make_povm(elems, [f"P{k}" for k in range(3)])


def nine_outcome_product_povm():
    single = single_qubit_trine_povm()
    elems, labels = [], []
    for j in range(3):
        for k in range(3):
            elems.append(tensor_op(single.elements[j], single.elements[k]))
            labels.append(f"P{j}xP{k}")
    return make_povm(elems, labels)


def rotation(theta):
    """Real qubit rotation by ``theta`` about the y axis of the Bloch sphere."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotated_product_states(theta):
    """``(B, C)`` with ``B_j = φ_j^+ ⊗ φ_j^-`` and ``C_j = φ_j^- ⊗ φ_j^+``."""
    r = rotation(theta)
    rinv = r.conj().T
    b, c = [], []
    for p in trine_states():
        plus, minus = r @ p, rinv @ p
        b.append(tensor(plus, minus))
        c.append(tensor(minus, plus))
    return b, c


def six_outcome_elements(theta, alpha):
    """The six weighted projectors ``E_0..E_2, F_0..F_2``, unvalidated."""
    b, c = rotated_product_states(theta)
    return [alpha * projector(v) for v in b] + [alpha * projector(v) for v in c]


def six_outcome_unentangled_povm(theta=np.pi / 4, alpha=2 / 3, tol=COMPLETENESS_TOL):
    """Six-outcome POVM of product projectors.

    Complete only for ``alpha = 2/3`` and ``cos(2 theta) = 0``; other choices
    raise :class:`IncompletePovmError` whose ``defect`` is ``sum - I``.
    """
    elems = six_outcome_elements(theta, alpha)
    labels = [f"E{j}" for j in range(3)] + [f"F{j}" for j in range(3)]
    return make_povm(elems, labels, tol)


def concurrence_signed(v):
    """``<v̄|σy⊗σy|v>`` (no modulus); real part returned.

    Warns with :class:`ComplexConcurrenceWarning` if the imaginary part
    exceeds 1e-10, which can only happen for states with complex amplitudes.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise DimensionError(f"concurrence needs a two-qubit state, got shape {v.shape}")
    c = complex(v @ SIGMA_YY @ v)
    if abs(c.imag) > 1e-10:
        warnings.warn(f"signed concurrence has imaginary part {c.imag:.3e}", ComplexConcurrenceWarning)
    return c.real


def concurrence(v):
    """Two-qubit pure-state concurrence, 0 for product states and 1 for Bell states."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise DimensionError(f"concurrence needs a two-qubit state, got shape {v.shape}")
    return float(abs(v @ SIGMA_YY @ v))


def singlet_superposition_states(beta, gamma, tol=1e-10):
    """``[β A_j - γ S for j] + [β A_j + γ S for j]``."""
    if abs(beta**2 + gamma**2 - 1.0) > tol:
        raise NormalizationError(f"beta^2 + gamma^2 = {beta**2 + gamma**2!r}, expected 1")
    *a, s = entangled_basis_states()
    return [ket(*(beta * x - gamma * s)) for x in a] + [ket(*(beta * x + gamma * s)) for x in a]


def solve_separability_constraint():
    """Real ``(β, γ) > 0`` making every ``β A_j ± γ S`` a product state.

    Since ``<Ā_j|σy⊗σy|S> = 0``, the signed concurrence of the superposition
    is ``β² c(A_j) + γ² c(S)``; setting it to zero together with
    ``β² + γ² = 1`` is a 2x2 linear system in ``(β², γ²)``.
    """
    *a, s = entangled_basis_states()
    c_a = concurrence_signed(a[0])
    c_s = concurrence_signed(s)
    cross = complex(a[0] @ SIGMA_YY @ s)
    assert abs(cross) < 1e-12, cross
    b2, g2 = np.linalg.solve([[c_a, c_s], [1.0, 1.0]], [0.0, 1.0])
    return float(np.sqrt(b2)), float(np.sqrt(g2))


def solve_completeness_constraint():
    """``(|β|², |γ|²)`` for which the six weight-2/3 superpositions sum to ``I``.

    The ± cross terms cancel, leaving ``|β|² X + |γ|² Y = I`` with
    ``X = (4/3) Σ_j |A_j><A_j|`` and ``Y = 4 |S><S|``; solved by least squares
    over the 16 matrix entries.
    """
    *a, s = entangled_basis_states()
    x = (2 / 3) * 2 * sum(projector(v) for v in a)
    y = (2 / 3) * 2 * 3 * projector(s)
    lhs = np.stack([x.ravel(), y.ravel()], axis=1)
    sol, *_ = np.linalg.lstsq(lhs, np.eye(4).ravel(), rcond=None)
    resid = np.linalg.norm(lhs @ sol - np.eye(4).ravel())
    if resid > 1e-10:
        raise InvalidPovmError(f"no weights make the superpositions complete (residual {resid:.3e})")
    return float(sol[0].real), float(sol[1].real)


def cyclic_unitary():
    """``(u, U)`` with ``u ψ_j = ψ_{j+1}`` and ``U = u ⊗ u``."""
    h = np.sqrt(3) / 2
    u = np.array([[-0.5, h], [-h, -0.5]], dtype=complex)
    return u, tensor_op(u, u)


def element_kets(povm):
    """Rank and normalized principal eigenvector of each element."""
    out = []
    for e in povm.elements:
        w, v = hermitian_eigh(e)
        rank = int(np.sum(w > RANK_TOL))
        out.append((rank, normalize(v[:, -1])))
    return out


def classify_povm(povm):
    """Label a two-qubit POVM as unentangled, entangled, or indeterminate.

    Elements of rank two or more make the result indeterminate; zero
    elements are ignored.
    """
    if povm.dim != 4:
        raise DimensionError("classification is defined for two-qubit POVMs")
    entangled = False
    for rank, v in element_kets(povm):
        if rank >= 2:
            return PovmClass.INDETERMINATE
        if rank == 1 and concurrence(v) > ENTANGLEMENT_TOL:
            entangled = True
    return PovmClass.ENTANGLED if entangled else PovmClass.UNENTANGLED


def operator_to_json(a):
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in np.asarray(a)]


def operator_from_json(rows):
    return np.array([[complex(z["re"], z["im"]) for z in row] for row in rows], dtype=complex)


def povm_to_dict(povm):
    return {
        "dim": int(povm.dim),
        "elements": [operator_to_json(e) for e in povm.elements],
        "labels": list(povm.labels),
    }


def operators_from_dict(d):
    """``(elements, labels)`` from a POVM document, without validation."""
    try:
        dim = int(d["dim"])
        elements = [operator_from_json(e) for e in d["elements"]]
        labels = list(d.get("labels") or [str(k) for k in range(len(elements))])
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed POVM document: {exc!r}") from exc
    for e in elements:
        if e.shape != (dim, dim):
            raise DimensionError(f"element shape {e.shape} does not match dim {dim}")
    return elements, labels


def povm_from_dict(d):
    return make_povm(*operators_from_dict(d))
