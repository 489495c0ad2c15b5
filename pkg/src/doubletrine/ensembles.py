"""Pure-state ensembles with priors: the trine and double-trine sets."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NormalizationError, PriorsError
from .linalg import NORM_TOL, ket, tensor

PRIOR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite list of pure states of a common dimension, with prior probabilities."""

    states: tuple
    priors: tuple

    @property
    def dim(self):
        return self.states[0].shape[0]

    def __len__(self):
        return len(self.states)

    def gram(self):
        s = np.array(self.states)
        return s.conj() @ s.T


def make_ensemble(states, priors):
    """Validate states and priors and return an :class:`Ensemble`.

    Raises
    ------
    DimensionError
        Empty input, mismatched lengths, or states of differing dimension.
    PriorsError
        A negative prior, or priors that do not sum to one.
    NormalizationError
        A state that is not unit-norm.
    """
    states = [np.asarray(s, dtype=complex) for s in states]
    priors = [float(p) for p in priors]
    if not states:
        raise DimensionError("ensemble needs at least one state")
    if len(states) != len(priors):
        raise DimensionError(f"{len(states)} states but {len(priors)} priors")
    dims = {s.shape for s in states}
    if len(dims) != 1 or states[0].ndim != 1:
        raise DimensionError(f"states have mismatched shapes {sorted(dims)}")
    if any(p < 0 for p in priors):
        raise PriorsError("priors must be nonnegative")
    if abs(sum(priors) - 1.0) > PRIOR_TOL:
        raise PriorsError(f"priors not normalized (sum = {sum(priors)!r})")
    for j, s in enumerate(states):
        n2 = float(np.sum(np.abs(s) ** 2))
        if abs(n2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"state {j} is not normalized (norm^2 = {n2!r})")
    return Ensemble(tuple(ket(*s) for s in states), tuple(priors))


def trine_states():
    """The three trine qubit states, phased so every pairwise overlap is -1/2."""
    h = np.sqrt(3) / 2
    return [ket(1.0, 0.0), ket(-0.5, -h), ket(-0.5, h)]


def trine():
    return make_ensemble(trine_states(), [1 / 3] * 3)


def double_trine():
    """Three two-qubit states ``psi_j ⊗ psi_j`` with equal priors."""
    return make_ensemble([tensor(p, p) for p in trine_states()], [1 / 3] * 3)


def ensemble_to_dict(e):
    return {
        "dim": int(e.dim),
        "states": [[{"re": float(z.real), "im": float(z.imag)} for z in s] for s in e.states],
        "priors": [float(p) for p in e.priors],
    }


def ensemble_from_dict(d):
    try:
        dim = int(d["dim"])
        states = [[complex(z["re"], z["im"]) for z in s] for s in d["states"]]
        priors = d["priors"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ensemble document: {exc!r}") from exc
    if any(len(s) != dim for s in states):
        raise DimensionError(f"state length does not match declared dim {dim}")
    return make_ensemble(states, priors)
