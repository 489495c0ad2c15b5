"""Outcome probabilities and information measures, in bits."""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

NEGATIVE_TOL = 1e-12
SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """``p[j, k]``: probability that the state is ``j`` and the outcome is ``k``."""

    p: np.ndarray
    labels: tuple = ()

    @property
    def priors(self):
        return self.p.sum(axis=1)

    @property
    def marginal(self):
        """Outcome probabilities ``p_k``."""
        return self.p.sum(axis=0)

    @property
    def conditional(self):
        """``p_{k|j}``; rows of zero prior are left as zeros."""
        pr = self.priors[:, None]
        return np.divide(self.p, pr, out=np.zeros_like(self.p), where=pr > 0)


def _clamp(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -NEGATIVE_TOL):
        raise ValueError(f"negative probability {p.min():.3e}")
    return np.where(p < 0, 0.0, p)


def make_joint(p, labels=None):
    p = _clamp(p)
    if p.ndim != 2:
        raise DimensionError("joint distribution must be a matrix")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"joint distribution sums to {p.sum()!r}")
    p.flags.writeable = False
    labels = tuple(labels) if labels is not None else tuple(str(k) for k in range(p.shape[1]))
    return JointDistribution(p, labels)


def outcome_probabilities(ensemble, povm):
    """``p[j, k] = prior_j <state_j|element_k|state_j>``."""
    if ensemble.dim != povm.dim:
        raise DimensionError(f"ensemble dim {ensemble.dim} vs POVM dim {povm.dim}")
    s = np.array(ensemble.states)
    e = np.array(povm.elements)
    q = np.einsum("ji,kil,jl->jk", s.conj(), e, s).real
    return make_joint(np.asarray(ensemble.priors)[:, None] * q, povm.labels)


def _plogp(p):
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(np.sum(p * np.log2(p)))


def shannon_entropy(dist):
    """``-Σ p log2 p`` with ``0 log 0 = 0``."""
    p = _clamp(dist)
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"distribution sums to {p.sum()!r}")
    return -_plogp(p)


def mutual_information(jd):
    """Mutual information between state index and outcome.

    Evaluated as ``H(outcome) - Σ_j prior_j H(outcome | j)``.
    """
    pj = jd.priors
    cond = jd.conditional
    h_cond = sum(pj[j] * -_plogp(cond[j]) for j in range(len(pj)) if pj[j] > 0)
    return -_plogp(jd.marginal) - h_cond


def mutual_information_entropies(jd):
    """``H(state) + H(outcome) - H(state, outcome)``; same value, separate route."""
    return -_plogp(jd.priors) - _plogp(jd.marginal) + _plogp(jd.p)


def mutual_information_of(ensemble, povm):
    return mutual_information(outcome_probabilities(ensemble, povm))


def joint_to_csv(jd):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", *jd.labels])
    for j, row in enumerate(jd.p):
        w.writerow([j, *(repr(float(x)) for x in row)])
    return buf.getvalue()


def joint_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    labels = rows[0][1:]
    return make_joint([[float(x) for x in r[1:]] for r in rows[1:]], labels)
