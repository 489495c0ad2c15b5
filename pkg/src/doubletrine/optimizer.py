"""Derivative-free search for POVMs that maximize mutual information.

Two parameterizations are supported:

``global``
    ``M`` arbitrary complex 4x4 seed matrices ``M_k``.  Elements are
    ``S^{-1/2} M_k†M_k S^{-1/2}`` with ``S = Σ M_k†M_k + εI``, so every raw
    vector decodes to a valid POVM.
``product``
    Per outcome a weight and two Bloch directions, giving ``w P ⊗ Q``.
    Completeness is not automatic: an under-complete set is repaired by
    appending the slack ``I - Σ``, anything else is scored with a penalty.

Local search is Powell's conjugate-direction method from seeded random starts.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .linalg import inv_sqrt_psd
from .measurements import Povm, PovmClass, classify_povm, make_povm, povm_to_dict
from .statistics import _plogp, mutual_information_of

log = logging.getLogger(__name__)

EPS = 1e-9
PENALTY = 10.0
PENALTY_SCHEDULE = (10.0, 1e3, 1e5)
REPAIR_RADIUS = 1.0
FEASIBILITY_TOL = 1e-6
SLACK_DROP = 1e-12
# global mode tracks a flat ridge near the optimum; tighter tolerances cost
# ~10x the evaluations for gains below 1e-5 bits
POWELL_TOL = {"global": {"xtol": 1e-3, "ftol": 1e-8}, "product": {"xtol": 1e-4, "ftol": 1e-10}}
GLOBAL_BLOCK = 32
PRODUCT_BLOCK = 5


@dataclass(frozen=True)
class PovmParameterization:
    mode: str
    M: int
    raw: np.ndarray = None

    def __post_init__(self):
        if self.mode not in ("global", "product"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.M < 1:
            raise ValueError("M must be at least 1")

    @property
    def size(self):
        return self.M * (GLOBAL_BLOCK if self.mode == "global" else PRODUCT_BLOCK)


@dataclass(frozen=True)
class ProductDecode:
    """Result of :func:`decode_product`; ``povm`` is None when infeasible."""

    povm: Povm
    defect: float
    elements: tuple
    slack_added: bool = False

    @property
    def feasible(self):
        return self.povm is not None


@dataclass
class OptimizationResult:
    mode: str
    M: int
    povm: Povm
    mi: float
    raw: np.ndarray
    classification: PovmClass = None
    trace: list = field(default_factory=list)
    restart_values: list = field(default_factory=list)

    @property
    def feasible(self):
        return self.povm is not None

    def to_dict(self):
        return {
            "mode": self.mode,
            "M": self.M,
            "best_I_bits": None if self.mi is None else float(self.mi),
            "povm": None if self.povm is None else povm_to_dict(self.povm),
            "classification": None if self.classification is None else self.classification.value,
            "trace": [float(x) for x in self.trace],
        }


def sqrt_normalize(grams, eps=EPS):
    """Map positive seeds ``G_k`` to POVM elements summing to the identity.

    The ``ε S^{-1}`` left over by the regularization is spread evenly over
    the elements so completeness holds to rounding error.
    """
    grams = np.asarray(grams, dtype=complex)
    m, d, _ = grams.shape
    # the map is scale-invariant; fix the scale so eps keeps its meaning
    scale = np.trace(grams.sum(axis=0)).real / d
    if scale > 0:
        grams = grams / scale
    s = grams.sum(axis=0) + eps * np.eye(d)
    r, s_inv = inv_sqrt_psd(s)
    out = r @ grams @ r + (eps / m) * s_inv
    out = (out + np.conj(np.swapaxes(out, 1, 2))) / 2
    # second pass on a near-identity sum removes the rounding error of the first
    r2, _ = inv_sqrt_psd(out.sum(axis=0))
    out = r2 @ out @ r2
    return (out + np.conj(np.swapaxes(out, 1, 2))) / 2


def _seed_matrices(raw, dim):
    n = dim * dim
    blocks = np.asarray(raw, dtype=float).reshape(-1, 2 * n)
    return (blocks[:, :n] + 1j * blocks[:, n:]).reshape(-1, dim, dim)


def _grams(mats):
    return np.einsum("kji,kjl->kil", mats.conj(), mats)


def encode_seeds(mats):
    """Inverse of the seed layout: per matrix, real parts then imaginary parts."""
    mats = np.asarray(mats, dtype=complex)
    flat = mats.reshape(mats.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1).ravel()


def decode_global_elements(raw, dim=4):
    return sqrt_normalize(_grams(_seed_matrices(raw, dim)))


def decode_global(raw, labels=None):
    """Decode a raw vector of ``32 M`` reals into an ``M``-outcome two-qubit POVM."""
    return make_povm(decode_global_elements(raw), labels)


def _bloch_ket(theta, phi):
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def product_elements(raw):
    """Candidate elements ``|w_k| P_k ⊗ Q_k`` from ``5 M`` raw values."""
    b = np.asarray(raw, dtype=float).reshape(-1, PRODUCT_BLOCK)
    w = np.abs(b[:, 0])
    p = _bloch_ket(b[:, 1], b[:, 2])
    q = _bloch_ket(b[:, 3], b[:, 4])
    v = np.einsum("ik,jk->kij", p, q).reshape(-1, 4)
    return w[:, None, None] * np.einsum("ki,kj->kij", v, v.conj())


def encode_product(weights, first, second):
    """Raw vector for elements ``w_k |first_k><first_k| ⊗ |second_k><second_k|``."""

    def angles(v):
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        if abs(v[0]) > 1e-15:
            v = v * np.exp(-1j * np.angle(v[0]))
        theta = 2 * np.arctan2(abs(v[1]), abs(v[0]))
        return theta, float(np.angle(v[1])) if abs(v[1]) > 1e-15 else 0.0

    out = []
    for w, a, b in zip(weights, first, second):
        out.extend([w, *angles(a), *angles(b)])
    return np.array(out, dtype=float)


def _repair(elems, radius=REPAIR_RADIUS):
    """``(elements, defect, slack_added)``; defect 0 means feasible."""
    slack = np.eye(4) - elems.sum(axis=0)
    d0 = float(np.linalg.norm(slack))
    if d0 <= SLACK_DROP:
        return elems, d0, False
    if d0 <= radius and np.linalg.eigvalsh(slack)[0] >= -1e-10:
        return np.concatenate([elems, slack[None]]), 0.0, True
    return elems, d0, False


def decode_product(raw, labels=None, radius=REPAIR_RADIUS):
    """Decode product parameters, repairing an under-complete set with a slack element.

    The slack ``I - Σ`` is appended only if it is positive and its Frobenius
    norm is at most ``radius``.  Otherwise the set is infeasible and the
    returned ``defect`` is ``||Σ - I||_F``.
    """
    elems = product_elements(raw)
    m = elems.shape[0]
    out, d, slack = _repair(elems, radius)
    if d > min(FEASIBILITY_TOL, 1e-10):
        return ProductDecode(None, d, tuple(elems), False)
    if labels is None:
        labels = [f"P{k}" for k in range(m)]
    labels = list(labels) + (["slack"] if slack else [])
    return ProductDecode(make_povm(out, labels), d, tuple(out), slack)


def _mi_from_elements(states, priors, elems):
    q = np.einsum("ji,kil,jl->jk", states.conj(), elems, states).real
    p = np.clip(priors[:, None] * q, 0.0, None)
    total = p.sum()
    if total <= 0:
        return 0.0
    p = p / total
    return _plogp(p) - _plogp(p.sum(axis=0)) - _plogp(p.sum(axis=1))


def objective(raw, mode, states, priors):
    """Score of a raw point: mutual information if it decodes to a POVM,
    otherwise the information of the renormalized candidate minus ``PENALTY * defect``."""
    if mode == "global":
        return _mi_from_elements(states, priors, decode_global_elements(raw))
    elems = product_elements(raw)
    out, d, _ = _repair(elems)
    if d <= 1e-10:
        return _mi_from_elements(states, priors, out)
    return _mi_from_elements(states, priors, elems) - PENALTY * d


def _smooth_objective(raw, rho, states, priors):
    elems = product_elements(raw)
    d = elems.sum(axis=0) - np.eye(4)
    return _mi_from_elements(states, priors, elems) - rho * float(np.sum(np.abs(d) ** 2))


def shrink_to_subcomplete(raw):
    """Divide all product weights by the top eigenvalue of their sum, so ``Σ <= I``."""
    b = np.array(raw, dtype=float).reshape(-1, PRODUCT_BLOCK)
    top = np.linalg.eigvalsh(product_elements(raw).sum(axis=0))[-1]
    if top > 0:
        b[:, 0] = np.abs(b[:, 0]) / top
    return b.ravel()


def _initial_point(rng, mode, M):
    if mode == "global":
        return rng.normal(size=M * GLOBAL_BLOCK)
    b = np.empty((M, PRODUCT_BLOCK))
    b[:, 0] = rng.uniform(0.5, 1.0, size=M) * 4 / M
    b[:, [1, 3]] = rng.uniform(0, np.pi, size=(M, 2))
    b[:, [2, 4]] = rng.uniform(0, 2 * np.pi, size=(M, 2))
    return b.ravel()


def _local_search(args):
    """One restart.  Returns ``(raw, score, history)``.

    Global mode runs Powell on :func:`objective` directly.  In product mode the
    optimum sits where ``Σ = I`` with all four eigenvalue constraints active,
    which makes the slack/penalty score non-smooth there; Powell is instead run
    on a smooth quadratic-penalty objective with increasing weight, and the
    result is shrunk to be under-complete so the slack repair applies.
    """
    mode, M, iters, states, priors, x0 = args
    history = []
    best = [-np.inf]

    def record(x):
        if mode == "product":
            x = shrink_to_subcomplete(x)
        best[0] = max(best[0], objective(x, mode, states, priors))
        history.append(best[0])

    opts = {"maxiter": iters, **POWELL_TOL[mode]}
    x = np.asarray(x0, dtype=float)
    if mode == "global":
        res = minimize(lambda y: -objective(y, mode, states, priors), x, method="Powell",
                       callback=record, options=opts)
        x = res.x
    else:
        for rho in PENALTY_SCHEDULE:
            res = minimize(_smooth_objective_neg, x, args=(rho, states, priors), method="Powell",
                           callback=record, options=opts)
            x = res.x
        x = shrink_to_subcomplete(x)
    record(x)
    return x, objective(x, mode, states, priors), history


def _smooth_objective_neg(raw, rho, states, priors):
    return -_smooth_objective(raw, rho, states, priors)


def _decode(mode, raw):
    if mode == "global":
        return decode_global(raw), 0.0
    dec = decode_product(raw)
    return dec.povm, dec.defect


def maximize_mi(ensemble, param, restarts=20, iters=2000, seed=0, workers=1):
    """Best-of-``restarts`` Powell search over the chosen parameterization.

    Each restart draws its start from its own child of ``np.random.SeedSequence(seed)``,
    so results do not depend on ``workers``.  If ``param.raw`` is given it is used
    as the start of the first restart.
    """
    if restarts < 1 or iters < 1:
        raise ValueError("restarts and iters must be at least 1")
    if ensemble.dim != 4:
        raise ValueError("POVM search is implemented for two-qubit ensembles")
    states = np.array(ensemble.states)
    priors = np.asarray(ensemble.priors)
    children = np.random.SeedSequence(seed).spawn(restarts)
    starts = [_initial_point(np.random.default_rng(c), param.mode, param.M) for c in children]
    if param.raw is not None:
        starts[0] = np.asarray(param.raw, dtype=float)
    jobs = [(param.mode, param.M, iters, states, priors, x0) for x0 in starts]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_local_search, jobs))
    else:
        results = [_local_search(j) for j in jobs]

    trace, running = [], -np.inf
    best = None
    values = []
    for i, (x, _, history) in enumerate(results):
        povm, d = _decode(param.mode, x)
        value = None
        if povm is not None:
            value = mutual_information_of(ensemble, povm)
        values.append(value)
        log.debug("restart %d: I=%s defect=%.3e", i, value, d)
        for h in history:
            running = max(running, h)
            trace.append(running)
        if value is None:
            continue
        key = (value, [-t for t in x])
        if best is None or key > best[0]:
            best = (key, povm, x, value)

    if best is None:
        return OptimizationResult(param.mode, param.M, None, None, None, None, trace, values)
    _, povm, x, value = best
    return OptimizationResult(
        param.mode, param.M, povm, value, np.asarray(x), classify_povm(povm), trace, values
    )
