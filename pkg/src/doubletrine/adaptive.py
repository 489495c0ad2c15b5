"""Exact evaluation of adaptive local-measurement protocols on product states.

A protocol is a finite tree.  Each internal node applies a local instrument
(a list of Kraus operators) to one qubit, and each outcome leads either to
another node or to a leaf label, the protocol's classical output.  Local
operations keep a product state in product form, so each branch is tracked
as a pair of single-qubit states and every leaf probability is computed
exactly rather than sampled.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import EntangledStateError, ProtocolError
from .linalg import sqrt_psd
from .measurements import concurrence, operator_from_json, operator_to_json
from .optimizer import _seed_matrices, _grams, sqrt_normalize
from .statistics import _plogp, make_joint, mutual_information

KRAUS_TOL = 1e-10
MAX_DEPTH = 6


@dataclass(frozen=True)
class LocalInstrument:
    """Kraus operators acting on qubit 0 (first) or 1 (second)."""

    qubit: int
    kraus: tuple

    def __post_init__(self):
        if self.qubit not in (0, 1):
            raise ProtocolError(f"qubit must be 0 or 1, got {self.qubit!r}")
        if not self.kraus:
            raise ProtocolError("instrument needs at least one Kraus operator")
        ks = [np.asarray(k, dtype=complex) for k in self.kraus]
        if any(k.shape != (2, 2) for k in ks):
            raise ProtocolError("Kraus operators must be 2x2")
        total = sum(k.conj().T @ k for k in ks)
        defect = float(np.linalg.norm(total - np.eye(2)))
        if defect > KRAUS_TOL:
            raise ProtocolError(f"Kraus completeness violated: ||Σ K†K - I||_F = {defect:.3e}")
        object.__setattr__(self, "kraus", tuple(ks))


@dataclass(frozen=True)
class ProtocolNode:
    instrument: LocalInstrument
    children: tuple

    def __post_init__(self):
        if len(self.children) != len(self.instrument.kraus):
            raise ProtocolError(
                f"{len(self.instrument.kraus)} Kraus operators but {len(self.children)} children"
            )
        for c in self.children:
            if not isinstance(c, (ProtocolNode, str)):
                raise ProtocolError(f"child must be a node or a leaf label, got {type(c).__name__}")
        object.__setattr__(self, "children", tuple(self.children))


def instrument_from_povm(qubit, elements):
    """Instrument whose Kraus operators are the positive square roots ``√Π_k``."""
    return LocalInstrument(qubit, tuple(sqrt_psd(e) for e in elements))


def depth(node):
    if isinstance(node, str):
        return 0
    return 1 + max(depth(c) for c in node.children)


def leaf_labels(node):
    """Distinct leaf labels in depth-first order."""
    seen = []

    def walk(n):
        if isinstance(n, str):
            if n not in seen:
                seen.append(n)
            return
        for c in n.children:
            walk(c)

    walk(node)
    return seen


def product_factors(v, tol=1e-9):
    """Split a two-qubit product state into its single-qubit factors."""
    v = np.asarray(v, dtype=complex)
    if concurrence(v) > tol:
        raise EntangledStateError(f"state is entangled (concurrence {concurrence(v):.3e})")
    u, s, vh = np.linalg.svd(v.reshape(2, 2))
    return u[:, 0] * s[0], vh[0]


def leaf_distribution(first, second, root):
    """Probability of each leaf label for the product state ``first ⊗ second``."""
    out = {}

    def walk(node, pair, prob):
        if isinstance(node, str):
            out[node] = out.get(node, 0.0) + prob
            return
        q = node.instrument.qubit
        for k, child in zip(node.instrument.kraus, node.children):
            phi = k @ pair[q]
            w = float(np.vdot(phi, phi).real)
            if w <= 0.0:
                continue
            nxt = list(pair)
            nxt[q] = phi / np.sqrt(w)
            walk(child, nxt, prob * w)

    walk(root, [np.asarray(first), np.asarray(second)], 1.0)
    return out


def run_protocol(ensemble, root, max_depth=MAX_DEPTH):
    """Joint distribution of (state, leaf label) under a local protocol.

    Raises
    ------
    EntangledStateError
        If an ensemble state is not a product state.
    ProtocolError
        If the tree is deeper than ``max_depth`` rounds.
    """
    if ensemble.dim != 4:
        raise ProtocolError("protocols act on two-qubit ensembles")
    if depth(root) > max_depth:
        raise ProtocolError(f"protocol depth {depth(root)} exceeds limit {max_depth}")
    labels = leaf_labels(root)
    p = np.zeros((len(ensemble), len(labels)))
    for j, (state, prior) in enumerate(zip(ensemble.states, ensemble.priors)):
        dist = leaf_distribution(*product_factors(state), root)
        for k, lab in enumerate(labels):
            p[j, k] = prior * dist.get(lab, 0.0)
    return make_joint(p, labels)


def protocol_to_dict(node):
    if isinstance(node, str):
        return node
    return {
        "qubit": node.instrument.qubit,
        "kraus": [operator_to_json(k) for k in node.instrument.kraus],
        "children": [protocol_to_dict(c) for c in node.children],
    }


def protocol_from_dict(d):
    if isinstance(d, str):
        return d
    try:
        inst = LocalInstrument(int(d["qubit"]), tuple(operator_from_json(k) for k in d["kraus"]))
        children = [protocol_from_dict(c) for c in d["children"]]
    except (KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed protocol document: {exc!r}") from exc
    return ProtocolNode(inst, tuple(children))


def one_way_protocol(first, seconds, first_qubit=0):
    """Measure ``first_qubit`` with POVM ``first``; on outcome ``k`` measure the
    other qubit with ``seconds[k]``.  Leaves are labelled ``"k,l"``."""
    other = 1 - first_qubit
    children = []
    for k, second in enumerate(seconds):
        leaves = tuple(f"{k},{l}" for l in range(len(second)))
        children.append(ProtocolNode(instrument_from_povm(other, second), leaves))
    return ProtocolNode(instrument_from_povm(first_qubit, first), tuple(children))


def _decode_one_way(raw, n1, n2):
    mats = _seed_matrices(raw, 2)
    first = sqrt_normalize(_grams(mats[:n1]))
    seconds = np.array([sqrt_normalize(_grams(mats[n1 + k * n2:n1 + (k + 1) * n2])) for k in range(n1)])
    return first, seconds


def _one_way_mi(raw, n1, n2, a, b, priors):
    first, seconds = _decode_one_way(raw, n1, n2)
    # p[j, k, l] = <a_j|Π_k|a_j> <b_j|Λ^k_l|b_j>
    p1 = np.einsum("ji,kil,jl->jk", a.conj(), first, a).real
    p2 = np.einsum("ji,kmil,jl->jkm", b.conj(), seconds, b).real
    p = np.clip(priors[:, None, None] * p1[:, :, None] * p2, 0.0, None).reshape(len(priors), -1)
    return _plogp(p) - _plogp(p.sum(axis=0)) - _plogp(p.sum(axis=1))


def optimize_one_way(ensemble, outcomes_first=3, outcomes_second=3, budget=2000, seed=0, restarts=8):
    """Search one-way protocols (first qubit, then second conditioned on the result).

    POVMs on each qubit are decoded from complex 2x2 seeds by square-root
    normalization and realized with ``√Π`` Kraus operators.  Returns the best
    protocol and its mutual information, re-evaluated with :func:`run_protocol`.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    factors = [product_factors(s) for s in ensemble.states]
    a = np.array([f[0] / np.linalg.norm(f[0]) for f in factors])
    b = np.array([f[1] / np.linalg.norm(f[1]) for f in factors])
    priors = np.asarray(ensemble.priors)
    n1, n2 = outcomes_first, outcomes_second
    size = 8 * (n1 + n1 * n2)
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        x0 = np.random.default_rng(child).normal(size=size)
        res = minimize(
            lambda x: -_one_way_mi(x, n1, n2, a, b, priors), x0, method="Powell",
            options={"maxiter": budget, "xtol": 1e-4, "ftol": 1e-10},
        )
        if best is None or -res.fun > best[0]:
            best = (-res.fun, res.x)
    first, seconds = _decode_one_way(best[1], n1, n2)
    protocol = one_way_protocol(first, seconds)
    return protocol, mutual_information(run_protocol(ensemble, protocol))
