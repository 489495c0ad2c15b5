"""Double-trine state discrimination: measurements, mutual information, and POVM search."""

from .ensembles import Ensemble, double_trine, make_ensemble, trine, trine_states
from .measurements import (
    Povm,
    PovmClass,
    classify_povm,
    concurrence,
    concurrence_signed,
    entangled_basis_povm,
    make_povm,
    nine_outcome_product_povm,
    single_qubit_trine_povm,
    six_outcome_unentangled_povm,
)
from .statistics import mutual_information, outcome_probabilities, shannon_entropy

__all__ = [
    "Ensemble",
    "Povm",
    "PovmClass",
    "classify_povm",
    "concurrence",
    "concurrence_signed",
    "double_trine",
    "entangled_basis_povm",
    "make_ensemble",
    "make_povm",
    "mutual_information",
    "nine_outcome_product_povm",
    "outcome_probabilities",
    "shannon_entropy",
    "single_qubit_trine_povm",
    "six_outcome_unentangled_povm",
    "trine",
    "trine_states",
]
