"""Print the mutual information of every reference measurement on the double trine."""

import argparse

import numpy as np

from doubletrine import double_trine, trine
from doubletrine.measurements import (
    entangled_basis_povm,
    nine_outcome_product_povm,
    single_qubit_trine_povm,
    six_outcome_unentangled_povm,
)
from doubletrine.statistics import mutual_information, outcome_probabilities


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    rows = [
        ("single-qubit trine (one copy)", trine(), single_qubit_trine_povm()),
        ("trine on each qubit (9 outcomes)", double_trine(), nine_outcome_product_povm()),
        ("six-outcome unentangled", double_trine(), six_outcome_unentangled_povm()),
        ("entangled basis", double_trine(), entangled_basis_povm()),
    ]
    for name, ens, povm in rows:
        print(f"{name:36s} I = {mutual_information(outcome_probabilities(ens, povm)):.9f} bits")
    print(f"{'upper bound log2 3':36s} I = {np.log2(3):.9f} bits")


if __name__ == "__main__":
    main()
