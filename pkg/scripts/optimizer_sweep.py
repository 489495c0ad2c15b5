"""Distribution of restart values for the POVM optimizer.

Runs the optimizer with a given number of restarts and reports how often a
restart lands within ``--tol`` of the best value found.
"""

import argparse
import time

import numpy as np

from doubletrine import double_trine
from doubletrine.optimizer import PovmParameterization, maximize_mi


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", choices=["global", "product"], default="global")
    ap.add_argument("-M", type=int, default=None)
    ap.add_argument("--restarts", type=int, default=10)
    ap.add_argument("--iters", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--tol", type=float, default=1e-4)
    args = ap.parse_args()
    m = args.M or (4 if args.mode == "global" else 6)

    t = time.perf_counter()
    res = maximize_mi(double_trine(), PovmParameterization(args.mode, m), restarts=args.restarts,
                      iters=args.iters, seed=args.seed, workers=args.workers)
    elapsed = time.perf_counter() - t

    vals = np.array(res.restart_values, dtype=float)
    hits = int(np.sum(vals >= res.mi - args.tol))
    print(f"mode={args.mode} M={m} best I = {res.mi:.9f} ({res.classification})")
    print(f"{hits}/{len(vals)} restarts within {args.tol:g} of best, {elapsed / len(vals):.1f} s/restart")
    for i, v in enumerate(vals):
        print(f"  restart {i:2d}: {v:.9f}")


if __name__ == "__main__":
    main()
