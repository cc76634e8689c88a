"""Divergence exponent of the burst-only memory map as a function of alpha.

    python scripts/divergence_vs_alpha.py --b 5.8 --steps 1500 --out divergence.csv
"""

import argparse
import csv
import sys

import numpy as np

from memkick.analysis import DivergenceError, divergence_exponent
from memkick.econ import GrowthParams, LinearPrice, normalize_memory
from memkick.maps import BurstGrowth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha-from", type=float, default=0.5)
    ap.add_argument("--alpha-to", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--b", type=float, default=5.8)
    ap.add_argument("--z0", type=float, default=0.3)
    ap.add_argument("--steps", type=int, default=1500)
    ap.add_argument("--transient", type=int, default=200)
    ap.add_argument("--out")
    args = ap.parse_args()

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["alpha", "lambda_alpha", "exponent"])
    f = LinearPrice(1.0, args.b)
    for alpha in np.linspace(args.alpha_from, args.alpha_to, args.points):
        g = GrowthParams(0.5, 1.0, 1.0, float(alpha))
        norm = normalize_memory(g, f)
        try:
            lyap = divergence_exponent(
                BurstGrowth(g, f), [args.z0 / norm.scale], args.steps, n_transient=args.transient, engine="incremental"
            )
        except DivergenceError:
            lyap = float("nan")
        w.writerow([f"{alpha:.17g}", f"{norm.lam:.17g}", f"{lyap:.17g}"])
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
