"""Bifurcation scans of the burst-only memory map over b, for several orders alpha.

Each alpha gets its own CSV (param,sample_index,value,escaped) with values in
logistic units Z = scale * Y, so the columns line up with lambda(alpha).
Runs are O(n^2) in the number of kicks; keep --transient modest.

    python scripts/memory_bifurcation.py --alphas 0.6,0.8,1.0 --grid 120 --workers 4 --outdir scans
"""

import argparse
import os
import time

import numpy as np

from memkick.analysis import ScanConfig, bifurcation_scan
from memkick.econ import GrowthParams, LinearPrice, normalize_memory
from memkick.maps import BurstGrowth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", default="0.6,0.8,1.0")
    ap.add_argument("--b-from", type=float, default=2.0)
    ap.add_argument("--b-to", type=float, default=6.0)
    ap.add_argument("--grid", type=int, default=120)
    ap.add_argument("--transient", type=int, default=400)
    ap.add_argument("--sample", type=int, default=64)
    ap.add_argument("--z0", type=float, default=0.3)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--outdir", default="scans")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    for alpha in (float(tok) for tok in args.alphas.split(",")):
        t0 = time.perf_counter()
        g = GrowthParams(0.5, 1.0, 1.0, alpha)
        f = LinearPrice(1.0, args.b_from)
        scale = normalize_memory(g, f).scale
        # all grid points share one Y0 (the Z0 of the first grid point)
        cfg = ScanConfig("b", args.b_from, args.b_to, args.grid, args.transient, args.sample, (args.z0 / scale,))
        data = bifurcation_scan(cfg, BurstGrowth(g, f), workers=args.workers, engine="incremental")
        scales = np.array([normalize_memory(g, LinearPrice(1.0, b)).scale for b in data.params])
        data = type(data)(data.param_name, data.params, data.values * scales[:, None], data.escaped)
        path = os.path.join(args.outdir, f"memory_bifurcation_alpha{alpha:g}.csv")
        data.to_csv(path)
        periods = data.periods(1e-6)
        n_aper = sum(p is None and not e for p, e in zip(periods, data.escaped))
        print(f"alpha={alpha:g}: {n_aper} aperiodic, {int(data.escaped.sum())} escaped of {args.grid}; "
              f"{time.perf_counter() - t0:.1f} s -> {path}")


if __name__ == "__main__":
    main()
