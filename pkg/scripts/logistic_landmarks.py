"""Locate the period-doubling landmarks of the standard logistic map.

    python scripts/logistic_landmarks.py --grid 801 --transient 20000 --out landmarks.csv
"""

import argparse
import math
import time

from memkick.analysis import ScanConfig, bifurcation_scan, chaos_onset, divergence_exponent, period_onset
from memkick.maps import StandardLogistic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=2.9)
    ap.add_argument("--hi", type=float, default=3.7)
    ap.add_argument("--grid", type=int, default=801)
    ap.add_argument("--transient", type=int, default=20_000)
    ap.add_argument("--sample", type=int, default=128)
    ap.add_argument("--z0", type=float, default=0.3)
    ap.add_argument("--out", help="optional CSV of the full scan")
    args = ap.parse_args()

    t0 = time.perf_counter()
    cfg = ScanConfig("lambda", args.lo, args.hi, args.grid, args.transient, args.sample, (args.z0,))
    data = bifurcation_scan(cfg, StandardLogistic(3.0))
    for period in (2, 4, 8, 16):
        print(f"period-{period} onset: {period_onset(data, period)}")
    print(f"chaos onset:      {chaos_onset(data)}")
    lyap = divergence_exponent(StandardLogistic(4.0), [args.z0], 100_000)
    print(f"divergence exponent at lambda=4: {lyap:.6f} (ln 2 = {math.log(2):.6f})")
    print(f"elapsed: {time.perf_counter() - t0:.2f} s")
    if args.out:
        data.to_csv(args.out)


if __name__ == "__main__":
    main()
