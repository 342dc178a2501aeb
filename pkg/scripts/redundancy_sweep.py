"""Size of CSC, VCSC and IVCSC against mean matrix redundancy.

Generates one 1e6 x 25 float32 matrix at 90% sparsity, redraws its values
over a range of pool sizes and writes the sizes to CSV. Also prints the MMR
at which each compressed format first becomes smaller than CSC.
"""

import argparse
import csv
import sys

from redsparse import FLOAT32, Dims
from redsparse.analytics import SWEEP_COLUMNS, crossover_mmr, size_sweep, sweep_row
from redsparse.matgen import GenSpec

DEFAULT_UNIQUE = "1,2,5,10,100,1000,10000,20000,30000,40000,50000,55000,60000,65000,70000,80000,90000," \
                 "100000,110000,125000,150000,200000,500000,1000000"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=1_000_000)
    ap.add_argument("--cols", type=int, default=25)
    ap.add_argument("--sparsity", type=float, default=0.9)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--position-seed", type=int, default=7)
    ap.add_argument("--unique-list", default=DEFAULT_UNIQUE)
    ap.add_argument("--out", default="sweep.csv")
    args = ap.parse_args()

    spec = GenSpec(Dims(args.rows, args.cols), FLOAT32, args.sparsity, seed=args.seed, position_seed=args.position_seed)
    points = size_sweep(spec, [int(u) for u in args.unique_list.split(",")])
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        w.writerows(sweep_row(p) for p in points)

    mmrs = [p.mmr for p in points]
    csc = [p.csc_actual for p in points]
    for fmt in ("vcsc", "ivcsc"):
        x = crossover_mmr(mmrs, [getattr(p, f"{fmt}_actual") for p in points], csc)
        print(f"{fmt} smaller than csc above MMR {'n/a' if x is None else f'{x:.4f}'}")
    print(f"wrote {len(points)} rows to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
