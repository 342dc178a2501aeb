"""Timings of the five operations over a redundancy sweep, written as CSV.

Absolute numbers depend on the machine; compare formats within one run.
"""

import argparse
import sys

from redsparse import FLOAT32, Dims
from redsparse.bench import FORMATS, OPS, run_benchmark, write_csv
from redsparse.matgen import GenSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=100_000)
    ap.add_argument("--cols", type=int, default=25)
    ap.add_argument("--sparsity", type=float, default=0.9)
    ap.add_argument("--unique-list", default="1,10,100,1000,10000")
    ap.add_argument("--ops", default=",".join(OPS))
    ap.add_argument("--formats", default=",".join(FORMATS))
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    spec = GenSpec(Dims(args.rows, args.cols), FLOAT32, args.sparsity, seed=1, position_seed=1)
    records = run_benchmark(spec, [int(u) for u in args.unique_list.split(",")],
                            args.ops.split(","), args.formats.split(","))
    if args.out == "-":
        write_csv(records, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)


if __name__ == "__main__":
    main()
