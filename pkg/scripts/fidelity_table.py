"""Write a t,fidelity CSV for a chain stored as JSON."""

import argparse
import csv
import math
import sys

from chainforge.cli import emit_fidelity_table
from chainforge.io import load_chain


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("chain")
    ap.add_argument("--from", dest="l", type=int, default=0)
    ap.add_argument("--to", dest="m", type=int, required=True)
    ap.add_argument("--t-max", type=float, default=math.pi)
    ap.add_argument("--steps", type=int, default=101)
    args = ap.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["t", "fidelity"])
    for t, f in emit_fidelity_table(load_chain(args.chain), args.l, args.m, args.t_max, args.steps):
        w.writerow([f"{t:.12g}", f"{f:.12g}"])


if __name__ == "__main__":
    main()
