"""Construct a cospectral chain for every feasible position up to a size."""

import argparse
import itertools

from chainforge.cospec import construct_cospectral, is_cospectral, position_feasible


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=8)
    args = ap.parse_args()
    for d in range(1, args.max_d + 1):
        row = []
        for l, m in itertools.combinations(range(d + 1), 2):
            if not position_feasible(l, m, d):
                continue
            cert = is_cospectral(construct_cospectral(l, m, d), l, m)
            row.append(f"({l},{m}):{cert.mode if cert else 'FAIL'}")
        print(f"d={d}", " ".join(row))


if __name__ == "__main__":
    main()
