"""Scan integer spectra in [-bound, bound] for PST at the first vertex past the middle."""

import argparse
import time

from chainforge.pst import scan_count, scan_no_pst_half


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--bound", type=int, default=6)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for d in args.d:
        t0 = time.perf_counter()
        found = scan_no_pst_half(d, args.bound, workers=args.workers)
        dt = time.perf_counter() - t0
        print(f"d={d} bound={args.bound} examined={scan_count(d, args.bound)} found={len(found)} ({dt:.2f}s)")
        for spec in found:
            print("  ", list(spec))


if __name__ == "__main__":
    main()
