"""How often images are already fixed points, and how often sealing needs no adjustment.

Reports, per r, the fraction of random 8x8 images that the map leaves
unchanged, and the fraction of seals that converge without clamping any
pixel into range.
"""
import argparse

import numpy as np

from gcdauth import SecretKey, build_filter, gcd_apply, seal
from gcdauth.errors import GCDAuthError


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--r", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.5, 0.7, 0.9])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    shape = (args.size, args.size)
    print(f"{'r':>5} {'fixed':>8} {'no_adjust':>9} {'failed':>6}")
    for r in args.r:
        key = SecretKey(round(r, 6))
        filt = build_filter(key, *shape)
        rng = np.random.default_rng(args.seed)
        fixed = clean = failed = 0
        for _ in range(args.trials):
            img = rng.integers(0, 256, shape)
            fixed += np.array_equal(gcd_apply(img, filt), img)
            try:
                clean += seal(img, filt).adjustments == 0
            except GCDAuthError:
                failed += 1
        print(f"{r:5.2f} {fixed / args.trials:8.4f} {clean / args.trials:9.4f} {failed:6d}")


if __name__ == "__main__":
    main()
