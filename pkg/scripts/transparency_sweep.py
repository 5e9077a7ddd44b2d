"""Sealing cost and distortion as a function of the key parameter r."""
import argparse

import numpy as np

from gcdauth import NonConvergenceError, SecretKey, generate_key, seal
from _images import corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--images", choices=["natural", "random"], default="natural")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--mods", type=int, default=2)
    p.add_argument("--r", type=float, nargs="+", default=[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    args = p.parse_args()

    shape = (args.size, args.size)
    imgs = corpus(args.images, args.n, shape)
    print(f"{'r':>5} {'iter_mean':>9} {'iter_max':>8} {'adj_mean':>8} {'psnr_mean':>9} {'psnr_min':>8} {'stalled':>7}")
    for r in args.r:
        iters, adjs, psnrs, stalled = [], [], [], 0
        for i, img in enumerate(imgs):
            key = SecretKey(round(r, 6), generate_key(*shape, args.mods, i).mods)
            try:
                res = seal(img, key)
            except NonConvergenceError:
                stalled += 1
                continue
            iters.append(res.iterations)
            adjs.append(res.adjustments)
            psnrs.append(res.psnr_db)
        if not iters:
            print(f"{r:5.2f} {'-':>9} {'-':>8} {'-':>8} {'-':>9} {'-':>8} {stalled:7d}")
            continue
        print(f"{r:5.2f} {np.mean(iters):9.2f} {max(iters):8d} {np.mean(adjs):8.2f} "
              f"{np.mean(psnrs):9.2f} {min(psnrs):8.2f} {stalled:7d}")


if __name__ == "__main__":
    main()
