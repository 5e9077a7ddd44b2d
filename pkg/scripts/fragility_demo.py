"""Detection rate of every attack in the built-in fragility suite."""
import argparse
from collections import defaultdict

from gcdauth import generate_key, run_experiment, seal
from gcdauth.attacks import builtin_suite
from _images import corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--images", choices=["natural", "random"], default="natural")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--mods", type=int, default=2)
    args = p.parse_args()

    shape = (args.size, args.size)
    detected, seen = defaultdict(int), defaultdict(int)
    for i, img in enumerate(corpus(args.images, args.n, shape)):
        key = generate_key(*shape, args.mods, i)
        sealed = seal(img, key).fixed_point
        for rec in run_experiment(sealed, key, builtin_suite("fragility", shape, key, seed=i)):
            seen[rec.kind] += 1
            detected[rec.kind] += rec.detected
    for kind in seen:
        print(f"{kind.name:20s} detected {detected[kind]:3d}/{seen[kind]}")


if __name__ == "__main__":
    main()
