"""Acceptance rate of a sealed image under keys close to the sealing key."""
import argparse

from gcdauth import Modification, SecretKey, build_filter, generate_key, seal, verify
from _images import corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--images", choices=["natural", "random"], default="random")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--mods", type=int, default=2)
    p.add_argument("--dsigma", type=float, nargs="+", default=[0.001, 0.002, 0.005, 0.01, 0.02])
    args = p.parse_args()

    shape = (args.size, args.size)
    M, N = shape
    sealed = []
    for i, img in enumerate(corpus(args.images, args.n, shape)):
        key = generate_key(M, N, args.mods, i)
        sealed.append((seal(img, key).fixed_point, key))

    for ds in args.dsigma:
        accepted = 0
        for J, key in sealed:
            # r step that moves the rounded sigma' by ds
            other = SecretKey(round(key.r + ds / (M + N), 6), key.mods)
            if build_filter(other, M, N).sigma_prime == build_filter(key, M, N).sigma_prime:
                other = SecretKey(round(key.r + 2 * ds / (M + N), 6), key.mods)
            accepted += verify(J, other, hollow=None).authentic
        print(f"dsigma'={ds:<6g} accepted {accepted}/{len(sealed)}")

    if args.mods:
        accepted = 0
        for J, key in sealed:
            m = key.mods[0]
            changed = Modification(m.row, m.col, round(m.value % 1 + 0.1, 1))
            accepted += verify(J, SecretKey(key.r, (changed,) + key.mods[1:]), hollow=None).authentic
        print(f"one mod value changed  accepted {accepted}/{len(sealed)}")


if __name__ == "__main__":
    main()
