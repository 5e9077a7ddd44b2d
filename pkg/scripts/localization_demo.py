"""Recall and false-positive rate of the tamper map for local attacks.

With --out the tamper maps of the first image are written as PGM files.
"""
import argparse
from collections import defaultdict
from pathlib import Path

import numpy as np

from gcdauth import apply_attack, generate_key, localization_score, parse_key, seal, verify
from gcdauth.attacks import builtin_suite
from gcdauth.imageio import render_tamper_map, write_image
from _images import corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--images", choices=["natural", "random"], default="natural")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--mods", type=int, default=2)
    p.add_argument("--key", help="fixed key text, e.g. '0.300000' (default: generated per image)")
    p.add_argument("--radius", type=float, default=2)
    p.add_argument("--out", type=Path)
    args = p.parse_args()

    shape = (args.size, args.size)
    imgs = corpus(args.images, args.n, shape)
    stats = defaultdict(list)
    for i, img in enumerate(imgs):
        key = parse_key(args.key) if args.key else generate_key(*shape, args.mods, i)
        sealed = seal(img, key).fixed_point
        donor = seal(imgs[(i + 1) % len(imgs)], key).fixed_point
        for j, spec in enumerate(builtin_suite("localization", shape, key, seed=i, donor=donor)):
            out, truth = apply_attack(sealed, spec)
            report = verify(out, key)
            recall, fpr = localization_score(truth, report, args.radius)
            stats[spec.kind].append((report.suspicious_count > 0, recall, fpr, len(report.hollow_regions)))
            if args.out and i == 0:
                args.out.mkdir(parents=True, exist_ok=True)
                write_image(out, args.out / f"{j:02d}_{spec.kind.name.lower()}.pgm")
                render_tamper_map(report, args.out / f"{j:02d}_{spec.kind.name.lower()}_map.pgm")
    print(f"{'kind':20s} {'detected':>8} {'recall':>7} {'fpr':>7} {'hollow':>7}")
    for kind, rows in stats.items():
        d, recall, fpr, hollow = np.mean(rows, axis=0)
        print(f"{kind.name:20s} {d:8.2f} {recall:7.3f} {fpr:7.3f} {hollow:7.2f}")


if __name__ == "__main__":
    main()
