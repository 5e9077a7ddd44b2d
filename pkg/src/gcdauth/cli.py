"""Command-line interface: keygen, seal, verify, attack, experiment.

Exit codes: 0 success or authentic, 1 inauthentic, 2 usage or input-format
error, 3 processing error.
"""
import argparse
import sys

from . import attacks
from .authenticator import seal, verify
from .errors import (
    CapacityError,
    GCDAuthError,
    ImageFormatError,
    KeyFormatError,
    ParameterError,
    PixelRangeError,
    RegionError,
)
from .imageio import read_image, render_tamper_map, write_image
from .keying import generate_key, key_space_bits, parse_key, serialize_key

EXIT_OK, EXIT_INAUTHENTIC, EXIT_USAGE, EXIT_PROCESSING = 0, 1, 2, 3
USAGE_ERRORS = (
    CapacityError,
    ImageFormatError,
    KeyFormatError,
    ParameterError,
    PixelRangeError,
    RegionError,
    OSError,
)

SPEC_HELP = """\
attack spec grammar: KIND[:name=value,...]
  KIND is one of: {kinds}
  row,col,h,w  region (0-based top-left corner, height, width); defaults to a
               centred block a quarter of each side
  seed         RNG seed (overrides --seed)
  other names are attack parameters, for example
    SALT_PEPPER_LOCAL:row=10,col=10,h=40,w=40,density=0.05
    COVER_CONSTANT:row=8,col=8,h=16,w=16,value=128
    CROP_REPLACE:row=0,col=0,h=16,w=16,source=noise   (source: noise|value|donor)
    COLLAGE:row=8,col=8,h=16,w=16,donor=other_sealed.pgm
    REWRITE_OTHER_KEY:r=0.41,original=original.pgm
    SCALE:ratio=0.99   QUANT_NOISE:quality=95   ROTATE90:k=1
""".format(kinds=", ".join(k.name for k in attacks.AttackKind))

IMAGE_PARAMS = ("donor", "original")


class UsageError(Exception):
    pass


def _read_key(path):
    with open(path, encoding="utf-8") as fh:
        return parse_key(fh.read())


def _write_lines(path, lines):
    text = "".join(f"{line}\n" for line in lines)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_keygen(args):
    key = generate_key(args.height, args.width, args.mods, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_key(key) + "\n")
    print(f"key_bits={key_space_bits(args.height, args.width, args.mods):.2f}")
    return EXIT_OK


def cmd_seal(args):
    img = read_image(args.input)
    key = _read_key(args.key)
    res = seal(img, key, max_iterations=args.max_iter)
    write_image(res.fixed_point, args.out)
    lines = [
        f"iterations={res.iterations}",
        f"adjustments={res.adjustments}",
        f"adjust_strength={res.final_adjust_strength}",
        f"psnr_db={res.psnr_db:.4f}",
    ]
    _write_lines(args.report or "-", lines)
    return EXIT_OK


def cmd_verify(args):
    img = read_image(args.input)
    key = _read_key(args.key)
    report = verify(img, key)
    if args.map:
        render_tamper_map(report, args.map)
    lines = [f"authentic={int(report.authentic)}", f"suspicious_count={report.suspicious_count}"]
    lines += [
        f"hollow_region row={r.row} col={r.col} h={r.height} w={r.width}"
        for r in report.hollow_regions
    ]
    _write_lines(args.report or "-", lines)
    return EXIT_OK if report.authentic else EXIT_INAUTHENTIC


def _load_image_params(spec):
    for name in IMAGE_PARAMS:
        if isinstance(spec.params.get(name), str):
            spec.params[name] = read_image(spec.params[name])


def cmd_attack(args):
    img = read_image(args.input)
    spec = attacks.parse_attack_spec(args.spec)
    if "seed=" not in args.spec:
        spec.seed = args.seed
    _load_image_params(spec)
    if spec.kind is attacks.AttackKind.REWRITE_OTHER_KEY and not {"r", "other_key"} & set(spec.params):
        if not args.key:
            raise UsageError("REWRITE_OTHER_KEY needs r=..., other_key=... or --key")
        key = _read_key(args.key)
        spec.params["r"] = attacks.neighbour_r(key.r)
    out, truth = attacks.apply_attack(img, spec)
    write_image(out, args.out)
    if args.truth:
        render_tamper_map(truth, args.truth)
    return EXIT_OK


def _read_suite(path, seed):
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError(f"suite file {path} has no attack specs")
    specs = []
    for ln in lines:
        spec = attacks.parse_attack_spec(ln)
        if "seed=" not in ln:
            spec.seed = seed
        _load_image_params(spec)
        specs.append(spec)
    return specs


def cmd_experiment(args):
    img = read_image(args.input)
    key = _read_key(args.key)
    donor = read_image(args.donor) if args.donor else None
    if args.suite in ("fragility", "localization"):
        specs = attacks.builtin_suite(args.suite, img.shape, key, seed=args.seed, donor=donor)
    else:
        specs = _read_suite(args.suite, args.seed)
    records = attacks.run_experiment(img, key, specs)
    _write_lines(args.out, [rec.to_line() for rec in records])
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="gcdauth",
        description="Fixed-point image authentication with keyed Gaussian filters.",
        epilog="exit codes: 0 ok/authentic, 1 inauthentic, 2 usage error, 3 processing error",
    )
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("keygen", help="generate a random secret key")
    k.add_argument("--width", type=int, required=True)
    k.add_argument("--height", type=int, required=True)
    k.add_argument("--mods", type=int, default=2, help="number of modified filter points")
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--out", required=True, help="key file to write")
    k.set_defaults(func=cmd_keygen)

    s = sub.add_parser("seal", help="turn an image into a fixed point of the keyed map")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--key", required=True, help="key file")
    s.add_argument("--out", required=True)
    s.add_argument("--max-iter", type=int, default=64)
    s.add_argument("--report", help="write key=value report here instead of stdout")
    s.set_defaults(func=cmd_seal)

    v = sub.add_parser("verify", help="check whether an image is a fixed point")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--key", required=True, help="key file")
    v.add_argument("--map", help="write the tamper map image here")
    v.add_argument("--report", help="write key=value report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser(
        "attack", help="apply one simulated attack",
        epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--key", help="key file (used to derive the rewrite key)")
    a.add_argument("--spec", required=True, help="attack spec, see below")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", required=True)
    a.add_argument("--truth", help="write the altered-area mask here")
    a.set_defaults(func=cmd_attack)

    e = sub.add_parser(
        "experiment", help="run an attack suite and report detection and localization",
        epilog="--suite takes 'fragility', 'localization' or a file with one attack spec per line\n\n" + SPEC_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    e.add_argument("--in", dest="input", required=True, help="sealed image")
    e.add_argument("--key", required=True, help="key file")
    e.add_argument("--suite", required=True)
    e.add_argument("--out", required=True, help="report file ('-' for stdout)")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--donor", help="image sealed under the same key, enables collage attacks")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError,) + USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GCDAuthError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        changes = getattr(exc, "change_counts", None)
        if changes:
            print(f"changed_pixels_per_iteration={','.join(map(str, changes))}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
