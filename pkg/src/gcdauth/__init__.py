"""Image integrity authentication by fixed points of a keyed Gaussian convolution-deconvolution map."""
from .attacks import AttackKind, AttackSpec, apply_attack, parse_attack_spec, run_experiment
from .authenticator import (
    HollowConfig,
    Region,
    SealResult,
    VerificationReport,
    find_hollow_regions,
    localization_score,
    psnr,
    seal,
    verify,
)
from .core import (
    FrequencyFilter,
    build_filter_from_spatial_sigma,
    convolve,
    deconvolve,
    dft2,
    gcd_apply,
    idft2,
    round_half_up,
    round_plane,
)
from .errors import *  # noqa: F401,F403
from .imageio import read_image, render_tamper_map, write_image
from .keying import (
    Modification,
    SecretKey,
    build_filter,
    generate_key,
    key_space_bits,
    parse_key,
    serialize_key,
)

__version__ = "0.1.0"
