"""Sender-side sealing and receiver-side verification.

Sealing iterates the keyed GCD map until the image stops changing. When an
iterate leaves [0, 255], the offending pixels of the current input are pulled
to ``a`` or ``255 - a``. If an input image repeats, ``a`` is raised by one.
Verification is a single GCD application: the image is authentic iff it is a
fixed point, and the pixels that move form the tamper map.
"""
import hashlib
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np
from scipy import ndimage

from .core import FrequencyFilter, as_image, gcd_apply
from .errors import (
    AdjustmentFailureError,
    KeyIncompatibleError,
    NonConvergenceError,
    PixelRangeError,
    ShapeError,
)
from .keying import SecretKey, build_filter, parse_key

DEFAULT_MAX_ITERATIONS = 64
MAX_ADJUST_STRENGTH = 128


class Region(NamedTuple):
    row: int
    col: int
    height: int
    width: int

    def overlaps(self, other):
        return (
            self.row < other.row + other.height
            and other.row < self.row + self.height
            and self.col < other.col + other.width
            and other.col < self.col + self.width
        )


@dataclass
class SealResult:
    fixed_point: np.ndarray
    iterations: int
    adjustments: int
    final_adjust_strength: int
    psnr_db: float
    change_counts: List[int] = field(default_factory=list)


@dataclass
class HollowConfig:
    """Thresholds for the hollow-area detector.

    A rectangle is reported when its interior (the rectangle shrunk by
    ``ring_width``) is nearly clean, every one of its four boundary bands
    (``2 * ring_width`` wide, straddling the edge) is populated, and that band
    density stands well above the density outside the rectangle and its ring.
    """

    ring_width: int = 2
    max_interior_density: float = 0.10
    min_side_density: float = 0.08
    min_contrast: float = 4.0
    min_size: int = 10
    max_fraction: float = 0.75


@dataclass
class VerificationReport:
    authentic: bool
    tamper_map: np.ndarray
    suspicious_count: int
    hollow_regions: List[Region] = field(default_factory=list)


def resolve_filter(key, M, N):
    """Filter for an M x N image from a key, key text, or a ready filter."""
    if isinstance(key, FrequencyFilter):
        if key.shape != (M, N):
            raise KeyIncompatibleError(f"filter shape {key.shape} does not match image {(M, N)}")
        return key
    if isinstance(key, str):
        key = parse_key(key)
    if not isinstance(key, SecretKey):
        raise TypeError(f"expected SecretKey, key text or FrequencyFilter, got {type(key).__name__}")
    return build_filter(key, M, N)


def _check_8bit(img, what):
    if img.min() < 0 or img.max() > 255:
        raise PixelRangeError(f"{what} pixels must lie in [0, 255]")


def _digest(img):
    return hashlib.blake2b(np.ascontiguousarray(img).tobytes(), digest_size=8).digest()


def psnr(a, b):
    """Peak signal-to-noise ratio in dB with peak 255; ``inf`` for identical images."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return float("inf")
    return float(10 * np.log10(255.0**2 / mse))


def seal(original, key, max_iterations=DEFAULT_MAX_ITERATIONS):
    """Drive ``original`` to an exact fixed point of the keyed GCD map."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    orig = as_image(original)
    _check_8bit(orig, "original")
    filt = resolve_filter(key, *orig.shape)

    current = orig.copy()
    a = 1
    seen = set()
    changes = []
    adjustments = 0
    while len(changes) < max_iterations:
        h = _digest(current)
        if h in seen:
            a += 1
            if a >= MAX_ADJUST_STRENGTH:
                raise AdjustmentFailureError(f"adjustment strength reached {a}")
        seen.add(h)

        out = gcd_apply(current, filt)
        changes.append(int(np.count_nonzero(out != current)))
        low, high = out < 0, out > 255
        if low.any() or high.any():
            current = current.copy()
            current[low] = a
            current[high] = 255 - a
            adjustments += 1
            continue
        if changes[-1] == 0:
            return SealResult(
                fixed_point=out,
                iterations=len(changes),
                adjustments=adjustments,
                final_adjust_strength=a,
                psnr_db=psnr(orig, out),
                change_counts=changes,
            )
        current = out
    raise NonConvergenceError(
        f"no fixed point after {max_iterations} iterations", current, changes
    )


def verify(suspicious, key, hollow=HollowConfig()):
    """Check whether ``suspicious`` is a fixed point and map where it is not.

    Pass ``hollow=None`` to skip the hollow-area search.
    """
    img = as_image(suspicious)
    _check_8bit(img, "suspicious")
    filt = resolve_filter(key, *img.shape)
    tamper = gcd_apply(img, filt) != img
    count = int(np.count_nonzero(tamper))
    regions = find_hollow_regions(tamper, hollow) if hollow is not None and count else []
    return VerificationReport(
        authentic=count == 0,
        tamper_map=tamper,
        suspicious_count=count,
        hollow_regions=regions,
    )


def find_hollow_regions(tamper_map, config=None):
    """Rectangles whose interior is clean while all four edges light up.

    This is the response of a cover or collage attack: the pasted block is
    itself (nearly) a fixed point, so only its seams are flagged. The search
    is exhaustive over rectangles on a stride of ``min(M, N) // 64`` using a
    summed-area table. Overlapping candidates are resolved greedily by score.
    """
    config = config or HollowConfig()
    sus = np.asarray(tamper_map, dtype=bool)
    M, N = sus.shape
    b = config.ring_width
    if not sus.any():
        return []
    S = np.zeros((M + 1, N + 1), dtype=np.int64)
    S[1:, 1:] = sus.cumsum(0).cumsum(1)
    total = S[M, N]
    step = max(1, min(M, N) // 64)
    min_size = max(config.min_size, 2 * b + 1)

    def density(r0, c0, r1, c1):
        r0, r1 = np.clip(r0, 0, M), np.clip(r1, 0, M)
        c0, c1 = np.clip(c0, 0, N), np.clip(c1, 0, N)
        area = (r1 - r0) * (c1 - c0)
        total = S[r1, c1] - S[r0, c1] - S[r1, c0] + S[r0, c0]
        return total / np.maximum(area, 1)

    widths = np.arange(min_size, int(N * config.max_fraction) + 1, step)[None, :, None]
    c = np.arange(0, N, step)[None, None, :]
    candidates = []
    for h in range(min_size, int(M * config.max_fraction) + 1, step):
        r = np.arange(0, M - h + 1, step)[:, None, None]
        w = widths
        interior = density(r + b, c + b, r + h - b, c + w - b)
        side = np.minimum(
            np.minimum(density(r - b, c, r + b, c + w), density(r + h - b, c, r + h + b, c + w)),
            np.minimum(density(r, c - b, r + h, c + b), density(r, c + w - b, r + h, c + w + b)),
        )
        # background density outside the rectangle and its ring
        r0, r1 = np.clip(r - b, 0, M), np.clip(r + h + b, 0, M)
        c0, c1 = np.clip(c - b, 0, N), np.clip(c + w + b, 0, N)
        inside = S[r1, c1] - S[r0, c1] - S[r1, c0] + S[r0, c0]
        outside = (total - inside) / np.maximum(M * N - (r1 - r0) * (c1 - c0), 1)
        ok = (
            (c + w <= N)
            & (interior <= config.max_interior_density)
            & (side >= config.min_side_density)
            & (side >= config.min_contrast * outside)
        )
        ri, wi, ci = np.nonzero(ok)
        score = (side - interior)[ri, wi, ci]
        for s, i, j, k in zip(score, ri, wi, ci):
            candidates.append((float(s), int(r[i, 0, 0]), int(c[0, 0, k]), h, int(w[0, j, 0])))

    candidates.sort(key=lambda t: (-t[0], -t[3] * t[4], t[1], t[2]))
    chosen = []
    for _, row, col, h, w in candidates:
        region = Region(row, col, h, w)
        if not any(region.overlaps(o) for o in chosen):
            chosen.append(region)
    return chosen


def localization_score(truth_mask, report, dilation_radius=2):
    """(recall, false_positive_rate) of a tamper map against the true altered area.

    Recall counts truth pixels within ``dilation_radius`` (Euclidean) of a
    suspicious pixel. The false-positive rate counts suspicious pixels farther
    than that from every truth pixel.
    """
    truth = np.asarray(truth_mask, dtype=bool)
    sus = np.asarray(getattr(report, "tamper_map", report), dtype=bool)
    if truth.shape != sus.shape:
        raise ShapeError(f"shape mismatch {truth.shape} vs {sus.shape}")
    if dilation_radius < 0:
        raise ValueError("dilation_radius must be >= 0")
    if truth.any():
        recall = float(np.mean(_distance_to(sus)[truth] <= dilation_radius))
    else:
        recall = 1.0
    if sus.any():
        fpr = float(np.mean(_distance_to(truth)[sus] > dilation_radius))
    else:
        fpr = 0.0
    return recall, fpr


def _distance_to(mask):
    if not mask.any():
        return np.full(mask.shape, np.inf)
    return ndimage.distance_transform_edt(~mask)
