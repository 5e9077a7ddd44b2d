"""Deterministic tampering simulators and the experiment driver.

Every attack returns the attacked image together with a mask of the pixels it
was allowed to touch (the whole image for global attacks). Outputs are
clamped to [0, 255].
"""
import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sfft
from scipy import ndimage

from .authenticator import localization_score, seal, verify
from .core import as_image, round_plane
from .errors import ParameterError, RegionError, ShapeError
from .keying import SecretKey, parse_key


class AttackKind(enum.Enum):
    REWRITE_OTHER_KEY = "REWRITE_OTHER_KEY"
    FLIP_H = "FLIP_H"
    FLIP_V = "FLIP_V"
    TRANSPOSE = "TRANSPOSE"
    ROTATE90 = "ROTATE90"
    SCALE = "SCALE"
    HISTOGRAM_STRETCH = "HISTOGRAM_STRETCH"
    CROP_REPLACE = "CROP_REPLACE"
    SALT_PEPPER_LOCAL = "SALT_PEPPER_LOCAL"
    GAUSS_NOISE_LOCAL = "GAUSS_NOISE_LOCAL"
    MEDIAN_LOCAL = "MEDIAN_LOCAL"
    GAUSS_FILTER_LOCAL = "GAUSS_FILTER_LOCAL"
    COPY_INTERNAL = "COPY_INTERNAL"
    COPY_EXTERNAL = "COPY_EXTERNAL"
    COVER_CONSTANT = "COVER_CONSTANT"
    COLLAGE = "COLLAGE"
    LOGO_OVERLAY = "LOGO_OVERLAY"
    QUANT_NOISE = "QUANT_NOISE"


GLOBAL_KINDS = frozenset({
    AttackKind.REWRITE_OTHER_KEY,
    AttackKind.FLIP_H,
    AttackKind.FLIP_V,
    AttackKind.TRANSPOSE,
    AttackKind.ROTATE90,
    AttackKind.SCALE,
    AttackKind.HISTOGRAM_STRETCH,
    AttackKind.QUANT_NOISE,
})

# IJG luminance quantisation table (quality 50).
JPEG_LUMA = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.float64)


@dataclass
class AttackSpec:
    kind: AttackKind
    region: Optional[Tuple[int, int, int, int]] = None  # (row, col, h, w), 0-based
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, AttackKind):
            self.kind = AttackKind(str(self.kind).upper())
        if self.region is not None:
            self.region = tuple(int(v) for v in self.region)
            if len(self.region) != 4:
                raise RegionError(f"region must be (row, col, h, w), got {self.region}")


def default_region(shape):
    """Centred block a quarter of each side (at least one pixel)."""
    M, N = shape
    h, w = max(1, M // 4), max(1, N // 4)
    return ((M - h) // 2, (N - w) // 2, h, w)


def check_region(region, shape):
    r, c, h, w = region
    M, N = shape
    if h < 1 or w < 1:
        raise RegionError(f"region {region} is empty")
    if r < 0 or c < 0 or r + h > M or c + w > N:
        raise RegionError(f"region {region} outside {M}x{N} image")
    return np.s_[r : r + h, c : c + w]


def _clamp(x):
    return np.clip(round_plane(x), 0, 255)


def _region_mask(shape, sl):
    mask = np.zeros(shape, dtype=bool)
    mask[sl] = True
    return mask


def _param_image(params, name, kind):
    if name not in params or params[name] is None:
        raise ParameterError(f"{kind.name} needs a '{name}' image")
    return as_image(params[name], min_size=1)


def _other_key(params):
    if "other_key" in params:
        k = params["other_key"]
        return parse_key(k) if isinstance(k, str) else k
    if "r" in params:
        return SecretKey(round(float(params["r"]), 6))
    raise ParameterError("REWRITE_OTHER_KEY needs 'other_key' or 'r'")


def _quant_noise(img, quality):
    """JPEG-like loss: 8x8 orthonormal DCT, quantise with the scaled luma table, invert."""
    if not 1 <= quality <= 100:
        raise ParameterError(f"quality must lie in [1, 100], got {quality}")
    scale = 5000.0 / quality if quality < 50 else 200.0 - 2.0 * quality
    q = np.clip(np.floor((JPEG_LUMA * scale + 50) / 100), 1, 255)
    M, N = img.shape
    pm, pn = -M % 8, -N % 8
    x = np.pad(img.astype(np.float64) - 128, ((0, pm), (0, pn)), mode="edge")
    blocks = x.reshape(x.shape[0] // 8, 8, x.shape[1] // 8, 8).transpose(0, 2, 1, 3)
    coef = sfft.dctn(blocks, axes=(2, 3), norm="ortho")
    coef = np.round(coef / q) * q
    back = sfft.idctn(coef, axes=(2, 3), norm="ortho").transpose(0, 2, 1, 3).reshape(x.shape)
    return _clamp(back[:M, :N] + 128)


def _logo(h, w):
    """Synthetic mark: a frame with both diagonals."""
    ii, jj = np.mgrid[0:h, 0:w]
    t = max(1, min(h, w) // 8)
    frame = (ii < t) | (jj < t) | (ii >= h - t) | (jj >= w - t)
    u, v = ii / max(h - 1, 1), jj / max(w - 1, 1)
    band = t / max(h, w)
    diag = (np.abs(u - v) <= band) | (np.abs(u + v - 1) <= band)
    return frame | diag


def apply_attack(img, spec):
    """Apply one attack. Returns ``(attacked, truth_mask)``."""
    img = as_image(img, min_size=1)
    _check_range(img)
    kind, p = spec.kind, spec.params
    rng = np.random.default_rng(spec.seed)
    everything = np.ones(img.shape, dtype=bool)

    if kind is AttackKind.FLIP_H:
        return img[:, ::-1].copy(), everything
    if kind is AttackKind.FLIP_V:
        return img[::-1].copy(), everything
    if kind is AttackKind.TRANSPOSE:
        return img.T.copy(), np.ones(img.T.shape, dtype=bool)
    if kind is AttackKind.ROTATE90:
        out = np.rot90(img, int(p.get("k", 1))).copy()
        return out, np.ones(out.shape, dtype=bool)
    if kind is AttackKind.SCALE:
        from skimage.transform import resize

        ratio = float(p.get("ratio", 0.99))
        if not 0 < ratio:
            raise ParameterError(f"scale ratio must be positive, got {ratio}")
        M, N = img.shape

        def shrink(n):
            m = max(1, round(n * ratio))
            if m == n and ratio != 1:  # always resample by at least one pixel
                m = max(1, n - 1) if ratio < 1 else n + 1
            return m

        small_shape = (shrink(M), shrink(N))
        kw = dict(order=1, preserve_range=True, anti_aliasing=False, mode="edge")
        small = resize(img.astype(np.float64), small_shape, **kw)
        return _clamp(resize(small, img.shape, **kw)), everything
    if kind is AttackKind.HISTOGRAM_STRETCH:
        lo, hi = np.percentile(img, [float(p.get("low", 1)), float(p.get("high", 99))])
        if hi <= lo:
            return img.copy(), everything
        return _clamp((img - lo) * 255.0 / (hi - lo)), everything
    if kind is AttackKind.QUANT_NOISE:
        return _quant_noise(img, float(p.get("quality", 95))), everything
    if kind is AttackKind.REWRITE_OTHER_KEY:
        source = as_image(p["original"]) if p.get("original") is not None else img
        if source.shape != img.shape:
            raise ShapeError(f"original {source.shape} does not match image {img.shape}")
        return seal(source, _other_key(p)).fixed_point, everything

    region = spec.region if spec.region is not None else default_region(img.shape)
    sl = check_region(region, img.shape)
    _, _, h, w = region
    out = img.copy()
    patch = out[sl]

    if kind is AttackKind.CROP_REPLACE:
        source = p.get("source", "donor" if p.get("donor") is not None else "noise")
        if source == "noise":
            out[sl] = rng.integers(0, 256, size=(h, w))
        elif source == "value":
            out[sl] = int(p.get("value", 0))
        elif source == "donor":
            donor = _param_image(p, "donor", kind)
            if donor.shape != img.shape:
                raise ShapeError(f"donor {donor.shape} does not match image {img.shape}")
            out[sl] = donor[sl]
        else:
            raise ParameterError(f"unknown CROP_REPLACE source {source!r}")
    elif kind is AttackKind.SALT_PEPPER_LOCAL:
        density = float(p.get("density", 0.05))
        hit = rng.random((h, w)) < density
        salt = rng.random((h, w)) < 0.5
        patch[hit] = np.where(salt[hit], 255, 0)
    elif kind is AttackKind.GAUSS_NOISE_LOCAL:
        std = float(p.get("std", 5.0))
        out[sl] = _clamp(patch + rng.normal(0.0, std, size=(h, w)))
    elif kind is AttackKind.MEDIAN_LOCAL:
        out[sl] = ndimage.median_filter(img, size=3, mode="reflect")[sl]
    elif kind is AttackKind.GAUSS_FILTER_LOCAL:
        sigma = float(p.get("sigma", 1.0))
        blurred = ndimage.gaussian_filter(img.astype(np.float64), sigma, mode="reflect", radius=1)
        out[sl] = _clamp(blurred[sl])
    elif kind is AttackKind.COPY_INTERNAL:
        M, N = img.shape
        if "src_row" in p or "src_col" in p:
            sr, sc = int(p.get("src_row", 0)), int(p.get("src_col", 0))
        else:
            sr, sc = int(rng.integers(0, M - h + 1)), int(rng.integers(0, N - w + 1))
        out[sl] = img[check_region((sr, sc, h, w), img.shape)]
    elif kind is AttackKind.COPY_EXTERNAL:
        donor = _param_image(p, "donor", kind)
        sr, sc = int(p.get("src_row", region[0])), int(p.get("src_col", region[1]))
        out[sl] = donor[check_region((sr, sc, h, w), donor.shape)]
    elif kind is AttackKind.COVER_CONSTANT:
        out[sl] = int(p.get("value", 128))
    elif kind is AttackKind.COLLAGE:
        donor = _param_image(p, "donor", kind)
        if donor.shape != img.shape:
            raise ShapeError(f"collage donor {donor.shape} does not match image {img.shape}")
        out[sl] = donor[sl]
    elif kind is AttackKind.LOGO_OVERLAY:
        patch[_logo(h, w)] = int(p.get("value", 255))
    else:  # pragma: no cover
        raise ParameterError(f"unhandled attack {kind}")
    return np.clip(out, 0, 255), _region_mask(img.shape, sl)


def _check_range(img):
    if img.size and (img.min() < 0 or img.max() > 255):
        raise ParameterError("attack input pixels must lie in [0, 255]")


_REGION_FIELDS = ("row", "col", "h", "w")


def _scalar(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_attack_spec(text, seed=None):
    """Parse ``"KIND:param=value,..."``.

    ``row``, ``col``, ``h`` and ``w`` give the region, ``seed`` the RNG seed;
    every other pair lands in ``params`` (numbers are converted).
    """
    kind_text, _, rest = text.strip().partition(":")
    try:
        kind = AttackKind(kind_text.strip().upper())
    except ValueError:
        raise ParameterError(f"unknown attack kind {kind_text!r}") from None
    params, region = {}, {}
    spec_seed = 0
    for item in filter(None, (s.strip() for s in rest.split(","))):
        name, eq, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not eq or not name:
            raise ParameterError(f"expected name=value, got {item!r}")
        if name in _REGION_FIELDS:
            region[name] = int(value)
        elif name == "seed":
            spec_seed = int(value)
        else:
            params[name] = _scalar(value)
    if region and set(region) != set(_REGION_FIELDS):
        raise RegionError(f"region needs all of row, col, h, w; got {sorted(region)}")
    reg = tuple(region[k] for k in _REGION_FIELDS) if region else None
    return AttackSpec(kind, reg, params, spec_seed if seed is None else seed)


def format_attack_spec(spec):
    items = []
    if spec.region is not None:
        items += [f"{k}={v}" for k, v in zip(_REGION_FIELDS, spec.region)]
    items += [f"{k}={v}" for k, v in spec.params.items() if np.isscalar(v)]
    items.append(f"seed={spec.seed}")
    return f"{spec.kind.name}:" + ",".join(items)


@dataclass
class ExperimentRecord:
    kind: AttackKind
    detected: bool
    suspicious_count: int
    recall: float
    fpr: float
    hollow_regions: int

    def to_line(self):
        return (
            f"kind={self.kind.name} detected={int(self.detected)} "
            f"suspicious_count={self.suspicious_count} recall={self.recall:.4f} "
            f"fpr={self.fpr:.4f} hollow_regions={self.hollow_regions}"
        )


def run_experiment(sealed, key, specs):
    """Attack, verify and score each spec in order."""
    sealed = as_image(sealed)
    if not verify(sealed, key, hollow=None).authentic:
        raise ParameterError("experiment input does not verify under the key")
    records = []
    for spec in specs:
        attacked, truth = apply_attack(sealed, spec)
        report = verify(attacked, key)
        recall, fpr = localization_score(truth, report)
        records.append(ExperimentRecord(
            spec.kind, not report.authentic, report.suspicious_count,
            recall, fpr, len(report.hollow_regions),
        ))
    return records


def format_report(records):
    return "".join(rec.to_line() + "\n" for rec in records)


def neighbour_r(r):
    """A nearby but distinct scale fraction, used for rewrite attacks."""
    return round(r + 0.01 if r < 0.5 else r - 0.01, 6)


def builtin_suite(name, shape, key, seed=0, donor=None):
    """Attack list for the ``fragility`` or ``localization`` experiment."""
    M, N = shape
    h, w = max(1, M // 4), max(1, N // 4)
    centre = default_region(shape)
    corner = (M // 8, N // 8, h, w)
    if name == "fragility":
        specs = [
            AttackSpec(AttackKind.REWRITE_OTHER_KEY, params={"r": neighbour_r(key.r)}),
            AttackSpec(AttackKind.FLIP_H),
            AttackSpec(AttackKind.FLIP_V),
            AttackSpec(AttackKind.TRANSPOSE),
            AttackSpec(AttackKind.ROTATE90),
            AttackSpec(AttackKind.SCALE, params={"ratio": 0.99}),
            AttackSpec(AttackKind.HISTOGRAM_STRETCH),
            AttackSpec(AttackKind.QUANT_NOISE, params={"quality": 95}),
            AttackSpec(AttackKind.CROP_REPLACE, centre),
        ]
    elif name == "localization":
        specs = [
            AttackSpec(AttackKind.SALT_PEPPER_LOCAL, centre, {"density": 0.05}),
            AttackSpec(AttackKind.GAUSS_NOISE_LOCAL, centre, {"std": 5.0}),
            AttackSpec(AttackKind.MEDIAN_LOCAL, centre),
            AttackSpec(AttackKind.GAUSS_FILTER_LOCAL, centre, {"sigma": 1.0}),
            AttackSpec(AttackKind.COPY_INTERNAL, centre, {"src_row": corner[0], "src_col": corner[1]}),
            AttackSpec(AttackKind.COVER_CONSTANT, centre, {"value": 128}),
            AttackSpec(AttackKind.LOGO_OVERLAY, centre),
            AttackSpec(AttackKind.CROP_REPLACE, centre),
        ]
        if donor is not None:
            specs += [
                AttackSpec(AttackKind.COPY_EXTERNAL, centre, {"donor": donor}),
                AttackSpec(AttackKind.COLLAGE, centre, {"donor": donor}),
            ]
    else:
        raise ParameterError(f"unknown suite {name!r}; choose fragility or localization")
    for s in specs:
        s.seed = seed
    return specs
