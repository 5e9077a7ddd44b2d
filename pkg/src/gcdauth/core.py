"""Rounding, 2-D DFT, frequency-domain Gaussian (de)convolution and the GCD map.

The GCD map sends an integer image ``I`` to ``R(G^-1(R(G(I))))`` where ``G``
multiplies the spectrum by a strictly positive filter, ``G^-1`` divides by it
and ``R`` rounds half up. Its fixed points are the sealed images.

Filters are stored centred, with the DC term at ``(M // 2, N // 2)``. They are
moved back to the natural FFT layout with ``ifftshift`` before use, so the
spectrum itself is never shifted.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (
    IllConditionedFilterError,
    InternalConsistencyError,
    NumericDomainError,
    ParameterError,
    ShapeError,
)

MIN_FILTER_VALUE = 1e-4
MIN_IMAGE_SIZE = 8
PIXEL_BOUND = 2**15
# Largest spatial sigma for which a GCD image stays within 1 of its input.
MAX_SPATIAL_SIGMA = 0.4246
IMAG_RESIDUE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class FrequencyFilter:
    """Centred, strictly positive frequency response.

    ``sigma_prime`` is set for filters built from a key, ``spatial_sigma`` for
    filters obtained by transforming a sampled spatial kernel.
    """

    values: np.ndarray
    sigma_prime: Optional[float] = None
    spatial_sigma: Optional[float] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ShapeError(f"filter must be 2-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericDomainError("filter contains non-finite values")
        if values.min() < MIN_FILTER_VALUE:
            raise IllConditionedFilterError(
                f"filter minimum {values.min():.3g} below {MIN_FILTER_VALUE}"
            )
        if values.max() > 1 + 1e-12:
            raise ParameterError(f"filter maximum {values.max():.6g} exceeds 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def shape(self):
        return self.values.shape

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    @cached_property
    def unshifted(self):
        """Filter in the DC-at-origin layout used by ``numpy.fft``."""
        out = np.fft.ifftshift(self.values)
        out.setflags(write=False)
        return out


def round_half_up(x):
    """Round to the nearest integer, ties upward: ``floor(x + 0.5)``.

    >>> round_half_up(2.5), round_half_up(-0.5), round_half_up(-0.51)
    (3, 0, -1)
    """
    x = float(x)
    if not np.isfinite(x):
        raise NumericDomainError(f"cannot round non-finite value {x!r}")
    return int(np.floor(x + 0.5))


def round_plane(p):
    """Elementwise :func:`round_half_up`, returning an int64 image."""
    p = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(p)):
        raise NumericDomainError("plane contains non-finite values")
    return np.floor(p + 0.5).astype(np.int64)


def as_image(img, min_size=MIN_IMAGE_SIZE):
    """Validate and convert to a 2-D int64 pixel array."""
    a = np.asarray(img)
    if a.ndim != 2:
        raise ShapeError(f"image must be 2-D, got shape {a.shape}")
    if a.shape[0] < min_size or a.shape[1] < min_size:
        raise ShapeError(f"image {a.shape} smaller than {min_size}x{min_size}")
    if a.dtype.kind == "f":
        if not np.all(np.isfinite(a)) or np.any(a != np.round(a)):
            raise NumericDomainError("image pixels must be integers")
    elif a.dtype.kind not in "iub":
        raise NumericDomainError(f"unsupported pixel dtype {a.dtype}")
    a = a.astype(np.int64)
    if a.size and (a.min() < -PIXEL_BOUND or a.max() >= PIXEL_BOUND):
        raise NumericDomainError("pixels outside [-2^15, 2^15)")
    return a


def _as_plane(p):
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 2:
        raise ShapeError(f"plane must be 2-D, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise NumericDomainError("plane contains non-finite values")
    return p


def dft2(p):
    """Unnormalised forward 2-D DFT."""
    return np.fft.fft2(_as_plane(p))


def idft2(spec, check=True):
    """Inverse 2-D DFT (1/MN normalised), returning the real part.

    With ``check`` the imaginary residue must be negligible; a large residue
    means the pipeline was fed a spectrum that is not conjugate-symmetric.
    """
    spec = np.asarray(spec, dtype=np.complex128)
    if spec.ndim != 2:
        raise ShapeError(f"spectrum must be 2-D, got shape {spec.shape}")
    if not np.all(np.isfinite(spec)):
        raise NumericDomainError("spectrum contains non-finite values")
    out = np.fft.ifft2(spec)
    if check:
        bound = IMAG_RESIDUE_TOL * max(1.0, float(np.abs(out.real).max(initial=0.0)))
        residue = float(np.abs(out.imag).max(initial=0.0))
        if residue > bound:
            raise InternalConsistencyError(
                f"imaginary residue {residue:.3g} exceeds {bound:.3g}"
            )
    return out.real


def _filter_layout(filt, shape):
    if isinstance(filt, FrequencyFilter):
        values = filt.unshifted
    else:
        values = np.fft.ifftshift(np.asarray(filt, dtype=np.float64))
    if values.shape != tuple(shape):
        raise ShapeError(f"filter shape {values.shape} does not match image {tuple(shape)}")
    return values


def convolve(img, filt):
    """Gaussian convolution via the spectrum: ``F^-1[F(img) * g]``."""
    p = _as_plane(img)
    g = _filter_layout(filt, p.shape)
    return idft2(dft2(p) * g)


def deconvolve(img, filt):
    """Gaussian deconvolution via the spectrum: ``F^-1[F(img) / g]``."""
    p = _as_plane(img)
    g = _filter_layout(filt, p.shape)
    if g.min() < MIN_FILTER_VALUE:
        raise IllConditionedFilterError(
            f"filter minimum {g.min():.3g} below {MIN_FILTER_VALUE}"
        )
    return idft2(dft2(p) / g)


def gcd_apply(img, filt):
    """One application of the GCD map. Output may leave [0, 255]."""
    a = as_image(img)
    return round_plane(deconvolve(round_plane(convolve(a, filt)), filt))


def build_filter_from_spatial_sigma(M, N, sigma):
    """Frequency response of a unit-sum spatial Gaussian sampled on the M x N torus."""
    if not 0 < sigma <= MAX_SPATIAL_SIGMA:
        raise ParameterError(f"spatial sigma must lie in (0, {MAX_SPATIAL_SIGMA}], got {sigma}")
    if M < MIN_IMAGE_SIZE or N < MIN_IMAGE_SIZE:
        raise ShapeError(f"size {M}x{N} smaller than {MIN_IMAGE_SIZE}x{MIN_IMAGE_SIZE}")
    du = np.minimum(np.arange(M), M - np.arange(M))[:, None]
    dv = np.minimum(np.arange(N), N - np.arange(N))[None, :]
    kernel = np.exp(-(du**2 + dv**2) / (2.0 * sigma**2))
    kernel /= kernel.sum()
    spectrum = np.fft.fft2(kernel)
    if np.abs(spectrum.imag).max() > 1e-12:
        raise InternalConsistencyError("symmetric kernel produced a complex spectrum")
    values = np.fft.fftshift(spectrum.real)
    if values.min() <= 0:
        raise InternalConsistencyError("spatial Gaussian produced a non-positive filter entry")
    return FrequencyFilter(np.minimum(values, 1.0), spatial_sigma=float(sigma))
