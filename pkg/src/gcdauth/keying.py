"""Secret keys and the Gaussian filters they describe.

A key is a scale fraction ``r`` plus optional point modifications. On an
M x N image it yields a frequency-domain Gaussian with standard deviation
``sigma' = r * (M + N)``, rounded to three decimals, peak 1 at the centre. Each
modification then overwrites one filter entry.

Key text is ``"<r:6 decimals> [<row> <col> <value>]..."`` with 1-based
coordinates, e.g. ``"0.500000 1 20 0.6 30 100 0.5"``.
"""
import math
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import MIN_FILTER_VALUE, MIN_IMAGE_SIZE, FrequencyFilter
from .errors import CapacityError, KeyFormatError, KeyIncompatibleError

__all__ = [
    "MIN_FILTER_VALUE",
    "KEYGEN_R_RANGE",
    "FrequencyFilter",
    "Modification",
    "SecretKey",
    "parse_key",
    "serialize_key",
    "build_filter",
    "conjugate_partner",
    "key_space_bits",
    "generate_key",
]

# r range used by generate_key. Below 0.25 the filter barely blurs; above
# 0.75 sealing natural images starts to stall.
KEYGEN_R_RANGE = (0.25, 0.75)
MOD_VALUES = tuple(round(0.1 * k, 1) for k in range(1, 11))

_R_PATTERN = re.compile(r"^\d*\.?\d+$")
_INT_PATTERN = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class Modification:
    row: int  # 1-based
    col: int  # 1-based
    value: float


@dataclass(frozen=True)
class SecretKey:
    r: float
    mods: Tuple[Modification, ...] = ()

    def __post_init__(self):
        r = float(self.r)
        if not 0 < r < 1:
            raise KeyFormatError(f"r must lie in (0, 1), got {r}", 0)
        if round(r, 6) != r:
            raise KeyFormatError(f"r={r!r} has more than 6 decimals", 0)
        object.__setattr__(self, "r", r)
        mods = tuple(m if isinstance(m, Modification) else Modification(*m) for m in self.mods)
        seen = set()
        for i, m in enumerate(mods):
            pos = 1 + 3 * i
            if m.row < 1 or m.col < 1:
                raise KeyFormatError(f"coordinates must be positive, got ({m.row}, {m.col})", pos)
            if (m.row, m.col) in seen:
                raise KeyFormatError(f"duplicate coordinate ({m.row}, {m.col})", pos)
            seen.add((m.row, m.col))
            if not MOD_VALUES[0] <= m.value <= MOD_VALUES[-1]:
                raise KeyFormatError(f"modification value {m.value} outside [0.1, 1]", pos + 2)
            if round(m.value, 1) != m.value:
                raise KeyFormatError(f"modification value {m.value} has more than one decimal", pos + 2)
        object.__setattr__(self, "mods", mods)

    def __str__(self):
        return serialize_key(self)


def parse_key(text):
    """Parse key text into a :class:`SecretKey`."""
    tokens = text.split()
    if not tokens:
        raise KeyFormatError("empty key", 0)
    if (len(tokens) - 1) % 3:
        raise KeyFormatError(
            f"expected r followed by (row, col, value) triples, got {len(tokens)} tokens",
            len(tokens) - 1,
        )
    if not _R_PATTERN.match(tokens[0]):
        raise KeyFormatError(f"bad r token {tokens[0]!r}", 0)
    r = float(tokens[0])
    mods = []
    for i in range(1, len(tokens), 3):
        row_t, col_t, val_t = tokens[i : i + 3]
        for offset, tok in ((0, row_t), (1, col_t)):
            if not _INT_PATTERN.match(tok):
                raise KeyFormatError(f"bad coordinate token {tok!r}", i + offset)
        try:
            value = float(val_t)
        except ValueError:
            raise KeyFormatError(f"bad value token {val_t!r}", i + 2) from None
        if not math.isfinite(value):
            raise KeyFormatError(f"bad value token {val_t!r}", i + 2)
        mods.append(Modification(int(row_t), int(col_t), value))
    return SecretKey(r, tuple(mods))


def serialize_key(key):
    parts = [f"{key.r:.6f}"]
    for m in key.mods:
        parts += [str(m.row), str(m.col), f"{m.value:g}"]
    return " ".join(parts)


def conjugate_partner(row, col, M, N):
    """0-based position holding the conjugate frequency of ``(row, col)`` in a centred filter."""
    return (2 * (M // 2) - row) % M, (2 * (N // 2) - col) % N


def sigma_prime_for(key, M, N):
    return round(key.r * (M + N), 3)


def build_filter(key, M, N):
    """Artifact Gaussian filter for an M x N (rows x cols) image.

    Each modification is written at its own position and at its conjugate
    partner so the spectrum stays conjugate-symmetric and both transforms
    return real images.
    """
    if M < MIN_IMAGE_SIZE or N < MIN_IMAGE_SIZE:
        raise KeyIncompatibleError(f"image {M}x{N} smaller than {MIN_IMAGE_SIZE}x{MIN_IMAGE_SIZE}")
    sp = sigma_prime_for(key, M, N)
    if sp <= 0:
        raise KeyIncompatibleError(f"sigma' rounds to {sp} on a {M}x{N} image")
    cu, cv = M // 2, N // 2
    du = (np.arange(M) - cu)[:, None]
    dv = (np.arange(N) - cv)[None, :]
    values = np.exp(-(du**2 + dv**2) / (2.0 * sp**2))
    values = np.maximum(values, MIN_FILTER_VALUE)
    written = {}
    for m in key.mods:
        i, j = m.row - 1, m.col - 1
        if not (0 <= i < M and 0 <= j < N):
            raise KeyIncompatibleError(f"modification ({m.row}, {m.col}) outside {M}x{N}")
        if (i, j) == (cu, cv):
            raise KeyIncompatibleError(f"modification ({m.row}, {m.col}) hits the filter centre")
        for pos in {(i, j), conjugate_partner(i, j, M, N)}:
            if pos in written and written[pos] != (m.row, m.col):
                other = written[pos]
                raise KeyIncompatibleError(
                    f"modifications {other} and ({m.row}, {m.col}) are conjugate partners on {M}x{N}"
                )
            written[pos] = (m.row, m.col)
            values[pos] = m.value
    return FrequencyFilter(values, sigma_prime=sp)


def key_space_bits(M, N, n_mods):
    """log2 of the number of distinct keys, ``2^19 * C(M * N, n) * 10^n``.

    2^19 counts the usable three-decimal values of sigma'. The modifications
    form a set, so positions are counted without order.
    """
    if n_mods < 0 or n_mods > M * N:
        raise CapacityError(f"cannot place {n_mods} modifications on {M}x{N}")
    return 19 + math.log2(math.comb(M * N, n_mods)) + n_mods * math.log2(10)


def generate_key(M, N, n_mods, rng_seed):
    """Random key for an M x N image, deterministic in ``rng_seed``.

    Modified points are drawn from positions farther than ``max(M, N) / 4``
    from the filter centre, never two from the same conjugate pair. Rows and
    columns that are their own conjugate (the centre lines, and the first
    line for an even size) are skipped: a mirrored point there is also
    symmetric under a flip, which would let that flip pass verification.
    """
    if n_mods < 0:
        raise CapacityError("n_mods must be non-negative")
    rng = np.random.default_rng(rng_seed)
    lo, hi = KEYGEN_R_RANGE
    r = round(float(rng.uniform(lo, hi)), 6)
    cu, cv = M // 2, N // 2
    du, dv = np.meshgrid(np.arange(M) - cu, np.arange(N) - cv, indexing="ij")
    eligible = np.hypot(du, dv) > max(M, N) / 4
    eligible &= (2 * du) % M != 0
    eligible &= (2 * dv) % N != 0
    rows, cols = np.nonzero(eligible)
    # One representative per conjugate pair.
    pr, pc = conjugate_partner(rows, cols, M, N)
    keep = rows * N + cols <= pr * N + pc
    rows, cols = rows[keep], cols[keep]
    if n_mods > len(rows):
        raise CapacityError(f"only {len(rows)} eligible points for {n_mods} modifications")
    idx = rng.choice(len(rows), size=n_mods, replace=False)
    values = rng.choice(len(MOD_VALUES), size=n_mods)
    mods = tuple(
        Modification(int(rows[k]) + 1, int(cols[k]) + 1, MOD_VALUES[int(v)])
        for k, v in zip(idx, values)
    )
    return SecretKey(r, mods)
