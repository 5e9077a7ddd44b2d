"""Test images shared by the experiment scripts."""
import numpy as np
from skimage import data, transform

NATURAL = ("camera", "coins", "moon", "page", "text", "clock", "grass", "gravel", "brick", "cell")


def natural(name, shape=None):
    img = getattr(data, name)().astype(np.float64)
    if shape is not None:
        img = transform.resize(img, shape, preserve_range=True, anti_aliasing=True)
    return np.floor(img + 0.5).astype(np.int64)


def corpus(kind, n, shape, seed=0):
    if kind == "natural":
        return [natural(NATURAL[i % len(NATURAL)], shape) for i in range(n)]
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 256, shape) for _ in range(n)]
