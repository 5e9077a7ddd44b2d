"""Direct-summation reference for the 2-D DFT and the GCD map.

Builds the full (M, N, M, N) exponential tensor and contracts it with the
input, so cost is O(M^2 N^2). Only meant for images up to about 16x16.
"""
import numpy as np


def _kernel(M, N, sign):
    u = np.arange(M)
    v = np.arange(N)
    phase = (
        u[:, None, None, None] * u[None, None, :, None] / M
        + v[None, :, None, None] * v[None, None, None, :] / N
    )
    return np.exp(sign * 2j * np.pi * phase)


def naive_dft2(x):
    x = np.asarray(x, dtype=np.complex128)
    M, N = x.shape
    return np.einsum("uvmn,mn->uv", _kernel(M, N, -1), x)


def naive_idft2(X):
    X = np.asarray(X, dtype=np.complex128)
    M, N = X.shape
    return np.einsum("mnuv,uv->mn", _kernel(M, N, +1), X) / (M * N)


def naive_round(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def naive_gcd(img, centred_filter):
    g = np.fft.ifftshift(np.asarray(centred_filter, dtype=np.float64))
    y = naive_round(naive_idft2(naive_dft2(img) * g).real)
    return naive_round(naive_idft2(naive_dft2(y) / g).real)
