"""Dense kernels for total-degree truncated series.

A series in n variables with precision ``prec`` is an int64 array of field
codes with shape ``(prec,) * n``; entries of total degree >= prec are zero.
Products go through an exact integer convolution (direct for small inputs,
FFT with an error guard otherwise) followed by reduction modulo the field.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import fft as sfft
from scipy import signal

from .ff import Field

_DIRECT_LIMIT = 1 << 14
# float64 FFT convolution stays exact while results are far below 2^53
_FFT_SAFE = float(1 << 36)


@lru_cache(maxsize=64)
def simplex_mask(n: int, prec: int) -> np.ndarray:
    if prec <= 0:
        return np.zeros((0,) * n, dtype=bool)
    grids = np.indices((prec,) * n).sum(axis=0)
    mask = grids < prec
    mask.flags.writeable = False
    return mask


def zeros(n: int, prec: int) -> np.ndarray:
    return np.zeros((max(prec, 0),) * n, dtype=np.int64)


def truncate(codes: np.ndarray, n: int, prec: int) -> np.ndarray:
    """Restrict to total degree < prec, padding with zeros if needed."""
    prec = max(prec, 0)
    out = zeros(n, prec)
    src = codes[(slice(0, prec),) * n]
    out[tuple(slice(0, s) for s in src.shape)] = src
    out[~simplex_mask(n, prec)] = 0
    return out


def _fft_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = [x + y - 1 for x, y in zip(a.shape, b.shape)]
    fshape = [sfft.next_fast_len(s, real=True) for s in shape]
    fa = sfft.rfftn(a.astype(np.float64), fshape)
    fb = sfft.rfftn(b.astype(np.float64), fshape)
    out = sfft.irfftn(fa * fb, fshape)
    out = out[tuple(slice(0, s) for s in shape)]
    return np.rint(out).astype(np.int64)


def int_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact full convolution of nonnegative int64 arrays."""
    if a.size == 0 or b.size == 0:
        return np.zeros([max(x + y - 1, 0) for x, y in zip(a.shape, b.shape)], dtype=np.int64)
    if a.size * b.size <= _DIRECT_LIMIT:
        return signal.convolve(a, b, method="direct")
    amax, bmax = int(a.max()), int(b.max())
    if amax == 0 or bmax == 0:
        return np.zeros([x + y - 1 for x, y in zip(a.shape, b.shape)], dtype=np.int64)
    terms = min(np.count_nonzero(a), np.count_nonzero(b))
    if float(amax) * bmax * terms < _FFT_SAFE:
        return _fft_convolve(a, b)
    # split the larger operand into base-2^k digits and recombine exactly
    if amax < bmax:
        a, b, amax = b, a, bmax
    k = max(1, amax.bit_length() // 2)
    hi, lo = a >> k, a & ((1 << k) - 1)
    return (int_convolve(hi, b) << k) + int_convolve(lo, b)


def _reduce_field_axis(field: Field, c: np.ndarray) -> np.ndarray:
    """Reduce the trailing polynomial axis (length 2e-1) modulo the modulus."""
    e, p = field.e, field.p
    c = c % p
    m = np.array(field.modulus[:e], dtype=np.int64)
    for k in range(c.shape[-1] - 1, e - 1, -1):
        top = c[..., k]
        if top.any():
            c[..., k - e : k] = (c[..., k - e : k] - top[..., None] * m) % p
    return c[..., :e]


def mul(field: Field, a: np.ndarray, b: np.ndarray, n: int, prec: int) -> np.ndarray:
    """Product of two code arrays, truncated to total degree < prec."""
    a = a[(slice(0, prec),) * n]
    b = b[(slice(0, prec),) * n]
    if field.e == 1:
        c = int_convolve(a, b) % field.p
    else:
        c = _reduce_field_axis(field, int_convolve(field.np_digits(a), field.np_digits(b)))
        c = field.np_encode(c)
    return truncate(c, n, prec)


def scalar_mul(field: Field, a: np.ndarray, code: int) -> np.ndarray:
    return field.np_mul(a, np.int64(code)).astype(np.int64)
